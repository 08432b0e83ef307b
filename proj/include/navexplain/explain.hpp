#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "navexplain/config.hpp"
#include "navexplain/controller.hpp"
#include "navexplain/decision.hpp"
#include "navexplain/spatial_model.hpp"

namespace navexplain {

// Standardised view of a comment matrix.
//
// t-support normalises each advisor's row to mean 0 and sample standard
// deviation 1, so advisors with different scoring habits become comparable.
// The remaining measures describe each action k over all advisors:
//   agreement  G_k = 2 p (1 - p) with p = C_k / (10 n)   (Gini impurity, 0.5 = conflict)
//   overall    T_k = (C_k - mean C) / sd C                (standardised column sum)
//   confidence L_k = (0.5 - G_k) T_k
// All standard deviations use the n - 1 divisor. Zero-spread rows get t = 0;
// zero-spread column sums (or a single action) get T = 0.
struct SupportStats {
  std::size_t advisors = 0;
  std::size_t actions = 0;
  std::vector<double> t_support;  // row-major advisors x actions
  std::vector<double> column_sums;
  double mean_total = 0.0;
  double sd_total = 0.0;
  std::vector<double> agreement;
  std::vector<double> overall;
  std::vector<double> confidence;
  // Set when T could not be standardised (single action or all sums equal).
  bool overall_degenerate = false;

  double t(std::size_t advisor, std::size_t action) const {
    return t_support[advisor * actions + action];
  }
};

SupportStats compute_stats(const CommentMatrix& m);

enum class Metric {
  TSupport,           // t_ik
  Agreement,          // G_k
  OverallSupport,     // T_k
  Confidence,         // L_k
  SupportDifference,  // T_k - T_j
  Preference,         // t_ik - t_ij (clear-preference bands)
};

enum class Level { Low, Medium, High };

std::string_view to_string(Metric m);
std::string_view to_string(Level l);

struct Interval {
  double lo;
  bool lo_closed;
  double hi;
  bool hi_closed;
  std::string phrase;
  Level level;

  bool contains(double v) const;
};

// Value intervals and their wording, per metric. Each metric's intervals
// partition the real line.
class PhraseTable {
 public:
  static PhraseTable standard();

  const std::vector<Interval>& intervals(Metric m) const;
  // Throws std::domain_error for NaN (the only value outside every partition).
  const Interval& lookup(Metric m, double value) const;
  std::string_view phrase(Metric m, double value) const { return lookup(m, value).phrase; }
  Level level(Metric m, double value) const { return lookup(m, value).level; }

  void set(Metric m, std::vector<Interval> intervals) { table_[m] = std::move(intervals); }

 private:
  std::map<Metric, std::vector<Interval>> table_;
};

std::string_view map_phrase(const PhraseTable& table, Metric metric, double value);

// Imperative wording of an action ("inch forward", "turn hard right").
// Throws std::invalid_argument for magnitudes outside the phrase catalog.
std::string action_phrase(const Action& a);
// Gerund form ("inching forward", "turning hard right").
std::string action_gerund(const Action& a);

enum class Question { Why, Confidence, WhyNot, Hypothetical };
std::string_view to_string(Question q);
Question parse_question(std::string_view s);

struct Explanation {
  Question question = Question::Why;
  std::string text;
  std::optional<SupportStats> stats;
  std::vector<AdvisorId> supporters;
  std::vector<AdvisorId> opposers;
  std::map<std::string, double> metrics;
  std::optional<Action> chosen;
  std::optional<Action> alternative;
};

// "A", "A and B", "A, B, and C".
std::string join_clauses(std::span<const std::string> clauses);

enum class Stem { Decided, Would };

Explanation explain_why(const DecisionRecord& record, const PhraseTable& table,
                        Stem stem = Stem::Decided);
Explanation explain_confidence(const DecisionRecord& record, const PhraseTable& table);
// Throws std::invalid_argument when `alternative` is not a candidate or is the
// chosen action.
Explanation explain_why_not(const DecisionRecord& record, const Action& alternative,
                            const PhraseTable& table);
// Decides afresh from `state` against the current model without touching it,
// then explains with the "I would" stem.
Explanation explain_hypothetical(const DecisionState& state, const SpatialModel& model,
                                 const PhraseTable& table, const NavConfig& cfg, Phase phase,
                                 std::uint64_t seed = 0);

}  // namespace navexplain
