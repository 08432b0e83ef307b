#include "navexplain/explain.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace navexplain {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSpreadEpsilon = 1e-12;

// Omission band for why-explanations: advisors whose t-support for the chosen
// action falls in (-0.75, 0.75] say too little to mention.
constexpr double kOmitLow = -0.75;
constexpr double kOmitHigh = 0.75;
// |t_ik - t_ij| must exceed this for a clear preference.
constexpr double kClearPreference = 1.0;

double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sample_sd(std::span<const double> v, double mean) {
  if (v.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

struct PhraseEntry {
  ActionKind kind;
  double magnitude;
  std::string_view phrase;
  std::string_view gerund;
};

// Positive turns are counter-clockwise, i.e. to the robot's left.
constexpr std::array<PhraseEntry, 13> kActionPhrases{{
    {ActionKind::Move, 0.0, "wait", "waiting"},
    {ActionKind::Move, 0.2, "inch forward", "inching forward"},
    {ActionKind::Move, 0.4, "move forward", "moving forward"},
    {ActionKind::Move, 0.8, "move far forward", "moving far forward"},
    {ActionKind::Move, 1.6, "move forward a lot", "moving forward a lot"},
    {ActionKind::Turn, 0.25, "shift left a bit", "shifting left a bit"},
    {ActionKind::Turn, -0.25, "shift right a bit", "shifting right a bit"},
    {ActionKind::Turn, 0.5, "turn left", "turning left"},
    {ActionKind::Turn, -0.5, "turn right", "turning right"},
    {ActionKind::Turn, 1.0, "turn sharply left", "turning sharply left"},
    {ActionKind::Turn, -1.0, "turn sharply right", "turning sharply right"},
    {ActionKind::Turn, 1.57, "turn hard left", "turning hard left"},
    {ActionKind::Turn, -1.57, "turn hard right", "turning hard right"},
}};

const PhraseEntry& phrase_entry(const Action& a) {
  for (const auto& e : kActionPhrases) {
    if (e.kind == a.kind && std::abs(e.magnitude - a.magnitude) < 1e-9) return e;
  }
  throw std::invalid_argument("no phrase for action " + describe(a));
}

std::string stem_text(Stem stem) { return stem == Stem::Decided ? "I decided to " : "I would "; }

// The overall-support clause changes its ending with the level.
std::string overall_clause(const PhraseTable& table, double t_value) {
  const auto& iv = table.lookup(Metric::OverallSupport, t_value);
  const char* tail = iv.level == Level::Low ? " to do this more than anything else"
                                            : " to do this the most";
  return "I " + iv.phrase + tail;
}

constexpr std::string_view kMandateWhy = "I could see our target and ";
constexpr std::string_view kNoRoom = "there's not enough room to move forward";

}  // namespace

SupportStats compute_stats(const CommentMatrix& m) {
  if (m.advisor_count() == 0 || m.action_count() == 0) {
    throw std::invalid_argument("compute_stats needs a nonempty comment matrix");
  }
  SupportStats s;
  s.advisors = m.advisor_count();
  s.actions = m.action_count();
  s.t_support.assign(s.advisors * s.actions, 0.0);
  for (std::size_t i = 0; i < s.advisors; ++i) {
    const auto row = m.row(i);
    const double mu = mean_of(row);
    const double sd = sample_sd(row, mu);
    if (sd <= kSpreadEpsilon) continue;
    for (std::size_t k = 0; k < s.actions; ++k) s.t_support[i * s.actions + k] = (row[k] - mu) / sd;
  }

  s.column_sums = m.column_sums();
  s.mean_total = mean_of(s.column_sums);
  s.sd_total = sample_sd(s.column_sums, s.mean_total);
  s.overall.assign(s.actions, 0.0);
  if (s.actions < 2 || s.sd_total <= kSpreadEpsilon) {
    s.overall_degenerate = true;
  } else {
    for (std::size_t k = 0; k < s.actions; ++k) {
      s.overall[k] = (s.column_sums[k] - s.mean_total) / s.sd_total;
    }
  }

  s.agreement.resize(s.actions);
  s.confidence.resize(s.actions);
  const double scale = 10.0 * static_cast<double>(s.advisors);
  for (std::size_t k = 0; k < s.actions; ++k) {
    const double p = std::clamp(s.column_sums[k] / scale, 0.0, 1.0);
    s.agreement[k] = 2.0 * p * (1.0 - p);
    s.confidence[k] = (0.5 - s.agreement[k]) * s.overall[k];
  }
  return s;
}

std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::TSupport:
      return "t_support";
    case Metric::Agreement:
      return "agreement";
    case Metric::OverallSupport:
      return "overall_support";
    case Metric::Confidence:
      return "confidence";
    case Metric::SupportDifference:
      return "support_difference";
    case Metric::Preference:
      return "preference";
  }
  return "?";
}

std::string_view to_string(Level l) {
  switch (l) {
    case Level::Low:
      return "low";
    case Level::Medium:
      return "medium";
    case Level::High:
      return "high";
  }
  return "?";
}

bool Interval::contains(double v) const {
  const bool above = lo_closed ? v >= lo : v > lo;
  const bool below = hi_closed ? v <= hi : v < hi;
  return above && below;
}

PhraseTable PhraseTable::standard() {
  PhraseTable t;
  t.set(Metric::TSupport, {
                              {-kInf, false, -1.5, true, "really don't want", Level::Low},
                              {-1.5, false, -0.75, true, "don't want", Level::Low},
                              {-0.75, false, 0.0, true, "somewhat don't want", Level::Medium},
                              {0.0, false, 0.75, true, "somewhat want", Level::Medium},
                              {0.75, false, 1.5, true, "want", Level::High},
                              {1.5, false, kInf, false, "really want", Level::High},
                          });
  // Agreement is labelled by what it means for confidence: conflict is low.
  // G never leaves [0, 0.5]; the outer intervals are extended to cover the reals.
  t.set(Metric::Agreement, {
                               {-kInf, false, 0.25, true, "I've got many reasons", Level::High},
                               {0.25, false, 0.45, true, "I've only got a few reasons",
                                Level::Medium},
                               {0.45, false, kInf, false, "my reasons conflict", Level::Low},
                           });
  t.set(Metric::OverallSupport, {
                                    {-kInf, false, 0.75, true, "don't really want", Level::Low},
                                    {0.75, false, 1.5, true, "somewhat want", Level::Medium},
                                    {1.5, false, kInf, false, "really want", Level::High},
                                });
  t.set(Metric::Confidence, {
                                {-kInf, false, 0.0375, true, "not", Level::Low},
                                {0.0375, false, 0.375, true, "only somewhat", Level::Medium},
                                {0.375, false, kInf, false, "really", Level::High},
                            });
  // The lowest band is extended down from 0 so ties (T_k == T_j) stay mapped.
  t.set(Metric::SupportDifference, {
                                       {-kInf, false, 0.75, true, "slightly more", Level::Low},
                                       {0.75, false, 1.5, true, "more", Level::Medium},
                                       {1.5, false, kInf, false, "much more", Level::High},
                                   });
  t.set(Metric::Preference, {
                                {-kInf, false, -kClearPreference, false, "prefers the alternative",
                                 Level::Low},
                                {-kClearPreference, true, kClearPreference, true,
                                 "no clear preference", Level::Medium},
                                {kClearPreference, false, kInf, false, "prefers the choice",
                                 Level::High},
                            });
  return t;
}

const std::vector<Interval>& PhraseTable::intervals(Metric m) const {
  auto it = table_.find(m);
  if (it == table_.end()) throw std::invalid_argument("phrase table has no " + std::string(to_string(m)));
  return it->second;
}

const Interval& PhraseTable::lookup(Metric m, double value) const {
  for (const auto& iv : intervals(m)) {
    if (iv.contains(value)) return iv;
  }
  throw std::domain_error("no interval of " + std::string(to_string(m)) + " contains " +
                          std::to_string(value));
}

std::string_view map_phrase(const PhraseTable& table, Metric metric, double value) {
  return table.phrase(metric, value);
}

std::string action_phrase(const Action& a) { return std::string(phrase_entry(a).phrase); }
std::string action_gerund(const Action& a) { return std::string(phrase_entry(a).gerund); }

std::string_view to_string(Question q) {
  switch (q) {
    case Question::Why:
      return "why";
    case Question::Confidence:
      return "confidence";
    case Question::WhyNot:
      return "why_not";
    case Question::Hypothetical:
      return "hypothetical";
  }
  return "?";
}

Question parse_question(std::string_view s) {
  if (s == "why") return Question::Why;
  if (s == "confidence") return Question::Confidence;
  if (s == "why_not") return Question::WhyNot;
  if (s == "hypothetical") return Question::Hypothetical;
  throw std::invalid_argument("unknown question '" + std::string(s) + "'");
}

std::string join_clauses(std::span<const std::string> clauses) {
  std::string out;
  const std::size_t n = clauses.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) {
      if (n == 2) {
        out += " and ";
      } else {
        out += i + 1 == n ? ", and " : ", ";
      }
    }
    out += clauses[i];
  }
  return out;
}

Explanation explain_why(const DecisionRecord& record, const PhraseTable& table, Stem stem) {
  Explanation ex;
  ex.question = stem == Stem::Decided ? Question::Why : Question::Hypothetical;
  ex.chosen = record.chosen;

  if (record.decided_by == DecidedBy::Tier1Mandate) {
    ex.text = std::string(kMandateWhy) + action_phrase(record.chosen) +
              (record.chosen.kind == ActionKind::Turn ? " would point us toward it."
                                                      : " would get us closer to it.");
    ex.supporters = {AdvisorId::Victory};
    return ex;
  }
  if (record.decided_by == DecidedBy::Tier1LastLeft) {
    ex.supporters = {record.tier1.deciding_advisor.value_or(AdvisorId::AvoidWalls)};
    if (record.chosen.is_pause()) {
      ex.text = stem_text(stem) + "wait because " + std::string(kNoRoom) + ".";
    } else {
      ex.text = stem_text(stem) + action_phrase(record.chosen) +
                " because it was the only option left.";
    }
    return ex;
  }

  if (!record.comments) throw std::invalid_argument("tier-3 record without comments");
  const CommentMatrix& m = *record.comments;
  const auto k = m.action_index(record.chosen);
  if (!k) throw std::invalid_argument("chosen action missing from the comment matrix");
  SupportStats stats = compute_stats(m);

  std::vector<std::string> support_clauses;
  std::vector<std::string> oppose_clauses;
  for (std::size_t i = 0; i < m.advisor_count(); ++i) {
    const double t = stats.t(i, *k);
    if (t > kOmitLow && t <= kOmitHigh) continue;
    const AdvisorId id = m.advisors()[i];
    const std::string phrase(table.phrase(Metric::TSupport, t));
    ex.metrics["t:" + std::string(to_string(id))] = t;
    if (t > 0.0) {
      support_clauses.push_back("I " + phrase + " to " +
                                std::string(advisor_rationale(id, RationaleRole::Support)));
      ex.supporters.push_back(id);
    } else {
      oppose_clauses.push_back("I " + phrase + " to " +
                               std::string(advisor_rationale(id, RationaleRole::Oppose)));
      ex.opposers.push_back(id);
    }
  }

  std::string reason;
  if (!support_clauses.empty()) {
    reason = join_clauses(support_clauses);
  } else {
    // Nobody cleared the band: fall back to the strongest supporter.
    std::size_t top = 0;
    for (std::size_t i = 1; i < m.advisor_count(); ++i) {
      if (stats.t(i, *k) > stats.t(top, *k)) top = i;
    }
    const double t = stats.t(top, *k);
    if (t > 0.0) {
      const AdvisorId id = m.advisors()[top];
      reason = "I " + std::string(table.phrase(Metric::TSupport, t)) + " to " +
               std::string(advisor_rationale(id, RationaleRole::Support));
      ex.supporters.push_back(id);
      ex.metrics["t:" + std::string(to_string(id))] = t;
    } else {
      reason = "all my options seemed about equally good";
    }
  }

  std::string text;
  if (!oppose_clauses.empty()) text = "Although " + join_clauses(oppose_clauses) + ", ";
  text += stem_text(stem) + action_phrase(record.chosen) + " because " + reason + ".";
  ex.text = std::move(text);
  ex.stats = std::move(stats);
  return ex;
}

Explanation explain_confidence(const DecisionRecord& record, const PhraseTable& table) {
  Explanation ex;
  ex.question = Question::Confidence;
  ex.chosen = record.chosen;
  if (record.decided_by == DecidedBy::Tier1Mandate) {
    ex.text = "Highly confident, since our target is in sensor range and this would get us closer to it.";
    ex.supporters = {AdvisorId::Victory};
    return ex;
  }
  if (record.decided_by == DecidedBy::Tier1LastLeft) {
    ex.text = "Highly confident, since there is not enough room to move forward.";
    ex.supporters = {record.tier1.deciding_advisor.value_or(AdvisorId::AvoidWalls)};
    return ex;
  }
  if (!record.comments) throw std::invalid_argument("tier-3 record without comments");
  const auto k = record.comments->action_index(record.chosen);
  if (!k) throw std::invalid_argument("chosen action missing from the comment matrix");
  SupportStats stats = compute_stats(*record.comments);

  const double g = stats.agreement[*k];
  const double t = stats.overall[*k];
  const double l = stats.confidence[*k];
  ex.metrics = {{"G", g}, {"T", t}, {"L", l}};

  const Level l_level = table.level(Metric::Confidence, l);
  const Level g_level = table.level(Metric::Agreement, g);
  const Level t_level = table.level(Metric::OverallSupport, t);
  const std::string g_clause(table.phrase(Metric::Agreement, g));
  const std::string t_clause = overall_clause(table, t);

  std::string text =
      "I'm " + std::string(table.phrase(Metric::Confidence, l)) + " sure about my decision because";
  const bool g_agrees = g_level == l_level;
  const bool t_agrees = t_level == l_level;
  if (g_agrees && t_agrees) {
    text += " " + g_clause + ". " + t_clause + ".";
  } else if (g_agrees) {
    text += " " + g_clause + ".";
  } else if (t_agrees) {
    text += " " + t_clause + ".";
  } else {
    // Neither agrees: the lower one concedes, the higher one carries.
    const bool g_lower = static_cast<int>(g_level) <= static_cast<int>(t_level);
    const std::string& lower = g_lower ? g_clause : t_clause;
    const std::string& higher = g_lower ? t_clause : g_clause;
    text += ", even though " + lower + ", " + higher + ".";
  }
  ex.text = std::move(text);
  ex.stats = std::move(stats);
  return ex;
}

Explanation explain_why_not(const DecisionRecord& record, const Action& alternative,
                            const PhraseTable& table) {
  if (std::find(record.candidates.begin(), record.candidates.end(), alternative) ==
      record.candidates.end()) {
    throw std::invalid_argument(describe(alternative) + " was not a candidate in this decision");
  }
  if (alternative == record.chosen) {
    throw std::invalid_argument(describe(alternative) + " is the action that was chosen");
  }
  Explanation ex;
  ex.question = Question::WhyNot;
  ex.chosen = record.chosen;
  ex.alternative = alternative;

  if (record.decided_by == DecidedBy::Tier1Mandate) {
    ex.text = "I decided not to " + action_phrase(alternative) + " because " +
              std::string(veto_rationale(AdvisorId::Victory)) + ".";
    ex.supporters = {AdvisorId::Victory};
    return ex;
  }
  if (auto vetoer = record.tier1.vetoed_by(alternative)) {
    ex.text = "I decided not to " + action_phrase(alternative) + " because " +
              std::string(veto_rationale(*vetoer)) + ".";
    ex.opposers = {*vetoer};
    return ex;
  }
  if (!record.comments) throw std::invalid_argument("tier-3 record without comments");
  const CommentMatrix& m = *record.comments;
  const auto k = m.action_index(record.chosen);
  const auto j = m.action_index(alternative);
  if (!k || !j) throw std::invalid_argument("actions missing from the comment matrix");
  SupportStats stats = compute_stats(m);

  std::vector<std::string> for_chosen;
  std::vector<std::string> for_alternative;
  for (std::size_t i = 0; i < m.advisor_count(); ++i) {
    const AdvisorId id = m.advisors()[i];
    const double diff = stats.t(i, *k) - stats.t(i, *j);
    ex.metrics["d:" + std::string(to_string(id))] = diff;
    if (diff > kClearPreference) {
      for_chosen.emplace_back(advisor_rationale(id, RationaleRole::Prefer));
      ex.supporters.push_back(id);
    } else if (diff < -kClearPreference) {
      for_alternative.emplace_back(advisor_rationale(id, RationaleRole::Prefer));
      ex.opposers.push_back(id);
    }
  }
  const double t_diff = stats.overall[*k] - stats.overall[*j];
  ex.metrics["T_diff"] = t_diff;

  std::string chosen_reason;
  if (!for_chosen.empty()) {
    chosen_reason = "it lets us " + join_clauses(for_chosen);
  } else {
    std::size_t top = 0;
    for (std::size_t i = 1; i < m.advisor_count(); ++i) {
      if (stats.t(i, *k) > stats.t(top, *k)) top = i;
    }
    if (stats.t(top, *k) > 0.0) {
      chosen_reason =
          "it lets us " + std::string(advisor_rationale(m.advisors()[top], RationaleRole::Prefer));
      ex.supporters.push_back(m.advisors()[top]);
    } else {
      chosen_reason = "it seemed at least as good";
    }
  }

  std::string text = "I thought about " + action_gerund(alternative);
  if (!for_alternative.empty()) text += " because it would let us " + join_clauses(for_alternative);
  text += ", but I felt " + std::string(table.phrase(Metric::SupportDifference, t_diff)) +
          " strongly about " + action_gerund(record.chosen) + " since " + chosen_reason + ".";
  ex.text = std::move(text);
  ex.stats = std::move(stats);
  return ex;
}

Explanation explain_hypothetical(const DecisionState& state, const SpatialModel& model,
                                 const PhraseTable& table, const NavConfig& cfg, Phase phase,
                                 std::uint64_t seed) {
  Controller controller(cfg);
  Rng rng(seed);
  const DecisionRecord record = controller.decide(state, model, phase, rng);
  Explanation ex = explain_why(record, table, Stem::Would);
  ex.question = Question::Hypothetical;
  return ex;
}

}  // namespace navexplain
