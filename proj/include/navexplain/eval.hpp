#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "navexplain/explain.hpp"
#include "navexplain/log.hpp"

namespace navexplain {

struct TextCounts {
  std::size_t letters = 0;
  std::size_t words = 0;
  std::size_t sentences = 0;
};

// Letters are alphabetic characters, words are whitespace-separated tokens and
// sentences are runs of terminal punctuation (at least one per text).
TextCounts count_text(std::string_view text);

// Coleman-Liau grade: 0.0588 L - 0.296 S - 15.8, with L letters and S
// sentences per 100 words. Throws std::invalid_argument for text without words.
double coleman_liau(std::string_view text);

inline constexpr std::size_t kTier1 = 0;
inline constexpr std::size_t kTier3 = 1;

struct Mean {
  double sum = 0.0;
  std::uint64_t n = 0;
  void add(double v) {
    sum += v;
    ++n;
  }
  std::optional<double> value() const {
    return n ? std::optional<double>(sum / static_cast<double>(n)) : std::nullopt;
  }
};

// Low / medium / high tallies for one metric.
struct Histogram {
  std::array<std::uint64_t, 3> counts{};
  std::uint64_t total() const { return counts[0] + counts[1] + counts[2]; }
  double percent(Level l) const;
};

struct EvalReport {
  std::uint64_t lines = 0;
  std::uint64_t skipped = 0;
  std::uint64_t episodes = 0;
  std::uint64_t episodes_reached = 0;

  std::array<std::uint64_t, 2> decisions{};  // indexed kTier1 / kTier3
  std::array<Mean, 2> decision_latency_us{};
  std::array<Mean, 2> explanation_latency_us{};

  std::map<Question, std::array<std::set<std::string>, 2>> phrasings;
  std::map<Question, std::array<Mean, 2>> readability;

  // Keys: "G_k", "T_k", "L_k", "t_ik-t_ij", "T_k-T_j".
  std::map<std::string, Histogram> histograms;

  std::size_t unique_phrasings(Question q, std::size_t tier) const;
  std::optional<double> mean_readability(Question q) const;
  std::optional<double> overall_readability() const;
  std::optional<double> mean_explanation_latency_us() const;
};

inline constexpr std::string_view kHistogramNames[] = {"G_k", "T_k", "L_k", "t_ik-t_ij",
                                                       "T_k-T_j"};

// Pure fold over decision-log lines. Lines that fail to parse are counted in
// `skipped`.
EvalReport corpus_report(const std::vector<std::string>& lines,
                         const PhraseTable& table = PhraseTable::standard());

json to_json(const EvalReport& r);
std::string render_summary(const EvalReport& r);

}  // namespace navexplain
