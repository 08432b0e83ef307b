#include "navexplain/eval.hpp"

#include <cctype>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace navexplain {

namespace {

bool is_terminal(char c) { return c == '.' || c == '!' || c == '?'; }

std::size_t tier_slot(DecidedBy d) { return d == DecidedBy::Tier3 ? kTier3 : kTier1; }

void bucket(EvalReport& r, const PhraseTable& table, const char* name, Metric metric, double v) {
  r.histograms[name].counts[static_cast<std::size_t>(table.level(metric, v))]++;
}

std::string fmt(double v, const char* spec = "%.2f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string fmt_opt(const std::optional<double>& v, const char* spec = "%.2f") {
  return v ? fmt(*v, spec) : std::string("-");
}

constexpr Question kQuestions[] = {Question::Why, Question::Confidence, Question::WhyNot};

}  // namespace

TextCounts count_text(std::string_view text) {
  TextCounts c;
  bool in_word = false;
  bool in_terminal = false;
  for (char ch : text) {
    const auto uc = static_cast<unsigned char>(ch);
    if (std::isspace(uc)) {
      in_word = false;
    } else if (!in_word) {
      in_word = true;
      ++c.words;
    }
    if (std::isalpha(uc)) ++c.letters;
    if (is_terminal(ch)) {
      if (!in_terminal) ++c.sentences;
      in_terminal = true;
    } else {
      in_terminal = false;
    }
  }
  if (c.words > 0 && c.sentences == 0) c.sentences = 1;
  return c;
}

double coleman_liau(std::string_view text) {
  const auto c = count_text(text);
  if (c.words == 0) throw std::invalid_argument("coleman_liau needs at least one word");
  const double per100 = 100.0 / static_cast<double>(c.words);
  const double l = static_cast<double>(c.letters) * per100;
  const double s = static_cast<double>(c.sentences) * per100;
  return 0.0588 * l - 0.296 * s - 15.8;
}

double Histogram::percent(Level l) const {
  const auto t = total();
  return t ? 100.0 * static_cast<double>(counts[static_cast<std::size_t>(l)]) / t : 0.0;
}

std::size_t EvalReport::unique_phrasings(Question q, std::size_t tier) const {
  auto it = phrasings.find(q);
  return it == phrasings.end() ? 0 : it->second[tier].size();
}

std::optional<double> EvalReport::mean_readability(Question q) const {
  auto it = readability.find(q);
  if (it == readability.end()) return std::nullopt;
  Mean m;
  for (const auto& t : it->second) {
    m.sum += t.sum;
    m.n += t.n;
  }
  return m.value();
}

std::optional<double> EvalReport::overall_readability() const {
  Mean m;
  for (const auto& [q, tiers] : readability) {
    for (const auto& t : tiers) {
      m.sum += t.sum;
      m.n += t.n;
    }
  }
  return m.value();
}

std::optional<double> EvalReport::mean_explanation_latency_us() const {
  Mean m;
  for (const auto& t : explanation_latency_us) {
    m.sum += t.sum;
    m.n += t.n;
  }
  return m.value();
}

EvalReport corpus_report(const std::vector<std::string>& lines, const PhraseTable& table) {
  EvalReport r;
  for (auto name : kHistogramNames) r.histograms[std::string(name)];
  for (auto q : kQuestions) r.phrasings[q], r.readability[q];

  for (const auto& line : lines) {
    if (line.empty()) continue;
    ++r.lines;
    try {
      const json j = json::parse(line);
      const auto type = j.at("type").get<std::string>();
      if (type == "episode") {
        ++r.episodes;
        if (j.at("reached").get<bool>()) ++r.episodes_reached;
        continue;
      }
      // Session bookkeeping lines carry nothing to measure.
      if (type == "session" || type == "target" || type == "ask") continue;
      if (type != "decision") throw std::invalid_argument("unknown line type");

      const DecisionRecord rec = record_from_json(j.at("record"));
      const std::size_t tier = tier_slot(rec.decided_by);
      ++r.decisions[tier];
      if (j.at("record").contains("elapsed_us")) {
        r.decision_latency_us[tier].add(static_cast<double>(rec.elapsed_us));
      }

      for (const auto& e : j.at("explanations")) {
        const Question q = parse_question(e.at("question").get<std::string>());
        const auto text = e.at("text").get<std::string>();
        r.phrasings[q][tier].insert(text);
        r.readability[q][tier].add(coleman_liau(text));
        if (e.contains("latency_us")) {
          r.explanation_latency_us[tier].add(e.at("latency_us").get<double>());
        }
      }

      if (rec.decided_by != DecidedBy::Tier3 || !rec.comments) continue;
      // Metrics are recomputed from the stored matrix, not trusted from the line.
      const auto stats = compute_stats(*rec.comments);
      const auto k = rec.comments->action_index(rec.chosen);
      if (!k) throw std::invalid_argument("chosen action missing from comments");
      bucket(r, table, "G_k", Metric::Agreement, stats.agreement[*k]);
      bucket(r, table, "T_k", Metric::OverallSupport, stats.overall[*k]);
      bucket(r, table, "L_k", Metric::Confidence, stats.confidence[*k]);
      for (std::size_t jdx = 0; jdx < stats.actions; ++jdx) {
        if (jdx == *k) continue;
        bucket(r, table, "T_k-T_j", Metric::SupportDifference,
               stats.overall[*k] - stats.overall[jdx]);
        for (std::size_t i = 0; i < stats.advisors; ++i) {
          bucket(r, table, "t_ik-t_ij", Metric::Preference, stats.t(i, *k) - stats.t(i, jdx));
        }
      }
    } catch (const std::exception&) {
      ++r.skipped;
    }
  }
  return r;
}

json to_json(const EvalReport& r) {
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  json tiers = json::object();
  const char* names[2] = {"tier1", "tier3"};
  for (std::size_t t = 0; t < 2; ++t) {
    json unique = json::object();
    json read = json::object();
    for (auto q : kQuestions) {
      unique[std::string(to_string(q))] = r.unique_phrasings(q, t);
      read[std::string(to_string(q))] = opt(r.readability.at(q)[t].value());
    }
    tiers[names[t]] = {{"decisions", r.decisions[t]},
                       {"mean_decision_latency_ms",
                        r.decision_latency_us[t].value()
                            ? json(*r.decision_latency_us[t].value() / 1000.0)
                            : json(nullptr)},
                       {"mean_explanation_latency_ms",
                        r.explanation_latency_us[t].value()
                            ? json(*r.explanation_latency_us[t].value() / 1000.0)
                            : json(nullptr)},
                       {"unique_phrasings", std::move(unique)},
                       {"readability", std::move(read)}};
  }
  json readability = json::object();
  for (auto q : kQuestions) readability[std::string(to_string(q))] = opt(r.mean_readability(q));
  readability["overall"] = opt(r.overall_readability());

  json hist = json::object();
  for (const auto& [name, h] : r.histograms) {
    hist[name] = {{"low", h.percent(Level::Low)},
                  {"medium", h.percent(Level::Medium)},
                  {"high", h.percent(Level::High)},
                  {"count", h.total()}};
  }
  const auto lat = r.mean_explanation_latency_us();
  return {{"note", "readability is the mean of per-explanation Coleman-Liau grades"},
          {"lines", r.lines},
          {"skipped", r.skipped},
          {"episodes", r.episodes},
          {"episodes_reached", r.episodes_reached},
          {"tiers", std::move(tiers)},
          {"mean_explanation_latency_ms", lat ? json(*lat / 1000.0) : json(nullptr)},
          {"readability", std::move(readability)},
          {"histograms", std::move(hist)}};
}

std::string render_summary(const EvalReport& r) {
  std::ostringstream out;
  out << "Explanation report (readability = mean of per-explanation Coleman-Liau grades)\n";
  out << "episodes: " << r.episodes << " (" << r.episodes_reached << " reached)";
  if (r.skipped) out << ", skipped lines: " << r.skipped;
  out << "\n\n";
  out << "                              tier 1      tier 3         all\n";
  auto row = [&](const std::string& label, const std::string& a, const std::string& b,
                 const std::string& c) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-26s %10s  %10s  %10s\n", label.c_str(), a.c_str(), b.c_str(),
                  c.c_str());
    out << buf;
  };
  row("decisions", std::to_string(r.decisions[kTier1]), std::to_string(r.decisions[kTier3]),
      std::to_string(r.decisions[kTier1] + r.decisions[kTier3]));
  auto ms = [](const std::optional<double>& us) {
    return us ? std::optional<double>(*us / 1000.0) : std::nullopt;
  };
  row("explanation latency (ms)", fmt_opt(ms(r.explanation_latency_us[kTier1].value()), "%.3f"),
      fmt_opt(ms(r.explanation_latency_us[kTier3].value()), "%.3f"),
      fmt_opt(ms(r.mean_explanation_latency_us()), "%.3f"));
  out << "unique phrasings\n";
  for (auto q : kQuestions) {
    const auto a = r.unique_phrasings(q, kTier1);
    const auto b = r.unique_phrasings(q, kTier3);
    row("  " + std::string(to_string(q)), std::to_string(a), std::to_string(b),
        std::to_string(a + b));
  }
  out << "readability (grade)\n";
  for (auto q : kQuestions) {
    const auto& t = r.readability.at(q);
    row("  " + std::string(to_string(q)), fmt_opt(t[kTier1].value()), fmt_opt(t[kTier3].value()),
        fmt_opt(r.mean_readability(q)));
  }
  row("  overall", "", "", fmt_opt(r.overall_readability()));
  out << "\ntier-3 metric distributions (%)    low   medium     high\n";
  for (auto name : kHistogramNames) {
    const auto& h = r.histograms.at(std::string(name));
    char buf[160];
    std::snprintf(buf, sizeof buf, "  %-30s %6.2f   %6.2f   %6.2f\n", std::string(name).c_str(),
                  h.percent(Level::Low), h.percent(Level::Medium), h.percent(Level::High));
    out << buf;
  }
  return out.str();
}

}  // namespace navexplain
