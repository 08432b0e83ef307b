#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "navexplain/decision.hpp"
#include "navexplain/explain.hpp"
#include "navexplain/spatial_model.hpp"

// JSON encodings shared by the decision log, the service and the UI contract.
// Field names are frozen in docs/log_format.md.
namespace navexplain {

using json = nlohmann::json;

json to_json(const Action& a);
Action action_from_json(const json& j);

json to_json(const Pose& p);
Pose pose_from_json(const json& j);

struct RecordJsonOptions {
  bool include_scan = true;
  bool include_timing = false;
};

json to_json(const DecisionRecord& r, const RecordJsonOptions& opts = {});
// Throws json::exception or std::invalid_argument on malformed input.
DecisionRecord record_from_json(const json& j);

json to_json(const Explanation& e);
json to_json(const SupportStats& s);
json to_json(const SpatialModel& m);

// Every question a decision can be asked after the fact: why, confidence and
// one why-not per rejected candidate. Latencies are filled in (microseconds)
// when `timed` is set.
struct TimedExplanation {
  Explanation explanation;
  double latency_us = 0.0;
};
std::vector<TimedExplanation> explain_all(const DecisionRecord& r, const PhraseTable& table,
                                          bool timed);

// One "decision" line of the log. `pose_after` is the pose reached by applying
// the chosen action.
json decision_line(std::uint64_t episode, const DecisionRecord& r,
                   const std::vector<TimedExplanation>& explanations,
                   const RecordJsonOptions& opts, std::optional<Pose> pose_after = std::nullopt);

struct EpisodeSummary {
  std::uint64_t episode = 0;
  Pose start;
  Vec2 target;
  bool reached = false;
  std::size_t cycles = 0;
};
json episode_line(const EpisodeSummary& s);

}  // namespace navexplain
