#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "navexplain/config.hpp"
#include "navexplain/controller.hpp"
#include "navexplain/explain.hpp"
#include "navexplain/log.hpp"
#include "navexplain/spatial_model.hpp"
#include "navexplain/world.hpp"

namespace navexplain {

// Log line builders for the bookkeeping records that frame decision lines.
json session_line(const World& world, const Pose& start, std::uint64_t seed);
json target_line(std::uint64_t episode, Vec2 target);

// ---- batch runs ------------------------------------------------------------

struct BatchOptions {
  std::uint64_t seed = 0;
  bool record_timing = false;
  bool include_scans = true;
};

struct BatchResult {
  std::size_t episodes = 0;
  std::size_t reached = 0;
  std::size_t decisions = 0;
  Pose final_pose;
  SpatialModel model;
};

// Drives one robot through every target in order, each episode starting where
// the previous one ended, and writes the JSONL log to `log` (may be null).
BatchResult run_batch(const World& world, const Pose& start, const std::vector<Vec2>& targets,
                      const NavConfig& cfg, const BatchOptions& opts, std::ostream* log);

// ---- interactive session ---------------------------------------------------

enum class RunMode { Paused, Stepping, Auto };
std::string_view to_string(RunMode m);
RunMode parse_run_mode(std::string_view s);

class SessionError : public std::runtime_error {
 public:
  // `code` is one of: no_decision, no_target, validation, conflict.
  SessionError(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

struct AskRequest {
  Question question = Question::Why;
  std::optional<std::uint64_t> cycle;      // defaults to the latest decision
  std::optional<Action> alternative;       // why_not only
  std::optional<Pose> pose;                // hypothetical only
};

// Parses {"question", "cycle"?, "alternative"?, "pose"?}. The alternative may be
// an action record or a "move:0.8" style string. Throws SessionError.
AskRequest parse_ask(const json& body, const ActionSet& actions);

struct TranscriptEntry {
  std::uint64_t cycle = 0;
  Question question = Question::Why;
  std::string text;
  std::optional<Action> alternative;
};

// One live robot in one world. Not thread-safe: the server serialises access.
class Session {
 public:
  Session(World world, NavConfig cfg, Pose start, std::uint64_t seed, std::string id = "local");
  // The running episode holds references into the session.
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  // UI-visible state; everything under "view" is reconstructible from log().
  json state() const;
  json view() const;
  json world_json() const;
  json model_json() const { return to_json(model_); }
  std::string model_text() const { return export_model(model_); }

  // Queues a target; the next step starts an episode toward it if none is running.
  void set_target(Vec2 target);
  // Advances one decision cycle. Throws SessionError(no_target) when idle.
  json step();
  bool can_step() const;

  void set_mode(RunMode m) { mode_ = m; }
  RunMode mode() const { return mode_; }

  // Answers from stored records only; never advances the simulation.
  json ask(const AskRequest& req);

  const std::vector<DecisionRecord>& records() const { return records_; }
  const std::vector<TranscriptEntry>& transcript() const { return transcript_; }
  const SpatialModel& model() const { return model_; }
  const std::vector<std::string>& log() const { return log_; }
  const NavConfig& config() const { return cfg_; }
  const World& world() const { return world_; }

 private:
  void start_next_episode();
  void close_episode();
  const DecisionRecord& record_at(std::optional<std::uint64_t> cycle) const;

  std::string id_;
  World world_;
  NavConfig cfg_;
  std::uint64_t seed_;
  Rng rng_;
  SpatialModel model_;
  PhraseTable table_ = PhraseTable::standard();

  Pose pose_;
  std::vector<Vec2> pending_targets_;
  std::optional<Vec2> target_;
  std::unique_ptr<Episode> episode_;
  std::uint64_t episode_index_ = 0;
  std::uint64_t episodes_done_ = 0;
  std::uint64_t episodes_reached_ = 0;

  std::vector<DecisionRecord> records_;
  std::vector<TranscriptEntry> transcript_;
  std::vector<std::string> log_;
  RunMode mode_ = RunMode::Paused;
};

// Rebuilds the UI-visible view and the spatial model from a session log.
struct Replay {
  json view;
  SpatialModel model;
};
Replay replay_log(const std::vector<std::string>& lines, const World& world, const NavConfig& cfg);

std::vector<std::string> split_lines(const std::string& text);

}  // namespace navexplain
