#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "navexplain/advisors.hpp"
#include "navexplain/config.hpp"
#include "navexplain/decision.hpp"
#include "navexplain/spatial_model.hpp"
#include "navexplain/world.hpp"

namespace navexplain {

using Rng = std::mt19937_64;

struct ArgmaxResult {
  std::size_t index = 0;
  bool tie_broken = false;
};

// argmax over column sums; entries within `tie_tolerance` of the maximum tie
// and one of them is drawn uniformly from `rng`.
ArgmaxResult select_argmax(std::span<const double> column_sums, Rng& rng,
                           double tie_tolerance = 1e-9);

std::vector<Action> candidate_actions(const ActionSet& actions, Phase phase);

class Controller {
 public:
  explicit Controller(NavConfig cfg) : cfg_(std::move(cfg)) {}

  // One decision cycle. Throws std::logic_error when every turn is vetoed.
  DecisionRecord decide(const DecisionState& state, const SpatialModel& model, Phase phase,
                        Rng& rng, std::uint64_t cycle_index = 0);

  const NavConfig& config() const { return cfg_; }
  // Number of tier-3 advisor evaluations performed so far.
  std::uint64_t tier3_invocations() const { return tier3_invocations_; }

 private:
  NavConfig cfg_;
  std::uint64_t tier3_invocations_ = 0;
};

// Incremental episode: alternate turn and move phases until the target is
// within the arrival radius or the cycle cap is hit, then learn from the path.
class Episode {
 public:
  Episode(const World& world, const Pose& start, Vec2 target, SpatialModel& model,
          const NavConfig& cfg, Rng& rng, bool record_timing = false,
          std::uint64_t first_cycle = 0);

  bool finished() const { return finished_; }
  bool reached() const { return reached_; }
  const Pose& pose() const { return pose_; }
  Vec2 target() const { return target_; }
  Phase next_phase() const { return phase_; }
  const std::vector<DecisionRecord>& records() const { return records_; }
  std::uint64_t tier3_invocations() const { return controller_.tier3_invocations(); }

  // Runs one decision cycle and applies the chosen action.
  const DecisionRecord& step();

 private:
  void finish(bool reached);

  const World& world_;
  SpatialModel& model_;
  const NavConfig& cfg_;
  Rng& rng_;
  Controller controller_;
  bool record_timing_;
  std::uint64_t first_cycle_;

  Pose pose_;
  Vec2 target_;
  Phase phase_ = Phase::Turn;
  std::optional<double> previous_orientation_;
  std::vector<DecisionRecord> records_;
  bool finished_ = false;
  bool reached_ = false;
};

struct EpisodeResult {
  std::vector<DecisionRecord> path;
  bool reached = false;
  Pose final_pose;
};

EpisodeResult run_episode(const World& world, const Pose& start, Vec2 target, SpatialModel& model,
                          const NavConfig& cfg, Rng& rng, bool record_timing = false);

}  // namespace navexplain
