#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "navexplain/world.hpp"

namespace navexplain {

// One sensing/pose snapshot the controller decides from.
struct DecisionState {
  Pose pose;
  LaserScan scan;
  Vec2 target;
  std::optional<double> previous_orientation;
};

enum class AdvisorId {
  // Tier 1, in evaluation order.
  Victory,
  AvoidWalls,
  NotOpposite,
  // Tier 3, commonsense.
  BigStep,
  ElbowRoom,
  Explorer,
  GoAround,
  Greedy,
  // Tier 3, spatial model.
  Access,
  Convey,
  Enter,
  Exit,
  Trailer,
  Unlikely,
};

inline constexpr AdvisorId kTier3Advisors[] = {
    AdvisorId::BigStep, AdvisorId::ElbowRoom, AdvisorId::Explorer, AdvisorId::GoAround,
    AdvisorId::Greedy,  AdvisorId::Access,    AdvisorId::Convey,   AdvisorId::Enter,
    AdvisorId::Exit,    AdvisorId::Trailer,   AdvisorId::Unlikely,
};

std::string_view to_string(AdvisorId id);
// Throws std::invalid_argument on an unknown name.
AdvisorId parse_advisor(std::string_view name);
int advisor_tier(AdvisorId id);

struct Comment {
  AdvisorId advisor;
  Action action;
  double strength = 0.0;  // [0, 10]
};

// Tier-3 strengths c_ij: one row per advisor, one column per unvetoed action.
class CommentMatrix {
 public:
  CommentMatrix() = default;
  CommentMatrix(std::vector<AdvisorId> advisors, std::vector<Action> actions);
  CommentMatrix(std::vector<AdvisorId> advisors, std::vector<Action> actions,
                std::vector<std::vector<double>> rows);

  std::size_t advisor_count() const { return advisors_.size(); }
  std::size_t action_count() const { return actions_.size(); }
  const std::vector<AdvisorId>& advisors() const { return advisors_; }
  const std::vector<Action>& actions() const { return actions_; }

  double at(std::size_t advisor, std::size_t action) const {
    return strengths_[advisor * actions_.size() + action];
  }
  void set(std::size_t advisor, std::size_t action, double strength);
  std::span<const double> row(std::size_t advisor) const {
    return {strengths_.data() + advisor * actions_.size(), actions_.size()};
  }

  std::vector<double> column_sums() const;
  std::optional<std::size_t> action_index(const Action& a) const;
  std::optional<std::size_t> advisor_index(AdvisorId id) const;

  friend bool operator==(const CommentMatrix&, const CommentMatrix&) = default;

 private:
  std::vector<AdvisorId> advisors_;
  std::vector<Action> actions_;
  std::vector<double> strengths_;
};

struct Tier1Outcome {
  std::optional<Action> mandate;
  std::vector<Action> vetoes;
  // Vetoing advisor for each entry of `vetoes`.
  std::vector<AdvisorId> veto_sources;
  std::optional<AdvisorId> deciding_advisor;

  bool is_vetoed(const Action& a) const;
  std::optional<AdvisorId> vetoed_by(const Action& a) const;
};

enum class DecidedBy { Tier1Mandate, Tier1LastLeft, Tier3 };
std::string_view to_string(DecidedBy d);
DecidedBy parse_decided_by(std::string_view s);

enum class Phase { Move, Turn };

// Full trace of one decision cycle; explanations are computed from this alone.
struct DecisionRecord {
  DecisionState state;
  Phase phase = Phase::Turn;
  std::vector<Action> candidates;
  Tier1Outcome tier1;
  std::optional<CommentMatrix> comments;
  Action chosen;
  DecidedBy decided_by = DecidedBy::Tier3;
  bool tie_broken = false;
  std::uint64_t cycle_index = 0;
  std::int64_t elapsed_us = 0;
};

}  // namespace navexplain
