#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "navexplain/config.hpp"
#include "navexplain/decision.hpp"
#include "navexplain/spatial_model.hpp"

namespace navexplain {

enum class RationaleRole { Support, Oppose, Prefer };

// Catalog entry for one advisor. Fragments slot into "I want to [support]",
// "I don't want to [oppose]" and "it would let us [prefer]".
struct AdvisorMeta {
  AdvisorId id;
  int tier;
  std::string_view rationale;  // one-line description of the good reason
  std::string_view support;
  std::string_view oppose;
  std::string_view prefer;
  // False where the wording is attested in published example explanations;
  // true where it was written for this catalog.
  bool authored;
};

const AdvisorMeta& advisor_meta(AdvisorId id);

// Throws std::invalid_argument for tier-1 advisors.
std::string_view advisor_rationale(AdvisorId id, RationaleRole role);
// Throws std::invalid_argument for unknown names.
std::string_view advisor_rationale(std::string_view name, RationaleRole role);

// Reason a tier-1 advisor gives for vetoing an action.
std::string_view veto_rationale(AdvisorId id);

// Tier 1: Victory, AvoidWalls, NotOpposite in that order. A Victory mandate
// short-circuits the other two.
Tier1Outcome tier1_evaluate(const DecisionState& state, std::span<const Action> actions,
                            double epsilon_wall, double not_opposite_tolerance = 0.05);

// Where an action would put the robot. Moves land at the translated
// position; turns project `lookahead` along the new heading, clipped to the
// sensed free range less epsilon_wall.
Vec2 projected_endpoint(const DecisionState& state, const Action& a, const NavConfig& cfg);

// Raw (unscaled) score of one tier-3 advisor for each action.
std::vector<double> raw_scores(AdvisorId advisor, const DecisionState& state,
                               const SpatialModel& model, std::span<const Action> actions,
                               const NavConfig& cfg);

// Linear rescale so the best raw score maps to 10 and the worst to 0; all 5
// when every score is equal.
std::vector<double> rescale_strengths(std::span<const double> raw);

std::vector<Comment> tier3_comment(AdvisorId advisor, const DecisionState& state,
                                   const SpatialModel& model, std::span<const Action> actions,
                                   const NavConfig& cfg);

}  // namespace navexplain
