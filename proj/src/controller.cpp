#include "navexplain/controller.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

namespace navexplain {

ArgmaxResult select_argmax(std::span<const double> column_sums, Rng& rng, double tie_tolerance) {
  if (column_sums.empty()) throw std::invalid_argument("argmax over an empty set");
  const double best = *std::max_element(column_sums.begin(), column_sums.end());
  std::vector<std::size_t> tied;
  for (std::size_t j = 0; j < column_sums.size(); ++j) {
    if (column_sums[j] >= best - tie_tolerance) tied.push_back(j);
  }
  if (tied.size() == 1) return {tied.front(), false};
  std::uniform_int_distribution<std::size_t> pick(0, tied.size() - 1);
  return {tied[pick(rng)], true};
}

std::vector<Action> candidate_actions(const ActionSet& actions, Phase phase) {
  return phase == Phase::Move ? actions.move_actions() : actions.turn_actions();
}

DecisionRecord Controller::decide(const DecisionState& state, const SpatialModel& model,
                                  Phase phase, Rng& rng, std::uint64_t cycle_index) {
  DecisionRecord rec;
  rec.state = state;
  rec.phase = phase;
  rec.cycle_index = cycle_index;
  rec.candidates = candidate_actions(cfg_.actions, phase);
  if (rec.candidates.empty()) throw std::logic_error("empty candidate set");

  rec.tier1 = tier1_evaluate(state, rec.candidates, cfg_.epsilon_wall, cfg_.not_opposite_tolerance);
  if (rec.tier1.mandate) {
    rec.chosen = *rec.tier1.mandate;
    rec.decided_by = DecidedBy::Tier1Mandate;
    return rec;
  }

  std::vector<Action> open;
  for (const auto& a : rec.candidates) {
    if (!rec.tier1.is_vetoed(a)) open.push_back(a);
  }
  if (open.empty()) {
    if (phase == Phase::Turn) throw std::logic_error("every turn was vetoed");
    // The pause is never vetoed by AvoidWalls; fall back to it.
    rec.chosen = Action{ActionKind::Move, 0, 0.0};
    for (const auto& a : rec.candidates) {
      if (a.is_pause()) rec.chosen = a;
    }
    rec.decided_by = DecidedBy::Tier1LastLeft;
    rec.tier1.deciding_advisor = AdvisorId::AvoidWalls;
    return rec;
  }
  if (open.size() == 1) {
    rec.chosen = open.front();
    rec.decided_by = DecidedBy::Tier1LastLeft;
    rec.tier1.deciding_advisor = rec.tier1.veto_sources.empty()
                                     ? AdvisorId::AvoidWalls
                                     : rec.tier1.veto_sources.back();
    return rec;
  }

  CommentMatrix matrix(cfg_.advisors, open);
  for (std::size_t i = 0; i < cfg_.advisors.size(); ++i) {
    ++tier3_invocations_;
    const auto comments = tier3_comment(cfg_.advisors[i], state, model, open, cfg_);
    for (std::size_t j = 0; j < comments.size(); ++j) matrix.set(i, j, comments[j].strength);
  }
  const auto sums = matrix.column_sums();
  const auto pick = select_argmax(sums, rng);
  rec.chosen = open[pick.index];
  rec.tie_broken = pick.tie_broken;
  rec.decided_by = DecidedBy::Tier3;
  rec.comments = std::move(matrix);
  return rec;
}

Episode::Episode(const World& world, const Pose& start, Vec2 target, SpatialModel& model,
                 const NavConfig& cfg, Rng& rng, bool record_timing, std::uint64_t first_cycle)
    : world_(world),
      model_(model),
      cfg_(cfg),
      rng_(rng),
      controller_(cfg),
      record_timing_(record_timing),
      first_cycle_(first_cycle),
      pose_(start),
      target_(target) {
  if (!world.bounds.contains(start.position())) {
    throw std::invalid_argument("episode start lies outside the world bounds");
  }
  if (distance(start.position(), target) <= cfg.arrival_radius) finish(true);
}

const DecisionRecord& Episode::step() {
  if (finished_) throw std::logic_error("episode already finished");
  const auto t0 = std::chrono::steady_clock::now();

  DecisionState state{pose_, ray_cast(world_, pose_, cfg_.sensor), target_, previous_orientation_};
  DecisionRecord rec =
      controller_.decide(state, model_, phase_, rng_, first_cycle_ + records_.size());
  if (record_timing_) {
    rec.elapsed_us = std::chrono::duration_cast<std::chrono::microseconds>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
  }
  learn_region(model_, state);

  if (rec.chosen.kind == ActionKind::Turn) previous_orientation_ = pose_.theta;
  pose_ = apply_action(world_, pose_, rec.chosen, cfg_.safety_margin).pose;
  phase_ = phase_ == Phase::Turn ? Phase::Move : Phase::Turn;
  records_.push_back(std::move(rec));

  if (distance(pose_.position(), target_) <= cfg_.arrival_radius) {
    finish(true);
  } else if (records_.size() >= static_cast<std::size_t>(cfg_.cycle_cap)) {
    finish(false);
  }
  return records_.back();
}

void Episode::finish(bool reached) {
  finished_ = true;
  reached_ = reached;
  std::vector<DecisionState> states;
  states.reserve(records_.size());
  for (const auto& r : records_) states.push_back(r.state);
  learn_from_path(model_, states, world_, {cfg_.sensor.max_range, cfg_.door_arc_length});
}

EpisodeResult run_episode(const World& world, const Pose& start, Vec2 target, SpatialModel& model,
                          const NavConfig& cfg, Rng& rng, bool record_timing) {
  Episode episode(world, start, target, model, cfg, rng, record_timing);
  while (!episode.finished()) episode.step();
  return {episode.records(), episode.reached(), episode.pose()};
}

}  // namespace navexplain
