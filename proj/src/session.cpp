#include "navexplain/session.hpp"

#include <chrono>
#include <sstream>

namespace navexplain {

namespace {

json vec_json(Vec2 v) { return json::array({v.x, v.y}); }

std::string_view phase_name(Phase p) { return p == Phase::Move ? "move" : "turn"; }

json candidates_json(const DecisionRecord& r) {
  json out = json::array();
  for (const auto& a : r.candidates) {
    json c{{"action", to_json(a)}, {"chosen", a == r.chosen}, {"column_sum", nullptr},
           {"vetoed_by", nullptr}};
    if (r.comments) {
      if (auto k = r.comments->action_index(a)) c["column_sum"] = r.comments->column_sums()[*k];
    }
    if (auto by = r.tier1.vetoed_by(a)) c["vetoed_by"] = std::string(to_string(*by));
    out.push_back(std::move(c));
  }
  return out;
}

json transcript_json(const std::vector<TranscriptEntry>& t) {
  json out = json::array();
  for (const auto& e : t) {
    json j{{"cycle", e.cycle}, {"question", std::string(to_string(e.question))}, {"text", e.text}};
    if (e.alternative) j["alternative"] = to_json(*e.alternative);
    out.push_back(std::move(j));
  }
  return out;
}

TranscriptEntry transcript_from_json(const json& j) {
  TranscriptEntry e;
  e.cycle = j.at("cycle").get<std::uint64_t>();
  e.question = parse_question(j.at("question").get<std::string>());
  e.text = j.at("text").get<std::string>();
  if (j.contains("alternative")) e.alternative = action_from_json(j.at("alternative"));
  return e;
}

// Inputs of the view, shared by the live session and log replay so both
// serialise identically.
struct ViewInputs {
  std::string world;
  Pose pose;
  std::optional<Vec2> target;
  std::uint64_t episode = 0;
  std::uint64_t episodes_done = 0;
  std::uint64_t episodes_reached = 0;
  std::uint64_t decisions = 0;
  const DecisionRecord* last = nullptr;
  const std::vector<TranscriptEntry>* transcript = nullptr;
};

json build_view(const ViewInputs& in) {
  json v{{"world", in.world},
         {"pose", to_json(in.pose)},
         {"target", in.target ? vec_json(*in.target) : json(nullptr)},
         {"episode", in.episode},
         {"episodes_completed", in.episodes_done},
         {"episodes_reached", in.episodes_reached},
         {"decisions", in.decisions},
         {"cycle", in.last ? json(in.last->cycle_index) : json(nullptr)},
         {"last_record", in.last ? to_json(*in.last) : json(nullptr)},
         {"candidates", in.last ? candidates_json(*in.last) : json::array()},
         {"transcript", in.transcript ? transcript_json(*in.transcript) : json::array()}};
  return v;
}

std::string dump(const json& j) { return j.dump(); }

Action parse_action_text(std::string_view s, const ActionSet& actions) {
  const auto colon = s.find(':');
  if (colon == std::string_view::npos) throw std::invalid_argument("expected kind:magnitude");
  const auto kind_text = s.substr(0, colon);
  ActionKind kind;
  if (kind_text == "move") {
    kind = ActionKind::Move;
  } else if (kind_text == "turn") {
    kind = ActionKind::Turn;
  } else {
    throw std::invalid_argument("unknown action kind");
  }
  const double mag = std::stod(std::string(s.substr(colon + 1)));
  return actions.find(kind, mag);
}

}  // namespace

json session_line(const World& world, const Pose& start, std::uint64_t seed) {
  return {{"type", "session"}, {"world", world.name}, {"start", to_json(start)}, {"seed", seed}};
}

json target_line(std::uint64_t episode, Vec2 target) {
  return {{"type", "target"}, {"episode", episode}, {"target", vec_json(target)}};
}

BatchResult run_batch(const World& world, const Pose& start, const std::vector<Vec2>& targets,
                      const NavConfig& cfg, const BatchOptions& opts, std::ostream* log) {
  BatchResult result;
  result.model = SpatialModel(world.bounds, cfg.conveyor_cell_size);
  result.final_pose = start;
  Rng rng(opts.seed);
  const PhraseTable table = PhraseTable::standard();
  const RecordJsonOptions ropts{opts.include_scans, opts.record_timing};

  if (log) *log << dump(session_line(world, start, opts.seed)) << '\n';
  std::uint64_t cycle = 0;
  for (std::size_t e = 0; e < targets.size(); ++e) {
    if (log) *log << dump(target_line(e, targets[e])) << '\n';
    Episode episode(world, result.final_pose, targets[e], result.model, cfg, rng,
                    opts.record_timing, cycle);
    while (!episode.finished()) {
      const DecisionRecord& rec = episode.step();
      if (log) {
        const auto ex = explain_all(rec, table, opts.record_timing);
        *log << dump(decision_line(e, rec, ex, ropts, episode.pose())) << '\n';
      }
    }
    const auto n = episode.records().size();
    cycle += n;
    result.decisions += n;
    ++result.episodes;
    if (episode.reached()) ++result.reached;
    result.final_pose = episode.pose();
    if (log) {
      *log << dump(episode_line({e, episode.records().empty() ? result.final_pose
                                                               : episode.records().front().state.pose,
                                 targets[e], episode.reached(), n}))
           << '\n';
    }
  }
  return result;
}

std::string_view to_string(RunMode m) {
  switch (m) {
    case RunMode::Paused: return "paused";
    case RunMode::Stepping: return "stepping";
    case RunMode::Auto: return "auto";
  }
  return "paused";
}

RunMode parse_run_mode(std::string_view s) {
  if (s == "paused") return RunMode::Paused;
  if (s == "stepping") return RunMode::Stepping;
  if (s == "auto") return RunMode::Auto;
  throw SessionError("validation", "unknown mode '" + std::string(s) + "'");
}

AskRequest parse_ask(const json& body, const ActionSet& actions) {
  AskRequest req;
  try {
    if (!body.is_object()) throw std::invalid_argument("request body must be an object");
    req.question = parse_question(body.at("question").get<std::string>());
    if (body.contains("cycle") && !body.at("cycle").is_null()) {
      req.cycle = body.at("cycle").get<std::uint64_t>();
    }
    if (body.contains("alternative") && !body.at("alternative").is_null()) {
      const auto& alt = body.at("alternative");
      if (alt.is_string()) {
        req.alternative = parse_action_text(alt.get<std::string>(), actions);
      } else {
        const Action a = action_from_json(alt);
        req.alternative = actions.find(a.kind, a.magnitude);
      }
    }
    if (body.contains("pose") && !body.at("pose").is_null()) {
      const auto& p = body.at("pose");
      req.pose = p.size() == 2 ? Pose(p.at(0).get<double>(), p.at(1).get<double>(), 0.0)
                               : pose_from_json(p);
    }
  } catch (const SessionError&) {
    throw;
  } catch (const std::exception& e) {
    throw SessionError("validation", std::string("bad ask request: ") + e.what());
  }
  if (req.question == Question::WhyNot && !req.alternative) {
    throw SessionError("validation", "why_not needs an alternative action");
  }
  if (req.question == Question::Hypothetical && !req.pose) {
    throw SessionError("validation", "hypothetical needs a pose");
  }
  return req;
}

Session::Session(World world, NavConfig cfg, Pose start, std::uint64_t seed, std::string id)
    : id_(std::move(id)),
      world_(std::move(world)),
      cfg_(std::move(cfg)),
      seed_(seed),
      rng_(seed),
      model_(world_.bounds, cfg_.conveyor_cell_size),
      pose_(start) {
  if (!world_.bounds.contains(start.position())) {
    throw SessionError("validation", "start pose lies outside the world bounds");
  }
  log_.push_back(dump(session_line(world_, start, seed)));
}

json Session::view() const {
  ViewInputs in;
  in.world = world_.name;
  in.pose = pose_;
  in.target = target_;
  in.episode = episode_index_;
  in.episodes_done = episodes_done_;
  in.episodes_reached = episodes_reached_;
  in.decisions = records_.size();
  in.last = records_.empty() ? nullptr : &records_.back();
  in.transcript = &transcript_;
  return build_view(in);
}

json Session::state() const {
  json pending = json::array();
  for (auto t : pending_targets_) pending.push_back(vec_json(t));
  return {{"session_id", id_},
          {"mode", std::string(to_string(mode_))},
          {"can_step", can_step()},
          {"next_phase", episode_ ? json(std::string(phase_name(episode_->next_phase())))
                                  : json(nullptr)},
          {"pending_targets", std::move(pending)},
          {"model_summary",
           {{"regions", model_.regions.size()},
            {"exits", model_.exit_count()},
            {"doors", model_.door_count()},
            {"trails", model_.trails.size()},
            {"conveyor_cells", model_.conveyors.nonzero().size()},
            {"skeleton_edges", model_.skeleton.edges.size()}}},
          {"view", view()}};
}

json Session::world_json() const {
  json obstacles = json::array();
  for (const auto& s : world_.obstacles) obstacles.push_back({s.a.x, s.a.y, s.b.x, s.b.y});
  return {{"name", world_.name},
          {"bounds", {world_.bounds.min_x, world_.bounds.min_y, world_.bounds.max_x,
                      world_.bounds.max_y}},
          {"obstacles", std::move(obstacles)},
          {"arrival_radius", cfg_.arrival_radius}};
}

void Session::set_target(Vec2 target) {
  if (!world_.bounds.contains(target)) {
    throw SessionError("validation", "target lies outside the world bounds");
  }
  pending_targets_.push_back(target);
}

bool Session::can_step() const {
  return (episode_ && !episode_->finished()) || !pending_targets_.empty();
}

void Session::start_next_episode() {
  const Vec2 t = pending_targets_.front();
  pending_targets_.erase(pending_targets_.begin());
  target_ = t;
  log_.push_back(dump(target_line(episode_index_, t)));
  episode_ = std::make_unique<Episode>(world_, pose_, t, model_, cfg_, rng_, false,
                                       static_cast<std::uint64_t>(records_.size()));
}

void Session::close_episode() {
  const auto& recs = episode_->records();
  const Pose start = recs.empty() ? pose_ : recs.front().state.pose;
  log_.push_back(dump(
      episode_line({episode_index_, start, *target_, episode_->reached(), recs.size()})));
  ++episodes_done_;
  if (episode_->reached()) ++episodes_reached_;
  ++episode_index_;
  episode_.reset();
  target_.reset();
}

json Session::step() {
  if (!can_step()) throw SessionError("no_target", "no target set; post one to /api/target");
  while (!episode_ || episode_->finished()) {
    if (episode_) close_episode();
    if (pending_targets_.empty()) {
      return {{"record", nullptr}, {"episode_finished", true}, {"view", view()}};
    }
    start_next_episode();
  }
  const DecisionRecord& rec = episode_->step();
  pose_ = episode_->pose();
  records_.push_back(rec);
  const auto ex = explain_all(rec, table_, false);
  log_.push_back(dump(decision_line(episode_index_, rec, ex, {}, pose_)));

  json out{{"record", to_json(rec)}, {"pose_after", to_json(pose_)}};
  const bool done = episode_->finished();
  out["reached"] = done && episode_->reached();
  if (done) close_episode();
  out["episode_finished"] = done;
  return out;
}

const DecisionRecord& Session::record_at(std::optional<std::uint64_t> cycle) const {
  if (records_.empty()) throw SessionError("no_decision", "no decision yet");
  if (!cycle) return records_.back();
  if (*cycle >= records_.size()) {
    throw SessionError("validation", "unknown cycle " + std::to_string(*cycle));
  }
  return records_[*cycle];
}

json Session::ask(const AskRequest& req) {
  const DecisionRecord& rec = record_at(req.cycle);
  const auto t0 = std::chrono::steady_clock::now();
  Explanation e;
  try {
    switch (req.question) {
      case Question::Why: e = explain_why(rec, table_); break;
      case Question::Confidence: e = explain_confidence(rec, table_); break;
      case Question::WhyNot:
        if (!req.alternative) throw SessionError("validation", "why_not needs an alternative");
        e = explain_why_not(rec, *req.alternative, table_);
        break;
      case Question::Hypothetical: {
        if (!req.pose) throw SessionError("validation", "hypothetical needs a pose");
        if (!world_.bounds.contains(req.pose->position())) {
          throw SessionError("validation", "hypothetical pose lies outside the world bounds");
        }
        DecisionState s{*req.pose, ray_cast(world_, *req.pose, cfg_.sensor), rec.state.target,
                        std::nullopt};
        e = explain_hypothetical(s, model_, table_, cfg_, rec.phase, seed_ + rec.cycle_index);
        break;
      }
    }
  } catch (const SessionError&) {
    throw;
  } catch (const std::invalid_argument& ex) {
    throw SessionError("validation", ex.what());
  } catch (const std::logic_error& ex) {
    throw SessionError("validation", ex.what());
  }
  const double us =
      std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - t0).count();

  TranscriptEntry entry{rec.cycle_index, req.question, e.text, req.alternative};
  transcript_.push_back(entry);
  json line = transcript_json({entry}).at(0);
  line["type"] = "ask";
  log_.push_back(dump(line));
  return {{"cycle", rec.cycle_index}, {"explanation", to_json(e)}, {"latency_us", us}};
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) out.push_back(std::move(line));
  }
  return out;
}

Replay replay_log(const std::vector<std::string>& lines, const World& world, const NavConfig& cfg) {
  Replay out{json(nullptr), SpatialModel(world.bounds, cfg.conveyor_cell_size)};
  ViewInputs in;
  in.world = world.name;
  std::optional<DecisionRecord> last;
  std::vector<TranscriptEntry> transcript;
  std::vector<DecisionState> episode_states;

  for (const auto& text : lines) {
    const json j = json::parse(text);
    const auto type = j.at("type").get<std::string>();
    if (type == "session") {
      in.world = j.at("world").get<std::string>();
      in.pose = pose_from_json(j.at("start"));
    } else if (type == "target") {
      in.target = Vec2{j.at("target").at(0).get<double>(), j.at("target").at(1).get<double>()};
      in.episode = j.at("episode").get<std::uint64_t>();
    } else if (type == "decision") {
      last = record_from_json(j.at("record"));
      learn_region(out.model, last->state);
      episode_states.push_back(last->state);
      if (j.contains("pose_after")) in.pose = pose_from_json(j.at("pose_after"));
      ++in.decisions;
    } else if (type == "episode") {
      learn_from_path(out.model, episode_states, world,
                      {cfg.sensor.max_range, cfg.door_arc_length});
      episode_states.clear();
      ++in.episodes_done;
      if (j.at("reached").get<bool>()) ++in.episodes_reached;
      in.episode = j.at("episode").get<std::uint64_t>() + 1;
      in.target.reset();
    } else if (type == "ask") {
      transcript.push_back(transcript_from_json(j));
    } else {
      throw std::invalid_argument("unknown log line type '" + type + "'");
    }
  }
  in.last = last ? &*last : nullptr;
  in.transcript = &transcript;
  out.view = build_view(in);
  return out;
}

}  // namespace navexplain
