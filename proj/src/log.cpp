#include "navexplain/log.hpp"

#include <chrono>
#include <stdexcept>

namespace navexplain {

namespace {

json vec_json(Vec2 v) { return json::array({v.x, v.y}); }
Vec2 vec_from_json(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

std::string_view phase_name(Phase p) { return p == Phase::Move ? "move" : "turn"; }

Phase phase_from(const std::string& s) {
  if (s == "move") return Phase::Move;
  if (s == "turn") return Phase::Turn;
  throw std::invalid_argument("unknown phase '" + s + "'");
}

json advisor_list(const std::vector<AdvisorId>& ids) {
  json out = json::array();
  for (auto id : ids) out.push_back(std::string(to_string(id)));
  return out;
}

}  // namespace

json to_json(const Action& a) {
  return {{"kind", std::string(to_string(a.kind))},
          {"index", a.intensity_index},
          {"magnitude", a.magnitude}};
}

Action action_from_json(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  Action a;
  if (kind == "move") {
    a.kind = ActionKind::Move;
  } else if (kind == "turn") {
    a.kind = ActionKind::Turn;
  } else {
    throw std::invalid_argument("unknown action kind '" + kind + "'");
  }
  a.intensity_index = j.value("index", 0);
  a.magnitude = j.at("magnitude").get<double>();
  return a;
}

json to_json(const Pose& p) { return json::array({p.x, p.y, p.theta}); }

Pose pose_from_json(const json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

json to_json(const DecisionRecord& r, const RecordJsonOptions& opts) {
  json state{{"pose", to_json(r.state.pose)},
             {"target", vec_json(r.state.target)},
             {"previous_orientation", r.state.previous_orientation
                                          ? json(*r.state.previous_orientation)
                                          : json(nullptr)}};
  json scan{{"beams", r.state.scan.ranges.size()},
            {"fov", r.state.scan.fov},
            {"max_range", r.state.scan.max_range}};
  if (opts.include_scan) scan["ranges"] = r.state.scan.ranges;
  state["scan"] = std::move(scan);

  json candidates = json::array();
  for (const auto& a : r.candidates) candidates.push_back(to_json(a));

  json vetoes = json::array();
  for (std::size_t i = 0; i < r.tier1.vetoes.size(); ++i) {
    vetoes.push_back({{"action", to_json(r.tier1.vetoes[i])},
                      {"by", std::string(to_string(r.tier1.veto_sources.at(i)))}});
  }
  json tier1{{"mandate", r.tier1.mandate ? to_json(*r.tier1.mandate) : json(nullptr)},
             {"vetoes", std::move(vetoes)},
             {"deciding_advisor", r.tier1.deciding_advisor
                                      ? json(std::string(to_string(*r.tier1.deciding_advisor)))
                                      : json(nullptr)}};

  json comments = nullptr;
  if (r.comments) {
    const auto& m = *r.comments;
    json actions = json::array();
    for (const auto& a : m.actions()) actions.push_back(to_json(a));
    json rows = json::array();
    for (std::size_t i = 0; i < m.advisor_count(); ++i) {
      const auto row = m.row(i);
      rows.push_back(std::vector<double>(row.begin(), row.end()));
    }
    comments = {{"advisors", advisor_list(m.advisors())},
                {"actions", std::move(actions)},
                {"strengths", std::move(rows)},
                {"column_sums", m.column_sums()}};
  }

  json out{{"cycle", r.cycle_index},
           {"phase", std::string(phase_name(r.phase))},
           {"state", std::move(state)},
           {"candidates", std::move(candidates)},
           {"tier1", std::move(tier1)},
           {"comments", std::move(comments)},
           {"chosen", to_json(r.chosen)},
           {"decided_by", std::string(to_string(r.decided_by))},
           {"tie_broken", r.tie_broken}};
  if (opts.include_timing) out["elapsed_us"] = r.elapsed_us;
  return out;
}

DecisionRecord record_from_json(const json& j) {
  DecisionRecord r;
  r.cycle_index = j.at("cycle").get<std::uint64_t>();
  r.phase = phase_from(j.at("phase").get<std::string>());
  const auto& st = j.at("state");
  r.state.pose = pose_from_json(st.at("pose"));
  r.state.target = vec_from_json(st.at("target"));
  if (st.contains("previous_orientation") && !st.at("previous_orientation").is_null()) {
    r.state.previous_orientation = st.at("previous_orientation").get<double>();
  }
  const auto& scan = st.at("scan");
  r.state.scan.fov = scan.at("fov").get<double>();
  r.state.scan.max_range = scan.at("max_range").get<double>();
  r.state.scan.origin = r.state.pose;
  if (scan.contains("ranges")) r.state.scan.ranges = scan.at("ranges").get<std::vector<double>>();

  for (const auto& a : j.at("candidates")) r.candidates.push_back(action_from_json(a));

  const auto& t1 = j.at("tier1");
  if (!t1.at("mandate").is_null()) r.tier1.mandate = action_from_json(t1.at("mandate"));
  for (const auto& v : t1.at("vetoes")) {
    r.tier1.vetoes.push_back(action_from_json(v.at("action")));
    r.tier1.veto_sources.push_back(parse_advisor(v.at("by").get<std::string>()));
  }
  if (!t1.at("deciding_advisor").is_null()) {
    r.tier1.deciding_advisor = parse_advisor(t1.at("deciding_advisor").get<std::string>());
  }

  const auto& c = j.at("comments");
  if (!c.is_null()) {
    std::vector<AdvisorId> advisors;
    for (const auto& name : c.at("advisors")) advisors.push_back(parse_advisor(name.get<std::string>()));
    std::vector<Action> actions;
    for (const auto& a : c.at("actions")) actions.push_back(action_from_json(a));
    r.comments = CommentMatrix(std::move(advisors), std::move(actions),
                               c.at("strengths").get<std::vector<std::vector<double>>>());
  }
  r.chosen = action_from_json(j.at("chosen"));
  r.decided_by = parse_decided_by(j.at("decided_by").get<std::string>());
  r.tie_broken = j.value("tie_broken", false);
  r.elapsed_us = j.value("elapsed_us", std::int64_t{0});
  return r;
}

json to_json(const SupportStats& s) {
  json t = json::array();
  for (std::size_t i = 0; i < s.advisors; ++i) {
    t.push_back(std::vector<double>(s.t_support.begin() + static_cast<std::ptrdiff_t>(i * s.actions),
                                    s.t_support.begin() +
                                        static_cast<std::ptrdiff_t>((i + 1) * s.actions)));
  }
  return {{"t_support", std::move(t)},     {"column_sums", s.column_sums},
          {"mean_total", s.mean_total},    {"sd_total", s.sd_total},
          {"agreement", s.agreement},      {"overall", s.overall},
          {"confidence", s.confidence},    {"overall_degenerate", s.overall_degenerate}};
}

json to_json(const Explanation& e) {
  json out{{"question", std::string(to_string(e.question))},
           {"text", e.text},
           {"supporters", advisor_list(e.supporters)},
           {"opposers", advisor_list(e.opposers)},
           {"metrics", e.metrics}};
  if (e.chosen) out["chosen"] = to_json(*e.chosen);
  if (e.alternative) out["alternative"] = to_json(*e.alternative);
  return out;
}

json to_json(const SpatialModel& m) {
  json regions = json::array();
  for (std::size_t i = 0; i < m.regions.size(); ++i) {
    const auto& r = m.regions[i];
    json exits = json::array();
    for (const auto& e : r.exits) exits.push_back(vec_json(e));
    json doors = json::array();
    for (const auto& d : r.doors) doors.push_back(json::array({d.start, d.end}));
    regions.push_back({{"id", i},
                       {"center", vec_json(r.center)},
                       {"radius", r.radius},
                       {"exits", std::move(exits)},
                       {"doors", std::move(doors)}});
  }
  json trails = json::array();
  for (const auto& t : m.trails) {
    json markers = json::array();
    for (const auto& mk : t.markers) {
      markers.push_back({{"pose", to_json(mk.pose)}, {"path_index", mk.path_index}});
    }
    trails.push_back({{"markers", std::move(markers)}});
  }
  json cells = json::array();
  for (const auto& [c, v] : m.conveyors.nonzero()) {
    cells.push_back({{"col", c.col},
                     {"row", c.row},
                     {"count", v},
                     {"conveyor", m.conveyors.is_conveyor(c)}});
  }
  json edges = json::array();
  for (const auto& [a, b] : m.skeleton.edges) edges.push_back(json::array({a, b}));
  return {{"regions", std::move(regions)},
          {"trails", std::move(trails)},
          {"conveyors",
           {{"cell_size", m.conveyors.cell_size()},
            {"cols", m.conveyors.cols()},
            {"rows", m.conveyors.rows()},
            {"threshold", m.conveyors.conveyor_threshold()},
            {"cells", std::move(cells)}}},
          {"skeleton", {{"nodes", m.skeleton.nodes}, {"edges", std::move(edges)}}}};
}

std::vector<TimedExplanation> explain_all(const DecisionRecord& r, const PhraseTable& table,
                                          bool timed) {
  std::vector<TimedExplanation> out;
  auto run = [&](auto&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    Explanation e = fn();
    double us = 0.0;
    if (timed) {
      us = std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - t0).count();
    }
    out.push_back({std::move(e), us});
  };
  run([&] { return explain_why(r, table); });
  run([&] { return explain_confidence(r, table); });
  for (const auto& alt : r.candidates) {
    if (alt == r.chosen) continue;
    run([&] { return explain_why_not(r, alt, table); });
  }
  return out;
}

json decision_line(std::uint64_t episode, const DecisionRecord& r,
                   const std::vector<TimedExplanation>& explanations,
                   const RecordJsonOptions& opts, std::optional<Pose> pose_after) {
  json ex = json::array();
  for (const auto& te : explanations) {
    json e = to_json(te.explanation);
    if (opts.include_timing) e["latency_us"] = te.latency_us;
    ex.push_back(std::move(e));
  }
  json out{{"type", "decision"},
           {"episode", episode},
           {"record", to_json(r, opts)},
           {"explanations", std::move(ex)}};
  if (pose_after) out["pose_after"] = to_json(*pose_after);
  return out;
}

json episode_line(const EpisodeSummary& s) {
  return {{"type", "episode"},       {"episode", s.episode},
          {"start", to_json(s.start)}, {"target", vec_json(s.target)},
          {"reached", s.reached},    {"cycles", s.cycles}};
}

}  // namespace navexplain
