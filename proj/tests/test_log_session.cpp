#include <gtest/gtest.h>
#include <httplib.h>

#include <random>
#include <sstream>
#include <thread>

#include "navexplain/log.hpp"
#include "navexplain/server.hpp"
#include "navexplain/session.hpp"
#include "test_util.hpp"

using namespace navexplain;
using navexplain::testing::random_matrix;

namespace {

World office() { return load_world_file(std::string(NAVEXPLAIN_DATA_DIR) + "/office.world"); }

std::string batch_text(std::uint64_t seed, const std::vector<Vec2>& targets, bool scans = true) {
  std::ostringstream out;
  run_batch(office(), {1, 1, 0}, targets, NavConfig{}, {seed, false, scans}, &out);
  return out.str();
}

}  // namespace

// ---- JSON encodings --------------------------------------------------------

TEST(LogJson, RecordRoundTrip) {
  const World w = office();
  SpatialModel m(w.bounds, 2.0);
  Rng rng(2);
  const auto r = run_episode(w, {1, 1, 0}, {8, 3}, m, NavConfig{}, rng, true);
  ASSERT_FALSE(r.path.empty());
  for (const auto& rec : r.path) {
    const json j = to_json(rec, {true, true});
    const auto back = record_from_json(json::parse(j.dump()));
    EXPECT_EQ(to_json(back, {true, true}), j);
    EXPECT_EQ(back.chosen, rec.chosen);
    EXPECT_EQ(back.comments, rec.comments);
    EXPECT_EQ(back.state.scan.ranges, rec.state.scan.ranges);
    EXPECT_EQ(back.state.pose, rec.state.pose);
  }
}

TEST(LogJson, ExplanationsReplayFromLoggedRecord) {
  std::mt19937_64 rng(9);
  const auto table = PhraseTable::standard();
  for (int k = 0; k < 50; ++k) {
    const auto m = random_matrix(rng, 5, 6);
    DecisionRecord r;
    r.candidates = m.actions();
    r.comments = m;
    r.chosen = m.actions()[k % 6];
    const auto back = record_from_json(json::parse(to_json(r).dump()));
    EXPECT_EQ(explain_why(back, table).text, explain_why(r, table).text);
    EXPECT_EQ(explain_confidence(back, table).text, explain_confidence(r, table).text);
  }
}

TEST(LogJson, MalformedRecordThrows) {
  EXPECT_ANY_THROW(record_from_json(json::parse(R"({"cycle": 1})")));
  EXPECT_ANY_THROW(action_from_json(json::parse(R"({"kind": "jump", "magnitude": 1})")));
}

TEST(LogJson, ModelJsonCountsMatchExport) {
  const World w = office();
  std::ostringstream out;
  const auto result =
      run_batch(w, {1, 1, 0}, {{8, 3}, {17, 17}}, NavConfig{}, {1, false, false}, &out);
  const json j = to_json(result.model);
  EXPECT_EQ(j.at("regions").size(), result.model.regions.size());
  EXPECT_EQ(j.at("trails").size(), result.model.trails.size());
  EXPECT_EQ(j.at("skeleton").at("edges").size(), result.model.skeleton.edges.size());
}

// ---- config ----------------------------------------------------------------

TEST(Config, FormatThenLoadRoundTrips) {
  NavConfig cfg;
  cfg.epsilon_wall = 0.3;
  cfg.cycle_cap = 250;
  cfg.advisors = {AdvisorId::Greedy, AdvisorId::BigStep};
  cfg.actions.turns = {-0.5, 0.5};
  const NavConfig back = load_config(format_config(cfg));
  EXPECT_EQ(format_config(back), format_config(cfg));
  EXPECT_DOUBLE_EQ(back.epsilon_wall, 0.3);
  EXPECT_EQ(back.advisors, cfg.advisors);
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  EXPECT_THROW(load_config("warp_speed = 9\n"), std::invalid_argument);
  EXPECT_THROW(load_config("epsilon_wall = wide\n"), std::invalid_argument);
  EXPECT_THROW(load_config("advisors = Greedy, Victory\n"), std::invalid_argument);
}

TEST(Config, ShippedDefaultMatchesBuiltIn) {
  const auto cfg = load_config_file(std::string(NAVEXPLAIN_DATA_DIR) + "/../config/default.conf");
  EXPECT_EQ(format_config(cfg), format_config(NavConfig{}));
}

// ---- batch runs ------------------------------------------------------------

TEST(Batch, SameSeedByteIdenticalLog) {
  const std::vector<Vec2> targets{{8, 3}, {4, 13}, {17, 17}};
  EXPECT_EQ(batch_text(4, targets), batch_text(4, targets));
}

TEST(Batch, LogFramingAndCycles) {
  const auto lines = split_lines(batch_text(4, {{8, 3}, {4, 13}}, false));
  ASSERT_FALSE(lines.empty());
  EXPECT_EQ(json::parse(lines.front()).at("type"), "session");
  std::uint64_t expected_cycle = 0, episodes = 0, targets = 0;
  for (const auto& l : lines) {
    const json j = json::parse(l);
    const auto type = j.at("type").get<std::string>();
    if (type == "target") ++targets;
    if (type == "episode") ++episodes;
    if (type != "decision") continue;
    EXPECT_EQ(j.at("record").at("cycle").get<std::uint64_t>(), expected_cycle++);
    EXPECT_TRUE(j.contains("pose_after"));
    EXPECT_FALSE(j.at("record").at("state").contains("scan") &&
                 !j.at("record").at("state").at("scan").is_null() &&
                 j.at("record").at("state").at("scan").contains("ranges"));
    EXPECT_FALSE(j.at("explanations").empty());
  }
  EXPECT_EQ(targets, 2u);
  EXPECT_EQ(episodes, 2u);
}

TEST(Batch, ReplayRebuildsTheModel) {
  const World w = office();
  const std::vector<Vec2> targets{{8, 3}, {4, 13}, {17, 17}};
  std::ostringstream out;
  const auto result = run_batch(w, {1, 1, 0}, targets, NavConfig{}, {6, false, true}, &out);
  const auto replay = replay_log(split_lines(out.str()), w, NavConfig{});
  EXPECT_EQ(export_model(replay.model), export_model(result.model));
}

// ---- interactive session ---------------------------------------------------

TEST(Session, ErrorsBeforeAnyDecision) {
  Session s(office(), NavConfig{}, {1, 1, 0}, 1);
  try {
    s.ask({Question::Why, std::nullopt, std::nullopt, std::nullopt});
    FAIL();
  } catch (const SessionError& e) {
    EXPECT_EQ(e.code(), "no_decision");
  }
  try {
    s.step();
    FAIL();
  } catch (const SessionError& e) {
    EXPECT_EQ(e.code(), "no_target");
  }
  EXPECT_FALSE(s.can_step());
  try {
    s.set_target({40, 40});
    FAIL();
  } catch (const SessionError& e) {
    EXPECT_EQ(e.code(), "validation");
  }
}

TEST(Session, StepAndAskMatchTheEngine) {
  Session s(office(), NavConfig{}, {1, 1, 0}, 1);
  s.set_target({8, 3});
  ASSERT_TRUE(s.can_step());
  for (int k = 0; k < 6; ++k) s.step();
  ASSERT_EQ(s.records().size(), 6u);
  const auto table = PhraseTable::standard();
  const auto why = s.ask({Question::Why, 3, std::nullopt, std::nullopt});
  EXPECT_EQ(why.at("cycle"), 3);
  EXPECT_EQ(why.at("explanation").at("text"), explain_why(s.records()[3], table).text);
  EXPECT_EQ(s.transcript().size(), 1u);
  EXPECT_EQ(s.transcript()[0].cycle, 3u);

  // Latest decision by default.
  const auto conf = s.ask({Question::Confidence, std::nullopt, std::nullopt, std::nullopt});
  EXPECT_EQ(conf.at("cycle"), 5);

  try {
    s.ask({Question::WhyNot, 3, s.records()[3].chosen, std::nullopt});
    FAIL() << "why_not of the chosen action should fail";
  } catch (const SessionError& e) {
    EXPECT_EQ(e.code(), "validation");
  }
  try {
    s.ask({Question::Why, 99, std::nullopt, std::nullopt});
    FAIL();
  } catch (const SessionError& e) {
    EXPECT_EQ(e.code(), "validation");
  }
  const auto hypo = s.ask({Question::Hypothetical, 3, std::nullopt, Pose(15, 15, 0.3)});
  EXPECT_EQ(hypo.at("explanation").at("question"), "hypothetical");
  EXPECT_NE(hypo.at("explanation").at("text").get<std::string>().find("I would"),
            std::string::npos);
  EXPECT_EQ(s.records().size(), 6u);  // asking never advances the robot
}

TEST(Session, ParseAskAcceptsStringsAndRecords) {
  const ActionSet set;
  const auto a = parse_ask(json::parse(R"({"question":"why_not","alternative":"move:0.8"})"), set);
  EXPECT_EQ(a.alternative, set.move(3));
  const auto b = parse_ask(
      json::parse(R"({"question":"why_not","alternative":{"kind":"turn","magnitude":-0.25}})"), set);
  EXPECT_EQ(b.alternative, set.find(ActionKind::Turn, -0.25));
  const auto c = parse_ask(json::parse(R"({"question":"hypothetical","pose":[3,4]})"), set);
  EXPECT_EQ(c.pose, Pose(3, 4, 0));
  EXPECT_THROW(parse_ask(json::parse(R"({"question":"why_not"})"), set), SessionError);
  EXPECT_THROW(parse_ask(json::parse(R"({"question":"how"})"), set), SessionError);
  EXPECT_THROW(parse_ask(json::parse(R"({"question":"why_not","alternative":"move:0.3"})"), set),
               SessionError);
}

TEST(Session, ReplayParityOfViewAndModel) {
  Session s(office(), NavConfig{}, {1, 1, 0}, 3);
  s.set_target({8, 3});
  s.set_target({4, 13});
  int steps = 0;
  while (s.can_step() && steps < 400) {
    s.step();
    ++steps;
    if (steps % 25 == 0) s.ask({Question::Why, std::nullopt, std::nullopt, std::nullopt});
    if (steps % 40 == 0) {
      const auto view = replay_log(s.log(), s.world(), s.config()).view;
      ASSERT_EQ(view, s.view()) << "after " << steps << " steps";
    }
  }
  const auto replay = replay_log(s.log(), s.world(), s.config());
  EXPECT_EQ(replay.view, s.view());
  EXPECT_EQ(export_model(replay.model), s.model_text());
  EXPECT_FALSE(s.transcript().empty());
}

TEST(Session, SessionMatchesBatchRun) {
  const std::vector<Vec2> targets{{8, 3}, {4, 13}};
  std::ostringstream out;
  const auto batch = run_batch(office(), {1, 1, 0}, targets, NavConfig{}, {5, false, true}, &out);
  Session s(office(), NavConfig{}, {1, 1, 0}, 5);
  for (auto t : targets) s.set_target(t);
  while (s.can_step()) s.step();
  EXPECT_EQ(s.records().size(), batch.decisions);
  EXPECT_EQ(s.model_text(), export_model(batch.model));
}

// ---- HTTP service ----------------------------------------------------------

TEST(Server, EndpointsOverLoopback) {
  Session session(office(), NavConfig{}, {1, 1, 0}, 1);
  Server server(session, {"127.0.0.1", 0, std::chrono::milliseconds(1)});
  const int port = server.bind();
  ASSERT_GT(port, 0);
  std::thread t([&] { server.serve(); });
  httplib::Client cli("127.0.0.1", port);
  cli.set_connection_timeout(5);

  auto res = cli.Get("/api/state");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(json::parse(res->body).at("mode"), "paused");

  res = cli.Post("/api/ask", R"({"question":"why"})", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 409);
  EXPECT_EQ(json::parse(res->body).at("error"), "no_decision");

  res = cli.Post("/api/step", "", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 409);
  EXPECT_EQ(json::parse(res->body).at("error"), "no_target");

  res = cli.Post("/api/target", R"({"target":[99,1]})", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);

  res = cli.Post("/api/target", R"({"target":[8,3]})", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);

  for (int k = 0; k < 3; ++k) {
    res = cli.Post("/api/step", "", "application/json");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
  }
  res = cli.Post("/api/ask", R"({"question":"why","cycle":1})", "application/json");
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 200);
  const auto text = json::parse(res->body).at("explanation").at("text").get<std::string>();
  EXPECT_EQ(text, explain_why(session.records()[1], PhraseTable::standard()).text);

  res = cli.Post("/api/ask", "{oops", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);

  res = cli.Get("/api/model?format=text");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->body, session.model_text());

  res = cli.Get("/api/log");
  ASSERT_TRUE(res);
  const auto log_lines = split_lines(res->body);
  EXPECT_EQ(log_lines, session.log());

  res = cli.Post("/api/replay", "", "text/plain");
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 200);
  EXPECT_EQ(json::parse(res->body).at("view"), session.view());

  // Auto-run drives the robot until the queue is empty, then pauses.
  res = cli.Post("/api/mode", R"({"mode":"auto"})", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  res = cli.Post("/api/step", "", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 409);
  EXPECT_EQ(json::parse(res->body).at("error"), "conflict");
  for (int k = 0; k < 2000; ++k) {
    res = cli.Get("/api/state");
    ASSERT_TRUE(res);
    if (json::parse(res->body).at("mode") == "paused") break;
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  EXPECT_EQ(json::parse(res->body).at("mode"), "paused");
  EXPECT_EQ(json::parse(res->body).at("view").at("episodes_completed"), 1);

  res = cli.Post("/api/mode", R"({"mode":"warp"})", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);

  server.stop();
  t.join();
}
