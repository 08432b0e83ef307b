// navexplain command line: batch runs, the local service, log evaluation and
// offline explanation replay.
#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include "navexplain/eval.hpp"
#include "navexplain/server.hpp"
#include "navexplain/session.hpp"

using namespace navexplain;

namespace {

Pose parse_pose(const std::string& text) {
  std::vector<double> v;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) v.push_back(std::stod(part));
  if (v.size() != 2 && v.size() != 3) throw std::invalid_argument("pose must be x,y[,theta]");
  return {v[0], v[1], v.size() == 3 ? v[2] : 0.0};
}

// Without --start the robot begins one meter in from the lower-left corner.
Pose start_pose(const World& world, const std::string& text, const NavConfig& cfg) {
  const Pose p = text.empty() ? Pose(world.bounds.min_x + 1.0, world.bounds.min_y + 1.0, 0.0)
                              : parse_pose(text);
  if (!world.bounds.contains(p.position())) throw ValidationError("start pose is out of bounds");
  if (world.nearest_obstacle_distance(p.position()) <= cfg.safety_margin) {
    throw ValidationError("start pose is too close to a wall; pass --start x,y[,theta]");
  }
  return p;
}

std::vector<std::string> read_lines(const std::string& path) {
  return split_lines(read_text_file(path));
}

NavConfig config_from(const std::string& path) {
  return path.empty() ? NavConfig{} : load_config_file(path);
}

std::atomic<Server*> g_server{nullptr};

void on_signal(int) {
  if (auto* s = g_server.load()) s->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Explainable tiered-advisor navigation simulator"};
  app.require_subcommand(1);

  std::string world_path, targets_path, log_path, config_path, start_text, model_out;
  std::uint64_t seed = 0;
  bool record_timing = false, no_scans = false, as_json = false;

  auto* run = app.add_subcommand("run", "run episodes to every target and write a decision log");
  run->add_option("--world", world_path, "world file")->required()->check(CLI::ExistingFile);
  run->add_option("--targets", targets_path, "targets file")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "random seed for tie breaking")->required();
  run->add_option("--log", log_path, "output JSONL log")->required();
  run->add_option("--config", config_path, "key = value config file")->check(CLI::ExistingFile);
  run->add_option("--start", start_text, "start pose x,y[,theta]");
  run->add_option("--model-out", model_out, "write the learned spatial model (text dump)");
  run->add_flag("--record-timing", record_timing, "store decision and explanation latencies");
  run->add_flag("--no-scans", no_scans, "omit range vectors from the log");

  std::string host = "127.0.0.1";
  int port = 8080, interval_ms = 100;
  auto* serve = app.add_subcommand("serve", "serve one live session over HTTP");
  serve->add_option("--world", world_path, "world file")->required()->check(CLI::ExistingFile);
  serve->add_option("--targets", targets_path, "targets to queue")->check(CLI::ExistingFile);
  serve->add_option("--config", config_path, "key = value config file")->check(CLI::ExistingFile);
  serve->add_option("--seed", seed, "random seed");
  serve->add_option("--start", start_text, "start pose x,y[,theta]");
  serve->add_option("--host", host, "bind address");
  serve->add_option("--port", port, "port (0 = any free port)");
  serve->add_option("--auto-interval-ms", interval_ms, "delay between auto-run steps");

  auto* eval = app.add_subcommand("eval", "summarise a decision log");
  eval->add_option("--log", log_path, "JSONL log")->required()->check(CLI::ExistingFile);
  eval->add_flag("--json", as_json, "emit the structured report instead of the text summary");

  std::uint64_t cycle = 0;
  std::string question = "why", alternative;
  auto* explain = app.add_subcommand("explain", "answer a question about a logged decision");
  explain->add_option("--log", log_path, "JSONL log")->required()->check(CLI::ExistingFile);
  explain->add_option("--cycle", cycle, "decision cycle")->required();
  explain->add_option("--question", question, "why | confidence | why_not")
      ->check(CLI::IsMember({"why", "confidence", "why_not"}));
  explain->add_option("--alternative", alternative, "rejected action for why_not, e.g. move:0.8");
  explain->add_option("--config", config_path, "config the log was produced with")
      ->check(CLI::ExistingFile);
  explain->add_flag("--json", as_json, "emit the explanation record");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const NavConfig cfg = config_from(config_path);
      const World world = load_world_file(world_path);
      const auto targets = load_targets_file(targets_path);
      const Pose start = start_pose(world, start_text, cfg);
      std::ofstream log(log_path, std::ios::binary);
      if (!log) throw std::runtime_error("cannot write " + log_path);
      const auto result =
          run_batch(world, start, targets, cfg, {seed, record_timing, !no_scans}, &log);
      log.close();
      if (!model_out.empty()) {
        std::ofstream(model_out, std::ios::binary) << export_model(result.model);
      }
      std::cout << "reached " << result.reached << "/" << result.episodes << " targets in "
                << result.decisions << " decisions; log written to " << log_path << "\n\n";
      std::cout << render_summary(corpus_report(read_lines(log_path)));
      return 0;
    }
    if (*serve) {
      const NavConfig cfg = config_from(config_path);
      World world = load_world_file(world_path);
      const Pose start = start_pose(world, start_text, cfg);
      Session session(std::move(world), cfg, start, seed);
      if (!targets_path.empty()) {
        for (auto t : load_targets_file(targets_path)) session.set_target(t);
      }
      Server server(session, {host, port, std::chrono::milliseconds(interval_ms)});
      const int bound = server.bind();
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cout << "serving on http://" << host << ":" << bound << "/api/state" << std::endl;
      server.serve();
      g_server = nullptr;
      return 0;
    }
    if (*eval) {
      const auto report = corpus_report(read_lines(log_path));
      if (as_json) {
        std::cout << to_json(report).dump(2) << "\n";
      } else {
        std::cout << render_summary(report);
      }
      if (report.skipped) std::cerr << "warning: skipped " << report.skipped << " malformed lines\n";
      return 0;
    }
    if (*explain) {
      const PhraseTable table = PhraseTable::standard();
      for (const auto& line : read_lines(log_path)) {
        const json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || j.value("type", "") != "decision") continue;
        if (j.at("record").at("cycle").get<std::uint64_t>() != cycle) continue;
        const DecisionRecord rec = record_from_json(j.at("record"));
        Explanation e;
        const Question q = parse_question(question);
        if (q == Question::Why) {
          e = explain_why(rec, table);
        } else if (q == Question::Confidence) {
          e = explain_confidence(rec, table);
        } else {
          if (alternative.empty()) throw std::invalid_argument("why_not needs --alternative");
          const auto req = parse_ask({{"question", "why_not"}, {"alternative", alternative}},
                                     config_from(config_path).actions);
          e = explain_why_not(rec, *req.alternative, table);
        }
        std::cout << (as_json ? to_json(e).dump(2) : e.text) << "\n";
        return 0;
      }
      throw std::invalid_argument("cycle " + std::to_string(cycle) + " not found in log");
    }
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
