#include "navexplain/server.hpp"

#include <httplib.h>

namespace navexplain {

namespace {

int status_for(const std::string& code) {
  if (code == "no_decision" || code == "no_target" || code == "conflict") return 409;
  return 400;
}

void reply(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void reply_error(httplib::Response& res, const std::string& code, const std::string& message) {
  reply(res, {{"error", code}, {"message", message}}, status_for(code));
}

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  try {
    return json::parse(req.body);
  } catch (const json::exception& e) {
    throw SessionError("validation", std::string("malformed JSON body: ") + e.what());
  }
}

}  // namespace

Server::Server(Session& session, ServerOptions opts)
    : session_(session), opts_(std::move(opts)), http_(std::make_unique<httplib::Server>()) {
  auto guarded = [this](auto fn) {
    return [this, fn](const httplib::Request& req, httplib::Response& res) {
      try {
        std::lock_guard lock(mutex_);
        fn(req, res);
      } catch (const SessionError& e) {
        reply_error(res, e.code(), e.what());
      } catch (const std::exception& e) {
        reply_error(res, "validation", e.what());
      }
    };
  };

  http_->Get("/api/state", guarded([this](const httplib::Request&, httplib::Response& res) {
               reply(res, session_.state());
             }));
  http_->Get("/api/world", guarded([this](const httplib::Request&, httplib::Response& res) {
               reply(res, session_.world_json());
             }));
  http_->Post("/api/step", guarded([this](const httplib::Request&, httplib::Response& res) {
                if (session_.mode() == RunMode::Auto) {
                  throw SessionError("conflict", "auto-run is active; pause it before stepping");
                }
                session_.set_mode(RunMode::Stepping);
                reply(res, session_.step());
              }));
  http_->Post("/api/mode", guarded([this](const httplib::Request& req, httplib::Response& res) {
                const json body = parse_body(req);
                if (!body.contains("mode")) throw SessionError("validation", "missing 'mode'");
                session_.set_mode(parse_run_mode(body.at("mode").get<std::string>()));
                reply(res, {{"mode", std::string(to_string(session_.mode()))}});
              }));
  http_->Post("/api/target", guarded([this](const httplib::Request& req, httplib::Response& res) {
                const json body = parse_body(req);
                try {
                  const auto& t = body.at("target");
                  session_.set_target({t.at(0).get<double>(), t.at(1).get<double>()});
                } catch (const json::exception& e) {
                  throw SessionError("validation", std::string("bad target: ") + e.what());
                }
                reply(res, session_.state());
              }));
  http_->Post("/api/ask", guarded([this](const httplib::Request& req, httplib::Response& res) {
                const auto ask = parse_ask(parse_body(req), session_.config().actions);
                reply(res, session_.ask(ask));
              }));
  http_->Get("/api/model", guarded([this](const httplib::Request& req, httplib::Response& res) {
               if (req.get_param_value("format") == "text") {
                 res.set_content(session_.model_text(), "text/plain");
               } else {
                 reply(res, session_.model_json());
               }
             }));
  http_->Get("/api/log", guarded([this](const httplib::Request&, httplib::Response& res) {
               std::string body;
               for (const auto& line : session_.log()) body += line + '\n';
               res.set_content(body, "application/x-ndjson");
             }));
  // Rebuilds view and model from a posted log (defaults to this session's own).
  http_->Post("/api/replay", guarded([this](const httplib::Request& req, httplib::Response& res) {
                const auto lines = req.body.empty() ? session_.log() : split_lines(req.body);
                Replay r;
                try {
                  r = replay_log(lines, session_.world(), session_.config());
                } catch (const std::exception& e) {
                  throw SessionError("validation", std::string("bad log: ") + e.what());
                }
                reply(res, {{"view", std::move(r.view)}, {"model", to_json(r.model)}});
              }));
}

Server::~Server() { stop(); }

int Server::bind() {
  if (opts_.port == 0) {
    opts_.port = http_->bind_to_any_port(opts_.host);
  } else if (!http_->bind_to_port(opts_.host, opts_.port)) {
    throw std::runtime_error("cannot bind " + opts_.host + ":" + std::to_string(opts_.port));
  }
  return opts_.port;
}

void Server::serve() {
  running_ = true;
  auto_thread_ = std::thread([this] { auto_loop(); });
  http_->listen_after_bind();
}

void Server::stop() {
  running_ = false;
  if (http_) http_->stop();
  if (auto_thread_.joinable()) auto_thread_.join();
}

void Server::auto_loop() {
  while (running_) {
    {
      std::lock_guard lock(mutex_);
      if (session_.mode() == RunMode::Auto) {
        if (session_.can_step()) {
          session_.step();
        } else {
          session_.set_mode(RunMode::Paused);
        }
      }
    }
    std::this_thread::sleep_for(opts_.auto_interval);
  }
}

}  // namespace navexplain
