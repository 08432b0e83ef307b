#pragma once

#include <atomic>
#include <chrono>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "navexplain/session.hpp"

namespace httplib {
class Server;
}

namespace navexplain {

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 binds any free port
  std::chrono::milliseconds auto_interval{100};
};

// Local HTTP front end for one Session. Routes live under /api (see
// docs/service_api.md). Every request takes the session mutex, so requests and
// the auto-run loop never interleave inside a decision cycle.
class Server {
 public:
  Server(Session& session, ServerOptions opts);
  ~Server();

  // Binds and returns the bound port (useful with port 0).
  int bind();
  // Blocks serving requests until stop().
  void serve();
  void stop();

 private:
  void auto_loop();

  Session& session_;
  ServerOptions opts_;
  std::mutex mutex_;
  std::unique_ptr<httplib::Server> http_;
  std::thread auto_thread_;
  std::atomic<bool> running_{false};
};

}  // namespace navexplain
