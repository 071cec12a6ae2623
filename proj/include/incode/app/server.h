#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <thread>

#include "incode/app/workspace.h"

namespace httplib {
class Server;
}

namespace incode::app {

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::optional<std::filesystem::path> static_dir;
};

// HTTP front end over a workspace. Codebooks are read once at construction;
// annotation state lives in the workspace's annotation store. Mutating
// endpoints call exactly one store operation each.
class ReviewServer {
 public:
  ReviewServer(Workspace workspace, ServerOptions options);
  ~ReviewServer();

  // Binds, then serves on a background thread. Returns the bound port.
  int start();
  // Binds and serves on the calling thread until stop().
  void run();
  void stop();
  int port() const noexcept { return port_; }

 private:
  struct State;
  void install_routes();
  int bind();

  Workspace workspace_;
  ServerOptions options_;
  std::unique_ptr<State> state_;
  std::unique_ptr<httplib::Server> http_;
  int port_ = 0;
  std::unique_ptr<std::thread> thread_;
};

}  // namespace incode::app
