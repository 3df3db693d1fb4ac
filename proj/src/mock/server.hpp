#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "mock/state.hpp"

namespace aft::mock {

// HTTP fixture service over a MockState. Serves the full registry surface
// on loopback; any nonempty bearer token is accepted. Mutations (deletions,
// scenario scripts) serialize through one lock; every response is built
// from a consistent view of the state.
class MockServer {
public:
  explicit MockServer(MockState state);
  ~MockServer();

  MockServer(const MockServer&) = delete;
  MockServer& operator=(const MockServer&) = delete;

  // port 0 binds an ephemeral port; returns the bound port.
  util::Result<int, std::string> start(int port);
  void stop();
  bool running() const;
  int port() const { return port_; }
  std::string base_url() const;

  util::Result<json, std::string> run_script(const json& script);
  util::Result<std::vector<PresenceChange>, UnknownTarget> apply(const DeletionOp& op);
  MockState state_copy() const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int port_ = 0;
};

}  // namespace aft::mock
