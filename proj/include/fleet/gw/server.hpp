// Copyright 2026 The fleetd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <atomic>
#include <memory>
#include <mutex>
#include <thread>

#include "fleet/gw/failover.hpp"
#include "fleet/gw/router.hpp"

namespace httplib {
class Server;
}

namespace fleet::gw {

/// HTTP face of the cluster: /v1/... routes map one-to-one onto router
/// commands. Replicas share nothing but the state store; a replica in
/// lame-duck mode answers everything with 503 plus X-Failover: true so
/// clients move on without waiting for timeouts.
class GatewayServer {
 public:
  struct Options {
    std::string host = "127.0.0.1";
    int port = 0;  // 0 = pick a free port
    std::string cluster = "cluster";
    /// Principal used to publish this endpoint into the store.
    std::string publish_owner = "cluster-agent";
    bool publish = true;
  };

  GatewayServer(CommandRouter& router, state::StateStore& store, Options options);
  ~GatewayServer();

  Result<void> start();
  void stop();

  int port() const { return port_; }
  void set_lame_duck(bool on) { lame_duck_ = on; }
  bool lame_duck() const { return lame_duck_; }

  /// Hosts driving a simulation alongside the server take this lock while
  /// advancing it; handlers hold it for the duration of each command.
  std::mutex& mutex() { return mu_; }

 private:
  void install_routes();

  CommandRouter& router_;
  state::StateStore& store_;
  Options options_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  std::mutex mu_;  // serializes router access across handler threads
  std::atomic<bool> lame_duck_{false};
  int port_ = 0;
};

}  // namespace fleet::gw
