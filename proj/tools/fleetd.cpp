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

// fleetd: hosts the state store, the orchestrator reconciling a simulated
// fleet, and the gateway HTTP surface.

#include <CLI11.hpp>

#include <chrono>
#include <csignal>
#include <iostream>
#include <thread>

#include "fleet/gw/server.hpp"
#include "fleet/metrics/registry.hpp"
#include "fleet/sim/simulation.hpp"

namespace {
std::atomic<bool> g_stop{false};
void on_signal(int) { g_stop = true; }
}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fleetd - declarative fleet state management over a simulated fleet"};

  std::string host = "127.0.0.1";
  int port = 8080;
  std::string scenario_path;
  uint64_t seed = 0;
  std::string cluster = "cluster";
  uint64_t step_ms = 20;

  app.add_option("--host", host, "listen address");
  app.add_option("--port", port, "listen port");
  app.add_option("--scenario", scenario_path, "scenario file to simulate")->required();
  app.add_option("--seed", seed, "override the scenario seed");
  app.add_option("--cluster", cluster, "cluster id for endpoint publication");
  app.add_option("--step-ms", step_ms, "wall milliseconds per simulated reconcile stride");

  CLI11_PARSE(app, argc, argv);

  auto scenario = fleet::sim::Scenario::load(scenario_path);
  if (!scenario.ok()) {
    std::cerr << "scenario: " << scenario.error().to_string() << "\n";
    return 1;
  }
  if (seed != 0) scenario.value().seed = seed;
  scenario.value().orchestrator_enabled = true;

  auto sim = fleet::sim::Simulation::create(std::move(scenario).take());
  if (!sim.ok()) {
    std::cerr << "simulation: " << sim.error().to_string() << "\n";
    return 1;
  }
  fleet::sim::Simulation& simulation = *sim.value();

  fleet::metrics::MetricsRegistry metrics;
  fleet::cfg::Renderer renderer(simulation.store(), simulation.images(),
                                std::filesystem::temp_directory_path() / "fleetd-render.log");

  fleet::gw::CommandRouter::Deps deps;
  deps.store = &simulation.store();
  deps.orchestrator = simulation.orchestrator();
  deps.sim = &simulation;
  deps.metrics = &metrics;
  deps.renderer = &renderer;
  fleet::gw::CommandRouter router(deps);

  fleet::gw::GatewayServer::Options options;
  options.host = host;
  options.port = port;
  options.cluster = cluster;
  fleet::gw::GatewayServer server(router, simulation.store(), options);
  if (auto started = server.start(); !started.ok()) {
    std::cerr << "gateway: " << started.error().to_string() << "\n";
    return 1;
  }
  std::cout << "fleetd listening on " << host << ":" << server.port() << " ("
            << simulation.node_ids().size() << " nodes, seed "
            << simulation.scenario().seed << ")\n";

  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);

  // Advance the simulation in real time so reconciliation keeps running
  // while the gateway serves requests. The server lock keeps handler
  // commands and simulation steps from interleaving.
  const uint64_t stride = simulation.scenario().reconcile.interval;
  while (!g_stop) {
    std::this_thread::sleep_for(std::chrono::milliseconds(step_ms));
    std::lock_guard lock(server.mutex());
    simulation.run_for(stride);
  }

  server.stop();
  return 0;
}
