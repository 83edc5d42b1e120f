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

// fleetctl: operator CLI. Server commands talk to the gateway named by
// FLEET_STORE_ADDR (comma-separated host:port list, tried with failover);
// `sim run` executes a scenario locally.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fleet/core/strings.hpp"
#include "fleet/gw/failover.hpp"
#include "fleet/sim/simulation.hpp"

using nlohmann::json;

namespace {

fleet::gw::EndpointSet endpoints_from_env() {
  fleet::gw::EndpointSet set;
  set.cluster = "cluster";
  const char* addr = std::getenv("FLEET_STORE_ADDR");
  if (addr == nullptr) return set;
  for (const auto& part : fleet::split(addr, ',')) {
    if (auto endpoint = fleet::gw::Endpoint::parse(part)) set.endpoints.push_back(*endpoint);
  }
  return set;
}

int call(const std::string& method, const std::string& path, const json& body,
         bool quiet = false) {
  auto endpoints = endpoints_from_env();
  if (endpoints.endpoints.empty()) {
    std::cerr << "FLEET_STORE_ADDR is not set (expected host:port[,host:port...])\n";
    return 2;
  }
  fleet::gw::HttpTransport transport;
  fleet::gw::FailoverPolicy policy;
  policy.max_attempts = static_cast<uint32_t>(endpoints.endpoints.size() * 2);
  fleet::gw::Request request{method, path, body.is_null() ? "" : body.dump()};
  auto result = fleet::gw::call_with_failover(transport, request, endpoints, policy);
  if (!result.ok()) {
    std::cerr << "all endpoints failed: " << result.failure->detail << "\n";
    return 3;
  }
  if (!quiet) std::cout << result.body << "\n";
  return result.status >= 200 && result.status < 300 ? 0 : 1;
}

std::string slurp(const std::string& path, bool& ok) {
  std::ifstream f(path);
  if (!f) {
    ok = false;
    return {};
  }
  std::stringstream ss;
  ss << f.rdbuf();
  ok = true;
  return ss.str();
}

uint64_t env_seed() {
  const char* seed = std::getenv("FLEET_SEED");
  if (seed == nullptr) return 0;
  return std::strtoull(seed, nullptr, 10);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fleetctl - fleet operator CLI"};
  app.require_subcommand(1);

  // apply -f FILE [-f FILE...]
  auto* apply = app.add_subcommand("apply", "merge config layer files and render desires");
  std::vector<std::string> layer_files;
  apply->add_option("-f,--file", layer_files, "layer file (repeatable, precedence order)")
      ->required();

  // get KEY
  auto* get = app.add_subcommand("get", "read a record (ns/entity/prop)");
  std::vector<std::string> get_args;
  get->add_option("key", get_args, "optional kind (facts|desires) then ns/entity/prop")
      ->expected(1, 2);
  std::string get_mode = "local";
  get->add_option("--mode", get_mode, "local|strong");

  // diff ENTITY
  auto* diff = app.add_subcommand("diff", "facts vs desires for one entity");
  std::string diff_entity;
  diff->add_option("entity", diff_entity)->required();

  // rollout --image D --max-unavailable N
  auto* rollout = app.add_subcommand("rollout", "rolling update to an image");
  std::string rollout_image;
  int64_t rollout_max = 0;
  rollout->add_option("--image", rollout_image, "image id or digest hex")->required();
  rollout->add_option("--max-unavailable", rollout_max)->required();

  // sequence --dag FILE --direction startup|shutdown
  auto* sequence = app.add_subcommand("sequence", "ordered startup/shutdown");
  std::string dag_file;
  std::string direction = "startup";
  sequence->add_option("--dag", dag_file)->required();
  sequence->add_option("--direction", direction)->check(CLI::IsMember({"startup", "shutdown"}));

  // attest NODE
  auto* attest = app.add_subcommand("attest", "attest a node's boot layers");
  std::string attest_node;
  attest->add_option("node", attest_node)->required();

  // sim run SCENARIO --seed N
  auto* sim = app.add_subcommand("sim", "simulator commands");
  auto* sim_run = sim->add_subcommand("run", "run a scenario locally");
  std::string scenario_path;
  uint64_t seed = env_seed();
  uint64_t until = 100000;
  bool print_trace = false;
  sim_run->add_option("scenario", scenario_path)->required();
  sim_run->add_option("--seed", seed, "scenario seed (default FLEET_SEED)");
  sim_run->add_option("--until", until, "max ticks");
  sim_run->add_flag("--trace", print_trace, "print the event trace (ldjson)");

  // flows add FILE
  auto* flows = app.add_subcommand("flows", "automation flows");
  auto* flows_add = flows->add_subcommand("add", "register flows from a file");
  std::string flows_file;
  flows_add->add_option("file", flows_file)->required();

  CLI11_PARSE(app, argc, argv);

  if (apply->parsed()) {
    json layers = json::array();
    for (const auto& path : layer_files) {
      bool ok = true;
      std::string text = slurp(path, ok);
      if (!ok) {
        std::cerr << "cannot read " << path << "\n";
        return 2;
      }
      layers.push_back(text);
    }
    return call("POST", "/v1/config/apply", json{{"layers", layers}});
  }

  if (get->parsed()) {
    std::string kind = "facts";
    std::string key = get_args.back();
    if (get_args.size() == 2) kind = get_args.front();
    if (kind != "facts" && kind != "desires") {
      std::cerr << "kind must be facts or desires\n";
      return 2;
    }
    return call("GET", "/v1/" + kind + "/" + key + (get_mode == "strong" ? "?mode=strong" : ""),
                json());
  }

  if (diff->parsed()) {
    return call("GET", "/v1/diff/" + diff_entity, json());
  }

  if (rollout->parsed()) {
    return call("POST", "/v1/orchestrate/rollout",
                json{{"image", rollout_image}, {"max_unavailable", rollout_max}});
  }

  if (sequence->parsed()) {
    bool ok = true;
    std::string dag = slurp(dag_file, ok);
    if (!ok) {
      std::cerr << "cannot read " << dag_file << "\n";
      return 2;
    }
    return call("POST", "/v1/orchestrate/sequence",
                json{{"dag", dag}, {"direction", direction}});
  }

  if (attest->parsed()) {
    return call("POST", "/v1/attest", json{{"node", attest_node}});
  }

  if (flows_add->parsed()) {
    bool ok = true;
    std::string text = slurp(flows_file, ok);
    if (!ok) {
      std::cerr << "cannot read " << flows_file << "\n";
      return 2;
    }
    return call("POST", "/v1/flows", json{{"definition", text}});
  }

  if (sim_run->parsed()) {
    auto scenario = fleet::sim::Scenario::load(scenario_path);
    if (!scenario.ok()) {
      std::cerr << "scenario: " << scenario.error().to_string() << "\n";
      return 2;
    }
    if (seed != 0) scenario.value().seed = seed;
    auto simulation = fleet::sim::Simulation::create(std::move(scenario).take());
    if (!simulation.ok()) {
      std::cerr << "simulation: " << simulation.error().to_string() << "\n";
      return 2;
    }
    simulation.value()->run_until_idle(until);
    if (print_trace) {
      std::cout << simulation.value()->trace().dump();
    }
    json summary{{"ticks", simulation.value()->now()},
                 {"nodes", simulation.value()->node_ids().size()},
                 {"bytes_transferred", simulation.value()->fleet_bytes_transferred()},
                 {"trace_lines", simulation.value()->trace().lines().size()}};
    std::cerr << summary.dump() << "\n";
    return 0;
  }

  return 0;
}
