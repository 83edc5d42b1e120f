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

#include "fleet/sim/scenario.hpp"

#include <fstream>
#include <sstream>

#include "fleet/core/strings.hpp"

namespace fleet::sim {

const char* to_string(FaultSpec::Kind k) {
  switch (k) {
    case FaultSpec::Kind::Crash: return "crash";
    case FaultSpec::Kind::Partition: return "partition";
    case FaultSpec::Kind::SlowLink: return "slow_link";
    case FaultSpec::Kind::CorruptLayer: return "corrupt_layer";
    case FaultSpec::Kind::LldpOff: return "lldp_off";
  }
  return "?";
}

Scenario::Scenario() {
  site_prefix = Ipv6Prefix::parse("fd00::/64").value();
  stage_timing = {
      {"firmware", {3, 1}}, {"netboot", {2, 1}}, {"layer", {2, 1}},
      {"services", {2, 1}}, {"action", {1, 1}},
  };
}

namespace {

Result<FaultSpec> parse_fault(const FieldLine& fl) {
  FaultSpec f;
  const std::string kind = fl.get("kind");
  if (kind == "crash") {
    f.kind = FaultSpec::Kind::Crash;
    auto node = fl.require("node");
    if (!node.ok()) return node.error();
    f.target = node.value();
  } else if (kind == "partition") {
    f.kind = FaultSpec::Kind::Partition;
    auto groups = fl.require("groups");
    if (!groups.ok()) return groups.error();
    for (const auto& group : split(groups.value(), '|')) {
      std::vector<std::string> members;
      for (auto& m : split(group, ',')) {
        if (!m.empty()) members.push_back(m);
      }
      if (!members.empty()) f.groups.push_back(std::move(members));
    }
    if (f.groups.size() < 2) {
      return Error{Errc::ParseError, "partition needs at least two groups"};
    }
  } else if (kind == "slow_link") {
    f.kind = FaultSpec::Kind::SlowLink;
    auto node = fl.require("node");
    if (!node.ok()) return node.error();
    f.target = node.value();
    if (fl.has("factor")) {
      f.factor = std::stod(fl.get("factor"));
      if (f.factor < 1.0) return Error{Errc::ParseError, "slow_link factor must be >= 1"};
    }
  } else if (kind == "corrupt_layer") {
    f.kind = FaultSpec::Kind::CorruptLayer;
    auto node = fl.require("node");
    if (!node.ok()) return node.error();
    f.target = node.value();
    auto layer = fl.require_u64("layer");
    if (!layer.ok()) return layer.error();
    f.layer = layer.value();
  } else if (kind == "lldp_off") {
    f.kind = FaultSpec::Kind::LldpOff;
    auto sw = fl.require("switch");
    if (!sw.ok()) return sw.error();
    f.target = sw.value();
  } else {
    return Error{Errc::ParseError,
                 "line " + std::to_string(fl.line_no) + ": unknown fault kind '" + kind + "'"};
  }
  auto at = fl.require_u64("at");
  if (!at.ok()) return at.error();
  f.at = at.value();
  auto duration = fl.get_u64("duration", 0);
  if (!duration.ok()) return duration.error();
  f.duration = duration.value();
  return f;
}

}  // namespace

Result<Scenario> Scenario::parse(std::string_view text) {
  auto lines = parse_field_lines(text);
  if (!lines.ok()) return lines.error();

  Scenario s;
  std::string graph_text;
  for (const auto& fl : lines.value()) {
    auto bad = [&](const std::string& why) {
      return Error{Errc::ParseError, "line " + std::to_string(fl.line_no) + ": " + why};
    };

    if (fl.keyword == "seed") {
      if (fl.positional.size() != 1) return bad("expected seed <n>");
      auto v = parse_u64(fl.positional[0]);
      if (!v.ok()) return v.error();
      s.seed = v.value();
    } else if (fl.keyword == "ticks-per-second") {
      if (fl.positional.size() != 1) return bad("expected ticks-per-second <n>");
      s.ticks_per_second = std::stod(fl.positional[0]);
    } else if (fl.keyword == "trace") {
      const std::string level = fl.positional.empty() ? "full" : fl.positional[0];
      if (level == "off") s.trace_level = TraceLevel::Off;
      else if (level == "phases") s.trace_level = TraceLevel::Phases;
      else if (level == "full") s.trace_level = TraceLevel::Full;
      else return bad("trace level must be off|phases|full");
    } else if (fl.keyword == "latency") {
      auto v = parse_u64(fl.positional.at(0));
      if (!v.ok()) return v.error();
      s.net_latency = v.value();
    } else if (fl.keyword == "switch") {
      SwitchDecl sw;
      auto chassis = fl.require_u64("chassis");
      if (!chassis.ok()) return chassis.error();
      sw.chassis = static_cast<uint32_t>(chassis.value());
      auto ports = fl.get_u64("ports", 48);
      if (!ports.ok()) return ports.error();
      sw.ports = static_cast<uint16_t>(ports.value());
      sw.lldp = fl.get("lldp", "on") != "off";
      s.switches.push_back(sw);
    } else if (fl.keyword == "node") {
      NodeDecl n;
      auto id = fl.require("id");
      if (!id.ok()) return id.error();
      n.id = id.value();
      auto chassis = fl.require_u64("chassis");
      if (!chassis.ok()) return chassis.error();
      auto port = fl.require_u64("port");
      if (!port.ok()) return port.error();
      n.location = model::TopologyLocation{static_cast<uint32_t>(chassis.value()),
                                           static_cast<uint16_t>(port.value())};
      if (fl.has("nic")) {
        auto mac = Mac48::parse(fl.get("nic"));
        if (!mac.ok()) return mac.error();
        n.nic = mac.value();
      } else {
        // Deterministic filler: derived from the location.
        n.nic.bytes = {0x02, 0x00,
                       static_cast<uint8_t>(chassis.value() >> 8),
                       static_cast<uint8_t>(chassis.value() & 0xff),
                       static_cast<uint8_t>(port.value() >> 8),
                       static_cast<uint8_t>(port.value() & 0xff)};
      }
      auto memory = fl.get_u64("memory", 1ull << 30);
      if (!memory.ok()) return memory.error();
      n.memory = memory.value();
      if (fl.has("phase")) {
        auto phase = model::phase_from_string(fl.get("phase"));
        if (!phase) return bad("unknown phase " + fl.get("phase"));
        n.initial_phase = *phase;
      }
      if (fl.has("image")) n.image = fl.get("image");
      if (fl.has("job")) {
        auto job = fl.require_u64("job");
        if (!job.ok()) return job.error();
        n.job_ticks = job.value();
      }
      s.nodes.push_back(std::move(n));
    } else if (fl.keyword == "nodes") {
      // Bulk declaration: nodes count=N prefix=n memory=... [phase=...] [image=...]
      auto count = fl.require_u64("count");
      if (!count.ok()) return count.error();
      const std::string prefix = fl.get("prefix", "n");
      auto memory = fl.get_u64("memory", 1ull << 30);
      if (!memory.ok()) return memory.error();
      auto ports = fl.get_u64("ports-per-switch", 256);
      if (!ports.ok()) return ports.error();
      std::optional<model::NodePhase> phase;
      if (fl.has("phase")) {
        phase = model::phase_from_string(fl.get("phase"));
        if (!phase) return bad("unknown phase " + fl.get("phase"));
      }
      for (uint64_t i = 0; i < count.value(); ++i) {
        NodeDecl n;
        n.id = prefix + std::to_string(i);
        n.location = model::TopologyLocation{static_cast<uint32_t>(i / ports.value()),
                                             static_cast<uint16_t>(i % ports.value())};
        n.nic.bytes = {0x02, 0x01, static_cast<uint8_t>(i >> 24),
                       static_cast<uint8_t>(i >> 16), static_cast<uint8_t>(i >> 8),
                       static_cast<uint8_t>(i)};
        n.memory = memory.value();
        if (phase) n.initial_phase = *phase;
        if (fl.has("image")) n.image = fl.get("image");
        s.nodes.push_back(std::move(n));
      }
      const uint32_t needed = static_cast<uint32_t>(
          (count.value() + ports.value() - 1) / ports.value());
      for (uint32_t c = 0; c < needed; ++c) {
        s.switches.push_back(SwitchDecl{c, static_cast<uint16_t>(ports.value()), true});
      }
    } else if (fl.keyword == "graph") {
      if (!fl.positional.empty() && fl.positional[0] == "builtin") {
        s.graph = model::MutationGraph::default_graph();
      } else if (fl.has("file")) {
        std::ifstream f(fl.get("file"));
        if (!f) return bad("cannot open graph file " + fl.get("file"));
        std::stringstream ss;
        ss << f.rdbuf();
        auto g = model::MutationGraph::parse(ss.str());
        if (!g.ok()) return g.error();
        s.graph = g.value();
      } else {
        return bad("graph builtin | graph file=<path>");
      }
    } else if (fl.keyword == "image") {
      ImageRecipe recipe;
      auto id = fl.require("id");
      if (!id.ok()) return id.error();
      recipe.id = id.value();
      const std::string kind = fl.get("kind", "minimal_os");
      if (kind == "minimal_os") recipe.kind = ImageKind::MinimalOs;
      else if (kind == "service_container") recipe.kind = ImageKind::ServiceContainer;
      else if (kind == "job_container") recipe.kind = ImageKind::JobContainer;
      else return bad("unknown image kind " + kind);
      auto layers = fl.require("layers");
      if (!layers.ok()) return layers.error();
      for (const auto& layer : split(layers.value(), ',')) {
        auto colon = layer.find(':');
        if (colon == std::string::npos) return bad("layers must be name:bytes,...");
        auto bytes = parse_u64(layer.substr(colon + 1));
        if (!bytes.ok()) return bytes.error();
        recipe.layers.emplace_back(layer.substr(0, colon), bytes.value());
      }
      s.recipes.push_back(std::move(recipe));
    } else if (fl.keyword == "fault") {
      auto f = parse_fault(fl);
      if (!f.ok()) return f.error();
      s.faults.push_back(f.value());
    } else if (fl.keyword == "read") {
      ReadEntry r;
      auto node = fl.require("node");
      if (!node.ok()) return node.error();
      r.node = node.value();
      auto layer = fl.require_u64("layer");
      if (!layer.ok()) return layer.error();
      r.layer = layer.value();
      auto offset = fl.get_u64("offset", 0);
      if (!offset.ok()) return offset.error();
      r.offset = offset.value();
      auto len = fl.require_u64("len");
      if (!len.ok()) return len.error();
      r.length = len.value();
      s.reads.push_back(std::move(r));
    } else if (fl.keyword == "router") {
      s.router_enabled = fl.positional.empty() || fl.positional[0] != "disabled";
      if (fl.has("prefix")) {
        auto p = Ipv6Prefix::parse(fl.get("prefix"));
        if (!p.ok()) return p.error();
        s.site_prefix = p.value();
      }
    } else if (fl.keyword == "orchestrator") {
      s.orchestrator_enabled = fl.positional.empty() || fl.positional[0] != "disabled";
      auto interval = fl.get_u64("interval", s.reconcile.interval);
      if (!interval.ok()) return interval.error();
      s.reconcile.interval = interval.value();
      auto parallel = fl.get_u64("max-parallel", s.reconcile.max_parallel_actions);
      if (!parallel.ok()) return parallel.error();
      s.reconcile.max_parallel_actions = static_cast<uint32_t>(parallel.value());
      auto drain = fl.get_u64("drain-timeout", s.reconcile.drain_timeout);
      if (!drain.ok()) return drain.error();
      s.reconcile.drain_timeout = drain.value();
      if (fl.has("journal")) s.journal_path = fl.get("journal");
    } else if (fl.keyword == "transfer") {
      if (!fl.positional.empty() && fl.positional[0] == "lazy") {
        s.lazy_transfer = true;
      }
      auto cache = fl.get_u64("cache", s.lazy_cache_bytes);
      if (!cache.ok()) return cache.error();
      s.lazy_cache_bytes = cache.value();
      auto metadata = fl.get_u64("metadata-per-layer", s.metadata_units_per_layer);
      if (!metadata.ok()) return metadata.error();
      s.metadata_units_per_layer = metadata.value();
    } else if (fl.keyword == "stage") {
      auto name = fl.require("name");
      if (!name.ok()) return name.error();
      StageTiming t;
      auto base = fl.get_u64("base", 2);
      if (!base.ok()) return base.error();
      t.base = base.value();
      auto jitter = fl.get_u64("jitter", 0);
      if (!jitter.ok()) return jitter.error();
      t.jitter = jitter.value();
      s.stage_timing[name.value()] = t;
    } else if (fl.keyword == "action-failure") {
      auto action = fl.require("action");
      if (!action.ok()) return action.error();
      s.action_failure_rate[action.value()] = std::stod(fl.get("rate", "0"));
    } else if (fl.keyword == "desire") {
      auto key = state::StateKey::parse(fl.get("key"));
      if (!key.ok()) return key.error();
      auto value = fl.require("value");
      if (!value.ok()) return value.error();
      s.desires.push_back({key.value(), Value::parse(value.value())});
    } else if (fl.keyword == "desire-all") {
      // Expanded per node at load time: desire-all prop=phase value=ServicesReady
      auto prop = fl.require("prop");
      if (!prop.ok()) return prop.error();
      auto value = fl.require("value");
      if (!value.ok()) return value.error();
      s.desires.push_back({state::StateKey{"node", "*", prop.value()},
                           Value::parse(value.value())});
    } else {
      return bad("unknown directive '" + fl.keyword + "'");
    }
  }
  return s;
}

Result<Scenario> Scenario::load(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) return Error{Errc::IoError, "cannot open scenario " + path.string()};
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

}  // namespace fleet::sim
