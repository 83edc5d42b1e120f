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

#include "fleet/sim/core.hpp"

#include <algorithm>

namespace fleet::sim {

using nlohmann::json;

void TraceLog::emit(uint64_t tick, std::string_view type, json fields) {
  if (level_ == TraceLevel::Off) return;
  if (level_ == TraceLevel::Phases) {
    static const char* kept[] = {"phase_change", "action_exec", "fault_applied",
                                 "fault_cleared", "attest", "checkpoint"};
    if (std::find(std::begin(kept), std::end(kept), type) == std::end(kept)) return;
  }
  fields["tick"] = tick;
  fields["type"] = std::string(type);
  lines_.push_back(fields.dump());
}

std::string TraceLog::dump() const {
  std::string out;
  for (const auto& line : lines_) {
    out += line;
    out += '\n';
  }
  return out;
}

void SimCore::schedule(uint64_t delay, std::function<void()> fn) {
  queue_.push(Event{now_ + delay, seq_++, std::move(fn)});
}

bool SimCore::step() {
  if (queue_.empty()) return false;
  Event ev = queue_.top();
  queue_.pop();
  now_ = std::max(now_, ev.due);
  ev.fn();
  return true;
}

void SimCore::run_until(uint64_t tick) {
  while (!queue_.empty() && queue_.top().due <= tick) step();
  now_ = std::max(now_, tick);
}

uint64_t SimCore::run_until_idle(uint64_t max_ticks) {
  const uint64_t deadline = now_ + max_ticks;
  while (!queue_.empty() && queue_.top().due <= deadline) step();
  return now_;
}

uint64_t NetworkModel::partition(std::vector<std::vector<std::string>> groups,
                                 uint64_t duration) {
  Partition p;
  p.id = next_partition_id_++;
  for (size_t g = 0; g < groups.size(); ++g) {
    for (const auto& endpoint : groups[g]) p.group_of[endpoint] = g;
  }
  p.until = duration == 0 ? 0 : core_.now() + duration;
  partitions_.push_back(std::move(p));
  if (duration != 0) {
    const uint64_t id = next_partition_id_ - 1;
    core_.schedule(duration, [this, id] { clear_partition(id); });
  }
  return next_partition_id_ - 1;
}

void NetworkModel::clear_partition(uint64_t id) {
  std::erase_if(partitions_, [id](const Partition& p) { return p.id == id; });
}

void NetworkModel::set_slow(const std::string& endpoint, double factor, uint64_t duration) {
  slow_[endpoint] = {factor, duration == 0 ? 0 : core_.now() + duration};
  if (duration != 0) {
    core_.schedule(duration, [this, endpoint] {
      auto it = slow_.find(endpoint);
      if (it != slow_.end() && it->second.second != 0 && it->second.second <= core_.now()) {
        slow_.erase(it);
      }
    });
  }
}

bool NetworkModel::link_open(const std::string& a, const std::string& b) const {
  for (const auto& p : partitions_) {
    if (p.until != 0 && p.until <= core_.now()) continue;
    auto ga = p.group_of.find(a);
    auto gb = p.group_of.find(b);
    // Endpoints outside every group are unaffected by this partition.
    if (ga == p.group_of.end() || gb == p.group_of.end()) continue;
    if (ga->second != gb->second) return false;
  }
  return true;
}

bool NetworkModel::send(const std::string& from, const std::string& to, std::string_view tag,
                        std::function<void()> deliver) {
  if (!link_open(from, to)) {
    ++dropped_;
    core_.trace().emit(core_.now(), "message_dropped",
                       {{"from", from}, {"to", to}, {"tag", std::string(tag)}});
    return false;
  }
  double factor = 1.0;
  for (const auto& endpoint : {from, to}) {
    auto it = slow_.find(endpoint);
    if (it != slow_.end() && (it->second.second == 0 || it->second.second > core_.now())) {
      factor = std::max(factor, it->second.first);
    }
  }
  ++delivered_;
  const auto delay = static_cast<uint64_t>(static_cast<double>(latency_) * factor);
  core_.schedule(std::max<uint64_t>(1, delay), std::move(deliver));
  return true;
}

}  // namespace fleet::sim
