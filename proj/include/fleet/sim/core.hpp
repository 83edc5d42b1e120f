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

#include <cstdint>
#include <functional>
#include <map>
#include <queue>
#include <string>
#include <vector>

#include <json.hpp>

#include "fleet/core/rng.hpp"

namespace fleet::sim {

enum class TraceLevel { Off, Phases, Full };

/// Line-delimited JSON event trace. Events are serialized at emit time, so
/// trace equality is byte equality. The Phases level keeps only the events
/// needed by trace checkers (phase changes, action executions, faults,
/// attestations); Full keeps everything.
class TraceLog {
 public:
  explicit TraceLog(TraceLevel level = TraceLevel::Full) : level_(level) {}

  void emit(uint64_t tick, std::string_view type, nlohmann::json fields);

  const std::vector<std::string>& lines() const { return lines_; }
  std::string dump() const;
  void clear() { lines_.clear(); }
  TraceLevel level() const { return level_; }

 private:
  TraceLevel level_;
  std::vector<std::string> lines_;
};

/// Deterministic discrete-event core: a tick clock and a queue of events
/// executed in (due tick, insertion sequence) order. Identical seeds and
/// identical schedules replay identically.
class SimCore {
 public:
  explicit SimCore(uint64_t seed, TraceLevel trace_level = TraceLevel::Full)
      : rng_(seed), trace_(trace_level) {}

  uint64_t now() const { return now_; }
  Rng& rng() { return rng_; }
  TraceLog& trace() { return trace_; }

  void schedule(uint64_t delay, std::function<void()> fn);

  /// Runs the next due event. False when the queue is empty.
  bool step();

  /// Processes everything due at or before `tick`, then sets now = tick.
  void run_until(uint64_t tick);
  void run_for(uint64_t ticks) { run_until(now_ + ticks); }

  /// Runs until the queue drains or `max_ticks` elapse; returns final now.
  uint64_t run_until_idle(uint64_t max_ticks);

  size_t pending() const { return queue_.size(); }

 private:
  struct Event {
    uint64_t due;
    uint64_t seq;
    std::function<void()> fn;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.due != b.due) return a.due > b.due;
      return a.seq > b.seq;
    }
  };

  uint64_t now_ = 0;
  uint64_t seq_ = 0;
  Rng rng_;
  TraceLog trace_;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
};

/// Point-to-point delivery with partitions and slow links. Partition
/// windows block messages between named groups; endpoints outside every
/// group are unaffected. Dropped deliveries are counted and traced so
/// hermeticity is checkable from the delivery log.
class NetworkModel {
 public:
  explicit NetworkModel(SimCore& core, uint64_t latency = 1)
      : core_(core), latency_(latency) {}

  void set_latency(uint64_t ticks) { latency_ = ticks; }
  uint64_t latency() const { return latency_; }

  /// Installs a partition for [now, now+duration) (duration 0 = until
  /// cleared). Returns an id usable with clear_partition.
  uint64_t partition(std::vector<std::vector<std::string>> groups, uint64_t duration);
  void clear_partition(uint64_t id);

  void set_slow(const std::string& endpoint, double factor, uint64_t duration);

  bool link_open(const std::string& a, const std::string& b) const;

  /// Schedules `deliver` after the link latency, or drops it (counted,
  /// traced) when a partition blocks the pair.
  bool send(const std::string& from, const std::string& to, std::string_view tag,
            std::function<void()> deliver);

  size_t dropped() const { return dropped_; }
  size_t delivered() const { return delivered_; }

 private:
  struct Partition {
    uint64_t id;
    std::map<std::string, size_t> group_of;
    uint64_t until;  // 0 = manual clear
  };

  SimCore& core_;
  uint64_t latency_;
  uint64_t next_partition_id_ = 1;
  std::vector<Partition> partitions_;
  std::map<std::string, std::pair<double, uint64_t>> slow_;  // factor, until
  size_t dropped_ = 0;
  size_t delivered_ = 0;
};

}  // namespace fleet::sim
