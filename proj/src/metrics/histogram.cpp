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

#include "fleet/metrics/histogram.hpp"

#include <cassert>
#include <cmath>

namespace fleet::metrics {

size_t LatencyHistogram::bucket_index(double value_ms) {
  if (!(value_ms >= kLowest)) return 0;  // [0, kLowest) plus any NaN guard
  const double idx = std::floor(std::log(value_ms / kLowest) / std::log(kGrowth)) + 1.0;
  if (idx >= static_cast<double>(kBuckets - 1)) return kBuckets - 1;
  size_t i = static_cast<size_t>(idx);
  // Guard the float boundary: the sample must lie inside [floor(i), floor(i+1)).
  while (i + 1 < kBuckets && value_ms >= bucket_floor(i + 1)) ++i;
  while (i > 0 && value_ms < bucket_floor(i)) --i;
  return i;
}

double LatencyHistogram::bucket_floor(size_t index) {
  if (index == 0) return 0.0;
  return kLowest * std::pow(kGrowth, static_cast<double>(index - 1));
}

void LatencyHistogram::add(double value_ms) {
  const size_t i = bucket_index(value_ms);
  counts_[i] += 1;
  sums_[i] += value_ms;
  total_ += 1;
  sum_ += value_ms;
}

double LatencyHistogram::quantile(double q) const {
  assert(total_ > 0);
  if (q <= 0.0) q = 1e-9;
  if (q > 1.0) q = 1.0;
  uint64_t rank = static_cast<uint64_t>(std::ceil(q * static_cast<double>(total_)));
  if (rank == 0) rank = 1;
  uint64_t seen = 0;
  for (size_t i = 0; i < kBuckets; ++i) {
    seen += counts_[i];
    if (seen >= rank) {
      return sums_[i] / static_cast<double>(counts_[i]);
    }
  }
  return sums_.back() / static_cast<double>(counts_.back() ? counts_.back() : 1);
}

void LatencyHistogram::merge(const LatencyHistogram& other) {
  for (size_t i = 0; i < kBuckets; ++i) {
    counts_[i] += other.counts_[i];
    sums_[i] += other.sums_[i];
  }
  total_ += other.total_;
  sum_ += other.sum_;
}

}  // namespace fleet::metrics
