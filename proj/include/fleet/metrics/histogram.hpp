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
#include <vector>

namespace fleet::metrics {

/// Fixed log-spaced latency histogram (growth factor 1.1, so adjacent
/// bucket boundaries differ by 10%). Buckets track count and sum, which
/// keeps quantile estimates within one bucket of exact nearest-rank and
/// makes the single-sample case exact. Merging two histograms is
/// bucket-exact addition.
class LatencyHistogram {
 public:
  static constexpr double kGrowth = 1.1;
  static constexpr double kLowest = 0.001;  // first finite boundary, in ms
  static constexpr size_t kBuckets = 340;   // reaches ~8.5e11 ms

  void add(double value_ms);

  uint64_t total() const { return total_; }
  double sum() const { return sum_; }
  double mean() const { return total_ == 0 ? 0.0 : sum_ / static_cast<double>(total_); }

  /// Nearest-rank quantile estimate for q in (0, 1]: the mean of the bucket
  /// holding the rank-ceil(q*n) sample. total() must be > 0.
  double quantile(double q) const;

  void merge(const LatencyHistogram& other);

  static size_t bucket_index(double value_ms);
  /// Inclusive lower bound of a bucket.
  static double bucket_floor(size_t index);

  const std::vector<uint64_t>& counts() const { return counts_; }

 private:
  std::vector<uint64_t> counts_ = std::vector<uint64_t>(kBuckets, 0);
  std::vector<double> sums_ = std::vector<double>(kBuckets, 0.0);
  uint64_t total_ = 0;
  double sum_ = 0.0;
};

}  // namespace fleet::metrics
