// Copyright 2026 The patrol Authors.
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

#ifndef PATROL_MODEL_HPP
#define PATROL_MODEL_HPP

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace patrol {

using TravelMatrix = std::vector<std::vector<double>>;

/// A monitoring problem instance: per-station Poisson arrival rates
/// (events/hour) plus travel times (hours), given either as a full matrix or
/// as successor-edge times along the identity cyclic order.
///
/// Immutable after construction; safe to share between threads.
class Instance {
public:
  /// Full travel matrix: square, nonnegative, zero diagonal.
  static Instance from_matrix(std::vector<double> rates, TravelMatrix travel);

  /// Successor-edge travel times tau_{i, i+1 mod n} along the identity order.
  static Instance from_cycle(std::vector<double> rates, std::vector<double> successor_times);

  std::size_t size() const { return rates_.size(); }
  const std::vector<double>& rates() const { return rates_; }

  bool has_matrix() const { return !matrix_.empty(); }
  const TravelMatrix& matrix() const;
  const std::vector<double>& successor_times() const;

  /// Travel time from station i to station j. For cycle-form instances only
  /// successor edges of the identity order are known.
  double travel(std::size_t i, std::size_t j) const;

  /// Total travel time of the closed tour visiting stations in `order`.
  double travel_total(std::span<const int> order) const;

private:
  Instance() = default;
  std::vector<double> rates_;
  TravelMatrix matrix_;                 // empty when cycle form
  std::vector<double> successor_;       // empty when matrix form
};

/// A cyclic policy: a visiting order over all stations plus the waiting time
/// at each visited station (parallel to `order`), repeated with period
/// travel_total + sum(wait_times).
struct CyclicPolicy {
  std::vector<int> order;          // permutation of {0..n-1}
  std::vector<double> wait_times;  // wait_times[j] is the wait at station order[j]
  double travel_total = 0;

  double t_obs() const;
  double period() const { return travel_total + t_obs(); }
};

/// Like CyclicPolicy but a station may be visited several times per period.
struct PeriodicPolicy {
  struct Visit {
    int station;
    double wait;
  };
  std::vector<Visit> visits;
  double travel_total = 0;

  double t_obs() const;
  double period() const { return travel_total + t_obs(); }
};

/// Analytic evaluation of a policy: event fractions, balance diagnostic,
/// both objectives and the per-station expected delays.
struct PolicyEvaluation {
  std::vector<double> alphas;  // indexed by station, sums to 1
  double max_pair_gap = 0;     // max_{i,j} |lambda_i t_i - lambda_j t_j|
  double j1 = 0;               // min_i alpha_i
  double j2 = 0;               // max_i expected delay
  std::vector<double> delays;  // indexed by station
};

/// sigma = 1 / sum(1/lambda_i), the harmonic sum of the rates.
double harmonic_sum(std::span<const double> rates);

/// The balanced split t_i = sigma * t_obs / lambda_i; the waits sum to t_obs
/// and equalize lambda_i t_i across stations.
std::vector<double> balanced_wait_times(std::span<const double> rates, double t_obs);

PolicyEvaluation evaluate_policy(const Instance& instance, const CyclicPolicy& policy);

}  // namespace patrol

#endif  // PATROL_MODEL_HPP
