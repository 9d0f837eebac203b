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

#ifndef PATROL_OPTIMIZER_HPP
#define PATROL_OPTIMIZER_HPP

#include <cstddef>
#include <functional>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "patrol/model.hpp"

namespace patrol {

/// Result of the balanced-policy solve: the optimal observation budget, the
/// derived per-station waits and the statistics they came from.
struct SolveReport {
  double t_obs_star = 0;
  double t_star = 0;                // t_obs_star + t_tr
  double t_tr = 0;
  std::vector<double> wait_times;   // indexed by station, gamma_i * t_obs_star
  std::vector<double> gamma;        // sigma / lambda_i
  double lambda_max = 0;
  double sigma = 0;
  double j2 = 0;                    // objective value at the minimizer
  int iterations = 0;
  double achieved_tolerance = 0;
  bool boundary_minimum = false;    // no interior minimum found (degenerate)
  int lambda_max_ties = 1;          // stations attaining lambda_max
  std::size_t stat_ops = 0;         // elements visited forming lambda_max/sigma
};

struct MinimizeResult {
  double argmin = 0;
  double value = 0;
  int iterations = 0;
  bool boundary_minimum = false;
};

/// Golden-section search for the minimizer of a unimodal curve on
/// [domain_low, domain_cap], to within `tolerance` on the argument.
/// A curve that is monotone over the whole domain yields the boundary point
/// with boundary_minimum set.
MinimizeResult minimize_unimodal(const std::function<double(double)>& curve, double domain_low,
                                 double domain_cap, double tolerance);

/// Computes the unique optimal balanced policy for a fixed visiting order.
/// The order determines the total travel time; pass the identity permutation
/// for cycle-form instances.
SolveReport solve_ordered(const Instance& instance, std::span<const int> order, double tolerance);

/// Convenience overload using the identity order.
SolveReport solve_ordered(const Instance& instance, double tolerance);

/// Incrementally maintained station statistics for online add/remove of
/// stations in O(log n) multiset operations per update. Single writer;
/// snapshot reads are safe concurrently.
class OnlineState {
public:
  OnlineState() = default;

  std::size_t size() const { return rates_.size(); }
  bool empty() const { return rates_.empty(); }
  double sigma() const;
  double lambda_max() const;
  double t_tr() const { return t_tr_; }
  /// Rates in ascending order (multiset iteration order).
  std::vector<double> rates_sorted() const;

  void add(double rate, double new_t_tr);
  void remove(double rate, double new_t_tr);

private:
  std::multiset<double> rates_;
  double inv_rate_sum_ = 0;
  double t_tr_ = 0;
};

/// Adds a station and re-solves from the maintained statistics. Wait times in
/// the report are aligned with state.rates_sorted().
SolveReport online_add(OnlineState& state, double rate, double new_t_tr, double tolerance);

/// Removes one station with the given rate and re-solves.
SolveReport online_remove(OnlineState& state, double rate, double new_t_tr, double tolerance);

}  // namespace patrol

#endif  // PATROL_OPTIMIZER_HPP
