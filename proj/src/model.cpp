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

#include "patrol/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "patrol/delay.hpp"
#include "patrol/errors.hpp"

namespace patrol {

namespace {

void check_rates(const std::vector<double>& rates) {
  if (rates.empty()) throw invalid_input_error("instance: need at least one station");
  for (double r : rates)
    if (!(r > 0) || !std::isfinite(r))
      throw invalid_input_error("instance: every rate must be positive and finite");
}

}  // namespace

Instance Instance::from_matrix(std::vector<double> rates, TravelMatrix travel) {
  check_rates(rates);
  const std::size_t n = rates.size();
  if (travel.size() != n) throw invalid_input_error("instance: travel matrix must be n x n");
  for (std::size_t i = 0; i < n; ++i) {
    if (travel[i].size() != n) throw invalid_input_error("instance: travel matrix must be square");
    if (travel[i][i] != 0) throw invalid_input_error("instance: travel matrix diagonal must be zero");
    for (double t : travel[i])
      if (t < 0 || !std::isfinite(t))
        throw invalid_input_error("instance: travel times must be nonnegative and finite");
  }
  Instance inst;
  inst.rates_ = std::move(rates);
  inst.matrix_ = std::move(travel);
  return inst;
}

Instance Instance::from_cycle(std::vector<double> rates, std::vector<double> successor_times) {
  check_rates(rates);
  if (successor_times.size() != rates.size())
    throw invalid_input_error("instance: need one successor travel time per station");
  for (double t : successor_times)
    if (t < 0 || !std::isfinite(t))
      throw invalid_input_error("instance: travel times must be nonnegative and finite");
  Instance inst;
  inst.rates_ = std::move(rates);
  inst.successor_ = std::move(successor_times);
  return inst;
}

const TravelMatrix& Instance::matrix() const {
  if (!has_matrix()) throw invalid_input_error("instance: no full travel matrix available");
  return matrix_;
}

const std::vector<double>& Instance::successor_times() const {
  if (has_matrix()) throw invalid_input_error("instance: matrix form has no successor list");
  return successor_;
}

double Instance::travel(std::size_t i, std::size_t j) const {
  const std::size_t n = size();
  if (i >= n || j >= n) throw invalid_input_error("instance: station index out of range");
  if (has_matrix()) return matrix_[i][j];
  if (j == (i + 1) % n) return successor_[i];
  throw invalid_input_error("instance: travel time known only on successor edges");
}

double Instance::travel_total(std::span<const int> order) const {
  const std::size_t n = size();
  if (order.size() != n) throw invalid_input_error("instance: order length mismatch");
  std::vector<char> seen(n, 0);
  for (int s : order) {
    if (s < 0 || static_cast<std::size_t>(s) >= n || seen[s])
      throw invalid_input_error("instance: order is not a permutation");
    seen[s] = 1;
  }
  double total = 0;
  for (std::size_t j = 0; j < n; ++j)
    total += travel(static_cast<std::size_t>(order[j]),
                    static_cast<std::size_t>(order[(j + 1) % n]));
  return total;
}

double CyclicPolicy::t_obs() const {
  return std::accumulate(wait_times.begin(), wait_times.end(), 0.0);
}

double PeriodicPolicy::t_obs() const {
  double s = 0;
  for (const auto& v : visits) s += v.wait;
  return s;
}

double harmonic_sum(std::span<const double> rates) {
  if (rates.empty()) throw invalid_input_error("harmonic_sum: empty rate list");
  double inv = 0;
  for (double r : rates) {
    if (!(r > 0)) throw invalid_input_error("harmonic_sum: rates must be positive");
    inv += 1.0 / r;
  }
  return 1.0 / inv;
}

std::vector<double> balanced_wait_times(std::span<const double> rates, double t_obs) {
  if (!(t_obs > 0)) throw invalid_input_error("balanced_wait_times: t_obs must be > 0");
  const double sigma = harmonic_sum(rates);
  std::vector<double> waits(rates.size());
  for (std::size_t i = 0; i < rates.size(); ++i) waits[i] = sigma * t_obs / rates[i];
  return waits;
}

PolicyEvaluation evaluate_policy(const Instance& instance, const CyclicPolicy& policy) {
  const std::size_t n = instance.size();
  if (policy.order.size() != n || policy.wait_times.size() != n)
    throw invalid_input_error("evaluate_policy: policy dimensions do not match instance");
  for (double t : policy.wait_times)
    if (!(t > 0)) throw invalid_input_error("evaluate_policy: wait times must be positive");

  // Cross-check travel_total against the instance when the tour is computable
  // from the available travel data.
  bool computable = instance.has_matrix();
  if (!computable && n >= 1) {
    computable = true;
    for (std::size_t j = 0; j < n; ++j)
      if (policy.order[j] != static_cast<int>(j)) computable = false;
  }
  if (computable) {
    const double t_tr = instance.travel_total(policy.order);
    const double scale = std::max(1.0, std::abs(t_tr));
    if (std::abs(t_tr - policy.travel_total) > 1e-6 * scale)
      throw invalid_input_error("evaluate_policy: policy travel_total inconsistent with instance");
  }

  // Per-station waits, indexed by station id.
  std::vector<double> wait_at(n, 0.0);
  std::vector<char> seen(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    const int s = policy.order[j];
    if (s < 0 || static_cast<std::size_t>(s) >= n || seen[s])
      throw invalid_input_error("evaluate_policy: order is not a permutation");
    seen[s] = 1;
    wait_at[s] = policy.wait_times[j];
  }

  const auto& rates = instance.rates();
  const double period = policy.period();

  PolicyEvaluation ev;
  ev.alphas.resize(n);
  ev.delays.resize(n);
  double weight_sum = 0, wmin = 0, wmax = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = rates[i] * wait_at[i];
    weight_sum += w;
    wmin = (i == 0) ? w : std::min(wmin, w);
    wmax = (i == 0) ? w : std::max(wmax, w);
  }
  ev.max_pair_gap = wmax - wmin;
  for (std::size_t i = 0; i < n; ++i) ev.alphas[i] = rates[i] * wait_at[i] / weight_sum;
  ev.j1 = *std::min_element(ev.alphas.begin(), ev.alphas.end());
  for (std::size_t i = 0; i < n; ++i) {
    if (wait_at[i] < period) {
      ev.delays[i] = expected_delay(rates[i], wait_at[i], period);
    } else {
      // Degenerate zero-travel case (wait == period): the closed form is
      // still finite, 2/lambda - T q / (1 - q).
      const double x = rates[i] * wait_at[i];
      ev.delays[i] = 2.0 / rates[i] - period * std::exp(-x) / -std::expm1(-x);
    }
  }
  ev.j2 = *std::max_element(ev.delays.begin(), ev.delays.end());
  return ev;
}

}  // namespace patrol
