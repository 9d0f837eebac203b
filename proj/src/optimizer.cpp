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

#include "patrol/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "patrol/delay.hpp"
#include "patrol/errors.hpp"

namespace patrol {

namespace {

constexpr double kDomainLow = 1e-12;
constexpr double kDomainCap = 1e6;

double checked_eval(const std::function<double(double)>& curve, double x) {
  const double v = curve(x);
  if (!std::isfinite(v)) throw numeric_failure_error("minimize: curve is non-finite on the domain");
  return v;
}

// Objective as a function of T_obs; tolerates t_tr == 0 so the degenerate
// zero-travel case can still be probed (and flagged as a boundary minimum).
double objective_raw(double lambda_max, double sigma, double t_tr, double t_obs) {
  const double x = sigma * t_obs;
  const double q = std::exp(-x);
  const double denom = -std::expm1(-x);
  return 2.0 / lambda_max +
         ((t_obs + t_tr) * lambda_max - sigma * t_obs * (1.0 + q)) / (denom * lambda_max);
}

SolveReport solve_balanced(std::span<const double> rates, double t_tr, double tolerance) {
  if (!(tolerance > 0)) throw invalid_input_error("solve: tolerance must be > 0");
  if (rates.empty()) throw invalid_input_error("solve: no stations");

  SolveReport report;
  report.t_tr = t_tr;

  // Single pass over the rates forms both statistics.
  double lambda_max = 0, inv_sum = 0;
  int ties = 0;
  for (double r : rates) {
    if (!(r > 0)) throw invalid_input_error("solve: rates must be positive");
    if (r > lambda_max) {
      lambda_max = r;
      ties = 1;
    } else if (r == lambda_max) {
      ++ties;
    }
    inv_sum += 1.0 / r;
  }
  report.stat_ops = rates.size();
  report.lambda_max = lambda_max;
  report.sigma = 1.0 / inv_sum;
  report.lambda_max_ties = ties;

  const double sigma = report.sigma;
  auto curve = [&](double t_obs) { return objective_raw(lambda_max, sigma, t_tr, t_obs); };

  MinimizeResult min;
  if (t_tr > 0) {
    // Bracket: double the upper end until the curve rises across the last
    // three probes, then golden-section the bracket.
    double hi = 2.0 * t_tr + 2.0 * static_cast<double>(rates.size()) / sigma;
    double f0 = checked_eval(curve, hi);
    double f1 = checked_eval(curve, std::min(2.0 * hi, kDomainCap));
    hi = std::min(2.0 * hi, kDomainCap);
    while (hi < kDomainCap) {
      const double next = std::min(2.0 * hi, kDomainCap);
      const double f2 = checked_eval(curve, next);
      hi = next;
      if (f0 < f1 && f1 < f2) break;
      f0 = f1;
      f1 = f2;
    }
    min = minimize_unimodal(curve, kDomainLow, hi, tolerance);
  } else {
    // Zero travel: no interior minimum exists; report the flagged boundary
    // point rather than a fabricated answer.
    min = minimize_unimodal(curve, kDomainLow, kDomainCap, tolerance);
    min.boundary_minimum = true;
  }

  report.t_obs_star = min.argmin;
  report.t_star = min.argmin + t_tr;
  report.j2 = min.value;
  report.iterations = min.iterations;
  report.achieved_tolerance = tolerance;
  report.boundary_minimum = min.boundary_minimum;
  report.gamma.resize(rates.size());
  report.wait_times.resize(rates.size());
  for (std::size_t i = 0; i < rates.size(); ++i) {
    report.gamma[i] = sigma / rates[i];
    report.wait_times[i] = report.gamma[i] * report.t_obs_star;
  }
  return report;
}

}  // namespace

MinimizeResult minimize_unimodal(const std::function<double(double)>& curve, double domain_low,
                                 double domain_cap, double tolerance) {
  if (!(domain_low > 0) || !(domain_cap > domain_low))
    throw invalid_input_error("minimize: need 0 < domain_low < domain_cap");
  if (!(tolerance > 0)) throw invalid_input_error("minimize: tolerance must be > 0");

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = domain_low, b = domain_cap;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = checked_eval(curve, c);
  double fd = checked_eval(curve, d);

  MinimizeResult res;
  while (b - a > tolerance) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = checked_eval(curve, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = checked_eval(curve, d);
    }
    ++res.iterations;
  }

  res.argmin = 0.5 * (a + b);
  res.value = checked_eval(curve, res.argmin);

  // Monotone curves converge onto a domain endpoint; report the endpoint
  // itself and flag it.
  if (res.argmin - domain_low <= 2.0 * tolerance) {
    const double f_low = checked_eval(curve, domain_low);
    if (f_low <= res.value) {
      res.argmin = domain_low;
      res.value = f_low;
      res.boundary_minimum = true;
    }
  } else if (domain_cap - res.argmin <= 2.0 * tolerance) {
    const double f_cap = checked_eval(curve, domain_cap);
    if (f_cap <= res.value) {
      res.argmin = domain_cap;
      res.value = f_cap;
      res.boundary_minimum = true;
    }
  }
  return res;
}

SolveReport solve_ordered(const Instance& instance, std::span<const int> order, double tolerance) {
  const double t_tr = instance.travel_total(order);
  return solve_balanced(instance.rates(), t_tr, tolerance);
}

SolveReport solve_ordered(const Instance& instance, double tolerance) {
  std::vector<int> order(instance.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  return solve_ordered(instance, order, tolerance);
}

double OnlineState::sigma() const {
  if (rates_.empty()) throw invalid_input_error("online: no stations");
  return 1.0 / inv_rate_sum_;
}

double OnlineState::lambda_max() const {
  if (rates_.empty()) throw invalid_input_error("online: no stations");
  return *rates_.rbegin();
}

std::vector<double> OnlineState::rates_sorted() const {
  return std::vector<double>(rates_.begin(), rates_.end());
}

void OnlineState::add(double rate, double new_t_tr) {
  if (!(rate > 0)) throw invalid_input_error("online: rate must be positive");
  rates_.insert(rate);
  inv_rate_sum_ += 1.0 / rate;
  t_tr_ = new_t_tr;
}

void OnlineState::remove(double rate, double new_t_tr) {
  auto it = rates_.find(rate);
  if (it == rates_.end()) throw invalid_input_error("online: rate not present");
  rates_.erase(it);
  inv_rate_sum_ -= 1.0 / rate;
  if (rates_.empty()) inv_rate_sum_ = 0;
  t_tr_ = new_t_tr;
}

SolveReport online_add(OnlineState& state, double rate, double new_t_tr, double tolerance) {
  if (!(new_t_tr > 0)) throw invalid_input_error("online: new_t_tr must be positive");
  state.add(rate, new_t_tr);
  const auto rates = state.rates_sorted();
  return solve_balanced(rates, state.t_tr(), tolerance);
}

SolveReport online_remove(OnlineState& state, double rate, double new_t_tr, double tolerance) {
  if (!(new_t_tr > 0)) throw invalid_input_error("online: new_t_tr must be positive");
  state.remove(rate, new_t_tr);
  if (state.empty()) throw invalid_input_error("online: removed the last station");
  const auto rates = state.rates_sorted();
  return solve_balanced(rates, state.t_tr(), tolerance);
}

}  // namespace patrol
