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

#include "patrol/delay.hpp"

#include <cmath>

#include "patrol/errors.hpp"

namespace patrol {

namespace {

void check_delay_args(double rate, double wait, double period) {
  if (!(rate > 0)) throw invalid_input_error("expected_delay: rate must be > 0");
  if (!(wait > 0)) throw invalid_input_error("expected_delay: wait must be > 0");
  if (!(wait < period)) throw invalid_input_error("expected_delay: wait must be < period");
}

}  // namespace

double expected_delay(double rate, double wait, double period) {
  check_delay_args(rate, wait, period);
  const double x = rate * wait;
  const double q = std::exp(-x);
  // -expm1(-x) avoids cancellation in 1 - e^{-x} as wait -> 0.
  const double denom = -std::expm1(-x);
  return 2.0 / rate + (period - wait - wait * q) / denom;
}

double expected_delay_weighted(double rate, double wait, double period) {
  check_delay_args(rate, wait, period);
  const double x = rate * wait;
  const double q = std::exp(-x);
  const double denom = -std::expm1(-x);
  // Base gap components: 2 E[t_left] + (T - t), with
  // E[t_left] = 1/lambda - t q / (1 - q).
  const double base = 2.0 / rate - 2.0 * wait * q / denom + (period - wait);
  // Multi-cycle tail with weight m^2:  sum m^2 T q^m (1-q) = T q (1+q)/(1-q)^2.
  const double tail = period * q * (1.0 + q) / (denom * denom);
  return base + tail;
}

double objective_curve(double lambda_max, double sigma, double t_tr, double t_obs) {
  if (!(lambda_max > 0) || !(sigma > 0) || !(t_tr > 0) || !(t_obs > 0))
    throw invalid_input_error("objective_curve: all arguments must be > 0");
  if (sigma > lambda_max) throw invalid_input_error("objective_curve: sigma must be <= lambda_max");
  const double x = sigma * t_obs;
  const double q = std::exp(-x);
  const double denom = -std::expm1(-x);
  return 2.0 / lambda_max +
         ((t_obs + t_tr) * lambda_max - sigma * t_obs * (1.0 + q)) / (denom * lambda_max);
}

double elasticity(ElasticityKind kind, const OperatingPoint& pt) {
  if (!(pt.sigma > 0) || !(pt.t_obs > 0) || !(pt.t_tr > 0))
    throw invalid_input_error("elasticity: operating point must have positive sigma, T_obs, T_tr");
  const double x = pt.sigma * pt.t_obs;
  const double q = std::exp(-x);
  const double denom = -std::expm1(-x);

  if (kind == ElasticityKind::rate) {
    const double lam = pt.lambda_i;
    if (!(lam > 0)) throw invalid_input_error("elasticity: lambda_i must be > 0");
    const double period = pt.t_obs + pt.t_tr;
    // Delay at a balanced station as a function of its own rate, with sigma,
    // T and T_tr held fixed, and its derivative.
    const double f = 2.0 / lam + (period - (pt.sigma * pt.t_obs / lam) * (1.0 + q)) / denom;
    const double fprime = (x * q + x + 2.0 * q - 2.0) / (lam * lam * denom);
    if (!(f > 0)) throw numeric_failure_error("elasticity: non-positive delay at operating point");
    return lam * fprime / f;
  }

  const double lmax = pt.lambda_max;
  if (!(lmax > 0) || pt.sigma > lmax)
    throw invalid_input_error("elasticity: need lambda_max >= sigma > 0");
  const double f = objective_curve(lmax, pt.sigma, pt.t_tr, pt.t_obs);
  const double fprime = 1.0 / denom;
  return pt.t_tr * fprime / f;
}

}  // namespace patrol
