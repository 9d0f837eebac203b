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

#ifndef PATROL_DELAY_HPP
#define PATROL_DELAY_HPP

namespace patrol {

/// Closed-form expected delay between two consecutively observed events at a
/// station with arrival rate `rate`, visited for `wait` hours per cycle of
/// length `period`:
///
///   E[T_i] = 2/lambda + (T - t - t e^{-lambda t}) / (1 - e^{-lambda t})
///
/// Requires rate > 0 and 0 < wait < period.
double expected_delay(double rate, double wait, double period);

/// Variant of expected_delay that weights a gap spanning m extra full cycles
/// by m^2 T instead of m T, penalizing long stretches with no observation.
/// Same domain as expected_delay; always >= expected_delay.
double expected_delay_weighted(double rate, double wait, double period);

/// The one-variable objective f(T_obs) whose minimizer gives the optimal
/// total observation time for a balanced policy:
///
///   f = 2/lmax + ((T_obs + T_tr) lmax - sigma T_obs (1 + e^{-sigma T_obs}))
///       / ((1 - e^{-sigma T_obs}) lmax)
///
/// Algebraically equal to expected_delay(lmax, sigma*T_obs/lmax, T_obs+T_tr).
double objective_curve(double lambda_max, double sigma, double t_tr, double t_obs);

enum class ElasticityKind { rate, travel };

/// Operating point for the analytic sensitivity ratios.
struct OperatingPoint {
  double lambda_i = 0;    // station rate (rate kind)
  double lambda_max = 0;  // maximum rate (travel kind)
  double sigma = 0;
  double t_obs = 0;
  double t_tr = 0;
};

/// Relative-sensitivity ratio of the expected delay: lambda f'/f for the
/// rate kind, T_tr f'/f for the travel kind. The travel ratio lies in (0, 1);
/// the rate ratio has magnitude < 1 whenever lambda_i >= 2 sigma.
double elasticity(ElasticityKind kind, const OperatingPoint& pt);

}  // namespace patrol

#endif  // PATROL_DELAY_HPP
