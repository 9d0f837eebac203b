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

#ifndef PATROL_SIM_HPP
#define PATROL_SIM_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "patrol/model.hpp"
#include "patrol/optimizer.hpp"

namespace patrol {

enum class ArrivalModel { poisson, uniform_segment, uniform_burst };

struct SimConfig {
  std::uint64_t master_seed = 1;
  long cycles = 1000;             // policy cycles to execute at minimum
  long min_delay_samples = 0;     // keep running until met (see station below)
  int min_samples_station = -1;   // -1: every station; else only this station
  ArrivalModel arrival_model = ArrivalModel::poisson;
  double burst_probability = 0.05;
  int burst_max = 9;
  bool feedback = false;          // leave a station once its event quota is met
  long feedback_threshold_override = 0;  // >0 forces this count at every station
  std::uint64_t replication = 0;  // stream index; distinct replications are independent
  long max_cycles = 10'000'000;   // hard cap while chasing delay samples
  bool record_trajectory = false; // per-cycle counts/fractions/deviation series
};

struct StationStats {
  std::vector<double> delay_samples;  // hours
  std::vector<long> gap_cycles;       // empty visit windows inside each gap (the m of a gap)
  double delay_mean = 0;
  double delay_stderr = 0;
  long events_observed = 0;
  bool delay_stats_valid = false;
};

struct SimResult {
  std::vector<StationStats> stations;
  // Recorded only when SimConfig::record_trajectory is set:
  std::vector<std::vector<double>> fraction_trajectory;  // [cycle][station]
  std::vector<std::vector<long>> count_trajectory;       // [cycle][station], cumulative
  std::vector<double> deviation_series;  // per-cycle relative std of cumulative counts
  long cycles_run = 0;
  bool truncated = false;  // hit max_cycles before min_delay_samples was met
};

/// Event times for one station over [0, horizon], strictly increasing.
///   poisson        — exponential inter-arrivals with mean 1/rate
///   uniform_segment— one uniform point per consecutive segment of length 1/rate
///   uniform_burst  — with probability p, k in {1..burst_max} events packed into
///                    one segment after skipping k-1 segments; else k = 1
std::vector<double> generate_arrivals(ArrivalModel model, double rate, double horizon,
                                      std::uint64_t seed, double burst_probability = 0.05,
                                      int burst_max = 9);

/// Executes the visit schedule against stochastic arrivals. An event is
/// observed iff it falls inside one of its station's visit windows; a delay
/// sample is the time from the last observed event of one window to the first
/// observed event of the next window with any observations.
SimResult run_policy(const Instance& instance, const CyclicPolicy& policy, const SimConfig& config);
SimResult run_policy(const Instance& instance, const PeriodicPolicy& policy,
                     const SimConfig& config);

struct DelayEstimate {
  double mean = 0;
  double stderr = 0;
  long samples = 0;
};

/// Monte Carlo estimate of the expected delay at one station under a
/// periodic (multi-visit) policy, for which no closed form is implemented.
DelayEstimate periodic_policy_delay(const Instance& instance, const PeriodicPolicy& policy,
                                    int station, const SimConfig& config);

struct ConvergenceResult {
  std::vector<long> cycle_marks;
  std::vector<std::vector<double>> empirical;  // [mark][station] relative deviation
  std::vector<double> predicted;               // 1/sqrt(m sigma T_obs*), per mark
};

/// Relative deviation of per-station observed counts across replications,
/// paired with the analytic prediction.
ConvergenceResult convergence_experiment(const Instance& instance, const SolveReport& report,
                                         const SimConfig& config, int replications,
                                         std::vector<long> cycle_marks);

struct RobustnessResult {
  std::vector<std::vector<double>> delay_means;  // [station][trial]
  std::vector<std::vector<double>> alphas;       // [station][trial]
};

/// Runs the unperturbed policy in environments whose true rates are perturbed
/// by up to +/- max_error relative, one random draw per trial.
RobustnessResult robustness_experiment(const Instance& instance, const CyclicPolicy& policy,
                                       double max_error, int trials, const SimConfig& config);

struct FeedbackResult {
  std::vector<double> periods;
  std::vector<double> open_loop_delay;  // mean over stations of per-station delay means
  std::vector<double> feedback_delay;
};

/// Average delay of the balanced policy across a grid of periods, with and
/// without the leave-early feedback rule, on identical arrival streams.
FeedbackResult feedback_experiment(const Instance& instance, const SolveReport& report,
                                   const SimConfig& config, std::span<const double> periods);

}  // namespace patrol

#endif  // PATROL_SIM_HPP
