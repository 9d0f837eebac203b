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

#include "patrol/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "patrol/errors.hpp"
#include "patrol/rng.hpp"

namespace patrol {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_model_params(ArrivalModel model, double burst_probability, int burst_max) {
  if (model == ArrivalModel::uniform_burst) {
    if (!(burst_probability >= 0 && burst_probability <= 1))
      throw invalid_input_error("sim: burst_probability must be in [0, 1]");
    if (burst_max < 1) throw invalid_input_error("sim: burst_max must be >= 1");
  }
}

// Lazy per-station event source, strictly increasing times.
class ArrivalStream {
public:
  ArrivalStream(ArrivalModel model, double rate, std::uint64_t seed, double burst_probability,
                int burst_max)
      : model_(model),
        rate_(rate),
        burst_probability_(burst_probability),
        burst_max_(burst_max),
        rng_(seed) {
    if (!(rate > 0)) throw invalid_input_error("sim: arrival rate must be positive");
    check_model_params(model, burst_probability, burst_max);
  }

  double next() {
    double e;
    switch (model_) {
      case ArrivalModel::poisson:
        clock_ += rng_.exponential(rate_);
        e = clock_;
        break;
      case ArrivalModel::uniform_segment:
        e = (static_cast<double>(segment_) + rng_.uniform()) / rate_;
        ++segment_;
        break;
      case ArrivalModel::uniform_burst:
        if (pending_pos_ == pending_.size()) refill_burst();
        e = pending_[pending_pos_++];
        break;
    }
    if (e <= last_) e = std::nextafter(last_, kInf);
    last_ = e;
    return e;
  }

private:
  void refill_burst() {
    int k = 1;
    if (rng_.uniform() < burst_probability_) k = rng_.uniform_int(1, burst_max_);
    // Skip k-1 segments, pack k events into the next one.
    const double lo = (static_cast<double>(segment_) + k - 1) / rate_;
    const double hi = (static_cast<double>(segment_) + k) / rate_;
    segment_ += k;
    pending_.assign(static_cast<std::size_t>(k), 0.0);
    for (auto& p : pending_) p = rng_.uniform(lo, hi);
    std::sort(pending_.begin(), pending_.end());
    pending_pos_ = 0;
  }

  ArrivalModel model_;
  double rate_;
  double burst_probability_;
  int burst_max_;
  Rng rng_;
  double clock_ = 0;
  long segment_ = 0;
  std::vector<double> pending_;
  std::size_t pending_pos_ = 0;
  double last_ = -kInf;
};

struct Visit {
  int station;
  double wait;
  double travel_after;
};

void check_schedule(const Instance& instance, const std::vector<Visit>& visits,
                    double declared_travel_total) {
  const std::size_t n = instance.size();
  std::vector<long> seen(n, 0);
  double legs = 0;
  for (const auto& v : visits) {
    if (v.station < 0 || static_cast<std::size_t>(v.station) >= n)
      throw invalid_input_error("sim: station index out of range");
    if (!(v.wait > 0)) throw invalid_input_error("sim: waiting times must be positive");
    ++seen[v.station];
    legs += v.travel_after;
  }
  for (std::size_t i = 0; i < n; ++i)
    if (seen[i] == 0) throw invalid_input_error("sim: every station must be visited");
  const double scale = std::max(1.0, std::abs(legs));
  if (std::abs(legs - declared_travel_total) > 1e-6 * scale)
    throw invalid_input_error("sim: policy travel_total inconsistent with instance travel times");
}

std::vector<Visit> visits_from_cyclic(const Instance& instance, const CyclicPolicy& policy) {
  const std::size_t n = instance.size();
  if (policy.order.size() != n || policy.wait_times.size() != n)
    throw invalid_input_error("sim: policy dimensions do not match instance");
  std::vector<Visit> visits(n);
  for (std::size_t j = 0; j < n; ++j) {
    visits[j].station = policy.order[j];
    visits[j].wait = policy.wait_times[j];
    visits[j].travel_after = instance.travel(static_cast<std::size_t>(policy.order[j]),
                                             static_cast<std::size_t>(policy.order[(j + 1) % n]));
  }
  check_schedule(instance, visits, policy.travel_total);
  return visits;
}

std::vector<Visit> visits_from_periodic(const Instance& instance, const PeriodicPolicy& policy) {
  if (policy.visits.empty()) throw invalid_input_error("sim: empty periodic policy");
  const std::size_t v = policy.visits.size();
  std::vector<Visit> visits(v);
  for (std::size_t j = 0; j < v; ++j) {
    visits[j].station = policy.visits[j].station;
    visits[j].wait = policy.visits[j].wait;
    const int from = policy.visits[j].station;
    const int to = policy.visits[(j + 1) % v].station;
    visits[j].travel_after =
        instance.travel(static_cast<std::size_t>(from), static_cast<std::size_t>(to));
  }
  check_schedule(instance, visits, policy.travel_total);
  return visits;
}

SimResult run_schedule(const Instance& instance, const std::vector<Visit>& visits,
                       const SimConfig& config) {
  if (config.cycles <= 0) throw invalid_input_error("sim: cycles must be positive");
  check_model_params(config.arrival_model, config.burst_probability, config.burst_max);
  const std::size_t n = instance.size();
  const auto& rates = instance.rates();

  std::vector<ArrivalStream> streams;
  streams.reserve(n);
  std::vector<double> next_event(n);
  for (std::size_t i = 0; i < n; ++i) {
    streams.emplace_back(config.arrival_model, rates[i],
                         derive_seed(config.master_seed, config.replication, i),
                         config.burst_probability, config.burst_max);
    next_event[i] = streams[i].next();
  }

  // Feedback quota per visit: the expected event count of the full window.
  std::vector<long> quota(visits.size(), std::numeric_limits<long>::max());
  if (config.feedback) {
    for (std::size_t j = 0; j < visits.size(); ++j) {
      quota[j] = config.feedback_threshold_override > 0
                     ? config.feedback_threshold_override
                     : static_cast<long>(std::ceil(rates[visits[j].station] * visits[j].wait));
      quota[j] = std::max<long>(quota[j], 1);
    }
  }

  SimResult result;
  result.stations.resize(n);
  std::vector<double> last_obs(n, 0);
  std::vector<char> has_last(n, 0);
  std::vector<long> empty_windows(n, 0);
  std::vector<long> counts(n, 0);

  const long hard_cap = std::max(config.cycles, config.max_cycles);
  double t = 0;

  auto samples_met = [&]() {
    if (config.min_delay_samples <= 0) return true;
    if (config.min_samples_station >= 0) {
      return static_cast<long>(
                 result.stations[config.min_samples_station].delay_samples.size()) >=
             config.min_delay_samples;
    }
    for (const auto& st : result.stations)
      if (static_cast<long>(st.delay_samples.size()) < config.min_delay_samples) return false;
    return true;
  };

  while (true) {
    for (std::size_t j = 0; j < visits.size(); ++j) {
      const Visit& v = visits[j];
      const std::size_t s = static_cast<std::size_t>(v.station);
      const double window_end = t + v.wait;
      // Arrivals during the robot's absence are unobserved.
      while (next_event[s] < t) next_event[s] = streams[s].next();

      long cnt = 0;
      double first = 0, last_e = 0;
      double depart = window_end;
      while (next_event[s] < window_end) {
        const double e = next_event[s];
        next_event[s] = streams[s].next();
        ++cnt;
        if (cnt == 1) first = e;
        last_e = e;
        if (cnt >= quota[j]) {
          depart = e;
          break;
        }
      }

      if (cnt > 0) {
        if (has_last[s]) {
          result.stations[s].delay_samples.push_back(first - last_obs[s]);
          result.stations[s].gap_cycles.push_back(empty_windows[s]);
        }
        last_obs[s] = last_e;
        has_last[s] = 1;
        empty_windows[s] = 0;
      } else if (has_last[s]) {
        ++empty_windows[s];
      }
      counts[s] += cnt;
      t = depart + v.travel_after;
    }
    ++result.cycles_run;

    if (config.record_trajectory) {
      result.count_trajectory.push_back(counts);
      long total = 0;
      for (long c : counts) total += c;
      std::vector<double> fractions(n, 0.0);
      if (total > 0)
        for (std::size_t i = 0; i < n; ++i)
          fractions[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
      result.fraction_trajectory.push_back(std::move(fractions));
      double mean = static_cast<double>(total) / static_cast<double>(n);
      double dev = 0;
      if (mean > 0) {
        double ss = 0;
        for (long c : counts) {
          const double d = static_cast<double>(c) - mean;
          ss += d * d;
        }
        dev = std::sqrt(ss / static_cast<double>(n)) / mean;
      }
      result.deviation_series.push_back(dev);
    }

    if (result.cycles_run >= config.cycles && samples_met()) break;
    if (result.cycles_run >= hard_cap) {
      result.truncated = true;
      break;
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    auto& st = result.stations[i];
    st.events_observed = counts[i];
    const std::size_t k = st.delay_samples.size();
    if (k > 0) {
      double sum = 0;
      for (double d : st.delay_samples) sum += d;
      st.delay_mean = sum / static_cast<double>(k);
      if (k > 1) {
        double ss = 0;
        for (double d : st.delay_samples) {
          const double dd = d - st.delay_mean;
          ss += dd * dd;
        }
        st.delay_stderr = std::sqrt(ss / static_cast<double>(k - 1)) /
                          std::sqrt(static_cast<double>(k));
      }
      st.delay_stats_valid = true;
    }
  }
  return result;
}

}  // namespace

std::vector<double> generate_arrivals(ArrivalModel model, double rate, double horizon,
                                      std::uint64_t seed, double burst_probability,
                                      int burst_max) {
  if (!(horizon > 0)) throw invalid_input_error("generate_arrivals: horizon must be positive");
  ArrivalStream stream(model, rate, seed, burst_probability, burst_max);
  std::vector<double> events;
  for (double e = stream.next(); e <= horizon; e = stream.next()) events.push_back(e);
  return events;
}

SimResult run_policy(const Instance& instance, const CyclicPolicy& policy,
                     const SimConfig& config) {
  return run_schedule(instance, visits_from_cyclic(instance, policy), config);
}

SimResult run_policy(const Instance& instance, const PeriodicPolicy& policy,
                     const SimConfig& config) {
  return run_schedule(instance, visits_from_periodic(instance, policy), config);
}

DelayEstimate periodic_policy_delay(const Instance& instance, const PeriodicPolicy& policy,
                                    int station, const SimConfig& config) {
  if (station < 0 || static_cast<std::size_t>(station) >= instance.size())
    throw invalid_input_error("periodic_policy_delay: station index out of range");
  bool visited = false;
  for (const auto& v : policy.visits) visited = visited || v.station == station;
  if (!visited) throw invalid_input_error("periodic_policy_delay: station absent from policy");

  SimConfig cfg = config;
  cfg.min_samples_station = station;
  const SimResult result = run_policy(instance, policy, cfg);
  const auto& st = result.stations[static_cast<std::size_t>(station)];
  return {st.delay_mean, st.delay_stderr, static_cast<long>(st.delay_samples.size())};
}

ConvergenceResult convergence_experiment(const Instance& instance, const SolveReport& report,
                                         const SimConfig& config, int replications,
                                         std::vector<long> cycle_marks) {
  if (config.cycles < 100)
    throw invalid_input_error("convergence_experiment: need at least 100 cycles");
  if (replications < 2)
    throw invalid_input_error("convergence_experiment: need at least 2 replications");
  for (long m : cycle_marks)
    if (m < 1 || m > config.cycles)
      throw invalid_input_error("convergence_experiment: cycle mark out of range");

  const std::size_t n = instance.size();
  CyclicPolicy policy;
  policy.order.resize(n);
  for (std::size_t i = 0; i < n; ++i) policy.order[i] = static_cast<int>(i);
  policy.wait_times = report.wait_times;
  policy.travel_total = report.t_tr;

  // counts[r][mark][station]
  std::vector<std::vector<std::vector<long>>> counts(replications);
  for (int r = 0; r < replications; ++r) {
    SimConfig cfg = config;
    cfg.replication = config.replication + static_cast<std::uint64_t>(r);
    cfg.record_trajectory = true;
    cfg.min_delay_samples = 0;
    const SimResult res = run_policy(instance, policy, cfg);
    counts[r].reserve(cycle_marks.size());
    for (long m : cycle_marks) counts[r].push_back(res.count_trajectory[m - 1]);
  }

  ConvergenceResult out;
  out.cycle_marks = cycle_marks;
  out.empirical.assign(cycle_marks.size(), std::vector<double>(n, 0.0));
  out.predicted.resize(cycle_marks.size());
  for (std::size_t mi = 0; mi < cycle_marks.size(); ++mi) {
    out.predicted[mi] =
        1.0 / std::sqrt(static_cast<double>(cycle_marks[mi]) * report.sigma * report.t_obs_star);
    for (std::size_t i = 0; i < n; ++i) {
      double mean = 0;
      for (int r = 0; r < replications; ++r) mean += static_cast<double>(counts[r][mi][i]);
      mean /= replications;
      double ss = 0;
      for (int r = 0; r < replications; ++r) {
        const double d = static_cast<double>(counts[r][mi][i]) - mean;
        ss += d * d;
      }
      const double sd = std::sqrt(ss / (replications - 1));
      out.empirical[mi][i] = mean > 0 ? sd / mean : 0.0;
    }
  }
  return out;
}

RobustnessResult robustness_experiment(const Instance& instance, const CyclicPolicy& policy,
                                       double max_error, int trials, const SimConfig& config) {
  if (!(max_error >= 0 && max_error < 1))
    throw invalid_input_error("robustness_experiment: max_error must be in [0, 1)");
  if (trials < 1) throw invalid_input_error("robustness_experiment: need at least one trial");

  const std::size_t n = instance.size();
  RobustnessResult out;
  out.delay_means.assign(n, std::vector<double>(trials, 0.0));
  out.alphas.assign(n, std::vector<double>(trials, 0.0));

  Rng perturb_rng(derive_seed(config.master_seed, 0x5eed, config.replication));
  for (int trial = 0; trial < trials; ++trial) {
    std::vector<double> rates(n);
    for (std::size_t i = 0; i < n; ++i) {
      // Redraw until the perturbed rate is positive.
      double r;
      do {
        const double u = perturb_rng.uniform(-max_error, max_error);
        r = instance.rates()[i] * (1.0 + u);
      } while (!(r > 0));
      rates[i] = r;
    }
    const Instance perturbed = instance.has_matrix()
                                   ? Instance::from_matrix(rates, instance.matrix())
                                   : Instance::from_cycle(rates, instance.successor_times());
    SimConfig cfg = config;
    cfg.replication = config.replication + 1 + static_cast<std::uint64_t>(trial);
    const SimResult res = run_policy(perturbed, policy, cfg);
    long total = 0;
    for (const auto& st : res.stations) total += st.events_observed;
    for (std::size_t i = 0; i < n; ++i) {
      out.delay_means[i][trial] = res.stations[i].delay_stats_valid
                                      ? res.stations[i].delay_mean
                                      : std::numeric_limits<double>::quiet_NaN();
      out.alphas[i][trial] =
          total > 0 ? static_cast<double>(res.stations[i].events_observed) / total : 0.0;
    }
  }
  return out;
}

FeedbackResult feedback_experiment(const Instance& instance, const SolveReport& report,
                                   const SimConfig& config, std::span<const double> periods) {
  const std::size_t n = instance.size();
  FeedbackResult out;
  for (double period : periods) {
    const double t_obs = period - report.t_tr;
    if (!(t_obs > 0))
      throw invalid_input_error("feedback_experiment: period must exceed the travel time");
    CyclicPolicy policy;
    policy.order.resize(n);
    for (std::size_t i = 0; i < n; ++i) policy.order[i] = static_cast<int>(i);
    policy.wait_times = balanced_wait_times(instance.rates(), t_obs);
    policy.travel_total = report.t_tr;

    auto average_delay = [&](bool feedback) {
      SimConfig cfg = config;
      cfg.feedback = feedback;
      const SimResult res = run_policy(instance, policy, cfg);
      double sum = 0;
      int k = 0;
      for (const auto& st : res.stations) {
        if (st.delay_stats_valid) {
          sum += st.delay_mean;
          ++k;
        }
      }
      return k > 0 ? sum / k : std::numeric_limits<double>::quiet_NaN();
    };

    out.periods.push_back(period);
    out.open_loop_delay.push_back(average_delay(false));
    out.feedback_delay.push_back(average_delay(true));
  }
  return out;
}

}  // namespace patrol
