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

#include "patrol/io.hpp"

#include <string>

#include "patrol/errors.hpp"

namespace patrol::io {

namespace {

const json& require(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw invalid_input_error(std::string("io: missing field '") + key + "'");
  return *it;
}

std::vector<double> to_doubles(const json& j, const char* what) {
  if (!j.is_array()) throw invalid_input_error(std::string("io: '") + what + "' must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) throw invalid_input_error(std::string("io: '") + what + "' must be numeric");
    out.push_back(v.get<double>());
  }
  return out;
}

int to_station_index(const json& v, std::size_t n) {
  if (!v.is_number_integer()) throw invalid_input_error("io: station index must be an integer");
  const long s = v.get<long>();
  if (s < 1 || static_cast<std::size_t>(s) > n)
    throw invalid_input_error("io: station index out of range (indices are 1-based)");
  return static_cast<int>(s - 1);
}

}  // namespace

json instance_to_json(const Instance& instance) {
  json j;
  j["rates"] = instance.rates();
  if (instance.has_matrix()) {
    j["travel"] = json{{"matrix", instance.matrix()}};
  } else {
    j["travel"] = json{{"cycle", instance.successor_times()}};
  }
  return j;
}

Instance instance_from_json(const json& j) {
  auto rates = to_doubles(require(j, "rates"), "rates");
  const json& travel = require(j, "travel");
  if (travel.contains("matrix")) {
    const json& m = travel["matrix"];
    if (!m.is_array()) throw invalid_input_error("io: 'matrix' must be an array of rows");
    TravelMatrix matrix;
    matrix.reserve(m.size());
    for (const auto& row : m) matrix.push_back(to_doubles(row, "matrix row"));
    return Instance::from_matrix(std::move(rates), std::move(matrix));
  }
  if (travel.contains("cycle")) {
    return Instance::from_cycle(std::move(rates), to_doubles(travel["cycle"], "cycle"));
  }
  throw invalid_input_error("io: travel must contain 'matrix' or 'cycle'");
}

json policy_to_json(const CyclicPolicy& policy) {
  json order = json::array();
  for (int s : policy.order) order.push_back(s + 1);
  return json{{"order", order}, {"wait_times", policy.wait_times}};
}

CyclicPolicy policy_from_json(const json& j, const Instance& instance) {
  CyclicPolicy policy;
  const json& order = require(j, "order");
  if (!order.is_array()) throw invalid_input_error("io: 'order' must be an array");
  for (const auto& v : order) policy.order.push_back(to_station_index(v, instance.size()));
  policy.wait_times = to_doubles(require(j, "wait_times"), "wait_times");
  if (policy.order.size() != instance.size() || policy.wait_times.size() != instance.size())
    throw invalid_input_error("io: policy dimensions do not match instance");
  policy.travel_total = instance.travel_total(policy.order);
  return policy;
}

json periodic_policy_to_json(const PeriodicPolicy& policy) {
  json visits = json::array();
  for (const auto& v : policy.visits)
    visits.push_back(json{{"station", v.station + 1}, {"wait", v.wait}});
  return json{{"visits", visits}};
}

PeriodicPolicy periodic_policy_from_json(const json& j, const Instance& instance) {
  PeriodicPolicy policy;
  const json& visits = require(j, "visits");
  if (!visits.is_array() || visits.empty())
    throw invalid_input_error("io: 'visits' must be a nonempty array");
  for (const auto& v : visits) {
    PeriodicPolicy::Visit visit;
    visit.station = to_station_index(require(v, "station"), instance.size());
    visit.wait = require(v, "wait").get<double>();
    policy.visits.push_back(visit);
  }
  double travel = 0;
  for (std::size_t k = 0; k < policy.visits.size(); ++k) {
    const int from = policy.visits[k].station;
    const int to = policy.visits[(k + 1) % policy.visits.size()].station;
    travel += instance.travel(static_cast<std::size_t>(from), static_cast<std::size_t>(to));
  }
  policy.travel_total = travel;
  return policy;
}

json report_to_json(const SolveReport& report, const std::vector<int>* order) {
  json j{{"t_obs_star", report.t_obs_star},
         {"t_star", report.t_star},
         {"t_tr", report.t_tr},
         {"wait_times", report.wait_times},
         {"gamma", report.gamma},
         {"lambda_max", report.lambda_max},
         {"sigma", report.sigma},
         {"j2", report.j2},
         {"iterations", report.iterations},
         {"achieved_tolerance", report.achieved_tolerance},
         {"boundary_minimum", report.boundary_minimum},
         {"lambda_max_ties", report.lambda_max_ties}};
  if (order != nullptr) {
    json o = json::array();
    for (int s : *order) o.push_back(s + 1);
    j["order"] = o;
  }
  return j;
}

json evaluation_to_json(const PolicyEvaluation& evaluation) {
  return json{{"alphas", evaluation.alphas},
              {"max_pair_gap", evaluation.max_pair_gap},
              {"j1", evaluation.j1},
              {"j2", evaluation.j2},
              {"delays", evaluation.delays}};
}

json sim_result_to_json(const SimResult& result, bool include_samples) {
  json stations = json::array();
  for (const auto& st : result.stations) {
    json s{{"delay_mean", st.delay_mean},
           {"delay_stderr", st.delay_stderr},
           {"delay_samples", static_cast<long>(st.delay_samples.size())},
           {"events_observed", st.events_observed},
           {"delay_stats_valid", st.delay_stats_valid}};
    if (include_samples) s["samples"] = st.delay_samples;
    stations.push_back(std::move(s));
  }
  json j{{"stations", std::move(stations)},
         {"cycles_run", result.cycles_run},
         {"truncated", result.truncated}};
  if (!result.fraction_trajectory.empty()) {
    j["fraction_trajectory"] = result.fraction_trajectory;
    j["deviation_series"] = result.deviation_series;
  }
  return j;
}

json sim_config_to_json(const SimConfig& config) {
  const char* model = config.arrival_model == ArrivalModel::poisson ? "poisson"
                      : config.arrival_model == ArrivalModel::uniform_segment ? "uniform_segment"
                                                                              : "uniform_burst";
  return json{{"seed", config.master_seed},
              {"cycles", config.cycles},
              {"min_delay_samples", config.min_delay_samples},
              {"model", model},
              {"burst_probability", config.burst_probability},
              {"burst_max", config.burst_max},
              {"feedback", config.feedback},
              {"replication", config.replication}};
}

SimConfig sim_config_from_json(const json& j) {
  SimConfig config;
  if (j.contains("seed")) config.master_seed = j["seed"].get<std::uint64_t>();
  if (j.contains("cycles")) config.cycles = j["cycles"].get<long>();
  if (j.contains("min_delay_samples")) config.min_delay_samples = j["min_delay_samples"].get<long>();
  if (j.contains("min_samples_station"))  // 1-based on the wire
    config.min_samples_station = j["min_samples_station"].get<int>() - 1;
  if (j.contains("model")) {
    const std::string m = j["model"].get<std::string>();
    if (m == "poisson") {
      config.arrival_model = ArrivalModel::poisson;
    } else if (m == "uniform_segment") {
      config.arrival_model = ArrivalModel::uniform_segment;
    } else if (m == "uniform_burst") {
      config.arrival_model = ArrivalModel::uniform_burst;
    } else {
      throw invalid_input_error("io: unknown arrival model '" + m + "'");
    }
  }
  if (j.contains("burst_probability"))
    config.burst_probability = j["burst_probability"].get<double>();
  if (j.contains("burst_max")) config.burst_max = j["burst_max"].get<int>();
  if (j.contains("feedback")) config.feedback = j["feedback"].get<bool>();
  if (j.contains("feedback_threshold_override"))
    config.feedback_threshold_override = j["feedback_threshold_override"].get<long>();
  if (j.contains("replication")) config.replication = j["replication"].get<std::uint64_t>();
  if (j.contains("max_cycles")) config.max_cycles = j["max_cycles"].get<long>();
  if (j.contains("record_trajectory")) config.record_trajectory = j["record_trajectory"].get<bool>();
  if (config.cycles <= 0) throw invalid_input_error("io: cycles must be positive");
  return config;
}

}  // namespace patrol::io
