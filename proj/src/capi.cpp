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

#include "patrol.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <vector>

#include "patrol/delay.hpp"
#include "patrol/errors.hpp"
#include "patrol/io.hpp"
#include "patrol/model.hpp"
#include "patrol/optimizer.hpp"
#include "patrol/sim.hpp"
#include "patrol/tour.hpp"

using patrol::io::json;

struct patrol_instance {
  patrol::Instance value;
};

struct patrol_online {
  patrol::OnlineState value;
};

namespace {

thread_local std::string g_last_error;

patrol_status fail(patrol_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

char* dup_json(const json& j) { return dup_string(j.dump()); }

// Runs `body` and translates C++ exceptions into status codes.
template <typename Fn>
patrol_status guarded(Fn&& body) {
  try {
    body();
    g_last_error.clear();
    return PATROL_OK;
  } catch (const patrol::invalid_input_error& e) {
    return fail(PATROL_ERR_INVALID_INPUT, e.what());
  } catch (const patrol::size_limit_error& e) {
    return fail(PATROL_ERR_SIZE_LIMIT, e.what());
  } catch (const patrol::numeric_failure_error& e) {
    return fail(PATROL_ERR_NUMERIC, e.what());
  } catch (const json::exception& e) {
    return fail(PATROL_ERR_INVALID_INPUT, std::string("json: ") + e.what());
  } catch (const std::invalid_argument& e) {
    return fail(PATROL_ERR_INVALID_INPUT, e.what());
  } catch (const std::exception& e) {
    return fail(PATROL_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(PATROL_ERR_INTERNAL, "unknown error");
  }
}

patrol_status require_arg(bool ok, const char* message) {
  return ok ? PATROL_OK : fail(PATROL_ERR_INVALID_INPUT, message);
}

json parse_text(const char* text, const char* what) {
  if (text == nullptr) throw patrol::invalid_input_error(std::string(what) + " is null");
  return json::parse(text);
}

patrol::SimConfig config_from_text(const char* config_json) {
  if (config_json == nullptr) return {};
  return patrol::io::sim_config_from_json(json::parse(config_json));
}

// Accepts either a cyclic policy ("order") or a periodic one ("visits").
patrol::SimResult simulate_any(const patrol::Instance& instance, const json& policy,
                               const patrol::SimConfig& config) {
  if (policy.contains("visits"))
    return patrol::run_policy(instance, patrol::io::periodic_policy_from_json(policy, instance),
                              config);
  return patrol::run_policy(instance, patrol::io::policy_from_json(policy, instance), config);
}

patrol::CyclicPolicy policy_from_report(const patrol::Instance& instance,
                                        const patrol::SolveReport& report) {
  patrol::CyclicPolicy policy;
  policy.order.resize(instance.size());
  for (std::size_t i = 0; i < instance.size(); ++i) policy.order[i] = static_cast<int>(i);
  policy.wait_times = report.wait_times;
  policy.travel_total = instance.travel_total(policy.order);
  return policy;
}

}  // namespace

extern "C" {

const char* patrol_version(void) { return "1.0.0"; }

const char* patrol_last_error(void) { return g_last_error.c_str(); }

void patrol_string_free(char* s) { std::free(s); }

patrol_status patrol_instance_parse(const char* json_text, patrol_instance** out) {
  if (auto st = require_arg(out != nullptr, "out is null")) return st;
  return guarded([&] {
    auto instance = patrol::io::instance_from_json(parse_text(json_text, "json_text"));
    *out = new patrol_instance{std::move(instance)};
  });
}

patrol_status patrol_instance_create_matrix(const double* rates, size_t n, const double* matrix,
                                            patrol_instance** out) {
  if (auto st = require_arg(out != nullptr && rates != nullptr && matrix != nullptr && n > 0,
                            "null argument or empty instance"))
    return st;
  return guarded([&] {
    patrol::TravelMatrix travel(n, std::vector<double>(n));
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) travel[i][j] = matrix[i * n + j];
    *out = new patrol_instance{
        patrol::Instance::from_matrix(std::vector<double>(rates, rates + n), std::move(travel))};
  });
}

patrol_status patrol_instance_create_cycle(const double* rates, size_t n, const double* cycle,
                                           patrol_instance** out) {
  if (auto st = require_arg(out != nullptr && rates != nullptr && cycle != nullptr && n > 0,
                            "null argument or empty instance"))
    return st;
  return guarded([&] {
    *out = new patrol_instance{patrol::Instance::from_cycle(
        std::vector<double>(rates, rates + n), std::vector<double>(cycle, cycle + n))};
  });
}

void patrol_instance_free(patrol_instance* instance) { delete instance; }

patrol_status patrol_instance_size(const patrol_instance* instance, size_t* out) {
  if (auto st = require_arg(instance != nullptr && out != nullptr, "null argument")) return st;
  *out = instance->value.size();
  return PATROL_OK;
}

patrol_status patrol_instance_to_json(const patrol_instance* instance, char** json_out) {
  if (auto st = require_arg(instance != nullptr && json_out != nullptr, "null argument")) return st;
  return guarded([&] { *json_out = dup_json(patrol::io::instance_to_json(instance->value)); });
}

patrol_status patrol_harmonic_sum(const double* rates, size_t n, double* out) {
  if (auto st = require_arg(rates != nullptr && out != nullptr && n > 0,
                            "null argument or empty rates"))
    return st;
  return guarded([&] { *out = patrol::harmonic_sum({rates, n}); });
}

patrol_status patrol_balanced_wait_times(const double* rates, size_t n, double t_obs,
                                         double* out_waits) {
  if (auto st = require_arg(rates != nullptr && out_waits != nullptr && n > 0,
                            "null argument or empty rates"))
    return st;
  return guarded([&] {
    auto waits = patrol::balanced_wait_times({rates, n}, t_obs);
    std::memcpy(out_waits, waits.data(), n * sizeof(double));
  });
}

patrol_status patrol_expected_delay(double rate, double wait, double period, double* out) {
  if (auto st = require_arg(out != nullptr, "out is null")) return st;
  return guarded([&] { *out = patrol::expected_delay(rate, wait, period); });
}

patrol_status patrol_expected_delay_weighted(double rate, double wait, double period, double* out) {
  if (auto st = require_arg(out != nullptr, "out is null")) return st;
  return guarded([&] { *out = patrol::expected_delay_weighted(rate, wait, period); });
}

patrol_status patrol_objective_curve(double lambda_max, double sigma, double t_tr, double t_obs,
                                     double* out) {
  if (auto st = require_arg(out != nullptr, "out is null")) return st;
  return guarded([&] { *out = patrol::objective_curve(lambda_max, sigma, t_tr, t_obs); });
}

patrol_status patrol_elasticity_rate(double lambda_i, double sigma, double t_obs, double t_tr,
                                     double* out) {
  if (auto st = require_arg(out != nullptr, "out is null")) return st;
  return guarded([&] {
    patrol::OperatingPoint pt;
    pt.lambda_i = lambda_i;
    pt.sigma = sigma;
    pt.t_obs = t_obs;
    pt.t_tr = t_tr;
    *out = patrol::elasticity(patrol::ElasticityKind::rate, pt);
  });
}

patrol_status patrol_elasticity_travel(double lambda_max, double sigma, double t_obs, double t_tr,
                                       double* out) {
  if (auto st = require_arg(out != nullptr, "out is null")) return st;
  return guarded([&] {
    patrol::OperatingPoint pt;
    pt.lambda_max = lambda_max;
    pt.sigma = sigma;
    pt.t_obs = t_obs;
    pt.t_tr = t_tr;
    *out = patrol::elasticity(patrol::ElasticityKind::travel, pt);
  });
}

patrol_status patrol_solve_ordered(const patrol_instance* instance, const int* order,
                                   double tolerance, char** report_json) {
  if (auto st = require_arg(instance != nullptr && report_json != nullptr, "null argument"))
    return st;
  return guarded([&] {
    patrol::SolveReport report;
    if (order == nullptr) {
      report = patrol::solve_ordered(instance->value, tolerance);
      *report_json = dup_json(patrol::io::report_to_json(report));
    } else {
      std::vector<int> ord(order, order + instance->value.size());
      report = patrol::solve_ordered(instance->value, ord, tolerance);
      *report_json = dup_json(patrol::io::report_to_json(report, &ord));
    }
  });
}

patrol_status patrol_solve_unordered(const patrol_instance* instance, double epsilon,
                                     double tolerance, char** report_json) {
  if (auto st = require_arg(instance != nullptr && report_json != nullptr, "null argument"))
    return st;
  return guarded([&] {
    auto [tour, report] = patrol::solve_unordered(instance->value, epsilon, tolerance);
    json j = patrol::io::report_to_json(report, &tour.order);
    j["tour_total"] = tour.total;
    j["tour_certified"] = tour.certified;
    j["tour_ratio"] = tour.ratio;
    *report_json = dup_json(j);
  });
}

patrol_status patrol_evaluate_policy(const patrol_instance* instance, const char* policy_json,
                                     char** evaluation_json) {
  if (auto st = require_arg(instance != nullptr && evaluation_json != nullptr, "null argument"))
    return st;
  return guarded([&] {
    auto policy = patrol::io::policy_from_json(parse_text(policy_json, "policy_json"),
                                               instance->value);
    *evaluation_json =
        dup_json(patrol::io::evaluation_to_json(patrol::evaluate_policy(instance->value, policy)));
  });
}

patrol_status patrol_simulate(const patrol_instance* instance, const char* policy_json,
                              const char* config_json, char** result_json) {
  if (auto st = require_arg(instance != nullptr && result_json != nullptr, "null argument"))
    return st;
  return guarded([&] {
    auto config = config_from_text(config_json);
    patrol::SimResult result;
    if (policy_json == nullptr) {
      auto report = patrol::solve_ordered(instance->value, 1e-9);
      result = patrol::run_policy(instance->value, policy_from_report(instance->value, report),
                                  config);
    } else {
      result = simulate_any(instance->value, json::parse(policy_json), config);
    }
    *result_json = dup_json(patrol::io::sim_result_to_json(result));
  });
}

patrol_status patrol_periodic_delay(const patrol_instance* instance, const char* policy_json,
                                    int station, const char* config_json, char** result_json) {
  if (auto st = require_arg(instance != nullptr && result_json != nullptr, "null argument"))
    return st;
  return guarded([&] {
    auto policy = patrol::io::periodic_policy_from_json(parse_text(policy_json, "policy_json"),
                                                        instance->value);
    if (station < 1 || static_cast<size_t>(station) > instance->value.size())
      throw patrol::invalid_input_error("station index out of range (1-based)");
    auto estimate =
        patrol::periodic_policy_delay(instance->value, policy, station - 1,
                                      config_from_text(config_json));
    *result_json = dup_json(json{{"mean", estimate.mean},
                                 {"stderr", estimate.stderr},
                                 {"samples", estimate.samples}});
  });
}

patrol_status patrol_convergence(const patrol_instance* instance, const char* config_json,
                                 int replications, const long* cycle_marks, size_t n_marks,
                                 char** result_json) {
  if (auto st = require_arg(instance != nullptr && result_json != nullptr &&
                                cycle_marks != nullptr && n_marks > 0 && replications > 0,
                            "null argument or empty marks"))
    return st;
  return guarded([&] {
    auto report = patrol::solve_ordered(instance->value, 1e-9);
    auto result = patrol::convergence_experiment(
        instance->value, report, config_from_text(config_json), replications,
        std::vector<long>(cycle_marks, cycle_marks + n_marks));
    *result_json = dup_json(json{{"cycle_marks", result.cycle_marks},
                                 {"empirical", result.empirical},
                                 {"predicted", result.predicted}});
  });
}

patrol_status patrol_robustness(const patrol_instance* instance, const char* policy_json,
                                double max_error, int trials, const char* config_json,
                                char** result_json) {
  if (auto st = require_arg(instance != nullptr && result_json != nullptr && trials > 0,
                            "null argument or no trials"))
    return st;
  return guarded([&] {
    patrol::CyclicPolicy policy;
    if (policy_json == nullptr) {
      policy = policy_from_report(instance->value, patrol::solve_ordered(instance->value, 1e-9));
    } else {
      policy = patrol::io::policy_from_json(json::parse(policy_json), instance->value);
    }
    auto result = patrol::robustness_experiment(instance->value, policy, max_error, trials,
                                                config_from_text(config_json));
    *result_json =
        dup_json(json{{"delay_means", result.delay_means}, {"alphas", result.alphas}});
  });
}

patrol_status patrol_feedback(const patrol_instance* instance, const char* config_json,
                              const double* periods, size_t n_periods, char** result_json) {
  if (auto st = require_arg(instance != nullptr && result_json != nullptr && periods != nullptr &&
                                n_periods > 0,
                            "null argument or empty period grid"))
    return st;
  return guarded([&] {
    auto report = patrol::solve_ordered(instance->value, 1e-9);
    auto result = patrol::feedback_experiment(instance->value, report, config_from_text(config_json),
                                              {periods, n_periods});
    *result_json = dup_json(json{{"periods", result.periods},
                                 {"open_loop_delay", result.open_loop_delay},
                                 {"feedback_delay", result.feedback_delay}});
  });
}

patrol_status patrol_online_create(patrol_online** out) {
  if (auto st = require_arg(out != nullptr, "out is null")) return st;
  return guarded([&] { *out = new patrol_online{}; });
}

void patrol_online_free(patrol_online* state) { delete state; }

patrol_status patrol_online_add(patrol_online* state, double rate, double new_t_tr,
                                double tolerance, char** report_json) {
  if (auto st = require_arg(state != nullptr && report_json != nullptr, "null argument")) return st;
  return guarded([&] {
    auto report = patrol::online_add(state->value, rate, new_t_tr, tolerance);
    *report_json = dup_json(patrol::io::report_to_json(report));
  });
}

patrol_status patrol_online_remove(patrol_online* state, double rate, double new_t_tr,
                                   double tolerance, char** report_json) {
  if (auto st = require_arg(state != nullptr && report_json != nullptr, "null argument")) return st;
  return guarded([&] {
    auto report = patrol::online_remove(state->value, rate, new_t_tr, tolerance);
    *report_json = dup_json(patrol::io::report_to_json(report));
  });
}

}  // extern "C"
