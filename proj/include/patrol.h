/*
 * Copyright 2026 The patrol Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to the patrol scheduling library.
 *
 * Conventions:
 *  - Every function returns a patrol_status; out-parameters are written only
 *    on PATROL_OK. patrol_last_error() describes the most recent failure on
 *    the calling thread.
 *  - Opaque handles are released with their matching *_free function.
 *  - Structured results are returned as JSON strings owned by the library;
 *    release them with patrol_string_free. Station indices in JSON payloads
 *    are 1-based.
 */

#ifndef PATROL_H
#define PATROL_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum patrol_status {
  PATROL_OK = 0,
  PATROL_ERR_INVALID_INPUT = 1,
  PATROL_ERR_NUMERIC = 2,
  PATROL_ERR_SIZE_LIMIT = 3,
  PATROL_ERR_INTERNAL = 5
} patrol_status;

typedef struct patrol_instance patrol_instance;
typedef struct patrol_online patrol_online;

const char* patrol_version(void);
const char* patrol_last_error(void);
void patrol_string_free(char* s);

/* ---- instances ------------------------------------------------------- */

/* Parses {"rates": [..], "travel": {"matrix": [[..]]} | {"cycle": [..]}}. */
patrol_status patrol_instance_parse(const char* json_text, patrol_instance** out);

/* Full matrix form; `matrix` is row-major n*n. */
patrol_status patrol_instance_create_matrix(const double* rates, size_t n, const double* matrix,
                                            patrol_instance** out);

/* Cyclic-successor form; `cycle` has n entries tau_{i, i+1 mod n}. */
patrol_status patrol_instance_create_cycle(const double* rates, size_t n, const double* cycle,
                                           patrol_instance** out);

void patrol_instance_free(patrol_instance* instance);
patrol_status patrol_instance_size(const patrol_instance* instance, size_t* out);
patrol_status patrol_instance_to_json(const patrol_instance* instance, char** json_out);

/* ---- scalar formulas -------------------------------------------------- */

patrol_status patrol_harmonic_sum(const double* rates, size_t n, double* out);

/* Writes n balanced waits into out_waits. */
patrol_status patrol_balanced_wait_times(const double* rates, size_t n, double t_obs,
                                         double* out_waits);

patrol_status patrol_expected_delay(double rate, double wait, double period, double* out);
patrol_status patrol_expected_delay_weighted(double rate, double wait, double period, double* out);
patrol_status patrol_objective_curve(double lambda_max, double sigma, double t_tr, double t_obs,
                                     double* out);

/* Relative-sensitivity ratios of the expected delay. */
patrol_status patrol_elasticity_rate(double lambda_i, double sigma, double t_obs, double t_tr,
                                     double* out);
patrol_status patrol_elasticity_travel(double lambda_max, double sigma, double t_obs, double t_tr,
                                       double* out);

/* ---- solving ---------------------------------------------------------- */

/*
 * Optimal balanced policy for a fixed visiting order (0-based permutation;
 * NULL means the identity order). The report JSON carries t_obs_star, t_star,
 * wait_times, gamma, lambda_max, sigma, j2, iterations and boundary_minimum.
 */
patrol_status patrol_solve_ordered(const patrol_instance* instance, const int* order,
                                   double tolerance, char** report_json);

/* Tour construction followed by the ordered solve; requires a full travel
 * matrix. The report JSON additionally carries the 1-based "order", the tour
 * length "tour_total", "tour_certified" and "tour_ratio". */
patrol_status patrol_solve_unordered(const patrol_instance* instance, double epsilon,
                                     double tolerance, char** report_json);

/* Analytic evaluation (alphas, max_pair_gap, j1, j2, delays) of a cyclic
 * policy given as {"order": [..], "wait_times": [..]}. */
patrol_status patrol_evaluate_policy(const patrol_instance* instance, const char* policy_json,
                                     char** evaluation_json);

/* ---- simulation ------------------------------------------------------- */

/*
 * Monte Carlo run of a policy. `policy_json` is a cyclic policy, a periodic
 * policy ({"visits": [{"station": k, "wait": t}, ..]}), or NULL to solve for
 * the optimal cyclic policy first. `config_json` keys (all optional):
 * seed, cycles, min_delay_samples, model, burst_probability, burst_max,
 * feedback, replication, record_trajectory.
 */
patrol_status patrol_simulate(const patrol_instance* instance, const char* policy_json,
                              const char* config_json, char** result_json);

/* Delay estimate {"mean", "stderr", "samples"} at one station (1-based) of a
 * periodic policy. */
patrol_status patrol_periodic_delay(const patrol_instance* instance, const char* policy_json,
                                    int station, const char* config_json, char** result_json);

/* Replicated convergence experiment on the optimal policy; result carries
 * cycle_marks, empirical[mark][station] and predicted[mark]. */
patrol_status patrol_convergence(const patrol_instance* instance, const char* config_json,
                                 int replications, const long* cycle_marks, size_t n_marks,
                                 char** result_json);

/* Runs the given (or optimal, if NULL) policy under randomly perturbed rates;
 * result carries delay_means[station][trial] and alphas[station][trial]. */
patrol_status patrol_robustness(const patrol_instance* instance, const char* policy_json,
                                double max_error, int trials, const char* config_json,
                                char** result_json);

/* Average delay across a grid of periods with and without the leave-early
 * feedback rule. */
patrol_status patrol_feedback(const patrol_instance* instance, const char* config_json,
                              const double* periods, size_t n_periods, char** result_json);

/* ---- online updates --------------------------------------------------- */

patrol_status patrol_online_create(patrol_online** out);
void patrol_online_free(patrol_online* state);
patrol_status patrol_online_add(patrol_online* state, double rate, double new_t_tr,
                                double tolerance, char** report_json);
patrol_status patrol_online_remove(patrol_online* state, double rate, double new_t_tr,
                                   double tolerance, char** report_json);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* PATROL_H */
