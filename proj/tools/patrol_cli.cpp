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

// patrol command-line front end. Three subcommands:
//
//   solve     instance.json [--ordered | --epsilon E] [--tolerance] [--output]
//             [--format json|csv]
//   simulate  instance.json [policy.json | --auto] [--seed --cycles --model
//             --sweep-period lo:hi:step --max-error --trials --feedback
//             --output --format]
//   verify    table2|table3|appendixB|extreme|convergence|robustness
//
// Exit codes: 0 ok, 1 input error, 2 numeric failure, 3 size limit,
// 4 verification failure. All CSV floats carry 12 significant digits.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "patrol.h"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitSizeLimit = 3;
constexpr int kExitVerification = 4;

struct cli_error {
  int code;
  std::string message;
};

[[noreturn]] void fail(int code, const std::string& message) {
  throw cli_error{code, message};
}

int exit_code_for(patrol_status status) {
  switch (status) {
    case PATROL_OK:
      return kExitOk;
    case PATROL_ERR_INVALID_INPUT:
      return kExitInput;
    case PATROL_ERR_NUMERIC:
      return kExitNumeric;
    case PATROL_ERR_SIZE_LIMIT:
      return kExitSizeLimit;
    default:
      return kExitNumeric;
  }
}

void check(patrol_status status) {
  if (status != PATROL_OK) fail(exit_code_for(status), patrol_last_error());
}

// Owning wrappers so error paths cannot leak C-side allocations.
using instance_ptr = std::unique_ptr<patrol_instance, decltype(&patrol_instance_free)>;

std::string take_string(char* s) {
  std::string out(s);
  patrol_string_free(s);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(kExitInput, "cannot read file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

instance_ptr load_instance(const std::string& path) {
  const std::string text = read_file(path);
  patrol_instance* raw = nullptr;
  check(patrol_instance_parse(text.c_str(), &raw));
  return instance_ptr(raw, &patrol_instance_free);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path);
  if (!out) fail(kExitInput, "cannot write file: " + path);
  out << content;
}

std::vector<double> parse_sweep(const std::string& sweep) {
  double lo = 0, hi = 0, step = 0;
  char extra = 0;
  if (std::sscanf(sweep.c_str(), "%lf:%lf:%lf%c", &lo, &hi, &step, &extra) != 3 || step <= 0 ||
      hi < lo)
    fail(kExitInput, "--sweep-period expects lo:hi:step with step > 0");
  std::vector<double> grid;
  for (double t = lo; t <= hi + step * 1e-9; t += step) grid.push_back(t);
  return grid;
}

// ---- solve -----------------------------------------------------------------

std::string solve_to_csv(const json& report) {
  std::ostringstream csv;
  csv << "station,wait_time,t_obs_star,t_star,t_tr,sigma,lambda_max,j2,boundary_minimum\n";
  const auto& waits = report["wait_times"];
  std::vector<int> order;
  if (report.contains("order"))
    order = report["order"].get<std::vector<int>>();
  for (std::size_t i = 0; i < waits.size(); ++i) {
    const int station = order.empty() ? static_cast<int>(i) + 1 : order[i];
    csv << station << ',' << fmt(waits[i].get<double>()) << ','
        << fmt(report["t_obs_star"].get<double>()) << ',' << fmt(report["t_star"].get<double>())
        << ',' << fmt(report["t_tr"].get<double>()) << ',' << fmt(report["sigma"].get<double>())
        << ',' << fmt(report["lambda_max"].get<double>()) << ','
        << fmt(report["j2"].get<double>()) << ',' << (report["boundary_minimum"].get<bool>() ? 1 : 0)
        << '\n';
  }
  return csv.str();
}

int cmd_solve(const std::string& instance_path, bool ordered, std::optional<double> epsilon,
              double tolerance, const std::string& output, const std::string& format) {
  auto instance = load_instance(instance_path);
  char* raw = nullptr;
  if (epsilon.has_value()) {
    check(patrol_solve_unordered(instance.get(), *epsilon, tolerance, &raw));
  } else {
    (void)ordered;  // the default mode
    check(patrol_solve_ordered(instance.get(), nullptr, tolerance, &raw));
  }
  const json report = json::parse(take_string(raw));
  if (format == "csv") {
    write_output(output, solve_to_csv(report));
  } else {
    write_output(output, report.dump(2) + "\n");
  }
  return kExitOk;
}

// ---- simulate --------------------------------------------------------------

json build_config(std::uint64_t seed, long cycles, const std::string& model, long min_samples) {
  json config{{"seed", seed}, {"cycles", cycles}, {"model", model}};
  if (min_samples > 0) config["min_delay_samples"] = min_samples;
  return config;
}

json solve_auto(patrol_instance* instance, double tolerance) {
  char* raw = nullptr;
  check(patrol_solve_ordered(instance, nullptr, tolerance, &raw));
  return json::parse(take_string(raw));
}

json balanced_policy_json(const json& instance_json, double t_obs) {
  const auto rates = instance_json["rates"].get<std::vector<double>>();
  std::vector<double> waits(rates.size());
  check(patrol_balanced_wait_times(rates.data(), rates.size(), t_obs, waits.data()));
  json order = json::array();
  for (std::size_t i = 0; i < rates.size(); ++i) order.push_back(static_cast<int>(i) + 1);
  return json{{"order", order}, {"wait_times", waits}};
}

json instance_json_of(patrol_instance* instance) {
  char* raw = nullptr;
  check(patrol_instance_to_json(instance, &raw));
  return json::parse(take_string(raw));
}

std::vector<double> analytic_delays(patrol_instance* instance, const json& policy) {
  char* raw = nullptr;
  check(patrol_evaluate_policy(instance, policy.dump().c_str(), &raw));
  return json::parse(take_string(raw))["delays"].get<std::vector<double>>();
}

json run_simulation(patrol_instance* instance, const json& policy, const json& config) {
  char* raw = nullptr;
  check(patrol_simulate(instance, policy.dump().c_str(), config.dump().c_str(), &raw));
  return json::parse(take_string(raw));
}

std::string station_csv(patrol_instance* instance, const json& policy, const json& result) {
  const auto delays = analytic_delays(instance, policy);
  long total_events = 0;
  for (const auto& st : result["stations"]) total_events += st["events_observed"].get<long>();
  std::ostringstream csv;
  csv << "station,delay_mean,delay_stderr,delay_samples,analytic_delay,fraction_observed\n";
  int station = 1;
  for (const auto& st : result["stations"]) {
    const double fraction = total_events > 0
                                ? static_cast<double>(st["events_observed"].get<long>()) /
                                      static_cast<double>(total_events)
                                : 0.0;
    csv << station << ',' << fmt(st["delay_mean"].get<double>()) << ','
        << fmt(st["delay_stderr"].get<double>()) << ',' << st["delay_samples"].get<long>() << ','
        << fmt(delays[static_cast<std::size_t>(station) - 1]) << ',' << fmt(fraction) << '\n';
    ++station;
  }
  return csv.str();
}

std::string sweep_csv(patrol_instance* instance, const json& instance_json, double t_tr,
                      const std::vector<double>& periods, const json& base_config) {
  std::ostringstream csv;
  csv << "period,station,delay_mean,delay_stderr,delay_samples,analytic_delay\n";
  for (double period : periods) {
    const double t_obs = period - t_tr;
    if (t_obs <= 0) fail(kExitInput, "sweep period " + fmt(period) + " does not exceed travel time");
    const json policy = balanced_policy_json(instance_json, t_obs);
    const auto delays = analytic_delays(instance, policy);
    const json result = run_simulation(instance, policy, base_config);
    int station = 1;
    for (const auto& st : result["stations"]) {
      csv << fmt(period) << ',' << station << ',' << fmt(st["delay_mean"].get<double>()) << ','
          << fmt(st["delay_stderr"].get<double>()) << ',' << st["delay_samples"].get<long>() << ','
          << fmt(delays[static_cast<std::size_t>(station) - 1]) << '\n';
      ++station;
    }
  }
  return csv.str();
}

std::string feedback_csv(patrol_instance* instance, const std::vector<double>& periods,
                         const json& config) {
  char* raw = nullptr;
  check(patrol_feedback(instance, config.dump().c_str(), periods.data(), periods.size(), &raw));
  const json result = json::parse(take_string(raw));
  std::ostringstream csv;
  csv << "period,open_loop_delay,feedback_delay\n";
  for (std::size_t i = 0; i < result["periods"].size(); ++i) {
    csv << fmt(result["periods"][i].get<double>()) << ','
        << fmt(result["open_loop_delay"][i].get<double>()) << ','
        << fmt(result["feedback_delay"][i].get<double>()) << '\n';
  }
  return csv.str();
}

std::string robustness_csv(patrol_instance* instance, const json* policy, double max_error,
                           int trials, const json& config) {
  char* raw = nullptr;
  const std::string policy_text = policy != nullptr ? policy->dump() : std::string();
  check(patrol_robustness(instance, policy != nullptr ? policy_text.c_str() : nullptr, max_error,
                          trials, config.dump().c_str(), &raw));
  const json result = json::parse(take_string(raw));
  std::ostringstream csv;
  csv << "station,trial,delay_mean,alpha\n";
  const auto& delay_means = result["delay_means"];
  const auto& alphas = result["alphas"];
  for (std::size_t s = 0; s < delay_means.size(); ++s)
    for (std::size_t t = 0; t < delay_means[s].size(); ++t)
      csv << (s + 1) << ',' << t << ',' << fmt(delay_means[s][t].get<double>()) << ','
          << fmt(alphas[s][t].get<double>()) << '\n';
  return csv.str();
}

int cmd_simulate(const std::string& instance_path, const std::string& policy_path, bool auto_policy,
                 std::uint64_t seed, long cycles, const std::string& model,
                 const std::string& sweep, std::optional<double> max_error, int trials,
                 bool feedback, long min_samples, const std::string& output,
                 const std::string& format) {
  if (cycles <= 0) fail(kExitInput, "--cycles must be positive");
  auto instance = load_instance(instance_path);
  const json config = build_config(seed, cycles, model, min_samples);
  const json instance_json = instance_json_of(instance.get());

  if (max_error.has_value()) {
    std::optional<json> policy;
    if (!policy_path.empty())
      policy = json::parse(read_file(policy_path));
    write_output(output, robustness_csv(instance.get(), policy ? &*policy : nullptr, *max_error,
                                        trials, config));
    return kExitOk;
  }

  if (feedback) {
    if (sweep.empty()) fail(kExitInput, "--feedback requires --sweep-period");
    write_output(output, feedback_csv(instance.get(), parse_sweep(sweep), config));
    return kExitOk;
  }

  if (!sweep.empty()) {
    const json report = solve_auto(instance.get(), 1e-9);
    write_output(output, sweep_csv(instance.get(), instance_json, report["t_tr"].get<double>(),
                                   parse_sweep(sweep), config));
    return kExitOk;
  }

  json policy;
  if (auto_policy || policy_path.empty()) {
    const json report = solve_auto(instance.get(), 1e-9);
    policy = balanced_policy_json(instance_json, report["t_obs_star"].get<double>());
  } else {
    policy = json::parse(read_file(policy_path));
  }
  const json result = run_simulation(instance.get(), policy, config);
  if (format == "csv") {
    write_output(output, station_csv(instance.get(), policy, result));
  } else {
    json out = result;
    out["policy"] = policy;
    write_output(output, out.dump(2) + "\n");
  }
  return kExitOk;
}

// ---- verify ----------------------------------------------------------------

struct Verifier {
  int failures = 0;

  void assert_true(const std::string& label, bool ok) {
    std::cout << (ok ? "PASS" : "FAIL") << "  " << label << "\n";
    if (!ok) ++failures;
  }

  void assert_close(const std::string& label, double actual, double expected, double tolerance) {
    const bool ok = std::abs(actual - expected) <= tolerance;
    std::cout << (ok ? "PASS" : "FAIL") << "  " << label << ": got " << fmt(actual)
              << ", want " << fmt(expected) << " +/- " << fmt(tolerance) << "\n";
    if (!ok) ++failures;
  }
};

instance_ptr make_instance_cycle(const std::vector<double>& rates,
                                 const std::vector<double>& cycle) {
  patrol_instance* raw = nullptr;
  check(patrol_instance_create_cycle(rates.data(), rates.size(), cycle.data(), &raw));
  return instance_ptr(raw, &patrol_instance_free);
}

instance_ptr make_instance_matrix(const std::vector<double>& rates,
                                  const std::vector<double>& matrix) {
  patrol_instance* raw = nullptr;
  check(patrol_instance_create_matrix(rates.data(), rates.size(), matrix.data(), &raw));
  return instance_ptr(raw, &patrol_instance_free);
}

const std::vector<double> kTable2Rates{0.5, 1.3, 2.5, 1.2, 1.6, 0.9};
const std::vector<double> kTable2Cycle{0.15, 0.25, 0.1, 0.3, 0.2, 0.2};

json solve_report(patrol_instance* instance) {
  char* raw = nullptr;
  check(patrol_solve_ordered(instance, nullptr, 1e-9, &raw));
  return json::parse(take_string(raw));
}

void verify_table2(Verifier& v) {
  auto instance = make_instance_cycle(kTable2Rates, kTable2Cycle);
  const json report = solve_report(instance.get());
  v.assert_close("T*", report["t_star"].get<double>(), 4.59, 0.01);
  const std::vector<double> want{1.18, 0.45, 0.24, 0.49, 0.37, 0.67};
  const auto waits = report["wait_times"].get<std::vector<double>>();
  for (std::size_t i = 0; i < want.size(); ++i)
    v.assert_close("wait[" + std::to_string(i + 1) + "]", waits[i], want[i], 0.01);
  if (std::abs(waits[5] - want[5]) > 0.01) {
    std::cout << "info  the published 0.67 contradicts the balance condition: every station must\n"
                 "info  satisfy lambda_i t_i = sigma T_obs = "
              << fmt(report["sigma"].get<double>() * report["t_obs_star"].get<double>())
              << ", giving t_6 = " << fmt(waits[5]) << " (0.9 x 0.67 = 0.603).\n";
  }
}

void verify_table3(Verifier& v) {
  const double rows[3][3] = {{1.2502, 1.0, 1.814}, {2.5002, 2.0, 2.265}, {3.7502, 3.0, 2.632}};
  for (const auto& row : rows) {
    double delay = 0;
    check(patrol_expected_delay(1.0, row[1], row[0], &delay));
    v.assert_close("E[T] at T=" + fmt(row[0]), delay, row[2], 0.001);
  }
  double mid = 0, lo = 0, hi = 0;
  check(patrol_expected_delay(1.0, 2.0, 2.5002, &mid));
  check(patrol_expected_delay(1.0, 1.0, 1.2502, &lo));
  check(patrol_expected_delay(1.0, 3.0, 3.7502, &hi));
  const double chord = lo + (hi - lo) * (2.5002 - 1.2502) / (3.7502 - 1.2502);
  v.assert_true("midpoint above chord (non-convexity)", mid > chord);
}

void verify_appendix_b(Verifier& v) {
  auto instance = make_instance_matrix({1, 2, 1}, {0, 0.1, 0.2, 0.1, 0, 0.1, 0.2, 0.1, 0});
  const json report = solve_report(instance.get());
  const auto waits = report["wait_times"].get<std::vector<double>>();
  const std::vector<double> want{0.53, 0.27, 0.53};
  for (std::size_t i = 0; i < want.size(); ++i)
    v.assert_close("pi1 wait[" + std::to_string(i + 1) + "]", waits[i], want[i], 0.01);
  v.assert_close("J2(pi1)", report["j2"].get<double>(), 4.17, 0.01);

  const double half = waits[1] / 2;
  const json pi2{{"visits", json::array({json{{"station", 1}, {"wait", waits[0]}},
                                         json{{"station", 2}, {"wait", half}},
                                         json{{"station", 3}, {"wait", waits[2]}},
                                         json{{"station", 2}, {"wait", half}}})}};
  const json config{{"seed", 7}, {"cycles", 100000}, {"min_delay_samples", 100000}};
  char* raw = nullptr;
  // J2(pi2) is the worst station; station 2 is visited twice and sits well
  // below stations 1 and 3.
  double j2_pi2 = 0;
  for (int station : {1, 2, 3}) {
    check(patrol_periodic_delay(instance.get(), pi2.dump().c_str(), station, config.dump().c_str(),
                                &raw));
    const json est = json::parse(take_string(raw));
    std::cout << "info  E[T_" << station << "(pi2)] = " << fmt(est["mean"].get<double>())
              << " over " << est["samples"].get<long>() << " samples\n";
    j2_pi2 = std::max(j2_pi2, est["mean"].get<double>());
  }
  v.assert_close("J2(pi2) Monte Carlo", j2_pi2, 4.15, 0.05);
  v.assert_true("pi2 beats pi1", j2_pi2 < report["j2"].get<double>());
}

void verify_extreme(Verifier& v) {
  auto instance = make_instance_matrix({1, 100}, {0, 0.1, 0.1, 0});
  const json report = solve_report(instance.get());
  const auto waits = report["wait_times"].get<std::vector<double>>();
  v.assert_close("wait[1]", waits[0], 0.5702, 0.0005);
  v.assert_close("wait[2]", waits[1], 0.0057, 0.0005);
}

void verify_convergence(Verifier& v) {
  auto instance = make_instance_cycle(kTable2Rates, kTable2Cycle);
  const std::vector<long> marks{100, 500, 2000};
  const json config{{"seed", 11}, {"cycles", 2000}, {"record_trajectory", true}};
  char* raw = nullptr;
  check(patrol_convergence(instance.get(), config.dump().c_str(), 100, marks.data(), marks.size(),
                           &raw));
  const json result = json::parse(take_string(raw));
  for (std::size_t m = 0; m < marks.size(); ++m) {
    const double predicted = result["predicted"][m].get<double>();
    for (std::size_t s = 0; s < kTable2Rates.size(); ++s) {
      const double ratio = result["empirical"][m][s].get<double>() / predicted;
      v.assert_true("m=" + std::to_string(marks[m]) + " station " + std::to_string(s + 1) +
                        " deviation ratio " + fmt(ratio) + " in [0.8, 1.25]",
                    ratio >= 0.8 && ratio <= 1.25);
    }
  }
}

void verify_robustness(Verifier& v) {
  auto instance = make_instance_cycle(kTable2Rates, kTable2Cycle);
  const json config{{"seed", 13}, {"cycles", 10000}};
  char* raw = nullptr;
  check(patrol_robustness(instance.get(), nullptr, 0.25, 100, config.dump().c_str(), &raw));
  const json result = json::parse(take_string(raw));
  for (std::size_t s = 0; s < kTable2Rates.size(); ++s) {
    const auto trials = result["delay_means"][s].get<std::vector<double>>();
    double mean = 0;
    for (double d : trials) mean += d;
    mean /= static_cast<double>(trials.size());
    double var = 0;
    for (double d : trials) var += (d - mean) * (d - mean);
    const double sd = std::sqrt(var / static_cast<double>(trials.size() - 1));
    v.assert_true("station " + std::to_string(s + 1) + " delay sd/mean " + fmt(sd / mean) +
                      " <= 0.15",
                  sd / mean <= 0.15);
  }
}

int cmd_verify(const std::string& name) {
  Verifier v;
  if (name == "table2") {
    verify_table2(v);
  } else if (name == "table3") {
    verify_table3(v);
  } else if (name == "appendixB") {
    verify_appendix_b(v);
  } else if (name == "extreme") {
    verify_extreme(v);
  } else if (name == "convergence") {
    verify_convergence(v);
  } else if (name == "robustness") {
    verify_robustness(v);
  } else {
    fail(kExitInput, "unknown verify case: " + name);
  }
  return v.failures == 0 ? kExitOk : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Persistent-monitoring patrol scheduler"};
  app.require_subcommand(1);

  std::string instance_path, policy_path, output, format = "json", model = "poisson", sweep;
  std::string verify_case;
  bool ordered = false, auto_policy = false, feedback = false;
  double tolerance = 1e-9;
  std::optional<double> epsilon, max_error;
  std::uint64_t seed = 1;
  long cycles = 1000, min_samples = 0;
  int trials = 100;

  auto* solve = app.add_subcommand("solve", "Compute the optimal cyclic policy");
  solve->add_option("instance", instance_path, "Instance JSON file")->required();
  solve->add_flag("--ordered", ordered, "Use the given station order (default)");
  solve->add_option("--epsilon", epsilon, "Tour quality target; enables tour construction");
  solve->add_option("--tolerance", tolerance, "Solver tolerance on T_obs");
  solve->add_option("--output", output, "Output file (default stdout)");
  solve->add_option("--format", format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo runs and sweeps");
  simulate->add_option("instance", instance_path, "Instance JSON file")->required();
  simulate->add_option("policy", policy_path, "Policy JSON file");
  simulate->add_flag("--auto", auto_policy, "Solve for the optimal policy first");
  simulate->add_option("--seed", seed, "Master RNG seed");
  simulate->add_option("--cycles", cycles, "Policy cycles to run");
  simulate->add_option("--min-samples", min_samples, "Keep running until this many delay samples");
  simulate->add_option("--model", model, "Arrival model")
      ->check(CLI::IsMember({"poisson", "uniform_segment", "uniform_burst"}));
  simulate->add_option("--sweep-period", sweep, "Period grid lo:hi:step");
  simulate->add_option("--max-error", max_error, "Rate perturbation bound; enables robustness");
  simulate->add_option("--trials", trials, "Robustness trials");
  simulate->add_flag("--feedback", feedback, "Compare the leave-early rule over the sweep grid");
  simulate->add_option("--output", output, "Output file (default stdout)");
  simulate->add_option("--format", format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));

  auto* verify = app.add_subcommand("verify", "Built-in reproduction checks");
  verify->add_option("case", verify_case,
                     "table2|table3|appendixB|extreme|convergence|robustness")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInput;
  }

  try {
    if (solve->parsed())
      return cmd_solve(instance_path, ordered, epsilon, tolerance, output, format);
    if (simulate->parsed())
      return cmd_simulate(instance_path, policy_path, auto_policy, seed, cycles, model, sweep,
                          max_error, trials, feedback, min_samples, output, format);
    return cmd_verify(verify_case);
  } catch (const cli_error& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}
