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

#include "patrol/tour.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "patrol/errors.hpp"
#include "patrol/rng.hpp"

namespace patrol {

namespace {

void check_matrix(const TravelMatrix& travel) {
  const std::size_t n = travel.size();
  if (n == 0) throw invalid_input_error("tour: empty travel matrix");
  for (std::size_t i = 0; i < n; ++i) {
    if (travel[i].size() != n) throw invalid_input_error("tour: travel matrix must be square");
    if (travel[i][i] != 0) throw invalid_input_error("tour: diagonal must be zero");
    for (double t : travel[i])
      if (t < 0 || !std::isfinite(t))
        throw invalid_input_error("tour: travel times must be nonnegative and finite");
  }
}

double tour_cost(const TravelMatrix& travel, const std::vector<int>& order) {
  const std::size_t n = order.size();
  if (n < 2) return 0.0;
  double total = 0;
  for (std::size_t j = 0; j < n; ++j) total += travel[order[j]][order[(j + 1) % n]];
  return total;
}

bool is_symmetric(const TravelMatrix& travel) {
  for (std::size_t i = 0; i < travel.size(); ++i)
    for (std::size_t j = i + 1; j < travel.size(); ++j)
      if (travel[i][j] != travel[j][i]) return false;
  return true;
}

std::vector<int> nearest_neighbor(const TravelMatrix& travel, int start) {
  const int n = static_cast<int>(travel.size());
  std::vector<int> order;
  order.reserve(n);
  std::vector<char> used(n, 0);
  int cur = start;
  order.push_back(cur);
  used[cur] = 1;
  for (int step = 1; step < n; ++step) {
    int best = -1;
    double best_cost = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
      if (!used[j] && travel[cur][j] < best_cost) {
        best_cost = travel[cur][j];
        best = j;
      }
    }
    order.push_back(best);
    used[best] = 1;
    cur = best;
  }
  return order;
}

// In-place 2-opt to local optimality. Segment reversal cost for asymmetric
// matrices is handled through prefix sums of forward/backward edge costs.
void two_opt(const TravelMatrix& travel, std::vector<int>& order, bool symmetric) {
  const int n = static_cast<int>(order.size());
  if (n < 4) return;
  bool improved = true;
  while (improved) {
    improved = false;
    // rev_prefix[k] = sum over edges 0..k-1 of (backward - forward) cost.
    std::vector<double> rev_prefix(n, 0.0);
    if (!symmetric) {
      for (int k = 0; k + 1 < n; ++k) {
        const int a = order[k], b = order[k + 1];
        rev_prefix[k + 1] = rev_prefix[k] + (travel[b][a] - travel[a][b]);
      }
    }
    for (int i = 0; i < n - 1 && !improved; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (i == 0 && j == n - 1) continue;  // same tour, just reoriented
        const int a = order[(i - 1 + n) % n], b = order[i];
        const int c = order[j], d = order[(j + 1) % n];
        double delta = travel[a][c] + travel[b][d] - travel[a][b] - travel[c][d];
        if (!symmetric) delta += rev_prefix[j] - rev_prefix[i];
        if (delta < -1e-12) {
          std::reverse(order.begin() + i, order.begin() + j + 1);
          improved = true;
          break;
        }
      }
    }
  }
}

}  // namespace

TourResult tour_exact(const TravelMatrix& travel) {
  check_matrix(travel);
  const std::size_t n = travel.size();
  if (n > kExactTourMaxStations)
    throw size_limit_error("tour_exact: instance exceeds the exact-solver size limit");

  TourResult res;
  if (n == 1) {
    res.order = {0};
    res.total = 0;
    res.certified = true;
    res.ratio = 1.0;
    return res;
  }

  // Held-Karp over subsets of {1..n-1}, tours anchored at station 0.
  const int m = static_cast<int>(n) - 1;
  const std::size_t nmask = std::size_t{1} << m;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dp(nmask * m, inf);
  std::vector<int> parent(nmask * m, -1);
  for (int j = 0; j < m; ++j) dp[(std::size_t{1} << j) * m + j] = travel[0][j + 1];
  for (std::size_t mask = 1; mask < nmask; ++mask) {
    for (int j = 0; j < m; ++j) {
      if (!(mask >> j & 1)) continue;
      const double cur = dp[mask * m + j];
      if (cur == inf) continue;
      for (int k = 0; k < m; ++k) {
        if (mask >> k & 1) continue;
        const std::size_t next = mask | (std::size_t{1} << k);
        const double cand = cur + travel[j + 1][k + 1];
        if (cand < dp[next * m + k]) {
          dp[next * m + k] = cand;
          parent[next * m + k] = j;
        }
      }
    }
  }
  const std::size_t full = nmask - 1;
  double best = inf;
  int best_end = -1;
  for (int j = 0; j < m; ++j) {
    const double cand = dp[full * m + j] + travel[j + 1][0];
    if (cand < best) {
      best = cand;
      best_end = j;
    }
  }
  std::vector<int> order(n);
  std::size_t mask = full;
  int j = best_end;
  for (std::size_t pos = n - 1; pos >= 1; --pos) {
    order[pos] = j + 1;
    const int pj = parent[mask * m + j];
    mask ^= std::size_t{1} << j;
    j = pj;
  }
  order[0] = 0;
  res.order = std::move(order);
  res.total = best;
  res.certified = true;
  res.ratio = 1.0;
  return res;
}

TourResult tour_heuristic(const TravelMatrix& travel, double epsilon_target, std::uint64_t seed) {
  check_matrix(travel);
  if (!(epsilon_target > 0)) throw invalid_input_error("tour_heuristic: epsilon must be > 0");
  const int n = static_cast<int>(travel.size());
  const bool symmetric = is_symmetric(travel);

  TourResult res;
  if (n == 1) {
    res.order = {0};
    res.total = 0;
    res.certified = true;
    res.ratio = 1.0;
    return res;
  }

  std::vector<int> starts;
  if (n <= 64) {
    starts.resize(n);
    std::iota(starts.begin(), starts.end(), 0);
  } else {
    Rng rng(derive_seed(seed, 0));
    for (int k = 0; k < 16; ++k) starts.push_back(rng.uniform_int(0, n - 1));
  }

  double best = std::numeric_limits<double>::infinity();
  std::vector<int> best_order;
  for (int s : starts) {
    auto order = nearest_neighbor(travel, s);
    two_opt(travel, order, symmetric);
    const double cost = tour_cost(travel, order);
    if (cost < best) {
      best = cost;
      best_order = std::move(order);
    }
  }
  res.order = std::move(best_order);
  res.total = best;

  if (static_cast<std::size_t>(n) <= kExactTourMaxStations) {
    const TourResult exact = tour_exact(travel);
    res.ratio = exact.total > 0 ? res.total / exact.total : (res.total == 0 ? 1.0 : 0.0);
    res.certified = res.ratio <= 1.0 + epsilon_target + 1e-12;
  }
  return res;
}

std::pair<TourResult, SolveReport> solve_unordered(const Instance& instance, double epsilon,
                                                   double tolerance) {
  const TravelMatrix& travel = instance.matrix();
  TourResult tour = tour_heuristic(travel, epsilon);
  // At certifiable sizes the exact tour is available anyway; fall back to it
  // whenever the heuristic misses the requested ratio.
  if (instance.size() <= kExactTourMaxStations && !tour.certified) {
    tour = tour_exact(travel);
  }
  SolveReport report = solve_ordered(instance, tour.order, tolerance);
  return {std::move(tour), std::move(report)};
}

}  // namespace patrol
