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

#ifndef PATROL_TOUR_HPP
#define PATROL_TOUR_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "patrol/model.hpp"
#include "patrol/optimizer.hpp"

namespace patrol {

struct TourResult {
  std::vector<int> order;  // closed tour, station 0-based
  double total = 0;        // tour travel time
  bool certified = false;  // ratio to the exact optimum <= 1 + epsilon_target
  double ratio = 0;        // heuristic/exact, 0 when not certifiable
};

/// Maximum instance size for the exact dynamic-programming tour.
inline constexpr std::size_t kExactTourMaxStations = 15;

/// Minimum-length closed tour by Held-Karp dynamic programming over subsets.
/// Throws size_limit_error for n > kExactTourMaxStations.
TourResult tour_exact(const TravelMatrix& travel);

/// Nearest-neighbor construction with 2-opt improvement, multi-start.
/// Handles asymmetric matrices. When n <= kExactTourMaxStations the result
/// is compared against tour_exact and `certified` reflects whether the ratio
/// is within 1 + epsilon_target.
TourResult tour_heuristic(const TravelMatrix& travel, double epsilon_target,
                          std::uint64_t seed = 0x7061747261ULL);

/// Builds a visiting order from the travel matrix, then solves the ordered
/// problem on that tour.
std::pair<TourResult, SolveReport> solve_unordered(const Instance& instance, double epsilon,
                                                   double tolerance);

}  // namespace patrol

#endif  // PATROL_TOUR_HPP
