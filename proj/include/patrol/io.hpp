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

#ifndef PATROL_IO_HPP
#define PATROL_IO_HPP

#include <json.hpp>

#include "patrol/model.hpp"
#include "patrol/optimizer.hpp"
#include "patrol/sim.hpp"

// JSON file formats. Station indices are 1-based on the wire, 0-based in
// memory.
//
//   instance: {"rates": [..], "travel": {"cycle": [..]}} or
//             {"rates": [..], "travel": {"matrix": [[..]]}}
//   cyclic policy: {"order": [..], "wait_times": [..]}
//   periodic policy: {"visits": [{"station": k, "wait": t}, ..]}

namespace patrol::io {

using nlohmann::json;

json instance_to_json(const Instance& instance);
Instance instance_from_json(const json& j);

json policy_to_json(const CyclicPolicy& policy);
/// travel_total is recomputed from the instance under the given order.
CyclicPolicy policy_from_json(const json& j, const Instance& instance);

json periodic_policy_to_json(const PeriodicPolicy& policy);
PeriodicPolicy periodic_policy_from_json(const json& j, const Instance& instance);

/// `order` (when present) is the tour the report was solved on.
json report_to_json(const SolveReport& report, const std::vector<int>* order = nullptr);

json evaluation_to_json(const PolicyEvaluation& evaluation);

json sim_result_to_json(const SimResult& result, bool include_samples = false);

json sim_config_to_json(const SimConfig& config);
SimConfig sim_config_from_json(const json& j);

}  // namespace patrol::io

#endif  // PATROL_IO_HPP
