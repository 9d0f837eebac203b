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

#ifndef PATROL_ERRORS_HPP
#define PATROL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace patrol {

/// Malformed or out-of-contract input (bad rates, dimension mismatch, ...).
class invalid_input_error : public std::invalid_argument {
public:
  explicit invalid_input_error(const std::string& what) : std::invalid_argument(what) {}
};

/// Non-finite intermediate value or failure of a numeric routine.
class numeric_failure_error : public std::runtime_error {
public:
  explicit numeric_failure_error(const std::string& what) : std::runtime_error(what) {}
};

/// Instance too large for an exact routine (e.g. exact tour beyond n = 15).
class size_limit_error : public std::runtime_error {
public:
  explicit size_limit_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace patrol

#endif  // PATROL_ERRORS_HPP
