// Copyright 2026 The fidlimit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FIDLIMIT_REPORT_H_
#define FIDLIMIT_REPORT_H_

#include <json.hpp>

#include "fidlimit/blocking.h"
#include "fidlimit/coding.h"
#include "fidlimit/fidelity.h"

namespace fidlimit {

inline constexpr const char* kToolVersion = "0.1.0";

nlohmann::ordered_json to_json(const BoundChain& chain);
nlohmann::ordered_json to_json(const FuzzConfig& config);

/// {tool_version, trials, seed, dims, max_ratio, violations: [{trial, F_bar,
/// eta, X, Y, Z, ...}], ...}
nlohmann::ordered_json to_json(const FuzzReport& report);
nlohmann::ordered_json to_json(const InequalityFuzzReport& report);
nlohmann::ordered_json to_json(const std::vector<ConverseRow>& rows);

/// Reads back the configuration embedded by to_json(FuzzReport).
FuzzConfig fuzz_config_from_json(const nlohmann::json& j);

}  // namespace fidlimit

#endif  // FIDLIMIT_REPORT_H_
