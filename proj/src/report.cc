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

#include "fidlimit/report.h"

namespace fidlimit {

using nlohmann::ordered_json;

ordered_json to_json(const BoundChain& chain) {
  ordered_json j;
  j["F_bar"] = chain.f_bar;
  j["eta"] = chain.eta;
  j["X"] = chain.x_bar;
  j["Y"] = chain.y_bar;
  j["Z"] = chain.z_bar;
  j["d_lambda_next"] = chain.d_lambda_next;
  j["max_termwise_excess"] = chain.max_termwise_excess;
  return j;
}

ordered_json to_json(const FuzzConfig& config) {
  ordered_json j;
  j["trials"] = config.trials;
  j["seed"] = config.seed;
  ordered_json dims = ordered_json::array();
  for (const auto& [n, d] : config.dims) dims.push_back({n, d});
  j["dims"] = dims;
  j["min_signals"] = config.min_signals;
  j["max_signals"] = config.max_signals;
  j["ancilla_dim"] = config.ancilla_dim;
  j["scheme"] = config.scheme == FuzzConfig::Scheme::kTopdIdentity ? "topd_identity" : "random";
  return j;
}

ordered_json to_json(const FuzzReport& report) {
  ordered_json j;
  j["tool_version"] = kToolVersion;
  j["command"] = "fuzz-bound";
  j["trials"] = report.trials;
  j["seed"] = report.config.seed;
  j["dims"] = to_json(report.config)["dims"];
  j["config"] = to_json(report.config);
  j["lemma_constant"] = kLemmaConstant;
  j["max_ratio"] = report.max_ratio;
  j["min_ratio"] = report.min_ratio;
  ordered_json violations = ordered_json::array();
  for (const auto& v : report.violations) {
    ordered_json row;
    row["trial"] = v.sample.trial;
    row["F_bar"] = v.sample.chain.f_bar;
    row["eta"] = v.sample.chain.eta;
    row["X"] = v.sample.chain.x_bar;
    row["Y"] = v.sample.chain.y_bar;
    row["Z"] = v.sample.chain.z_bar;
    row["kind"] = v.kind;
    row["n"] = v.sample.n;
    row["d"] = v.sample.d;
    violations.push_back(row);
  }
  j["violations"] = violations;
  return j;
}

ordered_json to_json(const InequalityFuzzReport& report) {
  ordered_json j;
  j["tool_version"] = kToolVersion;
  j["command"] = "fuzz-inequality";
  j["trials"] = report.config.trials;
  j["seed"] = report.config.seed;
  j["dims"] = {report.config.min_dim, report.config.max_dim};
  j["config"] = {{"trials", report.config.trials},
                 {"seed", report.config.seed},
                 {"min_dim", report.config.min_dim},
                 {"max_dim", report.config.max_dim},
                 {"min_trace", report.config.min_trace}};
  j["checks"] = report.checks;
  j["min_slack"] = report.min_slack;
  j["max_slack"] = report.max_slack;
  j["max_equal_pair_gap"] = report.max_equal_pair_gap;
  ordered_json violations = ordered_json::array();
  for (const auto& v : report.violations) {
    violations.push_back({{"trial", v.trial}, {"variant", v.variant}, {"dim", v.dim}, {"F12", v.f12},
                          {"F23", v.f23}, {"F13", v.f13}, {"bound", v.bound}, {"tr3", v.tr3}});
  }
  j["violations"] = violations;
  return j;
}

ordered_json to_json(const std::vector<ConverseRow>& rows) {
  ordered_json out = ordered_json::array();
  for (const auto& r : rows) {
    out.push_back({{"N", r.block_length},
                   {"d", r.d},
                   {"entropy", r.entropy},
                   {"epsilon_N", r.epsilon},
                   {"two_pow_neg_Ndelta", r.two_pow_neg_n_delta},
                   {"sigma_d", r.sigma_d},
                   {"bound", r.bound},
                   {"six_sigma_d", r.six_sigma_d}});
  }
  return out;
}

FuzzConfig fuzz_config_from_json(const nlohmann::json& j) {
  const nlohmann::json& c = j.contains("config") ? j.at("config") : j;
  FuzzConfig config;
  config.trials = c.at("trials").get<int>();
  config.seed = c.at("seed").get<std::uint64_t>();
  for (const auto& pair : c.at("dims")) config.dims.emplace_back(pair.at(0).get<int>(), pair.at(1).get<int>());
  config.min_signals = c.value("min_signals", 2);
  config.max_signals = c.value("max_signals", 0);
  config.ancilla_dim = c.value("ancilla_dim", 0);
  config.scheme = c.value("scheme", std::string("random")) == "topd_identity" ? FuzzConfig::Scheme::kTopdIdentity
                                                                               : FuzzConfig::Scheme::kRandom;
  return config;
}

}  // namespace fidlimit
