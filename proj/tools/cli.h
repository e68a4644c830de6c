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

#ifndef FIDLIMIT_TOOLS_CLI_H_
#define FIDLIMIT_TOOLS_CLI_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fidlimit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitConfig = 2;

enum class Format { kJson, kCsv };

struct RunConfig {
  std::uint64_t seed = 42;
  std::optional<int> trials;  // unset: command default
  std::vector<std::pair<int, int>> dims;  // empty: command default
  std::vector<double> spectrum = {0.9, 0.1};
  double delta = 0.1;
  std::pair<int, int> block_range = {1, 200};
  std::string output_path;  // empty: stdout
  std::optional<Format> format;  // unset: command default
  std::pair<int, int> dim_range = {2, 4};  // fuzz-inequality dimensions
  std::string replay_path;
  int threads = 0;
  int block_d = 0;    // block-demo channel dimension; 0 = floor(2^{N(S-2 delta)})
  int ancilla = 0;    // decoder ancilla dimension; 0 = command default
  bool qubit_power = false;
  bool topd_identity = false;
  bool allow_full_rate = false;  // accept d >= n in --dims
};

/// Parsers for the flag grammars; throw std::invalid_argument on bad input.
std::vector<std::pair<int, int>> parse_dims(const std::string& text);
std::vector<double> parse_spectrum(const std::string& text);
std::pair<int, int> parse_range(const std::string& text);

/// Checks the RunConfig invariants (trials >= 1, delta > 0, d < n unless
/// allowed); throws std::invalid_argument.
void validate(const RunConfig& config);

int cmd_appendix(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_fuzz_bound(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_fuzz_inequality(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_converse(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_block_demo(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Full command-line entry point (args excludes the program name). Exit
/// codes: 0 all checked inequalities hold, 1 violation found, 2 configuration
/// or I/O error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fidlimit::cli

#endif  // FIDLIMIT_TOOLS_CLI_H_
