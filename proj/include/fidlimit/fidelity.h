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

#ifndef FIDLIMIT_FIDELITY_H_
#define FIDLIMIT_FIDELITY_H_

#include <cstdint>
#include <string>
#include <vector>

#include "fidlimit/operator_core.h"

namespace fidlimit {

/// A fidelity in [0, 1]. Roundoff up to `kClampWidth` outside the range is
/// clamped; anything further out is a contract violation.
class FidelityValue {
 public:
  static constexpr double kClampWidth = 1e-9;

  FidelityValue() = default;
  explicit FidelityValue(double raw);

  double value() const { return value_; }
  operator double() const { return value_; }

 private:
  double value_ = 0.0;
};

/// |<psi|phi>|^2; subnormalized vectors allowed.
FidelityValue fidelity_pure_pure(const PureState& psi, const PureState& phi);

/// Tr(|psi><psi| rho) = <psi|rho|psi>. `pi` may be subnormalized.
FidelityValue fidelity_pure_mixed(const PureState& pi, const DensityOperator& rho);

/// Purification fidelity for arbitrary (possibly subnormalized) PSD operators,
/// evaluated in closed form as ||sqrt(rho1) sqrt(rho2)||_1^2, which equals
/// (Tr sqrt(sqrt(rho1) rho2 sqrt(rho1)))^2.
FidelityValue fidelity_general(const DensityOperator& rho1, const DensityOperator& rho2);

struct OracleOptions {
  int restarts = 20;
  int iterations = 500;  // maximum Jacobi sweeps per restart
  std::uint64_t seed = 7;
};

/// Independent estimate of the purification fidelity. A purification |1> of
/// rho1 is fixed (with a random ancilla frame), a purification |2> of rho2 is
/// fixed likewise, and |<1|(I (x) V)|2>|^2 is maximized over ancilla unitaries
/// V by block-coordinate ascent: each step replaces a 2x2 block of V with the
/// best U(2) element, read off the polar decomposition of the corresponding
/// cross-Gram block. Restarts begin from Haar-random V. Test use only
/// (dim <= 6).
FidelityValue fidelity_oracle(const DensityOperator& rho1, const DensityOperator& rho2,
                              const OracleOptions& options = {});

/// Upper bound on F13 given F12 and F23, valid when Tr rho3 = 1:
///   F23 + 2(1 - sqrt F12) + 2 sqrt2 sqrt(F23 (1 - sqrt F12)).
double triangle_bound(double f12, double f23);

/// Same bound for a subnormalized rho3 with trace `tr3` in (0, 1].
double triangle_bound_general(double f12, double f23, double tr3);

struct InequalityFuzzConfig {
  int trials = 10000;
  std::uint64_t seed = 42;
  int min_dim = 2;
  int max_dim = 4;
  double min_trace = 0.3;  // traces of rho1, rho2 (and rho3 in the subnormalized variant)
};

struct InequalityViolation {
  std::int64_t trial = 0;
  std::string variant;  // "normalized", "subnormalized", "equal_pair"
  int dim = 0;
  double f12 = 0, f23 = 0, f13 = 0, bound = 0, tr3 = 1;
};

struct InequalityFuzzReport {
  InequalityFuzzConfig config;
  std::int64_t checks = 0;
  double min_slack = 0;  // min over checks of bound - F13
  double max_slack = 0;
  double max_equal_pair_gap = 0;  // rho1 = rho2 triples: max of |1 - F12| and |bound(1, F23) - F13|
  std::vector<InequalityViolation> violations;
};

/// Random-triple check of the fidelity inequality. Each trial draws a
/// dimension in [min_dim, max_dim] and checks three triples: (a) rho1, rho2
/// subnormalized with rho3 normalized against `triangle_bound`; (b) the same
/// with rho3 subnormalized against `triangle_bound_general`; (c) rho1 = rho2
/// normalized, where the bound collapses to F23. Violations beyond 1e-9 are
/// recorded.
InequalityFuzzReport fuzz_inequality(const InequalityFuzzConfig& config);

}  // namespace fidlimit

#endif  // FIDLIMIT_FIDELITY_H_
