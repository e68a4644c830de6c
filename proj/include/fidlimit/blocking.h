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

#ifndef FIDLIMIT_BLOCKING_H_
#define FIDLIMIT_BLOCKING_H_

#include <cstdint>
#include <ostream>
#include <vector>

#include "fidlimit/coding.h"

namespace fidlimit {

/// Eigenvalue list, stored in descending order, summing to 1 within 1e-12.
class Spectrum {
 public:
  Spectrum() = default;
  explicit Spectrum(std::vector<double> eigenvalues);

  const std::vector<double>& values() const { return values_; }
  int size() const { return static_cast<int>(values_.size()); }

 private:
  std::vector<double> values_;
};

/// -sum lambda log2 lambda, with 0 log 0 = 0.
double von_neumann_entropy(const Spectrum& s);

/// One type class of rho^(x)N: all eigenvalues prod_j lambda_j^{n_j} for a
/// fixed count vector n.
struct SpectrumClass {
  std::vector<int> counts;
  double value = 0.0;         // prod_j lambda_j^{n_j}
  double log2_value = 0.0;    // -inf when value is exactly zero
  double multiplicity = 0.0;  // N! / prod n_j!
};

struct ProductSpectrum {
  Spectrum base;
  int block_length = 0;
  std::vector<SpectrumClass> classes;  // sorted by value, descending
  double total_dimension() const;      // k^N
  double total_mass() const;
};

inline constexpr std::int64_t kDefaultClassCap = 1000000;

/// Type-class enumeration of the spectrum of rho^(x)N. Throws SizeError when
/// C(N+k-1, k-1) exceeds `class_cap`.
ProductSpectrum product_spectrum(const Spectrum& s, int block_length, std::int64_t class_cap = kDefaultClassCap);

struct TypicalStats {
  double mass = 0.0;
  double dimension = 0.0;
  double entropy = 0.0;
  double lower = 0.0;  // 2^{-N(S+delta)}
  double upper = 0.0;  // 2^{-N(S-delta)}
};

/// Mass and dimension of the eigenvalues strictly inside
/// (2^{-N(S+delta)}, 2^{-N(S-delta)}). Comparisons are made on log2 values;
/// an eigenvalue equal to 2^{-NS} (the uniform case) is always inside.
TypicalStats typical_stats(const ProductSpectrum& ps, double delta);

/// Sum of the d largest eigenvalues of rho^(x)N (partial class at the boundary).
double sigma_d(const ProductSpectrum& ps, double d);

enum class RateRounding {
  kFloorReal,    // d = floor(2^{N(S-2 delta)})
  kQubitPower,   // d = 2^{floor(N(S-2 delta))}
};

struct ConverseRow {
  int block_length = 0;
  double d = 0.0;
  double entropy = 0.0;
  double epsilon = 0.0;           // 1 - typical mass
  double two_pow_neg_n_delta = 0.0;
  double sigma_d = 0.0;
  double bound = 0.0;             // epsilon + 2^{-N delta}
  double six_sigma_d = 0.0;
  bool holds() const { return sigma_d <= bound + 1e-12; }
};

/// One row per N in [n_first, n_last]; d clamped to [1, k^N].
std::vector<ConverseRow> converse_sweep(const Spectrum& s, double delta, int n_first, int n_last,
                                        RateRounding rounding = RateRounding::kFloorReal,
                                        std::int64_t class_cap = kDefaultClassCap);

/// CSV header and rows: N,d,entropy,epsilon_N,two_pow_neg_Ndelta,sigma_d,bound,six_sigma_d
void write_converse_csv(std::ostream& os, const std::vector<ConverseRow>& rows);

inline constexpr std::int64_t kBlockDimensionCap = 4096;

/// All N-fold tensor products of the signals with product probabilities
/// (lexicographic order, first factor slowest).
SourceEnsemble block_ensemble(const SourceEnsemble& e, int block_length);

}  // namespace fidlimit

#endif  // FIDLIMIT_BLOCKING_H_
