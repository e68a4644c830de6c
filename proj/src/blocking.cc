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

#include "fidlimit/blocking.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>

namespace fidlimit {

namespace {

double log_multinomial(int n, const std::vector<int>& counts) {
  double out = std::lgamma(n + 1.0);
  for (int c : counts) out -= std::lgamma(c + 1.0);
  return out;
}

// Exact while the running product stays below 2^62; otherwise from lgamma.
double multinomial(int n, const std::vector<int>& counts) {
  const double log_value = log_multinomial(n, counts);
  if (log_value > 62.0 * std::log(2.0) - 1.0) return std::exp(log_value);
  unsigned __int128 acc = 1;
  int placed = 0;
  for (int c : counts) {
    // acc *= C(placed + c, c), one exact step at a time.
    for (int i = 1; i <= c; ++i) {
      acc = acc * static_cast<unsigned __int128>(placed + i) / static_cast<unsigned __int128>(i);
    }
    placed += c;
  }
  return static_cast<double>(acc);
}

void enumerate_counts(int remaining, std::size_t level, std::vector<int>& counts,
                      const std::function<void(const std::vector<int>&)>& emit) {
  if (level + 1 == counts.size()) {
    counts[level] = remaining;
    emit(counts);
    return;
  }
  for (int c = remaining; c >= 0; --c) {
    counts[level] = c;
    enumerate_counts(remaining - c, level + 1, counts, emit);
  }
}

}  // namespace

Spectrum::Spectrum(std::vector<double> eigenvalues) : values_(std::move(eigenvalues)) {
  if (values_.empty()) throw ContractError("spectrum must be non-empty");
  double total = 0.0;
  for (double v : values_) {
    if (!std::isfinite(v) || v < 0.0) throw ContractError("spectrum values must be finite and nonnegative");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream os;
    os << "spectrum sums to " << std::setprecision(17) << total << ", not 1";
    throw ContractError(os.str());
  }
  std::stable_sort(values_.begin(), values_.end(), std::greater<>());
}

double von_neumann_entropy(const Spectrum& s) {
  double h = 0.0;
  for (double v : s.values()) {
    if (v > 0.0) h -= v * std::log2(v);
  }
  return h;
}

double ProductSpectrum::total_dimension() const {
  return std::pow(static_cast<double>(base.size()), block_length);
}

double ProductSpectrum::total_mass() const {
  double m = 0.0;
  for (const auto& c : classes) m += c.value * c.multiplicity;
  return m;
}

ProductSpectrum product_spectrum(const Spectrum& s, int block_length, std::int64_t class_cap) {
  if (block_length < 1) throw ContractError("product_spectrum: block length must be >= 1");
  const int k = s.size();
  const double log_classes = std::lgamma(block_length + k + 0.0) - std::lgamma(k + 0.0) - std::lgamma(block_length + 1.0);
  if (log_classes > std::log(static_cast<double>(class_cap)) + 1e-9) {
    std::ostringstream os;
    os << "product_spectrum: " << std::exp(log_classes) << " type classes exceed the cap of " << class_cap;
    throw SizeError(os.str());
  }

  ProductSpectrum ps;
  ps.base = s;
  ps.block_length = block_length;
  std::vector<double> logs(k);
  for (int j = 0; j < k; ++j) logs[j] = s.values()[j] > 0.0 ? std::log2(s.values()[j]) : -std::numeric_limits<double>::infinity();

  std::vector<int> counts(k, 0);
  enumerate_counts(block_length, 0, counts, [&](const std::vector<int>& c) {
    SpectrumClass cls;
    cls.counts = c;
    cls.value = 1.0;
    cls.log2_value = 0.0;
    for (int j = 0; j < k; ++j) {
      if (c[j] == 0) continue;
      cls.value *= std::pow(s.values()[j], c[j]);
      cls.log2_value += c[j] * logs[j];
    }
    cls.multiplicity = multinomial(block_length, c);
    ps.classes.push_back(std::move(cls));
  });
  std::stable_sort(ps.classes.begin(), ps.classes.end(),
                   [](const SpectrumClass& a, const SpectrumClass& b) { return a.log2_value > b.log2_value; });
  return ps;
}

TypicalStats typical_stats(const ProductSpectrum& ps, double delta) {
  if (!(delta > 0.0)) throw ContractError("typical_stats: delta must be positive");
  TypicalStats out;
  out.entropy = von_neumann_entropy(ps.base);
  const double n = ps.block_length;
  const double lo = -n * (out.entropy + delta);
  const double hi = -n * (out.entropy - delta);
  out.lower = std::exp2(lo);
  out.upper = std::exp2(hi);
  for (const auto& c : ps.classes) {
    if (c.log2_value > lo && c.log2_value < hi) {
      out.mass += c.value * c.multiplicity;
      out.dimension += c.multiplicity;
    }
  }
  return out;
}

double sigma_d(const ProductSpectrum& ps, double d) {
  const double total = ps.total_dimension();
  if (!(d >= 1.0) || d > total * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "sigma_d: d = " << d << " outside [1, " << total << "]";
    throw ContractError(os.str());
  }
  double remaining = std::floor(d);
  double sum = 0.0;
  for (const auto& c : ps.classes) {
    if (remaining <= 0.0) break;
    const double take = std::min(c.multiplicity, remaining);
    sum += take * c.value;
    remaining -= take;
  }
  return sum;
}

std::vector<ConverseRow> converse_sweep(const Spectrum& s, double delta, int n_first, int n_last,
                                        RateRounding rounding, std::int64_t class_cap) {
  if (!(delta > 0.0)) throw ContractError("converse_sweep: delta must be positive");
  if (n_first < 1 || n_last < n_first) throw ContractError("converse_sweep: invalid block-length range");
  const double entropy = von_neumann_entropy(s);
  std::vector<ConverseRow> rows;
  for (int n = n_first; n <= n_last; ++n) {
    ProductSpectrum ps = product_spectrum(s, n, class_cap);
    const double exponent = n * (entropy - 2.0 * delta);
    double d = rounding == RateRounding::kFloorReal ? std::floor(std::exp2(exponent)) : std::exp2(std::floor(exponent));
    d = std::clamp(d, 1.0, ps.total_dimension());

    TypicalStats ts = typical_stats(ps, delta);
    ConverseRow row;
    row.block_length = n;
    row.d = d;
    row.entropy = entropy;
    row.epsilon = std::max(0.0, 1.0 - ts.mass);
    row.two_pow_neg_n_delta = std::exp2(-n * delta);
    row.sigma_d = sigma_d(ps, d);
    row.bound = row.epsilon + row.two_pow_neg_n_delta;
    row.six_sigma_d = 6.0 * row.sigma_d;
    rows.push_back(row);
  }
  return rows;
}

void write_converse_csv(std::ostream& os, const std::vector<ConverseRow>& rows) {
  os << "N,d,entropy,epsilon_N,two_pow_neg_Ndelta,sigma_d,bound,six_sigma_d\n";
  for (const auto& r : rows) {
    std::ostringstream line;
    line << r.block_length << ',' << std::fixed << std::setprecision(0) << r.d << ',';
    line << std::defaultfloat << std::setprecision(17) << r.entropy << ',' << r.epsilon << ','
         << r.two_pow_neg_n_delta << ',' << r.sigma_d << ',' << r.bound << ',' << r.six_sigma_d << '\n';
    os << line.str();
  }
}

SourceEnsemble block_ensemble(const SourceEnsemble& e, int block_length) {
  if (block_length < 1) throw ContractError("block_ensemble: block length must be >= 1");
  const double signals = std::pow(static_cast<double>(e.size()), block_length);
  const double dim = std::pow(static_cast<double>(e.dim()), block_length);
  if (signals > kBlockDimensionCap || dim > kBlockDimensionCap) {
    std::ostringstream os;
    os << "block_ensemble: " << signals << " signals of dimension " << dim << " exceed the cap of " << kBlockDimensionCap;
    throw SizeError(os.str());
  }
  std::vector<Signal> current = e.signals();
  for (int step = 1; step < block_length; ++step) {
    std::vector<Signal> next;
    next.reserve(current.size() * e.size());
    for (const auto& head : current) {
      for (const auto& tail : e.signals()) {
        next.push_back({head.probability * tail.probability,
                        PureState(tensor(head.state.amplitudes(), tail.state.amplitudes()))});
      }
    }
    current = std::move(next);
  }
  // Products of probabilities drift by a few ulps; pin the total to one.
  double total = 0.0;
  for (const auto& s : current) total += s.probability;
  for (auto& s : current) s.probability /= total;
  return SourceEnsemble(std::move(current));
}

}  // namespace fidlimit
