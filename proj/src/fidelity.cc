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

#include "fidlimit/fidelity.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace fidlimit {

namespace {

constexpr double kInequalitySlack = 1e-9;

void require_same_dim(Eigen::Index a, Eigen::Index b, const char* what) {
  if (a != b) {
    std::ostringstream os;
    os << what << ": dimension mismatch (" << a << " vs " << b << ")";
    throw ContractError(os.str());
  }
}

// Columns form a factor A with A A^dagger = rho, followed by a unitary frame
// change on the ancilla index. Eigenvalues at roundoff level are dropped: their
// square roots (~1e-8) would otherwise add ~1e-9 to the fidelity.
ComplexMatrix purification_factor(const DensityOperator& rho, const ComplexMatrix& frame) {
  EigenSystem es = eigh(rho.op());
  const double floor = 64.0 * static_cast<double>(rho.dim()) * std::numeric_limits<double>::epsilon() *
                       std::max(0.0, es.values.size() ? es.values[0] : 0.0);
  RealVector roots = (es.values.array() > floor).select(es.values.cwiseMax(0.0).cwiseSqrt(), 0.0);
  return es.vectors * roots.asDiagonal() * frame;
}

// Maximizes Re Tr(M W) over unitary W by sweeping 2x2 blocks.
double ascend_trace(const ComplexMatrix& m, ComplexMatrix& w, int max_sweeps) {
  const Eigen::Index n = m.rows();
  double value = (m * w).trace().real();
  if (n == 1) {
    Complex t = (m * w).trace();
    if (std::abs(t) > 0.0) w *= std::conj(t) / std::abs(t);
    return (m * w).trace().real();
  }
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    const double before = value;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        ComplexMatrix b = m * w;
        Eigen::Matrix2cd sub;
        sub << b(i, i), b(i, j), b(j, i), b(j, j);
        Eigen::JacobiSVD<Eigen::Matrix2cd> svd(sub, Eigen::ComputeFullU | Eigen::ComputeFullV);
        Eigen::Matrix2cd g = svd.matrixV() * svd.matrixU().adjoint();
        // w <- w G with G the identity except for g on {i, j}.
        ComplexVector ci = w.col(i);
        ComplexVector cj = w.col(j);
        w.col(i) = ci * g(0, 0) + cj * g(1, 0);
        w.col(j) = ci * g(0, 1) + cj * g(1, 1);
      }
    }
    value = (m * w).trace().real();
    if (value - before <= 1e-15 * std::max(1.0, std::abs(value))) break;
  }
  return value;
}

}  // namespace

FidelityValue::FidelityValue(double raw) {
  if (!std::isfinite(raw) || raw < -kClampWidth || raw > 1.0 + kClampWidth) {
    std::ostringstream os;
    os << "fidelity " << raw << " outside [0, 1] beyond roundoff";
    throw ContractError(os.str());
  }
  value_ = std::clamp(raw, 0.0, 1.0 + 1e-12);
}

FidelityValue fidelity_pure_pure(const PureState& psi, const PureState& phi) {
  require_same_dim(psi.dim(), phi.dim(), "fidelity_pure_pure");
  return FidelityValue(std::norm(psi.amplitudes().dot(phi.amplitudes())));
}

FidelityValue fidelity_pure_mixed(const PureState& pi, const DensityOperator& rho) {
  require_same_dim(pi.dim(), rho.dim(), "fidelity_pure_mixed");
  const ComplexVector& a = pi.amplitudes();
  return FidelityValue(a.dot(rho.matrix() * a).real());
}

FidelityValue fidelity_general(const DensityOperator& rho1, const DensityOperator& rho2) {
  require_same_dim(rho1.dim(), rho2.dim(), "fidelity_general");
  ComplexMatrix cross = psd_sqrt(rho1).matrix() * psd_sqrt(rho2).matrix();
  Eigen::JacobiSVD<ComplexMatrix> svd(cross);
  double nuclear = svd.singularValues().sum();
  return FidelityValue(nuclear * nuclear);
}

FidelityValue fidelity_oracle(const DensityOperator& rho1, const DensityOperator& rho2,
                              const OracleOptions& options) {
  require_same_dim(rho1.dim(), rho2.dim(), "fidelity_oracle");
  const Eigen::Index n = rho1.dim();
  if (n > 6) throw ContractError("fidelity_oracle: dimension above 6 is not supported");
  Rng rng(options.seed);
  ComplexMatrix a1 = purification_factor(rho1, haar_unitary(n, rng));
  ComplexMatrix a2 = purification_factor(rho2, haar_unitary(n, rng));
  // <1|(I (x) V)|2> = Tr(A1^dagger A2 V^T); W stands for V^T.
  ComplexMatrix m = a1.adjoint() * a2;
  double best = 0.0;
  for (int r = 0; r < std::max(1, options.restarts); ++r) {
    ComplexMatrix w = haar_unitary(n, rng);
    ascend_trace(m, w, options.iterations);
    best = std::max(best, std::norm((m * w).trace()));
  }
  return FidelityValue(best);
}

double triangle_bound(double f12, double f23) { return triangle_bound_general(f12, f23, 1.0); }

double triangle_bound_general(double f12, double f23, double tr3) {
  if (!(tr3 > 0.0) || tr3 > 1.0 + tol::kTrace) throw ContractError("triangle_bound_general: need 0 < tr3 <= 1");
  const double gap = std::max(0.0, 1.0 - std::sqrt(std::max(0.0, f12)));
  const double f = std::max(0.0, f23);
  return f + 2.0 * tr3 * gap + 2.0 * std::sqrt(2.0 * tr3) * std::sqrt(f * gap);
}

InequalityFuzzReport fuzz_inequality(const InequalityFuzzConfig& config) {
  if (config.trials < 1) throw ContractError("fuzz_inequality: trials must be >= 1");
  if (config.min_dim < 1 || config.max_dim < config.min_dim) throw ContractError("fuzz_inequality: bad dimension range");
  if (!(config.min_trace > 0.0) || config.min_trace > 1.0) throw ContractError("fuzz_inequality: min_trace must be in (0, 1]");

  InequalityFuzzReport report;
  report.config = config;
  report.min_slack = std::numeric_limits<double>::infinity();
  report.max_slack = -std::numeric_limits<double>::infinity();

  auto record = [&](std::int64_t trial, const char* variant, int dim, double f12, double f23,
                    double f13, double bound, double tr3) {
    ++report.checks;
    const double slack = bound - f13;
    report.min_slack = std::min(report.min_slack, slack);
    report.max_slack = std::max(report.max_slack, slack);
    if (slack < -kInequalitySlack) {
      report.violations.push_back({trial, variant, dim, f12, f23, f13, bound, tr3});
    }
  };

  for (int t = 0; t < config.trials; ++t) {
    Rng rng = Rng::child(config.seed, static_cast<std::uint64_t>(t));
    const int dim = rng.uniform_int(config.min_dim, config.max_dim);
    auto scaled = [&](double trace) {
      DensityOperator base = random_density(dim, rng.uniform_int(1, dim), rng);
      return DensityOperator(base.matrix() * trace);
    };
    auto draw_trace = [&] { return config.min_trace + (1.0 - config.min_trace) * rng.uniform(); };

    DensityOperator rho1 = scaled(draw_trace());
    DensityOperator rho2 = scaled(draw_trace());
    DensityOperator rho3 = scaled(1.0);
    const double f12 = fidelity_general(rho1, rho2);
    const double f23 = fidelity_general(rho2, rho3);
    const double f13 = fidelity_general(rho1, rho3);
    record(t, "normalized", dim, f12, f23, f13, triangle_bound(f12, f23), 1.0);

    const double tr3 = draw_trace();
    DensityOperator rho3s(rho3.matrix() * tr3);
    const double f23s = fidelity_general(rho2, rho3s);
    const double f13s = fidelity_general(rho1, rho3s);
    record(t, "subnormalized", dim, f12, f23s, f13s, triangle_bound_general(f12, f23s, tr3), tr3);

    DensityOperator same = scaled(1.0);
    const double g12 = fidelity_general(same, same);
    const double g23 = fidelity_general(same, rho3);
    const double g13 = fidelity_general(same, rho3);
    // The bound is evaluated at the forced value F12 = 1: near 1 it has a
    // square-root slope, so the roundoff in g12 would otherwise show up as ~1e-7.
    const double collapsed = triangle_bound(1.0, g23);
    report.max_equal_pair_gap =
        std::max({report.max_equal_pair_gap, std::abs(1.0 - g12), std::abs(collapsed - g13)});
    record(t, "equal_pair", dim, 1.0, g23, g13, collapsed, 1.0);
  }
  return report;
}

}  // namespace fidlimit
