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

#include "fidlimit/operator_core.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace fidlimit {

namespace {

void require_finite(const ComplexMatrix& m) {
  if (!m.allFinite()) throw ContractError("matrix has non-finite entries");
}

Eigen::Index dominant_index(const ComplexVector& v) {
  Eigen::Index best = 0;
  double best_abs = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    // Relative slack so equal-magnitude components resolve to the lowest index.
    if (std::abs(v[i]) > best_abs * (1.0 + 1e-12) + 1e-300) {
      best_abs = std::abs(v[i]);
      best = i;
    }
  }
  return best;
}

}  // namespace

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

HermitianOperator::HermitianOperator(const ComplexMatrix& m, double tolerance) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw ContractError("Hermitian operator must be a non-empty square matrix");
  }
  require_finite(m);
  double asym = max_abs(m - m.adjoint());
  if (asym > tolerance) {
    std::ostringstream os;
    os << "matrix is not Hermitian (max |A - A^dagger| = " << asym << ")";
    throw ContractError(os.str());
  }
  m_ = 0.5 * (m + m.adjoint());
}

DensityOperator::DensityOperator(const ComplexMatrix& m) : op_(m) {
  EigenSystem es = eigh(op_);
  double lowest = es.values.size() ? es.values.minCoeff() : 0.0;
  if (lowest < -tol::kPsd) {
    std::ostringstream os;
    os << "operator is not positive semidefinite (min eigenvalue " << lowest << ")";
    throw ContractError(os.str());
  }
  if (lowest < 0.0) {
    RealVector clamped = es.values.cwiseMax(0.0);
    op_ = HermitianOperator(es.vectors * clamped.asDiagonal() * es.vectors.adjoint());
  }
  double tr = op_.trace();
  if (tr > 1.0 + tol::kTrace) {
    std::ostringstream os;
    os << "density operator trace " << tr << " exceeds 1";
    throw ContractError(os.str());
  }
}

DensityOperator DensityOperator::from_pure(const ComplexVector& amplitudes) {
  return DensityOperator(amplitudes * amplitudes.adjoint());
}

DensityOperator DensityOperator::maximally_mixed(Eigen::Index dim) {
  return DensityOperator(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

DensityOperator DensityOperator::zero(Eigen::Index dim) {
  return DensityOperator(ComplexMatrix::Zero(dim, dim));
}

PureState::PureState(ComplexVector amplitudes) : amps_(std::move(amplitudes)) {
  if (amps_.size() == 0) throw ContractError("pure state must have at least one amplitude");
  if (!amps_.allFinite()) throw ContractError("pure state has non-finite amplitudes");
  double n = amps_.norm();
  if (n > 1.0 + tol::kNorm) throw ContractError("pure state norm exceeds 1");
}

PureState PureState::basis(Eigen::Index dim, Eigen::Index index) {
  if (index < 0 || index >= dim) throw ContractError("basis index out of range");
  ComplexVector v = ComplexVector::Zero(dim);
  v[index] = 1.0;
  return PureState(std::move(v));
}

Projector::Projector(const ComplexMatrix& m) : op_(m) {
  const ComplexMatrix& p = op_.matrix();
  if (max_abs(p * p - p) > tol::kProjector) throw ContractError("operator is not idempotent");
  double tr = op_.trace();
  rank_ = static_cast<int>(std::lround(tr));
  if (std::abs(tr - rank_) > tol::kProjector) throw ContractError("projector trace is not an integer");
}

Projector Projector::onto_columns(const ComplexMatrix& columns) {
  if (columns.cols() == 0) return zero(columns.rows());
  return Projector(columns * columns.adjoint());
}

Projector Projector::zero(Eigen::Index dim) { return Projector(ComplexMatrix::Zero(dim, dim)); }

EigenSystem eigh(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.matrix());
  if (solver.info() != Eigen::Success) throw ContractError("eigendecomposition failed");
  const Eigen::Index n = a.dim();
  const RealVector& asc = solver.eigenvalues();
  const ComplexMatrix& vecs = solver.eigenvectors();

  std::vector<Eigen::Index> order(n);
  for (Eigen::Index i = 0; i < n; ++i) order[i] = n - 1 - i;

  std::vector<Eigen::Index> dom(n);
  for (Eigen::Index i = 0; i < n; ++i) dom[i] = dominant_index(vecs.col(i));

  const double scale = std::max(1.0, asc.cwiseAbs().maxCoeff());
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index stop = start + 1;
    while (stop < n && asc[order[stop - 1]] - asc[order[stop]] <= 1e-12 * scale) ++stop;
    std::stable_sort(order.begin() + start, order.begin() + stop,
                     [&](Eigen::Index x, Eigen::Index y) { return dom[x] < dom[y]; });
    start = stop;
  }

  EigenSystem out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index src = order[i];
    out.values[i] = asc[src];
    ComplexVector v = vecs.col(src);
    Complex pivot = v[dom[src]];
    if (std::abs(pivot) > 0.0) v *= std::conj(pivot) / std::abs(pivot);
    out.vectors.col(i) = v;
  }
  return out;
}

EigenSystem eigh(const ComplexMatrix& a) { return eigh(HermitianOperator(a)); }

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexVector tensor(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a[i] * b;
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, std::pair<Eigen::Index, Eigen::Index> dims,
                            Subsystem traced) {
  const auto [dq, da] = dims;
  if (dq < 1 || da < 1 || m.rows() != m.cols() || m.rows() != dq * da) {
    throw ContractError("partial_trace: matrix dimension does not match subsystem dimensions");
  }
  if (traced == Subsystem::kSecond) {
    ComplexMatrix out = ComplexMatrix::Zero(dq, dq);
    for (Eigen::Index a = 0; a < da; ++a) {
      for (Eigen::Index i = 0; i < dq; ++i) {
        for (Eigen::Index j = 0; j < dq; ++j) out(i, j) += m(i * da + a, j * da + a);
      }
    }
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(da, da);
  for (Eigen::Index q = 0; q < dq; ++q) out += m.block(q * da, q * da, da, da);
  return out;
}

HermitianOperator psd_sqrt(const HermitianOperator& a) {
  EigenSystem es = eigh(a);
  const double eps = std::numeric_limits<double>::epsilon();
  const double top = std::max(0.0, es.values.size() ? es.values[0] : 0.0);
  const double floor = 64.0 * static_cast<double>(a.dim()) * eps * top;
  RealVector roots(es.values.size());
  for (Eigen::Index i = 0; i < roots.size(); ++i) {
    roots[i] = es.values[i] > floor ? std::sqrt(es.values[i]) : 0.0;
  }
  return HermitianOperator(es.vectors * roots.asDiagonal() * es.vectors.adjoint());
}

HermitianOperator psd_sqrt(const DensityOperator& rho) { return psd_sqrt(rho.op()); }

ComplexMatrix exp_antihermitian(const ComplexMatrix& g) {
  if (max_abs(g + g.adjoint()) > tol::kHermitian * std::max(1.0, max_abs(g))) {
    throw ContractError("generator is not anti-Hermitian");
  }
  ComplexMatrix h = Complex(0.0, 1.0) * g;
  EigenSystem es = eigh(HermitianOperator(h));
  ComplexVector phases(es.values.size());
  for (Eigen::Index i = 0; i < phases.size(); ++i) phases[i] = std::polar(1.0, -es.values[i]);
  return es.vectors * phases.asDiagonal() * es.vectors.adjoint();
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng Rng::child(std::uint64_t master, std::uint64_t index) {
  return Rng(splitmix64(splitmix64(master) ^ splitmix64(index + 0x632be59bd9b4e019ULL)));
}

Complex Rng::complex_normal() {
  double re = normal();
  double im = normal();
  return Complex(re, im) / std::sqrt(2.0);
}

std::vector<double> Rng::simplex(int size) {
  if (size < 1) throw ContractError("simplex size must be positive");
  std::vector<double> w(size);
  for (double& x : w) x = -std::log1p(-uniform());
  double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= total;
  return w;
}

ComplexMatrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  ComplexMatrix g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) g(i, j) = rng.complex_normal();
  }
  return g;
}

PureState random_pure_state(Eigen::Index dim, Rng& rng) {
  if (dim < 1) throw ContractError("random_pure_state: dim must be >= 1");
  ComplexVector v = gaussian_matrix(dim, 1, rng).col(0);
  double n = v.norm();
  if (dim == 1) return PureState(ComplexVector::Ones(1));
  return PureState(v / n);
}

DensityOperator random_density(Eigen::Index dim, Eigen::Index rank, Rng& rng) {
  if (dim < 1 || rank < 1 || rank > dim) throw ContractError("random_density: need 1 <= rank <= dim");
  ComplexMatrix amps = gaussian_matrix(dim, rank, rng);
  amps /= amps.norm();
  return DensityOperator(amps * amps.adjoint());
}

ComplexMatrix haar_isometry(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  if (rows < 1 || cols < 1 || cols > rows) throw ContractError("haar_isometry: need 1 <= cols <= rows");
  ComplexMatrix g = gaussian_matrix(rows, cols, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(rows, cols);
  const ComplexMatrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < cols; ++j) {
    Complex d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

ComplexMatrix haar_unitary(Eigen::Index dim, Rng& rng) { return haar_isometry(dim, dim, rng); }

}  // namespace fidlimit
