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

#ifndef FIDLIMIT_OPERATOR_CORE_H_
#define FIDLIMIT_OPERATOR_CORE_H_

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace fidlimit {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Raised when an argument violates an operation's precondition
/// (non-Hermitian input, mismatched dimensions, invalid sizes).
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a requested enumeration or dense construction exceeds its cap.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

namespace tol {
inline constexpr double kHermitian = 1e-9;
inline constexpr double kPsd = 1e-8;
inline constexpr double kTrace = 1e-9;
inline constexpr double kProjector = 1e-9;
inline constexpr double kNorm = 1e-12;
}  // namespace tol

/// Largest absolute entry.
double max_abs(const ComplexMatrix& m);

/// A square matrix equal to its adjoint within `tol::kHermitian`. The stored
/// matrix is the exact Hermitian part of the input.
class HermitianOperator {
 public:
  HermitianOperator() = default;
  explicit HermitianOperator(const ComplexMatrix& m, double tolerance = tol::kHermitian);

  const ComplexMatrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }
  double trace() const { return m_.trace().real(); }

 private:
  ComplexMatrix m_;
};

/// Positive-semidefinite operator with 0 <= Tr <= 1. Eigenvalues down to
/// -`tol::kPsd` are accepted and clamped to zero. A zero operator is allowed as
/// the degenerate subnormalized state.
class DensityOperator {
 public:
  DensityOperator() = default;
  explicit DensityOperator(const ComplexMatrix& m);

  static DensityOperator from_pure(const ComplexVector& amplitudes);
  static DensityOperator maximally_mixed(Eigen::Index dim);
  static DensityOperator zero(Eigen::Index dim);

  const ComplexMatrix& matrix() const { return op_.matrix(); }
  const HermitianOperator& op() const { return op_; }
  Eigen::Index dim() const { return op_.dim(); }
  double trace() const { return op_.trace(); }

 private:
  HermitianOperator op_;
};

/// Vector state with norm in (0, 1]. Signal states are unit vectors; the
/// subnormalized case carries projected signals.
class PureState {
 public:
  PureState() = default;
  explicit PureState(ComplexVector amplitudes);

  static PureState basis(Eigen::Index dim, Eigen::Index index);

  const ComplexVector& amplitudes() const { return amps_; }
  Eigen::Index dim() const { return amps_.size(); }
  double norm() const { return amps_.norm(); }
  /// |psi><psi|
  ComplexMatrix projector() const { return amps_ * amps_.adjoint(); }
  DensityOperator density() const { return DensityOperator::from_pure(amps_); }

 private:
  ComplexVector amps_;
};

/// Orthogonal projector; P^2 = P and Tr P = rank within `tol::kProjector`.
class Projector {
 public:
  Projector() = default;
  explicit Projector(const ComplexMatrix& m);

  /// Projector onto the span of the given orthonormal columns.
  static Projector onto_columns(const ComplexMatrix& columns);
  static Projector zero(Eigen::Index dim);

  const ComplexMatrix& matrix() const { return op_.matrix(); }
  Eigen::Index dim() const { return op_.dim(); }
  int rank() const { return rank_; }

 private:
  HermitianOperator op_;
  int rank_ = 0;
};

struct EigenSystem {
  RealVector values;       // descending
  ComplexMatrix vectors;   // column i pairs with values[i]
};

/// Hermitian eigendecomposition, eigenvalues in descending order. Near-equal
/// eigenvalues (relative gap below 1e-12) are ordered by the basis index at
/// which their eigenvector has its largest component; each eigenvector is
/// phase-fixed so that component is real and positive.
EigenSystem eigh(const HermitianOperator& a);
EigenSystem eigh(const ComplexMatrix& a);

/// Kronecker product; the left factor is the slow index.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector tensor(const ComplexVector& a, const ComplexVector& b);

enum class Subsystem { kFirst, kSecond };

/// Partial trace of an operator on C^{dims.first} (x) C^{dims.second},
/// removing the `traced` factor.
ComplexMatrix partial_trace(const ComplexMatrix& m, std::pair<Eigen::Index, Eigen::Index> dims,
                            Subsystem traced);

/// Principal square root of a PSD operator. Eigenvalues below
/// 64·n·eps·lambda_max are treated as exact zeros.
HermitianOperator psd_sqrt(const DensityOperator& rho);
HermitianOperator psd_sqrt(const HermitianOperator& a);

/// exp(G) for anti-Hermitian G, via the eigensystem of iG.
ComplexMatrix exp_antihermitian(const ComplexMatrix& g);

/// Seeded generator. Child streams are derived from (master, index) by a
/// SplitMix64 hash so that trial k sees the same numbers whether trials run
/// serially or in parallel.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  static Rng child(std::uint64_t master, std::uint64_t index);

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
  Complex complex_normal();
  /// Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
  /// Uniform point on the probability simplex of the given size.
  std::vector<double> simplex(int size);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

ComplexMatrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng);

/// Uniform on the unit sphere of C^dim.
PureState random_pure_state(Eigen::Index dim, Rng& rng);
/// Induced measure: reduced state of a random pure state on dim x rank.
DensityOperator random_density(Eigen::Index dim, Eigen::Index rank, Rng& rng);
/// Haar-distributed unitary (QR of a Ginibre matrix, phases of R removed).
ComplexMatrix haar_unitary(Eigen::Index dim, Rng& rng);
/// Haar-distributed isometry C^cols -> C^rows (first columns of a Haar unitary).
ComplexMatrix haar_isometry(Eigen::Index rows, Eigen::Index cols, Rng& rng);

}  // namespace fidlimit

#endif  // FIDLIMIT_OPERATOR_CORE_H_
