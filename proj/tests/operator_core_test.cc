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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fidlimit {
namespace {

ComplexMatrix diag(std::initializer_list<double> v) {
  RealVector r(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) r[i++] = x;
  return r.cast<Complex>().asDiagonal();
}

// Real roots of x^3 + a x^2 + b x + c (three real roots assumed), descending.
std::vector<double> cubic_roots(double a, double b, double c) {
  const double q = (a * a - 3.0 * b) / 9.0;
  const double r = (2.0 * a * a * a - 9.0 * a * b + 27.0 * c) / 54.0;
  const double theta = std::acos(std::clamp(r / std::sqrt(q * q * q), -1.0, 1.0));
  const double m = -2.0 * std::sqrt(q);
  std::vector<double> roots = {m * std::cos(theta / 3.0) - a / 3.0,
                               m * std::cos((theta + 2.0 * std::numbers::pi) / 3.0) - a / 3.0,
                               m * std::cos((theta - 2.0 * std::numbers::pi) / 3.0) - a / 3.0};
  std::sort(roots.begin(), roots.end(), std::greater<>());
  return roots;
}

// Entries of the three-signal example's density matrix, as exact fractions.
Eigen::Matrix3d appendix_rho() {
  Eigen::Matrix3d m;
  m << 0.49 + 1.0 / 300, 0.245 + 1.0 / 300, 1.0 / 150,
       0.245 + 1.0 / 300, 0.49 + 1.0 / 300, 1.0 / 150,
       1.0 / 150, 1.0 / 150, 1.0 / 75;
  return m;
}

ComplexMatrix random_hermitian(Eigen::Index n, Rng& rng) {
  ComplexMatrix g = gaussian_matrix(n, n, rng);
  return 0.5 * (g + g.adjoint());
}

TEST(EighTest, DiagonalIsSortedDescending) {
  EigenSystem es = eigh(diag({0.2, 0.7, 0.1}));
  EXPECT_NEAR(es.values[0], 0.7, 1e-15);
  EXPECT_NEAR(es.values[1], 0.2, 1e-15);
  EXPECT_NEAR(es.values[2], 0.1, 1e-15);
  EXPECT_NEAR(std::abs(es.vectors(1, 0)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(es.vectors(0, 1)), 1.0, 1e-15);
}

TEST(EighTest, IdentityKeepsBasisOrder) {
  EigenSystem es = eigh(ComplexMatrix::Identity(3, 3));
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(es.values[i], 1.0, 1e-15);
  EXPECT_LT(max_abs(es.vectors.adjoint() * es.vectors - ComplexMatrix::Identity(3, 3)), 1e-12);
  // Ties are ordered by basis index.
  EXPECT_LT(max_abs(es.vectors - ComplexMatrix::Identity(3, 3)), 1e-12);
}

TEST(EighTest, AppendixDensityMatchesCharacteristicPolynomial) {
  const Eigen::Matrix3d m = appendix_rho();
  const double tr = m.trace();
  const double minors = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) + m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0) +
                        m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
  const auto roots = cubic_roots(-tr, minors, -m.determinant());
  EigenSystem es = eigh(m.cast<Complex>().eval());
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(es.values[i], roots[i], 1e-12);
  EXPECT_NEAR(es.values[0], 0.74179, 5e-6);
  EXPECT_NEAR(es.values[1], 0.24500, 5e-6);
  EXPECT_NEAR(es.values[2], 0.01321, 5e-6);
}

TEST(EighTest, ReconstructsRandomHermitian) {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index n = 1 + trial % 7;
    ComplexMatrix a = random_hermitian(n, rng);
    EigenSystem es = eigh(a);
    ComplexMatrix back = es.vectors * es.values.cast<Complex>().asDiagonal() * es.vectors.adjoint();
    EXPECT_LT(max_abs(a - back), 1e-9);
    EXPECT_LT(max_abs(es.vectors.adjoint() * es.vectors - ComplexMatrix::Identity(n, n)), 1e-9);
    for (Eigen::Index i = 1; i < n; ++i) EXPECT_GE(es.values[i - 1], es.values[i]);
  }
}

TEST(EighTest, RejectsNonHermitian) {
  ComplexMatrix a = ComplexMatrix::Zero(2, 2);
  a(0, 1) = 1.0;
  EXPECT_THROW(eigh(a), ContractError);
}

TEST(TensorTest, Identities) {
  const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
  EXPECT_EQ(tensor(i2, i2), ComplexMatrix(ComplexMatrix::Identity(4, 4)));
  ComplexMatrix t = tensor(diag({2.0, 3.0}), diag({5.0, 7.0}));
  EXPECT_LT(max_abs(t - diag({10.0, 14.0, 15.0, 21.0})), 1e-15);
}

TEST(TensorTest, ProductSpectrum) {
  ComplexMatrix rho = diag({0.9, 0.1});
  EigenSystem es = eigh(tensor(rho, rho));
  EXPECT_NEAR(es.values[0], 0.81, 1e-15);
  EXPECT_NEAR(es.values[1], 0.09, 1e-15);
  EXPECT_NEAR(es.values[2], 0.09, 1e-15);
  EXPECT_NEAR(es.values[3], 0.01, 1e-15);
}

TEST(TensorTest, TraceIsMultiplicative) {
  Rng rng(5);
  ComplexMatrix a = gaussian_matrix(3, 3, rng);
  ComplexMatrix b = gaussian_matrix(2, 2, rng);
  EXPECT_NEAR(std::abs(tensor(a, b).trace() - a.trace() * b.trace()), 0.0, 1e-12);
}

TEST(PartialTraceTest, ProductState) {
  Rng rng(8);
  ComplexMatrix q = random_density(3, 3, rng).matrix();
  ComplexMatrix a = 0.6 * random_density(2, 2, rng).matrix();
  EXPECT_LT(max_abs(partial_trace(tensor(q, a), {3, 2}, Subsystem::kSecond) - 0.6 * q), 1e-14);
  EXPECT_LT(max_abs(partial_trace(tensor(q, a), {3, 2}, Subsystem::kFirst) - a), 1e-14);
}

TEST(PartialTraceTest, BellStateGivesMaximallyMixed) {
  ComplexVector bell = ComplexVector::Zero(4);
  bell[0] = bell[3] = 1.0 / std::sqrt(2.0);
  ComplexMatrix reduced = partial_trace(bell * bell.adjoint(), {2, 2}, Subsystem::kSecond);
  EXPECT_LT(max_abs(reduced - 0.5 * ComplexMatrix::Identity(2, 2)), 1e-15);
}

TEST(PartialTraceTest, MatchesIndexSummation) {
  Rng rng(13);
  const int dq = 3, da = 2;
  ComplexMatrix g = gaussian_matrix(6, 6, rng);
  ComplexMatrix m = g * g.adjoint();
  ComplexMatrix keep_q = ComplexMatrix::Zero(dq, dq);
  ComplexMatrix keep_a = ComplexMatrix::Zero(da, da);
  for (int i = 0; i < dq; ++i) {
    for (int j = 0; j < dq; ++j) {
      for (int k = 0; k < da; ++k) keep_q(i, j) += m(i * da + k, j * da + k);
    }
  }
  for (int k = 0; k < da; ++k) {
    for (int l = 0; l < da; ++l) {
      for (int i = 0; i < dq; ++i) keep_a(k, l) += m(i * da + k, i * da + l);
    }
  }
  EXPECT_LT(max_abs(partial_trace(m, {dq, da}, Subsystem::kSecond) - keep_q), 1e-12);
  EXPECT_LT(max_abs(partial_trace(m, {dq, da}, Subsystem::kFirst) - keep_a), 1e-12);
  EXPECT_NEAR(std::abs(partial_trace(m, {dq, da}, Subsystem::kSecond).trace() - m.trace()), 0.0, 1e-12);
}

TEST(PartialTraceTest, AdjointOfTensorWithIdentity) {
  Rng rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    ComplexMatrix a = gaussian_matrix(3, 3, rng);
    ComplexMatrix m = gaussian_matrix(12, 12, rng);
    Complex lhs = (tensor(a, ComplexMatrix(ComplexMatrix::Identity(4, 4))) * m).trace();
    Complex rhs = (a * partial_trace(m, {3, 4}, Subsystem::kSecond)).trace();
    EXPECT_LT(std::abs(lhs - rhs), 1e-10);
  }
}

TEST(PartialTraceTest, RejectsDimensionMismatch) {
  EXPECT_THROW(partial_trace(ComplexMatrix::Identity(5, 5), {2, 2}, Subsystem::kSecond), ContractError);
}

TEST(PsdSqrtTest, Diagonal) {
  HermitianOperator s = psd_sqrt(DensityOperator(diag({0.8, 0.2})));
  EXPECT_LT(max_abs(s.matrix() - diag({2.0, 1.0}) / std::sqrt(5.0)), 1e-15);
}

TEST(PsdSqrtTest, ProjectorIsFixed) {
  ComplexVector v(3);
  v << 1.0, Complex(0, 1), 1.0;
  v.normalize();
  Projector p = Projector::onto_columns(v);
  EXPECT_LT(max_abs(psd_sqrt(HermitianOperator(p.matrix())).matrix() - p.matrix()), 1e-12);
}

TEST(PsdSqrtTest, SquaresBackAndCommutes) {
  Rng rng(34);
  for (int trial = 0; trial < 100; ++trial) {
    DensityOperator rho = random_density(3, 1 + trial % 3, rng);
    ComplexMatrix s = psd_sqrt(rho).matrix();
    EXPECT_LT(max_abs(s * s - rho.matrix()), 1e-10);
    EXPECT_LT(max_abs(s * rho.matrix() - rho.matrix() * s), 1e-8);
    EXPECT_GE(eigh(s).values.minCoeff(), -1e-12);
  }
}

TEST(DensityOperatorTest, ClampsSmallNegativeEigenvalues) {
  DensityOperator rho(diag({0.5, 0.5, -1e-9}));
  EXPECT_GE(eigh(rho.matrix()).values.minCoeff(), 0.0);
  EXPECT_THROW(DensityOperator(diag({0.5, 0.5, -1e-6})), ContractError);
  EXPECT_THROW(DensityOperator(diag({0.7, 0.5})), ContractError);
}

TEST(ProjectorTest, ValidatesIdempotence) {
  EXPECT_EQ(Projector(diag({1.0, 0.0, 1.0})).rank(), 2);
  EXPECT_THROW(Projector(diag({0.5, 0.0})), ContractError);
}

TEST(SamplingTest, OneDimensionalState) {
  Rng rng(1);
  PureState s = random_pure_state(1, rng);
  ASSERT_EQ(s.dim(), 1);
  EXPECT_NEAR(std::abs(s.amplitudes()[0]), 1.0, 1e-15);
}

TEST(SamplingTest, HaarUnitaryIsUnitary) {
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    ComplexMatrix u = haar_unitary(4, rng);
    EXPECT_LT(max_abs(u.adjoint() * u - ComplexMatrix::Identity(4, 4)), 1e-10);
  }
}

TEST(SamplingTest, HaarUnitaryFirstMomentVanishes) {
  // E|U_00|^2 = 1/n and E U_00 = 0 under the Haar measure.
  Rng rng(17);
  const int samples = 20000;
  Complex mean = 0.0;
  double second = 0.0;
  for (int i = 0; i < samples; ++i) {
    ComplexMatrix u = haar_unitary(3, rng);
    mean += u(0, 0);
    second += std::norm(u(0, 0));
  }
  EXPECT_LT(std::abs(mean / static_cast<double>(samples)), 0.02);
  EXPECT_NEAR(second / samples, 1.0 / 3.0, 0.01);
}

TEST(SamplingTest, RandomDensityAveragesToMaximallyMixed) {
  Rng rng(99);
  const int samples = 10000;
  ComplexMatrix mean = ComplexMatrix::Zero(3, 3);
  double eigen_mean = 0.0;
  for (int i = 0; i < samples; ++i) {
    DensityOperator rho = random_density(3, 3, rng);
    mean += rho.matrix();
    eigen_mean += eigh(rho.matrix()).values.mean();
  }
  mean /= samples;
  EXPECT_LT(max_abs(mean - ComplexMatrix::Identity(3, 3) / 3.0), 0.01);
  EXPECT_NEAR(eigen_mean / samples, 1.0 / 3.0, 0.01);
}

TEST(SamplingTest, RandomDensityRankAndTrace) {
  Rng rng(4);
  DensityOperator rho = random_density(5, 2, rng);
  EXPECT_NEAR(rho.trace(), 1.0, 1e-12);
  EigenSystem es = eigh(rho.matrix());
  EXPECT_GT(es.values[1], 1e-6);
  EXPECT_LT(es.values[2], 1e-12);
  EXPECT_THROW(random_density(3, 4, rng), ContractError);
  EXPECT_THROW(random_pure_state(0, rng), ContractError);
}

TEST(SamplingTest, SeedsAreBitwiseReproducible) {
  Rng a(123), b(123);
  EXPECT_EQ(haar_unitary(4, a), haar_unitary(4, b));
  EXPECT_EQ(random_density(3, 2, a).matrix(), random_density(3, 2, b).matrix());
  Rng c = Rng::child(7, 3), d = Rng::child(7, 3), e = Rng::child(7, 4);
  const double x = c.uniform();
  EXPECT_EQ(x, d.uniform());
  EXPECT_NE(x, e.uniform());
}

TEST(SamplingTest, SimplexSumsToOne) {
  Rng rng(6);
  for (int k = 1; k < 8; ++k) {
    auto p = rng.simplex(k);
    double total = 0.0;
    for (double v : p) {
      EXPECT_GE(v, 0.0);
      total += v;
    }
    EXPECT_NEAR(total, 1.0, 1e-14);
  }
}

TEST(ExpTest, AntiHermitianGivesUnitary) {
  Rng rng(10);
  ComplexMatrix h = random_hermitian(4, rng);
  ComplexMatrix u = exp_antihermitian(Complex(0, 1) * h);
  EXPECT_LT(max_abs(u.adjoint() * u - ComplexMatrix::Identity(4, 4)), 1e-12);
  EXPECT_THROW(exp_antihermitian(h), ContractError);
}

}  // namespace
}  // namespace fidlimit
