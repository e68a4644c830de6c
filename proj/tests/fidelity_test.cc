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

#include <gtest/gtest.h>

#include <cmath>
#include <iomanip>
#include <numbers>

namespace fidlimit {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

PureState real_state(double x, double y, double z) {
  ComplexVector v(3);
  v << x, y, z;
  return PureState(v);
}

DensityOperator diagonal(const std::vector<double>& p) {
  RealVector v = Eigen::Map<const RealVector>(p.data(), static_cast<Eigen::Index>(p.size()));
  return DensityOperator(ComplexMatrix(v.cast<Complex>().asDiagonal()));
}

DensityOperator scaled_density(Eigen::Index dim, double trace, Rng& rng) {
  return DensityOperator(trace * random_density(dim, 1 + rng.uniform_int(0, static_cast<int>(dim) - 1), rng).matrix());
}

TEST(FidelityValueTest, ClampsOnlyRoundoff) {
  EXPECT_EQ(FidelityValue(1.0 + 5e-10).value(), 1.0 + 1e-12);
  EXPECT_EQ(FidelityValue(-5e-10).value(), 0.0);
  EXPECT_DOUBLE_EQ(FidelityValue(0.3).value(), 0.3);
  EXPECT_THROW(FidelityValue(1.0 + 1e-6), ContractError);
  EXPECT_THROW(FidelityValue(-1e-6), ContractError);
}

TEST(PurePureTest, Examples) {
  Rng rng(1);
  PureState psi = random_pure_state(4, rng);
  EXPECT_NEAR(fidelity_pure_pure(psi, psi), 1.0, 1e-14);
  EXPECT_EQ(fidelity_pure_pure(PureState::basis(3, 0), PureState::basis(3, 2)).value(), 0.0);
  const PureState a0 = real_state(std::cos(15 * kDeg), std::sin(15 * kDeg), 0.0);
  const PureState a2 = real_state(1 / std::sqrt(6.0), 1 / std::sqrt(6.0), std::sqrt(2.0 / 3.0));
  EXPECT_NEAR(fidelity_pure_pure(a0, a2), 0.25, 1e-14);
  EXPECT_THROW(fidelity_pure_pure(a0, PureState::basis(2, 0)), ContractError);
}

TEST(PureMixedTest, Examples) {
  Rng rng(2);
  PureState psi = random_pure_state(5, rng);
  EXPECT_NEAR(fidelity_pure_mixed(psi, DensityOperator::maximally_mixed(5)), 0.2, 1e-14);
  EXPECT_NEAR(fidelity_pure_mixed(psi, psi.density()), 1.0, 1e-14);

  const PureState a0 = real_state(std::cos(15 * kDeg), std::sin(15 * kDeg), 0.0);
  const PureState a1 = real_state(std::sin(15 * kDeg), std::cos(15 * kDeg), 0.0);
  const PureState a2 = real_state(1 / std::sqrt(6.0), 1 / std::sqrt(6.0), std::sqrt(2.0 / 3.0));
  DensityOperator w2(0.5 * a0.projector() + 0.5 * a1.projector());
  EXPECT_NEAR(fidelity_pure_mixed(a2, w2), 0.25, 1e-14);
}

TEST(GeneralTest, EqualStatesGiveOne) {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    DensityOperator rho = random_density(2 + trial % 4, 1 + trial % 2, rng);
    EXPECT_NEAR(fidelity_general(rho, rho), 1.0, 1e-10);
  }
}

TEST(GeneralTest, CommutingCase) {
  const std::vector<double> p = {0.5, 0.3, 0.2, 0.0};
  const std::vector<double> q = {0.1, 0.2, 0.3, 0.4};
  double oracle = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) oracle += std::sqrt(p[i] * q[i]);
  EXPECT_NEAR(fidelity_general(diagonal(p), diagonal(q)), oracle * oracle, 1e-12);
}

TEST(GeneralTest, SubnormalizedIsHomogeneous) {
  Rng rng(4);
  DensityOperator a = random_density(3, 3, rng), b = random_density(3, 2, rng);
  const double f = fidelity_general(a, b);
  EXPECT_NEAR(fidelity_general(DensityOperator(0.5 * a.matrix()), DensityOperator(0.4 * b.matrix())), 0.2 * f, 1e-12);
}

TEST(GeneralTest, RangeAndSymmetry) {
  Rng rng(5);
  for (int trial = 0; trial < 10000; ++trial) {
    const Eigen::Index n = 2 + trial % 3;
    DensityOperator a = random_density(n, 1 + trial % n, rng);
    DensityOperator b = random_density(n, 1 + (trial / 3) % n, rng);
    const double fab = fidelity_general(a, b);
    const double fba = fidelity_general(b, a);
    ASSERT_GE(fab, 0.0);
    ASSERT_LE(fab, 1.0);
    ASSERT_LT(std::abs(fab - fba), 1e-10);
  }
}

TEST(GeneralTest, ReducesToPureMixed) {
  Rng rng(6);
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::Index n = 2 + trial % 4;
    PureState psi = random_pure_state(n, rng);
    DensityOperator rho = random_density(n, 1 + trial % n, rng);
    ASSERT_LT(std::abs(fidelity_general(psi.density(), rho) - fidelity_pure_mixed(psi, rho)), 1e-9);
    ASSERT_LT(std::abs(fidelity_general(rho, psi.density()) - fidelity_pure_mixed(psi, rho)), 1e-9);
  }
}

TEST(GeneralTest, NearUnitFidelityMeansNearEqual) {
  // Perturbations of size 1e-3 are always resolved below 1; values within
  // 1e-12 of 1 only occur for operators equal to within 1e-6.
  Rng rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    DensityOperator a = random_density(3, 3, rng);
    DensityOperator b = random_density(3, 3, rng);
    DensityOperator near((1.0 - 1e-3) * a.matrix() + 1e-3 * b.matrix());
    const double f = fidelity_general(a, near);
    EXPECT_LT(f, 1.0 - 1e-12);
    if (f > 1.0 - 1e-12) EXPECT_LT(max_abs(a.matrix() - near.matrix()), 1e-6);
  }
}

TEST(OracleTest, PurePairs) {
  Rng rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    PureState a = random_pure_state(3, rng), b = random_pure_state(3, rng);
    EXPECT_NEAR(fidelity_oracle(a.density(), b.density()), fidelity_pure_pure(a, b), 1e-9);
  }
}

TEST(OracleTest, EqualMixedStates) {
  Rng rng(9);
  DensityOperator rho = random_density(3, 3, rng);
  EXPECT_NEAR(fidelity_oracle(rho, rho), 1.0, 1e-6);
}

TEST(OracleTest, AgreesWithClosedForm) {
  Rng rng(10);
  for (int trial = 0; trial < 40; ++trial) {
    const Eigen::Index n = 2 + trial % 3;
    DensityOperator a = scaled_density(n, 0.3 + 0.7 * rng.uniform(), rng);
    DensityOperator b = scaled_density(n, 0.3 + 0.7 * rng.uniform(), rng);
    const double closed = fidelity_general(a, b);
    const double oracle = fidelity_oracle(a, b);
    EXPECT_LE(oracle, closed + 1e-9) << std::setprecision(17) << oracle - closed;
    EXPECT_NEAR(oracle, closed, 1e-6) << "dim " << n;
  }
}

TEST(OracleTest, RejectsLargeDimensions) {
  EXPECT_THROW(fidelity_oracle(DensityOperator::maximally_mixed(7), DensityOperator::maximally_mixed(7)),
               ContractError);
}

TEST(TriangleBoundTest, Examples) {
  EXPECT_DOUBLE_EQ(triangle_bound(1.0, 0.37), 0.37);
  EXPECT_DOUBLE_EQ(triangle_bound(1.0, 0.0), 0.0);
  const double expected = 0.04 + 2.0 * 0.1 + 2.0 * std::sqrt(2.0) * std::sqrt(0.04 * 0.1);
  EXPECT_NEAR(triangle_bound(0.81, 0.04), expected, 1e-15);
  EXPECT_NEAR(triangle_bound(0.81, 0.04), 0.41889, 5e-6);
}

TEST(TriangleBoundTest, GeneralForm) {
  EXPECT_DOUBLE_EQ(triangle_bound_general(0.81, 0.04, 1.0), triangle_bound(0.81, 0.04));
  EXPECT_DOUBLE_EQ(triangle_bound_general(1.0, 0.2, 0.4), 0.2);
  EXPECT_NEAR(triangle_bound_general(0.81, 0.04, 0.5), 0.04 + 0.1 + 2.0 * std::sqrt(0.004), 1e-15);
  EXPECT_NEAR(triangle_bound_general(0.81, 0.04, 0.5), 0.26649, 5e-6);
  EXPECT_THROW(triangle_bound_general(0.5, 0.5, 0.0), ContractError);
  EXPECT_THROW(triangle_bound_general(0.5, 0.5, 1.5), ContractError);
}

TEST(InequalityFuzzTest, SmallCampaignHasNoViolations) {
  InequalityFuzzConfig config;
  config.trials = 2000;
  config.seed = 5;
  InequalityFuzzReport report = fuzz_inequality(config);
  EXPECT_EQ(report.checks, 3 * config.trials);
  EXPECT_TRUE(report.violations.empty());
  EXPECT_GE(report.max_slack, 0.0);
  EXPECT_GE(report.min_slack, -1e-9);
  EXPECT_LT(report.max_equal_pair_gap, 1e-10);
}

TEST(InequalityFuzzTest, Deterministic) {
  InequalityFuzzConfig config;
  config.trials = 200;
  InequalityFuzzReport a = fuzz_inequality(config), b = fuzz_inequality(config);
  EXPECT_EQ(a.min_slack, b.min_slack);
  EXPECT_EQ(a.max_slack, b.max_slack);
}

}  // namespace
}  // namespace fidlimit
