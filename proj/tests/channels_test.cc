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


#include "fidlimit/channels.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fidlimit/fidelity.h"

namespace fidlimit {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

ComplexVector vec3(double x, double y, double z) {
  ComplexVector v(3);
  v << x, y, z;
  return v;
}

struct Decoder {
  ComplexVector a0, a1, a2;
  DensityOperator w0, w1, w2;
  MeasurePrepareChannel mp;
};

// Measure the x, y, z axes; prepare a0, a1, a2 respectively.
Decoder three_axis_decoder() {
  const ComplexVector a0 = vec3(std::cos(15 * kDeg), std::sin(15 * kDeg), 0.0);
  const ComplexVector a1 = vec3(std::sin(15 * kDeg), std::cos(15 * kDeg), 0.0);
  const ComplexVector a2 = vec3(1 / std::sqrt(6.0), 1 / std::sqrt(6.0), std::sqrt(2.0 / 3.0));
  std::vector<Projector> axes;
  for (int k = 0; k < 3; ++k) axes.push_back(Projector::onto_columns(PureState::basis(3, k).amplitudes()));
  MeasurePrepareChannel mp(axes, {DensityOperator::from_pure(a0), DensityOperator::from_pure(a1),
                                  DensityOperator::from_pure(a2)});
  DensityOperator w0 = PureState::basis(3, 0).density();
  DensityOperator w1 = PureState::basis(3, 1).density();
  DensityOperator w2(0.5 * (a0 * a0.adjoint() + a1 * a1.adjoint()));
  return {a0, a1, a2, w0, w1, w2, mp};
}

KrausChannel random_kraus(Eigen::Index n, int count, Rng& rng) {
  // Normalize a stack of Gaussian matrices: K_k = G_k S^{-1/2} with S = sum G^dagger G.
  std::vector<ComplexMatrix> g;
  ComplexMatrix s = ComplexMatrix::Zero(n, n);
  for (int k = 0; k < count; ++k) {
    g.push_back(gaussian_matrix(n, n, rng));
    s += g.back().adjoint() * g.back();
  }
  EigenSystem es = eigh(HermitianOperator(0.5 * (s + s.adjoint())));
  ComplexMatrix inv_sqrt =
      es.vectors * es.values.cwiseSqrt().cwiseInverse().cast<Complex>().asDiagonal() * es.vectors.adjoint();
  for (auto& k : g) k = k * inv_sqrt;
  return KrausChannel(g);
}

TEST(KrausChannelTest, RejectsNonTracePreserving) {
  EXPECT_THROW(KrausChannel(std::vector<ComplexMatrix>{ComplexMatrix::Identity(2, 2) * 0.9}), ContractError);
  EXPECT_THROW(KrausChannel(std::vector<ComplexMatrix>{}), ContractError);
}

TEST(ApplyTest, IdentityChannel) {
  Rng rng(1);
  DensityOperator rho = random_density(4, 2, rng);
  EXPECT_LT(max_abs(fidlimit::apply(KrausChannel::identity(4), rho).matrix() - rho.matrix()), 1e-15);
}

TEST(ApplyTest, FullyDepolarizing) {
  Rng rng(2);
  for (int i = 0; i < 10; ++i) {
    DensityOperator out = fidlimit::apply(KrausChannel::fully_depolarizing(2), random_density(2, 2, rng));
    EXPECT_LT(max_abs(out.matrix() - 0.5 * ComplexMatrix::Identity(2, 2)), 1e-14);
  }
}

TEST(ApplyTest, SubnormalizedTraceScalesThrough) {
  Rng rng(3);
  KrausChannel c = random_channel(3, 3, rng);
  DensityOperator rho(0.4 * random_density(3, 3, rng).matrix());
  EXPECT_NEAR(fidlimit::apply(c, rho).trace(), 0.4, 1e-10);
}

TEST(ApplyTest, DimensionMismatch) {
  EXPECT_THROW(fidlimit::apply(KrausChannel::identity(3), DensityOperator::maximally_mixed(2)), ContractError);
}

TEST(ApplyTest, TracePreservedOnSampledChannels) {
  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index n = 2 + trial % 4;
    KrausChannel c = random_channel(n, n, 1 + trial % 5, rng);
    DensityOperator rho = random_density(n, 1 + trial % n, rng);
    ASSERT_LT(std::abs(fidlimit::apply(c, rho).trace() - rho.trace()), 1e-10);
  }
}

TEST(MeasurePrepareTest, ThreeAxisDecoder) {
  const Decoder d = three_axis_decoder();
  KrausChannel k = measure_prepare_as_kraus(d.mp);
  // W0 -> a0 exactly.
  EXPECT_LT(max_abs(fidlimit::apply(k, d.w0).matrix() - d.a0 * d.a0.adjoint()), 1e-15);
  EXPECT_LT(max_abs(fidlimit::apply(k, d.w1).matrix() - d.a1 * d.a1.adjoint()), 1e-15);
  // W2 = (pi0 + pi1)/2 is measured x or y with probability 1/2 each.
  auto probs = d.mp.outcome_probabilities(d.w2);
  EXPECT_NEAR(probs[0], 0.5, 1e-15);
  EXPECT_NEAR(probs[1], 0.5, 1e-15);
  EXPECT_NEAR(probs[2], 0.0, 1e-15);
  DensityOperator out = fidlimit::apply(k, d.w2);
  EXPECT_LT(max_abs(out.matrix() - d.w2.matrix()), 1e-15);
  EXPECT_NEAR(fidelity_pure_mixed(PureState(d.a2), out), 0.25, 1e-14);
}

TEST(MeasurePrepareTest, SingleOutcomeIsConstantChannel) {
  Rng rng(5);
  DensityOperator sigma = random_density(3, 2, rng);
  MeasurePrepareChannel mp({Projector(ComplexMatrix(ComplexMatrix::Identity(2, 2)))}, {sigma});
  KrausChannel k = measure_prepare_as_kraus(mp);
  EXPECT_EQ(k.d_in(), 2);
  EXPECT_EQ(k.d_out(), 3);
  DensityOperator rho(0.7 * random_density(2, 2, rng).matrix());
  EXPECT_LT(max_abs(fidlimit::apply(k, rho).matrix() - 0.7 * sigma.matrix()), 1e-12);
}

TEST(MeasurePrepareTest, OutputIsTheOutcomeMixture) {
  // Recover the mixture weights from the output by least squares over the
  // prepared states and compare with the outcome probabilities.
  Rng rng(6);
  std::vector<Projector> outcomes = {Projector::onto_columns(haar_isometry(4, 2, rng))};
  outcomes.emplace_back(ComplexMatrix(ComplexMatrix::Identity(4, 4) - outcomes[0].matrix()));
  std::vector<DensityOperator> prepared = {random_density(3, 1, rng), random_density(3, 2, rng)};
  MeasurePrepareChannel mp(outcomes, prepared);
  KrausChannel k = measure_prepare_as_kraus(mp);
  for (int trial = 0; trial < 50; ++trial) {
    DensityOperator rho = random_density(4, 4, rng);
    ComplexMatrix out = fidlimit::apply(k, rho).matrix();
    Eigen::MatrixXcd basis(9, 2);
    basis.col(0) = prepared[0].matrix().reshaped();
    basis.col(1) = prepared[1].matrix().reshaped();
    Eigen::VectorXcd w = basis.colPivHouseholderQr().solve(ComplexVector(out.reshaped()));
    const auto probs = mp.outcome_probabilities(rho);
    EXPECT_NEAR(w[0].real(), probs[0], 1e-9);
    EXPECT_NEAR(w[1].real(), probs[1], 1e-9);
    EXPECT_LT(max_abs(out - w[0].real() * prepared[0].matrix() - w[1].real() * prepared[1].matrix()), 1e-9);
  }
}

TEST(MeasurePrepareTest, ValidatesInputs) {
  DensityOperator s = DensityOperator::maximally_mixed(2);
  EXPECT_THROW(MeasurePrepareChannel({Projector::zero(2)}, {s}), ContractError);
  const Projector all(ComplexMatrix(ComplexMatrix::Identity(2, 2)));
  EXPECT_THROW(MeasurePrepareChannel({all}, {DensityOperator(0.5 * s.matrix())}), ContractError);
}

TEST(DilationTest, IdentityChannel) {
  StinespringDilation d = dilate(KrausChannel::identity(3));
  EXPECT_EQ(d.d_anc, 1);
  EXPECT_LT(max_abs(d.unitary - ComplexMatrix::Identity(3, 3)), 1e-12);
}

TEST(DilationTest, ThreeAxisDecoderOnAxisState) {
  const Decoder d = three_axis_decoder();
  StinespringDilation dil = dilate(measure_prepare_as_kraus(d.mp));
  EXPECT_LT(max_abs(dil.unitary.adjoint() * dil.unitary - ComplexMatrix::Identity(dil.unitary.rows(), dil.unitary.rows())),
            1e-10);
  EXPECT_LT(max_abs(apply_dilation(dil, d.w0).matrix() - d.a0 * d.a0.adjoint()), 1e-9);
}

TEST(DilationTest, AgreesWithKrausOnOperatorBasis) {
  Rng rng(7);
  KrausChannel c = random_kraus(3, 3, rng);
  StinespringDilation dil = dilate(c);
  EXPECT_EQ(dil.d_anc, 3);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      ComplexMatrix e = ComplexMatrix::Zero(3, 3);
      e(i, j) = 1.0;
      EXPECT_LT(max_abs(apply_dilation(dil, e) - fidlimit::apply(c, e)), 1e-9);
    }
  }
  for (int trial = 0; trial < 20; ++trial) {
    DensityOperator rho = random_density(3, 1 + trial % 3, rng);
    EXPECT_LT(max_abs(apply_dilation(dil, rho).matrix() - fidlimit::apply(c, rho).matrix()), 1e-9);
  }
}

TEST(DilationTest, AgreesWithKrausOnRandomPairs) {
  Rng rng(8);
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::Index d_in = 1 + trial % 4;
    const Eigen::Index d_out = 1 + (trial / 4) % 3;
    Eigen::Index d_anc = 1 + trial % 3;
    while ((d_in * d_anc) % d_out != 0) ++d_anc;
    KrausChannel c = random_channel(d_in, d_out, d_anc, rng);
    StinespringDilation dil = dilate(c);
    DensityOperator rho = random_density(d_in, 1 + trial % d_in, rng);
    ASSERT_LT(max_abs(apply_dilation(dil, rho).matrix() - fidlimit::apply(c, rho).matrix()), 1e-9) << trial;
  }
}

TEST(RandomChannelTest, TrivialAncillaGivesUnitary) {
  Rng rng(9);
  KrausChannel c = random_channel(3, 3, 1, rng);
  ASSERT_EQ(c.kraus_ops().size(), 1u);
  const ComplexMatrix& u = c.kraus_ops()[0];
  EXPECT_LT(max_abs(u * u.adjoint() - ComplexMatrix::Identity(3, 3)), 1e-12);
}

TEST(RandomChannelTest, SatisfiesChannelInvariants) {
  Rng rng(10);
  for (int trial = 0; trial < 50; ++trial) {
    KrausChannel c = random_channel(2 + trial % 3, 2 + trial % 3, rng);
    ComplexMatrix s = ComplexMatrix::Zero(c.d_in(), c.d_in());
    for (const auto& k : c.kraus_ops()) s += k.adjoint() * k;
    EXPECT_LT(max_abs(s - ComplexMatrix::Identity(c.d_in(), c.d_in())), 1e-8);
    EXPECT_TRUE(c.is_completely_positive());
    EXPECT_GE(eigh(c.choi()).values.minCoeff(), -1e-8);
  }
  EXPECT_THROW(random_channel(3, 2, 1, rng), ContractError);
  EXPECT_THROW(random_channel(0, 2, 1, rng), ContractError);
}

TEST(RandomChannelTest, AverageOutputIsMaximallyMixed) {
  Rng rng(11);
  DensityOperator rho = random_pure_state(3, rng).density();
  ComplexMatrix mean = ComplexMatrix::Zero(3, 3);
  const int samples = 10000;
  for (int i = 0; i < samples; ++i) mean += fidlimit::apply(random_channel(3, 3, rng), rho).matrix();
  mean /= samples;
  EXPECT_LT(max_abs(mean - ComplexMatrix::Identity(3, 3) / 3.0), 0.02);
}

TEST(ChoiTest, ConstructedChannelsArePositive) {
  const Decoder d = three_axis_decoder();
  EXPECT_TRUE(measure_prepare_as_kraus(d.mp).is_completely_positive());
  EXPECT_TRUE(KrausChannel::fully_depolarizing(3).is_completely_positive());
  Rng rng(12);
  EXPECT_TRUE(KrausChannel::unitary(haar_unitary(4, rng)).is_completely_positive());
  // Choi of the identity channel is the unnormalized maximally entangled projector.
  ComplexMatrix choi = KrausChannel::identity(2).choi();
  EXPECT_NEAR(choi(0, 0).real(), 1.0, 1e-15);
  EXPECT_NEAR(choi(0, 3).real(), 1.0, 1e-15);
  EXPECT_NEAR(choi(3, 3).real(), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(choi(1, 1)), 0.0, 1e-15);
}

TEST(EmbedTest, Examples) {
  Rng rng(13);
  DensityOperator rho = random_density(3, 2, rng);
  EXPECT_EQ(embed_channel_states(rho, 3).matrix(), rho.matrix());
  DensityOperator one(ComplexMatrix::Ones(1, 1));
  ComplexMatrix expected = ComplexMatrix::Zero(3, 3);
  expected(0, 0) = 1.0;
  EXPECT_EQ(embed_channel_states(one, 3).matrix(), expected);
  // Axis projector on the 2-dim support, carried into three dimensions.
  ComplexMatrix x_axis = ComplexMatrix::Zero(2, 2);
  x_axis(0, 0) = 1.0;
  DensityOperator w0 = embed_channel_states(DensityOperator(x_axis), 3);
  EXPECT_EQ(w0.matrix(), expected);
  EXPECT_NEAR(w0.trace(), 1.0, 1e-15);
  EXPECT_THROW(embed_channel_states(rho, 2), ContractError);
}

}  // namespace
}  // namespace fidlimit
