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

#ifndef FIDLIMIT_CHANNELS_H_
#define FIDLIMIT_CHANNELS_H_

#include <vector>

#include "fidlimit/operator_core.h"

namespace fidlimit {

/// Trace-preserving completely positive map in Kraus form. Construction
/// checks sum K^dagger K = I within 1e-8; complete positivity holds by form
/// and is re-checkable through `choi()`.
class KrausChannel {
 public:
  static constexpr double kTraceTolerance = 1e-8;

  KrausChannel() = default;
  explicit KrausChannel(std::vector<ComplexMatrix> kraus_ops);

  static KrausChannel identity(Eigen::Index dim);
  static KrausChannel unitary(const ComplexMatrix& u);
  /// rho -> Tr(rho) I/dim
  static KrausChannel fully_depolarizing(Eigen::Index dim);

  const std::vector<ComplexMatrix>& kraus_ops() const { return ops_; }
  Eigen::Index d_in() const { return d_in_; }
  Eigen::Index d_out() const { return d_out_; }

  /// Choi matrix sum_ij |i><j| (x) E(|i><j|), input factor first.
  ComplexMatrix choi() const;
  bool is_completely_positive(double tolerance = 1e-8) const;

 private:
  std::vector<ComplexMatrix> ops_;
  Eigen::Index d_in_ = 0;
  Eigen::Index d_out_ = 0;
};

DensityOperator apply(const KrausChannel& channel, const DensityOperator& rho);
/// Unchecked form for arbitrary input operators (used on operator bases).
ComplexMatrix apply(const KrausChannel& channel, const ComplexMatrix& x);

/// Unitary U on C^{d_in} (x) C^{d_anc} with the ancilla prepared in its first
/// basis state. The output factor is the first d_out of the split
/// d_in·d_anc = d_out·d_env; the environment factor is traced out.
struct StinespringDilation {
  ComplexMatrix unitary;
  PureState ancilla_state;
  Eigen::Index d_in = 0;
  Eigen::Index d_anc = 0;
  Eigen::Index d_out = 0;
  Eigen::Index d_env = 0;
};

/// Builds the isometry sum_k K_k (x) |k> and completes it to a unitary by an
/// orthonormal extension. For d_in = d_out the ancilla dimension equals the
/// number of Kraus operators.
StinespringDilation dilate(const KrausChannel& channel);

/// w = Tr_env U (rho (x) |phi0><phi0|) U^dagger
ComplexMatrix apply_dilation(const StinespringDilation& dilation, const ComplexMatrix& rho);
DensityOperator apply_dilation(const StinespringDilation& dilation, const DensityOperator& rho);

/// Measure {P_o}, then prepare sigma_o.
class MeasurePrepareChannel {
 public:
  MeasurePrepareChannel(std::vector<Projector> outcome_projectors,
                        std::vector<DensityOperator> prepared_outputs);

  const std::vector<Projector>& outcome_projectors() const { return projectors_; }
  const std::vector<DensityOperator>& prepared_outputs() const { return outputs_; }

  /// Outcome probabilities Tr(P_o rho).
  std::vector<double> outcome_probabilities(const DensityOperator& rho) const;

 private:
  std::vector<Projector> projectors_;
  std::vector<DensityOperator> outputs_;
};

/// Kraus operators sqrt(mu_l) |f_l><e_m| for each outcome, with {e_m} an
/// orthonormal basis of the outcome's range and (mu_l, f_l) the eigensystem
/// of the prepared state.
KrausChannel measure_prepare_as_kraus(const MeasurePrepareChannel& mp);

/// Channel from a Haar-random dilation: the ancilla starts in |0>, the joint
/// space d_in·d_anc is split as d_out·d_env and the environment is discarded.
/// Only the isometric part of the unitary is drawn (its distribution is the
/// same as that of the relevant columns of a Haar unitary).
KrausChannel random_channel(Eigen::Index d_in, Eigen::Index d_out, Eigen::Index d_anc, Rng& rng);
/// Default ancilla dimension d_in·d_out.
KrausChannel random_channel(Eigen::Index d_in, Eigen::Index d_out, Rng& rng);

/// Pads a d-dimensional operator into the leading block of an n-dimensional one.
DensityOperator embed_channel_states(const DensityOperator& w, Eigen::Index target_dim);

}  // namespace fidlimit

#endif  // FIDLIMIT_CHANNELS_H_
