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

#include <cmath>
#include <sstream>

namespace fidlimit {

KrausChannel::KrausChannel(std::vector<ComplexMatrix> kraus_ops) : ops_(std::move(kraus_ops)) {
  if (ops_.empty()) throw ContractError("Kraus channel needs at least one operator");
  d_out_ = ops_.front().rows();
  d_in_ = ops_.front().cols();
  if (d_in_ < 1 || d_out_ < 1) throw ContractError("Kraus operators must be non-empty");
  ComplexMatrix sum = ComplexMatrix::Zero(d_in_, d_in_);
  for (const auto& k : ops_) {
    if (k.rows() != d_out_ || k.cols() != d_in_) throw ContractError("Kraus operators have inconsistent shapes");
    if (!k.allFinite()) throw ContractError("Kraus operator has non-finite entries");
    sum.noalias() += k.adjoint() * k;
  }
  double err = max_abs(sum - ComplexMatrix::Identity(d_in_, d_in_));
  if (err > kTraceTolerance) {
    std::ostringstream os;
    os << "Kraus operators are not trace preserving (max |sum K^dagger K - I| = " << err << ")";
    throw ContractError(os.str());
  }
}

KrausChannel KrausChannel::identity(Eigen::Index dim) {
  return KrausChannel({ComplexMatrix::Identity(dim, dim)});
}

KrausChannel KrausChannel::unitary(const ComplexMatrix& u) { return KrausChannel({u}); }

KrausChannel KrausChannel::fully_depolarizing(Eigen::Index dim) {
  std::vector<ComplexMatrix> ops;
  const double amp = 1.0 / std::sqrt(static_cast<double>(dim));
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      ComplexMatrix k = ComplexMatrix::Zero(dim, dim);
      k(i, j) = amp;
      ops.push_back(std::move(k));
    }
  }
  return KrausChannel(std::move(ops));
}

ComplexMatrix KrausChannel::choi() const {
  ComplexMatrix out = ComplexMatrix::Zero(d_in_ * d_out_, d_in_ * d_out_);
  for (Eigen::Index i = 0; i < d_in_; ++i) {
    for (Eigen::Index j = 0; j < d_in_; ++j) {
      ComplexMatrix unit = ComplexMatrix::Zero(d_in_, d_in_);
      unit(i, j) = 1.0;
      out.block(i * d_out_, j * d_out_, d_out_, d_out_) = fidlimit::apply(*this, unit);
    }
  }
  return out;
}

bool KrausChannel::is_completely_positive(double tolerance) const {
  EigenSystem es = eigh(choi());
  return es.values.minCoeff() >= -tolerance;
}

ComplexMatrix apply(const KrausChannel& channel, const ComplexMatrix& x) {
  if (x.rows() != channel.d_in() || x.cols() != channel.d_in()) {
    throw ContractError("apply: input dimension does not match channel");
  }
  ComplexMatrix out = ComplexMatrix::Zero(channel.d_out(), channel.d_out());
  for (const auto& k : channel.kraus_ops()) out.noalias() += k * x * k.adjoint();
  return out;
}

DensityOperator apply(const KrausChannel& channel, const DensityOperator& rho) {
  return DensityOperator(apply(channel, rho.matrix()));
}

StinespringDilation dilate(const KrausChannel& channel) {
  const Eigen::Index d_in = channel.d_in();
  const Eigen::Index d_out = channel.d_out();
  const auto num_kraus = static_cast<Eigen::Index>(channel.kraus_ops().size());

  Eigen::Index d_anc = 1;
  while ((d_in * d_anc) % d_out != 0 || d_in * d_anc < d_out * num_kraus) ++d_anc;
  const Eigen::Index total = d_in * d_anc;
  const Eigen::Index d_env = total / d_out;

  // V|i> = sum_k K_k|i> (x) |k>, stored in the d_out (x) d_env ordering.
  ComplexMatrix isometry = ComplexMatrix::Zero(total, d_in);
  for (Eigen::Index k = 0; k < num_kraus; ++k) {
    const ComplexMatrix& op = channel.kraus_ops()[k];
    for (Eigen::Index o = 0; o < d_out; ++o) isometry.row(o * d_env + k) = op.row(o);
  }

  Eigen::HouseholderQR<ComplexMatrix> qr(isometry);
  ComplexMatrix q = qr.householderQ();

  ComplexMatrix u(total, total);
  Eigen::Index next_free = d_in;
  for (Eigen::Index col = 0; col < total; ++col) {
    const Eigen::Index input = col / d_anc;
    const Eigen::Index anc = col % d_anc;
    u.col(col) = anc == 0 ? ComplexVector(isometry.col(input)) : ComplexVector(q.col(next_free++));
  }

  StinespringDilation out;
  out.unitary = std::move(u);
  out.ancilla_state = PureState::basis(d_anc, 0);
  out.d_in = d_in;
  out.d_anc = d_anc;
  out.d_out = d_out;
  out.d_env = d_env;
  return out;
}

ComplexMatrix apply_dilation(const StinespringDilation& dilation, const ComplexMatrix& rho) {
  if (rho.rows() != dilation.d_in || rho.cols() != dilation.d_in) {
    throw ContractError("apply_dilation: input dimension does not match dilation");
  }
  ComplexMatrix joint = tensor(rho, dilation.ancilla_state.projector());
  ComplexMatrix evolved = dilation.unitary * joint * dilation.unitary.adjoint();
  return partial_trace(evolved, {dilation.d_out, dilation.d_env}, Subsystem::kSecond);
}

DensityOperator apply_dilation(const StinespringDilation& dilation, const DensityOperator& rho) {
  return DensityOperator(apply_dilation(dilation, rho.matrix()));
}

MeasurePrepareChannel::MeasurePrepareChannel(std::vector<Projector> outcome_projectors,
                                             std::vector<DensityOperator> prepared_outputs)
    : projectors_(std::move(outcome_projectors)), outputs_(std::move(prepared_outputs)) {
  if (projectors_.empty() || projectors_.size() != outputs_.size()) {
    throw ContractError("measure-prepare channel needs one prepared output per outcome");
  }
  const Eigen::Index n = projectors_.front().dim();
  ComplexMatrix sum = ComplexMatrix::Zero(n, n);
  for (const auto& p : projectors_) {
    if (p.dim() != n) throw ContractError("outcome projectors have inconsistent dimensions");
    sum += p.matrix();
  }
  if (max_abs(sum - ComplexMatrix::Identity(n, n)) > tol::kProjector) {
    throw ContractError("outcome projectors do not sum to the identity");
  }
  const Eigen::Index d_out = outputs_.front().dim();
  for (const auto& s : outputs_) {
    if (s.dim() != d_out) throw ContractError("prepared outputs have inconsistent dimensions");
    if (std::abs(s.trace() - 1.0) > tol::kTrace) throw ContractError("prepared outputs must be normalized");
  }
}

std::vector<double> MeasurePrepareChannel::outcome_probabilities(const DensityOperator& rho) const {
  std::vector<double> probs;
  probs.reserve(projectors_.size());
  for (const auto& p : projectors_) probs.push_back((p.matrix() * rho.matrix()).trace().real());
  return probs;
}

KrausChannel measure_prepare_as_kraus(const MeasurePrepareChannel& mp) {
  std::vector<ComplexMatrix> ops;
  for (std::size_t o = 0; o < mp.outcome_projectors().size(); ++o) {
    const Projector& p = mp.outcome_projectors()[o];
    EigenSystem range = eigh(p.matrix());
    EigenSystem prep = eigh(mp.prepared_outputs()[o].op());
    for (Eigen::Index m = 0; m < p.rank(); ++m) {
      for (Eigen::Index l = 0; l < prep.values.size(); ++l) {
        if (prep.values[l] <= 0.0) continue;
        ops.push_back(std::sqrt(prep.values[l]) * prep.vectors.col(l) * range.vectors.col(m).adjoint());
      }
    }
  }
  return KrausChannel(std::move(ops));
}

KrausChannel random_channel(Eigen::Index d_in, Eigen::Index d_out, Eigen::Index d_anc, Rng& rng) {
  if (d_in < 1 || d_out < 1 || d_anc < 1) throw ContractError("random_channel: dimensions must be >= 1");
  const Eigen::Index total = d_in * d_anc;
  if (total % d_out != 0) throw ContractError("random_channel: d_out must divide d_in·d_anc");
  const Eigen::Index d_env = total / d_out;
  // Columns of U with the ancilla in |0>.
  ComplexMatrix v = haar_isometry(total, d_in, rng);
  std::vector<ComplexMatrix> ops(d_env, ComplexMatrix(d_out, d_in));
  for (Eigen::Index e = 0; e < d_env; ++e) {
    for (Eigen::Index o = 0; o < d_out; ++o) ops[e].row(o) = v.row(o * d_env + e);
  }
  return KrausChannel(std::move(ops));
}

KrausChannel random_channel(Eigen::Index d_in, Eigen::Index d_out, Rng& rng) {
  return random_channel(d_in, d_out, d_in * d_out, rng);
}

DensityOperator embed_channel_states(const DensityOperator& w, Eigen::Index target_dim) {
  if (w.dim() > target_dim) throw ContractError("embed_channel_states: state dimension exceeds target");
  ComplexMatrix out = ComplexMatrix::Zero(target_dim, target_dim);
  out.topLeftCorner(w.dim(), w.dim()) = w.matrix();
  return DensityOperator(out);
}

}  // namespace fidlimit
