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

#include "fidlimit/coding.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

namespace fidlimit {

namespace {

constexpr double kBoundSlack = 1e-9;
constexpr double kChainTolerance = 1e-10;

double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }
double rad2deg(double rad) { return rad * 180.0 / std::numbers::pi; }

bool is_real_matrix(const ComplexMatrix& m) { return m.imag().cwiseAbs().maxCoeff() <= 1e-14; }

// F(U) = sum_i p_i <a_i| U W_i U^dagger |a_i>
class UnitaryObjective {
 public:
  UnitaryObjective(const SourceEnsemble& e, const Encoding& enc) : e_(e), enc_(enc) {
    if (enc.dim() != e.dim() || enc.channel_states().size() != e.size()) {
      throw ContractError("encoding does not match the source ensemble");
    }
  }

  double value(const ComplexMatrix& u) const {
    double f = 0.0;
    for (std::size_t i = 0; i < e_.size(); ++i) {
      ComplexVector v = u.adjoint() * e_.signals()[i].state.amplitudes();
      f += e_.signals()[i].probability * v.dot(enc_.channel_states()[i].matrix() * v).real();
    }
    return f;
  }

  // Ascent direction sum_i p_i [pi_i, U W_i U^dagger] (anti-Hermitian).
  ComplexMatrix gradient(const ComplexMatrix& u) const {
    const Eigen::Index n = u.rows();
    ComplexMatrix g = ComplexMatrix::Zero(n, n);
    for (std::size_t i = 0; i < e_.size(); ++i) {
      ComplexMatrix x = u * enc_.channel_states()[i].matrix() * u.adjoint();
      ComplexMatrix pi = e_.signals()[i].state.projector();
      g += e_.signals()[i].probability * (pi * x - x * pi);
    }
    return g;
  }

 private:
  const SourceEnsemble& e_;
  const Encoding& enc_;
};

// Maximizes phi on [0, hi] by golden-section search.
double golden_max(const std::function<double(double)>& phi, double lo, double hi, double tol) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = phi(c), fd = phi(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d; d = c; fd = fc;
      c = b - r * (b - a); fc = phi(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + r * (b - a); fd = phi(d);
    }
  }
  return 0.5 * (a + b);
}

// Anti-Hermitian generator basis; real antisymmetric only for rotations.
std::vector<ComplexMatrix> generator_basis(Eigen::Index n, bool rotations_only) {
  std::vector<ComplexMatrix> basis;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      ComplexMatrix a = ComplexMatrix::Zero(n, n);
      a(i, j) = 1.0;
      a(j, i) = -1.0;
      basis.push_back(a);
      if (!rotations_only) {
        ComplexMatrix s = ComplexMatrix::Zero(n, n);
        s(i, j) = Complex(0, 1);
        s(j, i) = Complex(0, 1);
        basis.push_back(s);
      }
    }
    if (!rotations_only) {
      ComplexMatrix h = ComplexMatrix::Zero(n, n);
      h(i, i) = Complex(0, 1);
      basis.push_back(h);
    }
  }
  return basis;
}

ComplexMatrix random_rotation(Eigen::Index n, Rng& rng) {
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) g(i, j) = rng.normal();
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  for (Eigen::Index j = 0; j < n; ++j) {
    if (qr.matrixQR()(j, j) < 0) q.col(j) *= -1.0;
  }
  if (q.determinant() < 0) q.col(0) *= -1.0;
  return q.cast<Complex>();
}

struct AscentResult {
  ComplexMatrix u;
  double value;
};

AscentResult ascend(const UnitaryObjective& obj, ComplexMatrix u, bool rotations_only, int max_iterations) {
  double value = obj.value(u);
  double step = 0.1;
  for (int it = 0; it < max_iterations; ++it) {
    ComplexMatrix g = obj.gradient(u);
    if (rotations_only) g = g.real().cast<Complex>();
    g = 0.5 * (g - g.adjoint()).eval();
    const double gnorm = g.norm();
    if (gnorm < 1e-13) break;
    g /= gnorm;
    auto phi = [&](double t) { return obj.value(exp_antihermitian(t * g) * u); };
    // Expand the bracket while the objective keeps increasing.
    double hi = step;
    double prev = value;
    double cur = phi(hi);
    while (cur > prev && hi < 4.0) {
      prev = cur;
      hi *= 2.0;
      cur = phi(hi);
    }
    const double t = golden_max(phi, 0.0, hi, 1e-14 + 1e-9 * hi);
    const double next = phi(t);
    if (next <= value) break;
    u = exp_antihermitian(t * g) * u;
    const double gain = next - value;
    value = next;
    step = std::clamp(4.0 * t, 1e-12, 1.0);
    if (gain < 1e-17) break;
  }

  // Coordinate polish along each generator.
  const auto basis = generator_basis(u.rows(), rotations_only);
  for (double h = 1e-3; h >= 1e-11; h *= 0.1) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (const auto& b : basis) {
        for (double sign : {1.0, -1.0}) {
          ComplexMatrix cand = exp_antihermitian(sign * h * b) * u;
          double v = obj.value(cand);
          if (v > value) {
            value = v;
            u = std::move(cand);
            improved = true;
          }
        }
      }
    }
  }
  return {u, value};
}

double max_eigenphase_deg(const ComplexMatrix& u) {
  const Eigen::Index n = u.rows();
  Complex det = u.determinant();
  Complex root = std::polar(1.0, -std::arg(det) / static_cast<double>(n));
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(u * root);
  double best = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) best = std::max(best, std::abs(std::arg(solver.eigenvalues()[i])));
  return rad2deg(best);
}

}  // namespace

SourceEnsemble::SourceEnsemble(std::vector<Signal> signals) : signals_(std::move(signals)) {
  if (signals_.empty()) throw ContractError("ensemble needs at least one signal");
  dim_ = signals_.front().state.dim();
  double total = 0.0;
  for (const auto& s : signals_) {
    if (s.state.dim() != dim_) throw ContractError("ensemble signals have inconsistent dimensions");
    if (!(s.probability >= 0.0)) throw ContractError("ensemble probabilities must be nonnegative");
    if (std::abs(s.state.amplitudes().squaredNorm() - 1.0) > 1e-12) throw ContractError("ensemble signals must be normalized");
    total += s.probability;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream os;
    os << "ensemble probabilities sum to " << total << ", not 1";
    throw ContractError(os.str());
  }
}

bool SourceEnsemble::is_real() const {
  return std::all_of(signals_.begin(), signals_.end(), [](const Signal& s) {
    return s.state.amplitudes().imag().cwiseAbs().maxCoeff() <= 1e-14;
  });
}

Encoding::Encoding(std::vector<DensityOperator> channel_states, Projector support)
    : states_(std::move(channel_states)), support_(std::move(support)) {
  for (const auto& w : states_) {
    if (w.dim() != support_.dim()) throw ContractError("channel state dimension does not match support");
    if (std::abs(w.trace() - 1.0) > tol::kTrace) throw ContractError("channel states must have unit trace");
    const ComplexMatrix& g = support_.matrix();
    double inside = (g * w.matrix() * g).trace().real();
    if (std::abs(inside - w.trace()) > tol::kTrace) throw ContractError("channel state leaves the declared support");
  }
}

Encoding Encoding::from_subspace(const ComplexMatrix& isometry, const std::vector<DensityOperator>& local_states) {
  if (max_abs(isometry.adjoint() * isometry - ComplexMatrix::Identity(isometry.cols(), isometry.cols())) > 1e-10) {
    throw ContractError("from_subspace: columns are not orthonormal");
  }
  std::vector<DensityOperator> states;
  states.reserve(local_states.size());
  for (const auto& s : local_states) {
    if (s.dim() != isometry.cols()) throw ContractError("from_subspace: local state dimension mismatch");
    states.emplace_back(isometry * s.matrix() * isometry.adjoint());
  }
  return Encoding(std::move(states), Projector::onto_columns(isometry));
}

DensityOperator ensemble_density(const SourceEnsemble& e) {
  ComplexMatrix rho = ComplexMatrix::Zero(e.dim(), e.dim());
  for (const auto& s : e.signals()) rho += s.probability * s.state.projector();
  return DensityOperator(rho);
}

double eta(const DensityOperator& rho, int d) {
  if (d < 1) throw ContractError("eta: d must be >= 1");
  if (d >= rho.dim()) return 1.0;
  return eigh(rho.op()).values.head(d).sum();
}

ProjectedEnsemble project_ensemble(const SourceEnsemble& e, int d) {
  if (d < 1) throw ContractError("project_ensemble: d must be >= 1");
  const Eigen::Index n = e.dim();
  DensityOperator rho = ensemble_density(e);
  EigenSystem es = eigh(rho.op());

  ProjectedEnsemble pe;
  pe.d = d;
  pe.rho_eigenvalues = es.values;
  if (d >= n) {
    pe.lambda_projector = Projector::zero(n);
    pe.eta = 1.0;
    pe.lambda_next = 0.0;
  } else {
    pe.lambda_projector = Projector::onto_columns(es.vectors.rightCols(n - d));
    pe.eta = es.values.head(d).sum();
    pe.lambda_next = es.values[d];
  }
  const ComplexMatrix& lambda = pe.lambda_projector.matrix();
  ComplexMatrix tilde = ComplexMatrix::Zero(n, n);
  for (const auto& s : e.signals()) {
    PureState projected(lambda * s.state.amplitudes());
    pe.projected_signals.push_back(projected.density());
    tilde += s.probability * projected.projector();
    pe.projected_amplitudes.push_back(std::move(projected));
  }
  pe.rho_tilde = DensityOperator(tilde);
  return pe;
}

double SqrtFidelityChain::max_disagreement() const {
  return std::max({std::abs(per_signal - trace_rho_lambda), std::abs(per_signal - one_minus_eta),
                   std::abs(trace_rho_lambda - one_minus_eta)});
}

SqrtFidelityChain sqrt_fid_projected_average(const ProjectedEnsemble& pe, const SourceEnsemble& e) {
  if (pe.projected_signals.size() != e.size()) throw ContractError("projected ensemble does not match source");
  SqrtFidelityChain chain;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const Signal& s = e.signals()[i];
    chain.per_signal += s.probability * std::sqrt(fidelity_pure_mixed(s.state, pe.projected_signals[i]).value());
  }
  chain.trace_rho_lambda = (ensemble_density(e).matrix() * pe.lambda_projector.matrix()).trace().real();
  chain.one_minus_eta = 1.0 - pe.eta;
  if (chain.max_disagreement() > kChainTolerance) {
    std::ostringstream os;
    os << "square-root fidelity routes disagree: " << chain.per_signal << ", " << chain.trace_rho_lambda
       << ", " << chain.one_minus_eta;
    throw ContractError(os.str());
  }
  return chain;
}

std::vector<DensityOperator> decode_all(const SourceEnsemble& e, const CodingScheme& scheme) {
  const Encoding& enc = scheme.encoding;
  if (enc.channel_states().size() != e.size()) throw ContractError("encoding has the wrong number of channel states");
  if (scheme.decoder.d_in() != enc.dim() || scheme.decoder.d_out() != e.dim()) {
    throw ContractError("decoder dimensions are incompatible with the encoding and source");
  }
  std::vector<DensityOperator> out;
  out.reserve(e.size());
  for (const auto& w : enc.channel_states()) out.push_back(apply(scheme.decoder, w));
  return out;
}

double average_fidelity(const SourceEnsemble& e, const CodingScheme& scheme) {
  std::vector<DensityOperator> decoded = decode_all(e, scheme);
  double f = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    f += e.signals()[i].probability * fidelity_pure_mixed(e.signals()[i].state, decoded[i]).value();
  }
  return f;
}

BoundChain xyz_decomposition(const SourceEnsemble& e, const CodingScheme& scheme, int d) {
  ProjectedEnsemble pe = project_ensemble(e, d);
  std::vector<DensityOperator> decoded = decode_all(e, scheme);
  BoundChain chain;
  chain.eta = pe.eta;
  chain.d_lambda_next = d * pe.lambda_next;
  chain.max_termwise_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < e.size(); ++i) {
    const double p = e.signals()[i].probability;
    const double f = fidelity_pure_mixed(e.signals()[i].state, decoded[i]);
    const double x = fidelity_pure_mixed(pe.projected_amplitudes[i], decoded[i]);
    const double f_proj = fidelity_pure_mixed(e.signals()[i].state, pe.projected_signals[i]);
    const double y = 2.0 * (1.0 - std::sqrt(f_proj));
    const double z = 2.0 * std::sqrt(std::max(0.0, x * y));
    chain.f_bar += p * f;
    chain.x_bar += p * x;
    chain.y_bar += p * y;
    chain.z_bar += p * z;
    // Per-term fidelity inequality with rho1 = pi_i, rho2 = pi~_i, rho3 = w_i.
    chain.max_termwise_excess = std::max(chain.max_termwise_excess, f - triangle_bound(f_proj, x));
  }
  return chain;
}

Encoding topd_encoder(const SourceEnsemble& e, int d) {
  const Eigen::Index n = e.dim();
  if (d < 1 || d > n) throw ContractError("topd_encoder: need 1 <= d <= n");
  EigenSystem es = eigh(ensemble_density(e).op());
  ComplexMatrix top = es.vectors.leftCols(d);
  ComplexMatrix gamma = top * top.adjoint();
  std::vector<DensityOperator> states;
  for (const auto& s : e.signals()) {
    ComplexVector projected = gamma * s.state.amplitudes();
    const double weight = projected.squaredNorm();
    if (weight < 1e-12) {
      states.push_back(DensityOperator::from_pure(es.vectors.col(0)));
    } else {
      states.push_back(DensityOperator::from_pure(projected / std::sqrt(weight)));
    }
  }
  return Encoding(std::move(states), Projector::onto_columns(top));
}

DecoderOptimum optimize_unitary_decoder(const SourceEnsemble& e, const Encoding& enc,
                                        const DecoderOptimizationOptions& options) {
  UnitaryObjective obj(e, enc);
  const Eigen::Index n = e.dim();
  bool rotations = options.search == DecoderSearch::kRotation;
  if (options.search == DecoderSearch::kAuto) {
    rotations = e.is_real() && std::all_of(enc.channel_states().begin(), enc.channel_states().end(),
                                           [](const DensityOperator& w) { return is_real_matrix(w.matrix()); });
  }

  ComplexMatrix identity = ComplexMatrix::Identity(n, n);
  DecoderOptimum best;
  best.identity_fidelity = obj.value(identity);
  best.unitary = identity;
  best.fidelity = best.identity_fidelity;

  // Symmetries of the encoded states leave several optima with equal value;
  // among those within kTieTolerance the smallest rotation is reported.
  constexpr double kTieTolerance = 1e-12;
  best.angle_deg = 0.0;
  Rng rng(options.seed);
  for (int r = 0; r <= options.restarts; ++r) {
    ComplexMatrix start = r == 0 ? identity : (rotations ? random_rotation(n, rng) : haar_unitary(n, rng));
    AscentResult res = ascend(obj, start, rotations, options.max_iterations);
    const double angle = max_eigenphase_deg(res.u);
    const bool better = res.value > best.fidelity + kTieTolerance;
    const bool tie_smaller = std::abs(res.value - best.fidelity) <= kTieTolerance && angle < best.angle_deg;
    if (better || tie_smaller) {
      best.fidelity = res.value;
      best.unitary = res.u;
      best.angle_deg = angle;
    }
  }
  return best;
}

ComplexMatrix rotation3(const Eigen::Vector3d& axis, double angle_rad) {
  Eigen::Matrix3d r = Eigen::AngleAxisd(angle_rad, axis.normalized()).toRotationMatrix();
  return r.cast<Complex>();
}

TiltOptimum optimize_tilt_toward(const SourceEnsemble& e, const Encoding& enc, const Eigen::Vector3d& target) {
  if (e.dim() != 3 || enc.d() != 2) throw ContractError("optimize_tilt_toward: needs a rank-2 encoding in dimension 3");
  UnitaryObjective obj(e, enc);
  EigenSystem es = eigh(enc.support().matrix());
  Eigen::Vector3d normal = es.vectors.col(2).real();
  normal.normalize();
  const double out_of_plane = normal.dot(target);
  if (out_of_plane < 0) normal = -normal;
  Eigen::Vector3d in_plane = target - normal.dot(target) * normal;
  if (in_plane.norm() < 1e-12) throw ContractError("optimize_tilt_toward: target is normal to the support plane");
  Eigen::Vector3d axis = in_plane.normalized().cross(normal);

  auto phi = [&](double angle) { return obj.value(rotation3(axis, angle)); };
  // Coarse scan over [-10°, 10°], then golden-section refinement around the best cell.
  const double span = deg2rad(10.0);
  const int cells = 2000;
  double best_angle = -span;
  double best_value = phi(best_angle);
  for (int k = 1; k <= cells; ++k) {
    double a = -span + 2.0 * span * k / cells;
    double v = phi(a);
    if (v > best_value) {
      best_value = v;
      best_angle = a;
    }
  }
  const double cell = 2.0 * span / cells;
  double refined = golden_max(phi, best_angle - cell, best_angle + cell, 1e-13);

  TiltOptimum out;
  out.angle_deg = rad2deg(refined);
  out.fidelity = phi(refined);
  out.axis = axis;
  return out;
}

AppendixInstance appendix_ensemble() {
  const double c = std::cos(deg2rad(15.0));
  const double s = std::sin(deg2rad(15.0));
  ComplexVector a0(3), a1(3), a2(3);
  a0 << c, s, 0.0;
  a1 << s, c, 0.0;
  a2 << 1.0 / std::sqrt(6.0), 1.0 / std::sqrt(6.0), std::sqrt(2.0 / 3.0);

  SourceEnsemble ensemble({{0.49, PureState(a0)}, {0.49, PureState(a1)}, {0.02, PureState(a2)}});

  // Channel states on the 2-dim x-y support, then carried into R^3.
  ComplexMatrix x_axis = ComplexMatrix::Zero(2, 2);
  x_axis(0, 0) = 1.0;
  ComplexMatrix y_axis = ComplexMatrix::Zero(2, 2);
  y_axis(1, 1) = 1.0;
  ComplexVector a0_local = a0.head(2);
  ComplexVector a1_local = a1.head(2);
  ComplexMatrix mixture = 0.5 * a0_local * a0_local.adjoint() + 0.5 * a1_local * a1_local.adjoint();
  std::vector<DensityOperator> states = {
      embed_channel_states(DensityOperator(x_axis), 3),
      embed_channel_states(DensityOperator(y_axis), 3),
      embed_channel_states(DensityOperator(mixture), 3),
  };
  ComplexMatrix support = ComplexMatrix::Zero(3, 3);
  support(0, 0) = 1.0;
  support(1, 1) = 1.0;
  Encoding encoding(std::move(states), Projector(support));

  std::vector<Projector> outcomes;
  for (Eigen::Index k = 0; k < 3; ++k) outcomes.emplace_back(PureState::basis(3, k).projector());
  std::vector<DensityOperator> prepared = {DensityOperator::from_pure(a0), DensityOperator::from_pure(a1),
                                           DensityOperator::from_pure(a2)};
  MeasurePrepareChannel decoder(std::move(outcomes), std::move(prepared));
  return {std::move(ensemble), std::move(encoding), std::move(decoder)};
}

std::vector<std::pair<int, int>> default_fuzz_dims() {
  std::vector<std::pair<int, int>> dims;
  for (int n = 3; n <= 6; ++n) {
    for (int d = 1; d < n; ++d) dims.emplace_back(n, d);
  }
  return dims;
}

FuzzTrial fuzz_trial(const FuzzConfig& config, std::int64_t trial) {
  const auto dims = config.dims.empty() ? default_fuzz_dims() : config.dims;
  const auto [n, d] = dims[static_cast<std::size_t>(trial) % dims.size()];
  if (n < 1 || d < 1) throw ContractError("fuzz: dimensions must be positive");
  Rng rng = Rng::child(config.seed, static_cast<std::uint64_t>(trial));

  const int max_signals = config.max_signals > 0 ? config.max_signals : n + 2;
  const int m = rng.uniform_int(std::min(config.min_signals, max_signals), max_signals);
  std::vector<double> probs = rng.simplex(m);
  std::vector<Signal> signals;
  for (int i = 0; i < m; ++i) signals.push_back({probs[i], random_pure_state(n, rng)});
  // Simplex weights can miss unit sum by an ulp or two; renormalize the last.
  double head = 0.0;
  for (int i = 0; i + 1 < m; ++i) head += signals[i].probability;
  signals.back().probability = std::max(0.0, 1.0 - head);
  SourceEnsemble ensemble(std::move(signals));

  const int channel_dim = std::min(d, n);
  CodingScheme scheme;
  if (config.scheme == FuzzConfig::Scheme::kTopdIdentity) {
    scheme.encoding = topd_encoder(ensemble, channel_dim);
    scheme.decoder = KrausChannel::identity(n);
  } else {
    ComplexMatrix subspace = haar_isometry(n, channel_dim, rng);
    std::vector<DensityOperator> local;
    for (int i = 0; i < m; ++i) local.push_back(random_density(channel_dim, rng.uniform_int(1, channel_dim), rng));
    scheme.encoding = Encoding::from_subspace(subspace, local);
    const int anc = config.ancilla_dim > 0 ? config.ancilla_dim : n * n;
    scheme.decoder = random_channel(n, n, anc, rng);
  }

  FuzzTrial out;
  out.trial = trial;
  out.n = n;
  out.d = d;
  out.chain = xyz_decomposition(ensemble, scheme, d);
  return out;
}

std::vector<FuzzViolation> check_trial(const FuzzTrial& t) {
  std::vector<FuzzViolation> out;
  const BoundChain& c = t.chain;
  auto flag = [&](bool bad, const char* kind) {
    if (bad) out.push_back({kind, t});
  };
  flag(c.f_bar > kLemmaConstant * c.eta + kBoundSlack, "lemma");
  flag(c.x_bar > c.d_lambda_next + kBoundSlack || c.x_bar > c.eta + kBoundSlack, "x_bound");
  flag(std::abs(c.y_bar - 2.0 * c.eta) > kBoundSlack, "y_equality");
  flag(c.z_bar > 2.0 * std::sqrt(c.x_bar * c.y_bar) + kBoundSlack, "z_schwarz");
  flag(c.max_termwise_excess > kBoundSlack || c.f_bar > c.x_bar + c.y_bar + c.z_bar + kBoundSlack, "termwise");
  return out;
}

FuzzReport fuzz_bound(const FuzzConfig& config) {
  if (config.trials < 1) throw ContractError("fuzz_bound: trials must be >= 1");
  for (const auto& [n, d] : config.dims) {
    if (n < 1 || d < 1) throw ContractError("fuzz_bound: dimensions must be positive");
  }
  const std::size_t total = static_cast<std::size_t>(config.trials);
  std::vector<FuzzTrial> results(total);

  unsigned workers = config.threads > 0 ? static_cast<unsigned>(config.threads) : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(total)));
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t t = w; t < total; t += workers) results[t] = fuzz_trial(config, static_cast<std::int64_t>(t));
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }

  FuzzReport report;
  report.config = config;
  if (report.config.dims.empty()) report.config.dims = default_fuzz_dims();
  report.trials = config.trials;
  report.max_ratio = -std::numeric_limits<double>::infinity();
  report.min_ratio = std::numeric_limits<double>::infinity();
  for (const auto& t : results) {
    const double ratio = t.chain.f_bar / t.chain.eta;
    report.max_ratio = std::max(report.max_ratio, ratio);
    report.min_ratio = std::min(report.min_ratio, ratio);
    for (auto& v : check_trial(t)) report.violations.push_back(std::move(v));
  }
  return report;
}

}  // namespace fidlimit
