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

#ifndef FIDLIMIT_CODING_H_
#define FIDLIMIT_CODING_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fidlimit/channels.h"
#include "fidlimit/fidelity.h"
#include "fidlimit/operator_core.h"

namespace fidlimit {

/// (3 + 2 sqrt 2): the constant obtained from eta + 2 eta + 2 sqrt2 eta.
inline constexpr double kLemmaConstant = 5.82842712474619009760;

struct Signal {
  double probability = 0.0;
  PureState state;
};

/// Pure-state source: probabilities summing to one, unit-norm signals of a
/// common dimension.
class SourceEnsemble {
 public:
  SourceEnsemble() = default;
  explicit SourceEnsemble(std::vector<Signal> signals);

  const std::vector<Signal>& signals() const { return signals_; }
  std::size_t size() const { return signals_.size(); }
  Eigen::Index dim() const { return dim_; }
  /// True if every amplitude is real.
  bool is_real() const;

 private:
  std::vector<Signal> signals_;
  Eigen::Index dim_ = 0;
};

/// Signal-indexed channel states W_i, each a normalized operator on the
/// source space supported inside the rank-d projector `support`.
class Encoding {
 public:
  Encoding() = default;
  Encoding(std::vector<DensityOperator> channel_states, Projector support);

  /// States given on C^d and carried into C^n by the isometry (n x d).
  static Encoding from_subspace(const ComplexMatrix& isometry, const std::vector<DensityOperator>& local_states);

  const std::vector<DensityOperator>& channel_states() const { return states_; }
  const Projector& support() const { return support_; }
  int d() const { return support_.rank(); }
  Eigen::Index dim() const { return support_.dim(); }

 private:
  std::vector<DensityOperator> states_;
  Projector support_;
};

struct CodingScheme {
  Encoding encoding;
  KrausChannel decoder;  // n -> n; only its action on the support matters
};

struct ProjectedEnsemble {
  Projector lambda_projector;                    // onto the n-d smallest eigenvectors of rho
  std::vector<PureState> projected_amplitudes;   // Lambda |a_i>, possibly zero
  std::vector<DensityOperator> projected_signals;  // Lambda pi_i Lambda
  DensityOperator rho_tilde;                     // sum p_i Lambda pi_i Lambda
  RealVector rho_eigenvalues;                    // descending
  double eta = 0.0;
  double lambda_next = 0.0;  // lambda_{d+1}, zero when d >= n
  int d = 0;
};

DensityOperator ensemble_density(const SourceEnsemble& e);

/// Sum of the d largest eigenvalues; 1 when d >= n.
double eta(const DensityOperator& rho, int d);

ProjectedEnsemble project_ensemble(const SourceEnsemble& e, int d);

/// The three routes to sum_i p_i sqrt F(pi_i, pi~_i).
struct SqrtFidelityChain {
  double per_signal = 0.0;        // sum_i p_i sqrt(Tr pi_i pi~_i)
  double trace_rho_lambda = 0.0;  // Tr rho Lambda
  double one_minus_eta = 0.0;
  double max_disagreement() const;
};

/// Evaluates every route and throws if they disagree by more than 1e-10.
SqrtFidelityChain sqrt_fid_projected_average(const ProjectedEnsemble& pe, const SourceEnsemble& e);

/// Decoded outputs w_i = decoder(W_i).
std::vector<DensityOperator> decode_all(const SourceEnsemble& e, const CodingScheme& scheme);

/// sum_i p_i Tr(pi_i w_i)
double average_fidelity(const SourceEnsemble& e, const CodingScheme& scheme);

struct BoundChain {
  double f_bar = 0.0;
  double x_bar = 0.0;
  double y_bar = 0.0;
  double z_bar = 0.0;
  double eta = 0.0;
  double d_lambda_next = 0.0;  // d · lambda_{d+1}
  /// Largest per-signal excess F(pi_i, w_i) - (X_i + Y_i + Z_i); <= 0 up to roundoff.
  double max_termwise_excess = 0.0;
};

/// X_i = Tr(pi~_i w_i), Y_i = 2(1 - sqrt F(pi_i, pi~_i)), Z_i = 2 sqrt(X_i Y_i),
/// averaged with the source probabilities, alongside F-bar and eta.
BoundChain xyz_decomposition(const SourceEnsemble& e, const CodingScheme& scheme, int d);

/// W_i = G pi_i G / Tr(pi_i G) with G the top-d eigenprojector of rho. Signals
/// with Tr(pi_i G) < 1e-12 get the top eigenvector of rho instead.
Encoding topd_encoder(const SourceEnsemble& e, int d);

enum class DecoderSearch {
  kAuto,      // rotations for real instances, full unitary group otherwise
  kRotation,  // SO(n)
  kUnitary,   // U(n)
};

struct DecoderOptimizationOptions {
  DecoderSearch search = DecoderSearch::kAuto;
  int restarts = 10;
  int max_iterations = 4000;
  std::uint64_t seed = 11;
};

struct DecoderOptimum {
  ComplexMatrix unitary;
  double fidelity = 0.0;
  double identity_fidelity = 0.0;
  /// Largest eigenphase magnitude of the (determinant-normalized) unitary, in
  /// degrees; for a rotation of R^3 this is the rotation angle.
  double angle_deg = 0.0;
};

/// Maximizes average_fidelity over unitary decoders. Each run is steepest
/// ascent along the exact Riemannian gradient (U <- exp(tG) U, G the
/// commutator sum_i p_i [U W_i U^dagger, pi_i]) with a bracketing line search,
/// followed by a derivative-free coordinate polish. Runs start from the
/// identity and from `restarts` random group elements; the best is returned,
/// so the result never falls below the identity decoder.
DecoderOptimum optimize_unitary_decoder(const SourceEnsemble& e, const Encoding& enc,
                                        const DecoderOptimizationOptions& options = {});

/// Rotation of R^3 by `angle_rad` about `axis` (normalized internally).
ComplexMatrix rotation3(const Eigen::Vector3d& axis, double angle_rad);

struct TiltOptimum {
  double angle_deg = 0.0;
  double fidelity = 0.0;
  Eigen::Vector3d axis;
};

/// One-parameter search over rotations that tilt the support plane of a
/// rank-2 real encoding in R^3 toward `target`: the axis lies in the plane,
/// orthogonal to the in-plane projection of `target`; positive angles move the
/// plane toward `target`.
TiltOptimum optimize_tilt_toward(const SourceEnsemble& e, const Encoding& enc, const Eigen::Vector3d& target);

struct AppendixInstance {
  SourceEnsemble ensemble;
  Encoding encoding;
  MeasurePrepareChannel decoder;
};

/// Tetrahedron-edge ensemble in R^3: a0 = (cos15°, sin15°, 0),
/// a1 = (sin15°, cos15°, 0), a2 = (1/sqrt6, 1/sqrt6, sqrt(2/3)), probabilities
/// (.49, .49, .02). Encoding: x-axis and y-axis projectors for a0, a1 and the
/// equal mixture of pi0, pi1 for a2. Decoder: measure {x, y, z}, prepare
/// pi0, pi1, pi2.
AppendixInstance appendix_ensemble();

struct FuzzConfig {
  int trials = 10000;
  std::uint64_t seed = 42;
  std::vector<std::pair<int, int>> dims;  // (n, d); trial t uses dims[t % size]
  int min_signals = 2;
  int max_signals = 0;  // 0 means n + 2
  int ancilla_dim = 0;  // 0 means n·n
  enum class Scheme { kRandom, kTopdIdentity } scheme = Scheme::kRandom;
  int threads = 0;  // 0 means hardware concurrency
};

/// Every (n, d) with 3 <= n <= 6 and 1 <= d < n.
std::vector<std::pair<int, int>> default_fuzz_dims();

struct FuzzTrial {
  std::int64_t trial = 0;
  int n = 0;
  int d = 0;
  BoundChain chain;
};

struct FuzzViolation {
  std::string kind;  // "lemma", "x_bound", "y_equality", "z_schwarz", "termwise"
  FuzzTrial sample;
};

struct FuzzReport {
  FuzzConfig config;
  std::int64_t trials = 0;
  double max_ratio = 0.0;  // max F-bar / eta
  double min_ratio = 0.0;
  std::vector<FuzzViolation> violations;
};

/// Draws one trial exactly as `fuzz_bound` does: ensemble with Haar signals and
/// simplex probabilities, an arbitrary encoding (independent random states on
/// a Haar-random d-dim subspace), and a random CPTP decoder.
FuzzTrial fuzz_trial(const FuzzConfig& config, std::int64_t trial);

/// Runs `config.trials` independent trials (in parallel, with per-trial seeds)
/// and records any violation of F <= (3 + 2 sqrt2) eta or of the
/// intermediate bounds beyond 1e-9.
FuzzReport fuzz_bound(const FuzzConfig& config);

/// Violations found in a single trial.
std::vector<FuzzViolation> check_trial(const FuzzTrial& t);

}  // namespace fidlimit

#endif  // FIDLIMIT_CODING_H_
