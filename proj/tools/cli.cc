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

#include "cli.h"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "fidlimit/blocking.h"
#include "fidlimit/coding.h"
#include "fidlimit/fidelity.h"
#include "fidlimit/report.h"

namespace fidlimit::cli {

namespace {

using nlohmann::ordered_json;

constexpr int kDefaultTrials = 10000;
constexpr int kDefaultDemoDecoders = 20;
constexpr int kMaxDemoBlock = 5;
constexpr double kSlack = 1e-9;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

int to_int(const std::string& s) {
  std::size_t used = 0;
  const int v = std::stoi(s, &used);
  if (used != s.size()) throw std::invalid_argument("not an integer: '" + s + "'");
  return v;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

ordered_json run_config_json(const RunConfig& c, const std::string& command) {
  ordered_json j;
  j["command"] = command;
  j["seed"] = c.seed;
  if (c.trials) j["trials"] = *c.trials;
  ordered_json dims = ordered_json::array();
  for (const auto& [n, d] : c.dims) dims.push_back({n, d});
  j["dims"] = dims;
  j["spectrum"] = c.spectrum;
  j["delta"] = c.delta;
  j["N"] = {c.block_range.first, c.block_range.second};
  j["dim_range"] = {c.dim_range.first, c.dim_range.second};
  j["d"] = c.block_d;
  j["ancilla"] = c.ancilla;
  j["qubit_power"] = c.qubit_power;
  j["topd_identity"] = c.topd_identity;
  return j;
}

// Single writer: the whole report is assembled first, then written once.
void emit(const RunConfig& c, const std::string& text, std::ostream& out) {
  if (c.output_path.empty()) {
    out << text;
    out.flush();
    return;
  }
  std::ofstream f(c.output_path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + c.output_path + "' for writing");
  f << text;
  f.close();
  if (!f) throw IoError("failed writing '" + c.output_path + "'");
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string key_value_csv(const ordered_json& j) {
  std::ostringstream os;
  os << "field,value\n";
  for (const auto& [k, v] : j.items()) {
    if (v.is_structured()) continue;
    os << k << ',';
    if (v.is_number_float()) {
      os << fmt(v.get<double>());
    } else if (v.is_string()) {
      os << v.get<std::string>();
    } else {
      os << v.dump();
    }
    os << '\n';
  }
  return os.str();
}

FuzzConfig to_fuzz_config(const RunConfig& c) {
  FuzzConfig f;
  f.trials = c.trials.value_or(kDefaultTrials);
  f.seed = c.seed;
  f.dims = c.dims.empty() ? default_fuzz_dims() : c.dims;
  f.ancilla_dim = c.ancilla;
  f.scheme = c.topd_identity ? FuzzConfig::Scheme::kTopdIdentity : FuzzConfig::Scheme::kRandom;
  f.threads = c.threads;
  return f;
}

int replay(const RunConfig& c, std::ostream& out) {
  std::ifstream in(c.replay_path);
  if (!in) throw IoError("cannot open '" + c.replay_path + "'");
  nlohmann::json report;
  try {
    in >> report;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("malformed report '" + c.replay_path + "': " + e.what());
  }
  const FuzzConfig config = fuzz_config_from_json(report);
  std::vector<std::int64_t> trials;
  for (const auto& v : report.at("violations")) trials.push_back(v.at("trial").get<std::int64_t>());
  std::sort(trials.begin(), trials.end());
  trials.erase(std::unique(trials.begin(), trials.end()), trials.end());

  ordered_json j;
  j["tool_version"] = kToolVersion;
  j["command"] = "replay";
  j["source"] = c.replay_path;
  j["config"] = to_json(config);
  ordered_json rows = ordered_json::array();
  bool reproduced = false;
  for (std::int64_t t : trials) {
    const FuzzTrial sample = fuzz_trial(config, t);
    ordered_json row;
    row["trial"] = t;
    row["n"] = sample.n;
    row["d"] = sample.d;
    row["chain"] = to_json(sample.chain);
    ordered_json kinds = ordered_json::array();
    for (const auto& v : check_trial(sample)) kinds.push_back(v.kind);
    reproduced = reproduced || !kinds.empty();
    row["violations"] = kinds;
    rows.push_back(row);
  }
  j["trials"] = rows;
  emit(c, dump(j), out);
  return reproduced ? kExitViolation : kExitOk;
}

}  // namespace

std::vector<std::pair<int, int>> parse_dims(const std::string& text) {
  std::vector<std::pair<int, int>> out;
  for (const auto& item : split(text, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("--dims expects n:d pairs, got '" + item + "'");
    out.emplace_back(to_int(item.substr(0, colon)), to_int(item.substr(colon + 1)));
  }
  if (out.empty()) throw std::invalid_argument("--dims is empty");
  return out;
}

std::vector<double> parse_spectrum(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) out.push_back(to_double(item));
  if (out.empty()) throw std::invalid_argument("--spectrum is empty");
  return out;
}

std::pair<int, int> parse_range(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    const int v = to_int(text);
    return {v, v};
  }
  return {to_int(text.substr(0, dots)), to_int(text.substr(dots + 2))};
}

void validate(const RunConfig& c) {
  if (c.trials && *c.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (!(c.delta > 0.0)) throw std::invalid_argument("delta must be > 0");
  if (c.block_range.first < 1 || c.block_range.second < c.block_range.first) {
    throw std::invalid_argument("--N must be a range a..b with 1 <= a <= b");
  }
  if (c.dim_range.first < 1 || c.dim_range.second < c.dim_range.first) {
    throw std::invalid_argument("--dim-range must be a..b with 1 <= a <= b");
  }
  for (const auto& [n, d] : c.dims) {
    if (n < 1 || d < 1) throw std::invalid_argument("--dims entries need n >= 1 and d >= 1");
    if (d >= n && !c.allow_full_rate) {
      throw std::invalid_argument("--dims entry " + std::to_string(n) + ":" + std::to_string(d) +
                                  " has d >= n (pass --allow-full-rate to accept)");
    }
  }
  if (c.threads < 0 || c.block_d < 0 || c.ancilla < 0) {
    throw std::invalid_argument("--threads, --d and --ancilla must be nonnegative");
  }
}

int cmd_appendix(const RunConfig& c, std::ostream& out, std::ostream&) {
  const AppendixInstance inst = appendix_ensemble();
  const SourceEnsemble& e = inst.ensemble;
  const int n = static_cast<int>(e.dim());

  const double f_identity = average_fidelity(e, {inst.encoding, KrausChannel::identity(n)});
  const double f_mp = average_fidelity(e, {inst.encoding, measure_prepare_as_kraus(inst.decoder)});
  DecoderOptimizationOptions opts;
  opts.seed = c.seed;
  const DecoderOptimum best = optimize_unitary_decoder(e, inst.encoding, opts);
  const TiltOptimum tilt = optimize_tilt_toward(e, inst.encoding, e.signals()[2].state.amplitudes().real());
  const DensityOperator rho = ensemble_density(e);
  const double eta2 = eta(rho, 2);
  const double f_topd = average_fidelity(e, {topd_encoder(e, 2), KrausChannel::identity(n)});

  ordered_json j;
  j["tool_version"] = kToolVersion;
  j["command"] = "appendix";
  j["seed"] = c.seed;
  j["config"] = run_config_json(c, "appendix");
  const EigenSystem es = eigh(rho.matrix());
  j["rho_eigenvalues"] = std::vector<double>(es.values.data(), es.values.data() + es.values.size());
  j["F_identity"] = f_identity;
  j["F_measure_prepare"] = f_mp;
  j["best_unitary_angle_deg"] = best.angle_deg;
  j["best_unitary_fidelity"] = best.fidelity;
  j["best_unitary_gain"] = best.fidelity - f_identity;
  j["tilt_angle_deg"] = tilt.angle_deg;
  j["tilt_fidelity"] = tilt.fidelity;
  j["eta_d2"] = eta2;
  j["six_eta"] = 6.0 * eta2;
  j["lemma_bound"] = kLemmaConstant * eta2;
  j["F_topd_identity"] = f_topd;
  const bool beats = f_mp > best.fidelity;
  j["nonunitary_beats_unitary"] = beats;

  const bool holds = beats && f_mp <= kLemmaConstant * eta2 + kSlack && best.fidelity <= kLemmaConstant * eta2 + kSlack;
  emit(c, c.format.value_or(Format::kJson) == Format::kCsv ? key_value_csv(j) : dump(j), out);
  return holds ? kExitOk : kExitViolation;
}

int cmd_fuzz_bound(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (!c.replay_path.empty()) return replay(c, out);
  const FuzzReport report = fuzz_bound(to_fuzz_config(c));
  if (c.format.value_or(Format::kJson) == Format::kCsv) {
    std::ostringstream os;
    os << "trial,kind,n,d,F_bar,eta,X,Y,Z\n";
    for (const auto& v : report.violations) {
      const auto& ch = v.sample.chain;
      os << v.sample.trial << ',' << v.kind << ',' << v.sample.n << ',' << v.sample.d << ',' << fmt(ch.f_bar) << ','
         << fmt(ch.eta) << ',' << fmt(ch.x_bar) << ',' << fmt(ch.y_bar) << ',' << fmt(ch.z_bar) << '\n';
    }
    emit(c, os.str(), out);
  } else {
    emit(c, dump(to_json(report)), out);
  }
  if (!report.violations.empty()) {
    err << report.violations.size() << " violation(s); rerun one with --replay on the JSON report\n";
    return kExitViolation;
  }
  return kExitOk;
}

int cmd_fuzz_inequality(const RunConfig& c, std::ostream& out, std::ostream& err) {
  InequalityFuzzConfig f;
  f.trials = c.trials.value_or(kDefaultTrials);
  f.seed = c.seed;
  f.min_dim = c.dim_range.first;
  f.max_dim = c.dim_range.second;
  const InequalityFuzzReport report = fuzz_inequality(f);
  if (c.format.value_or(Format::kJson) == Format::kCsv) {
    std::ostringstream os;
    os << "trial,variant,dim,F12,F23,F13,bound,tr3\n";
    for (const auto& v : report.violations) {
      os << v.trial << ',' << v.variant << ',' << v.dim << ',' << fmt(v.f12) << ',' << fmt(v.f23) << ','
         << fmt(v.f13) << ',' << fmt(v.bound) << ',' << fmt(v.tr3) << '\n';
    }
    emit(c, os.str(), out);
  } else {
    emit(c, dump(to_json(report)), out);
  }
  if (!report.violations.empty()) {
    err << report.violations.size() << " inequality violation(s)\n";
    return kExitViolation;
  }
  return kExitOk;
}

int cmd_converse(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const Spectrum s(c.spectrum);
  const auto rows = converse_sweep(s, c.delta, c.block_range.first, c.block_range.second,
                                   c.qubit_power ? RateRounding::kQubitPower : RateRounding::kFloorReal);
  if (c.format.value_or(Format::kCsv) == Format::kCsv) {
    std::ostringstream os;
    write_converse_csv(os, rows);
    emit(c, os.str(), out);
  } else {
    ordered_json j;
    j["tool_version"] = kToolVersion;
    j["command"] = "converse";
    j["seed"] = c.seed;
    j["config"] = run_config_json(c, "converse");
    j["rows"] = to_json(rows);
    emit(c, dump(j), out);
  }
  int failing = 0;
  for (const auto& r : rows) {
    if (!r.holds()) ++failing;
  }
  if (failing > 0) {
    err << failing << " row(s) with sigma_d > epsilon_N + 2^-N delta\n";
    return kExitViolation;
  }
  return kExitOk;
}

int cmd_block_demo(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const int block = c.block_range.second;
  if (block > kMaxDemoBlock) {
    throw SizeError("block-demo: N = " + std::to_string(block) + " exceeds the cap of " + std::to_string(kMaxDemoBlock));
  }
  const Spectrum s(c.spectrum);
  const int k = s.size();
  std::vector<Signal> base;
  for (int j = 0; j < k; ++j) base.push_back({s.values()[j], PureState::basis(k, j)});
  const SourceEnsemble blocked = block_ensemble(SourceEnsemble(base), block);
  const int n = static_cast<int>(blocked.dim());

  int d = c.block_d;
  if (d == 0) {
    const double exponent = block * (von_neumann_entropy(s) - 2.0 * c.delta);
    d = static_cast<int>(std::clamp(std::floor(std::exp2(exponent)), 1.0, static_cast<double>(n)));
  }
  if (d > n) throw std::invalid_argument("block-demo: d exceeds the block dimension " + std::to_string(n));

  const ProductSpectrum ps = product_spectrum(s, block);
  const double sig = sigma_d(ps, d);
  const double dense_eta = eta(ensemble_density(blocked), d);
  const Encoding enc = topd_encoder(blocked, d);
  const double f_topd = average_fidelity(blocked, {enc, KrausChannel::identity(n)});

  const int decoders = c.trials.value_or(kDefaultDemoDecoders);
  const int anc = c.ancilla > 0 ? c.ancilla : n;
  ordered_json samples = ordered_json::array();
  double max_f = 0.0;
  for (int t = 0; t < decoders; ++t) {
    Rng rng = Rng::child(c.seed, static_cast<std::uint64_t>(t));
    const double f = average_fidelity(blocked, {enc, random_channel(n, n, anc, rng)});
    max_f = std::max(max_f, f);
    samples.push_back(f);
  }

  ordered_json j;
  j["tool_version"] = kToolVersion;
  j["command"] = "block-demo";
  j["seed"] = c.seed;
  j["config"] = run_config_json(c, "block-demo");
  j["N"] = block;
  j["n"] = n;
  j["d"] = d;
  j["sigma_d"] = sig;
  j["eta_dense"] = dense_eta;
  j["F_topd_identity"] = f_topd;
  j["topd_gap"] = std::abs(f_topd - sig);
  j["six_sigma_d"] = 6.0 * sig;
  j["lemma_bound"] = kLemmaConstant * sig;
  j["random_decoder_max"] = max_f;
  j["random_decoder_F"] = samples;

  emit(c, c.format.value_or(Format::kJson) == Format::kCsv ? key_value_csv(j) : dump(j), out);
  const bool holds = std::abs(f_topd - sig) <= 1e-10 && std::abs(dense_eta - sig) <= kSlack &&
                     max_f <= kLemmaConstant * sig + kSlack;
  if (!holds) err << "block-demo: a checked identity or bound failed\n";
  return holds ? kExitOk : kExitViolation;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fidelity limits for compressed quantum sources", "fidlimit"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  RunConfig config;
  std::int64_t trials = 0;
  std::string dims, spectrum, block_range, dim_range, format;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", config.seed, "master seed")->capture_default_str();
    sub->add_option("--trials", trials, "number of trials");
    sub->add_option("--out", config.output_path, "output file (default stdout)");
    sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  };
  auto add_spectrum = [&](CLI::App* sub) {
    sub->add_option("--spectrum", spectrum, "eigenvalues p1,p2,...");
    sub->add_option("--delta", config.delta, "typical window half-width")->capture_default_str();
    sub->add_option("--N", block_range, "block length or range a..b");
  };

  CLI::App* appendix = app.add_subcommand("appendix", "three-signal example with a nonunitary decoder");
  add_common(appendix);

  CLI::App* fuzz = app.add_subcommand("fuzz-bound", "random search for violations of F <= (3+2 sqrt2) eta");
  add_common(fuzz);
  fuzz->add_option("--dims", dims, "n:d[,n:d...]");
  fuzz->add_option("--replay", config.replay_path, "re-run the violating trials of a report");
  fuzz->add_option("--threads", config.threads, "worker threads (0 = all cores)");
  fuzz->add_option("--ancilla", config.ancilla, "decoder ancilla dimension (0 = n*n)");
  fuzz->add_flag("--topd-identity", config.topd_identity, "use the top-d encoder with the identity decoder");
  fuzz->add_flag("--allow-full-rate", config.allow_full_rate, "accept d >= n");

  CLI::App* ineq = app.add_subcommand("fuzz-inequality", "random triples against the fidelity inequality");
  add_common(ineq);
  ineq->add_option("--dim-range", dim_range, "dimension range a..b");

  CLI::App* converse = app.add_subcommand("converse", "sigma_d against the typical-subspace bound");
  add_common(converse);
  add_spectrum(converse);
  converse->add_flag("--qubit-power", config.qubit_power, "round d to a power of two");

  CLI::App* demo = app.add_subcommand("block-demo", "blocked orthogonal source at a fixed rate");
  add_common(demo);
  add_spectrum(demo);
  demo->add_option("--d", config.block_d, "channel dimension (0 = floor(2^{N(S-2 delta)}))");
  demo->add_option("--ancilla", config.ancilla, "decoder ancilla dimension (0 = n)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    CLI::App* failing = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    if (dynamic_cast<const CLI::CallForAllHelp*>(&e) != nullptr) {
      out << failing->help();
      return kExitOk;
    }
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  if (app.get_subcommands().front()->get_option("--trials")->count() > 0) {
    if (trials < 1 || trials > std::numeric_limits<int>::max()) {
      err << "error: trials must be between 1 and " << std::numeric_limits<int>::max() << '\n';
      return kExitConfig;
    }
    config.trials = static_cast<int>(trials);
  }

  try {
    if (!dims.empty()) config.dims = parse_dims(dims);
    if (!spectrum.empty()) config.spectrum = parse_spectrum(spectrum);
    if (!block_range.empty()) config.block_range = parse_range(block_range);
    if (!dim_range.empty()) config.dim_range = parse_range(dim_range);
    if (!format.empty()) config.format = format == "csv" ? Format::kCsv : Format::kJson;
    validate(config);

    if (appendix->parsed()) return cmd_appendix(config, out, err);
    if (fuzz->parsed()) return cmd_fuzz_bound(config, out, err);
    if (ineq->parsed()) return cmd_fuzz_inequality(config, out, err);
    if (converse->parsed()) return cmd_converse(config, out, err);
    if (demo->parsed()) {
      if (block_range.empty()) config.block_range = {4, 4};
      if (!block_range.empty() && config.block_range.first != config.block_range.second) {
        throw std::invalid_argument("block-demo takes a single --N");
      }
      return cmd_block_demo(config, out, err);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace fidlimit::cli
