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


#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cli.h"
#include "fidlimit/blocking.h"
#include "fidlimit/channels.h"
#include "fidlimit/coding.h"
#include "fidlimit/fidelity.h"
#include "fidlimit/report.h"

namespace py = pybind11;

namespace fidlimit {
namespace {

SourceEnsemble make_ensemble(const std::vector<double>& probabilities, const std::vector<ComplexVector>& states) {
  if (probabilities.size() != states.size()) throw ContractError("probabilities and states differ in length");
  std::vector<Signal> signals;
  for (std::size_t i = 0; i < states.size(); ++i) signals.push_back({probabilities[i], PureState(states[i])});
  return SourceEnsemble(std::move(signals));
}

py::dict row_dict(const ConverseRow& r) {
  py::dict d;
  d["N"] = r.block_length;
  d["d"] = r.d;
  d["entropy"] = r.entropy;
  d["epsilon_N"] = r.epsilon;
  d["two_pow_neg_Ndelta"] = r.two_pow_neg_n_delta;
  d["sigma_d"] = r.sigma_d;
  d["bound"] = r.bound;
  d["six_sigma_d"] = r.six_sigma_d;
  return d;
}

}  // namespace
}  // namespace fidlimit

PYBIND11_MODULE(_core, m) {
  using namespace fidlimit;
  m.doc() = "Native core of fidlimit.";
  m.attr("__version__") = kToolVersion;
  m.attr("LEMMA_CONSTANT") = kLemmaConstant;

  py::register_exception<ContractError>(m, "ContractError", PyExc_ValueError);
  py::register_exception<SizeError>(m, "SizeError", PyExc_ValueError);

  m.def("fidelity", [](const ComplexMatrix& a, const ComplexMatrix& b) {
    return fidelity_general(DensityOperator(a), DensityOperator(b)).value();
  }, py::arg("rho1"), py::arg("rho2"));
  m.def("fidelity_oracle", [](const ComplexMatrix& a, const ComplexMatrix& b, std::uint64_t seed) {
    OracleOptions opts;
    opts.seed = seed;
    return fidelity_oracle(DensityOperator(a), DensityOperator(b), opts).value();
  }, py::arg("rho1"), py::arg("rho2"), py::arg("seed") = 7);
  m.def("triangle_bound", &triangle_bound, py::arg("f12"), py::arg("f23"));
  m.def("triangle_bound_general", &triangle_bound_general, py::arg("f12"), py::arg("f23"), py::arg("tr3"));

  m.def("apply_channel", [](const std::vector<ComplexMatrix>& kraus, const ComplexMatrix& rho) {
    return fidlimit::apply(KrausChannel(kraus), rho);
  }, py::arg("kraus"), py::arg("rho"));
  m.def("random_channel", [](Eigen::Index d_in, Eigen::Index d_out, Eigen::Index d_anc, std::uint64_t seed) {
    Rng rng(seed);
    return random_channel(d_in, d_out, d_anc, rng).kraus_ops();
  }, py::arg("d_in"), py::arg("d_out"), py::arg("d_anc"), py::arg("seed"));

  m.def("ensemble_density", [](const std::vector<double>& p, const std::vector<ComplexVector>& states) {
    return ensemble_density(make_ensemble(p, states)).matrix();
  }, py::arg("probabilities"), py::arg("states"));
  m.def("eta", [](const ComplexMatrix& rho, int d) { return eta(DensityOperator(rho), d); }, py::arg("rho"),
        py::arg("d"));
  m.def("topd_identity_fidelity", [](const std::vector<double>& p, const std::vector<ComplexVector>& states, int d) {
    const SourceEnsemble e = make_ensemble(p, states);
    return average_fidelity(e, {topd_encoder(e, d), KrausChannel::identity(e.dim())});
  }, py::arg("probabilities"), py::arg("states"), py::arg("d"));

  m.def("fuzz_bound", [](int trials, std::uint64_t seed) {
    FuzzConfig c;
    c.trials = trials;
    c.seed = seed;
    return to_json(fuzz_bound(c)).dump();
  }, py::arg("trials"), py::arg("seed") = 42, "JSON report of a lemma fuzz campaign.");
  m.def("fuzz_inequality", [](int trials, std::uint64_t seed) {
    InequalityFuzzConfig c;
    c.trials = trials;
    c.seed = seed;
    return to_json(fuzz_inequality(c)).dump();
  }, py::arg("trials"), py::arg("seed") = 42, "JSON report of a fidelity-inequality fuzz campaign.");

  m.def("entropy", [](const std::vector<double>& s) { return von_neumann_entropy(Spectrum(s)); }, py::arg("spectrum"));
  m.def("sigma_d", [](const std::vector<double>& s, int n, double d) {
    return sigma_d(product_spectrum(Spectrum(s), n), d);
  }, py::arg("spectrum"), py::arg("N"), py::arg("d"));
  m.def("converse_sweep", [](const std::vector<double>& s, double delta, int first, int last, bool qubit_power) {
    py::list out;
    for (const auto& r : converse_sweep(Spectrum(s), delta, first, last,
                                        qubit_power ? RateRounding::kQubitPower : RateRounding::kFloorReal)) {
      out.append(row_dict(r));
    }
    return out;
  }, py::arg("spectrum"), py::arg("delta"), py::arg("first"), py::arg("last"), py::arg("qubit_power") = false);

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code;
    {
      py::gil_scoped_release release;
      code = cli::run(args, out, err);
    }
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"), "Runs the command-line tool in-process; returns (exit_code, stdout, stderr).");
}
