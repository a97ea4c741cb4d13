#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <string>
#include <vector>

#include "vddp/accountant/accountant.hpp"
#include "vddp/common/rng.hpp"
#include "vddp/i2dp/session.hpp"
#include "vddp/i2dp/transport.hpp"
#include "vddp/randomness/laplace.hpp"

namespace py = pybind11;
using namespace vddp;

namespace {

randomness::Precision precision_from(const std::string& s) {
  if (s == "absolute") return randomness::Precision::absolute;
  if (s == "significant") return randomness::Precision::significant;
  throw i2dp::ConfigError("precision must be auto, absolute or significant");
}

// Same "auto" rule as the CLI: absolute first, significant on collapse.
std::pair<randomness::LaplaceParams, std::string> derive(const std::string& t, unsigned gamma, unsigned nu,
                                                          const std::string& prec) {
  Rational ts = rational_from_string(t);
  if (prec != "auto") return {randomness::derive_bernoulli(ts, gamma, nu, precision_from(prec)), prec};
  try {
    return {randomness::derive_bernoulli(ts, gamma, nu, randomness::Precision::absolute), "absolute"};
  } catch (const randomness::PrecisionCollapse&) {
    return {randomness::derive_bernoulli(ts, gamma, nu, randomness::Precision::significant), "significant"};
  }
}

py::dict report_dict(const accountant::PrivacyReport& r) {
  py::dict d;
  d["epsilon"] = double(r.epsilon);
  d["epsilon_bound"] = double(r.epsilon_bound);
  d["max_ratio"] = rational_to_string(r.max_ratio);
  d["delta"] = rational_to_string(r.delta);
  d["delta_approx"] = to_double(r.delta);
  d["n_lap"] = r.n_lap;
  d["witness_r"] = r.witness.r;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Verifiable distributed differential privacy primitives";

  py::register_exception<i2dp::ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<randomness::PrecisionCollapse>(m, "PrecisionCollapse", PyExc_ValueError);
  py::register_exception<i2dp::TransportError>(m, "TransportError", PyExc_RuntimeError);

  m.def(
      "laplace_params",
      [](const std::string& t, unsigned gamma, unsigned nu, const std::string& precision) {
        auto [lp, mode] = derive(t, gamma, nu, precision);
        py::dict d;
        d["config"] = randomness::to_config(lp);
        d["n_lap"] = lp.n_lap;
        d["precision"] = mode;
        return d;
      },
      py::arg("t"), py::arg("gamma"), py::arg("nu"), py::arg("precision") = "auto");

  m.def(
      "privacy",
      [](const std::string& t, unsigned gamma, unsigned nu, int sens, const std::string& precision,
         bool exact) {
        auto lp = derive(t, gamma, nu, precision).first;
        auto r = exact ? accountant::laplace_dp_exact(lp, sens) : accountant::laplace_dp_closed_form(lp, sens);
        auto d = report_dict(r);
        d["expected_l1"] = to_double(accountant::expected_l1(lp));
        return d;
      },
      py::arg("t"), py::arg("gamma"), py::arg("nu"), py::arg("sens") = 1, py::arg("precision") = "auto",
      py::arg("exact") = false);

  m.def(
      "pmf",
      [](const std::string& t, unsigned gamma, unsigned nu, const std::string& precision) {
        auto lp = derive(t, gamma, nu, precision).first;
        auto p = randomness::noise_pmf(lp);
        std::vector<double> out;
        for (std::int64_t r = -p.bound(); r <= p.bound(); ++r) out.push_back(to_double(p.at(r)));
        return out;
      },
      py::arg("t"), py::arg("gamma"), py::arg("nu"), py::arg("precision") = "auto");

  m.def(
      "sample",
      [](const std::string& t, unsigned gamma, unsigned nu, std::size_t count, std::uint64_t seed,
         const std::string& precision) {
        auto lp = derive(t, gamma, nu, precision).first;
        Rng rng(seed);
        std::vector<std::uint8_t> bits(lp.n_lap);
        std::vector<std::int64_t> out;
        out.reserve(count);
        for (std::size_t k = 0; k < count; ++k) {
          for (auto& b : bits) b = rng.bit();
          out.push_back(randomness::c_lap_flat(bits, lp).noise);
        }
        return out;
      },
      py::arg("t"), py::arg("gamma"), py::arg("nu"), py::arg("count"), py::arg("seed") = 0,
      py::arg("precision") = "auto");

  m.def("rr_epsilon", [](const std::vector<std::uint64_t>& A, std::uint64_t omega) {
    return double(accountant::rr_epsilon(A, omega));
  });

  // Sessions go through JSON both ways so the schema matches the CLI.
  m.def(
      "run_session",
      [](const std::string& config_json) {
        auto cfg = i2dp::config_from_json(config_json);
        i2dp::SessionOutcome o;
        {
          py::gil_scoped_release nogil;
          o = i2dp::run_session(cfg);
        }
        return i2dp::outcome_to_json(o, -1);
      },
      py::arg("config_json"));
}
