// vddp command line: accountant queries, parameter search, noise samples,
// protocol runs and benchmark sweeps.
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "vddp/accountant/accountant.hpp"
#include "vddp/i2dp/session.hpp"
#include "vddp/randomness/laplace.hpp"

using namespace vddp;
using json = nlohmann::ordered_json;

namespace {

constexpr int kConfigExit = 2;

randomness::Precision precision_from(const std::string& s) {
  if (s == "absolute") return randomness::Precision::absolute;
  if (s == "significant") return randomness::Precision::significant;
  throw i2dp::ConfigError("precision must be auto, absolute or significant");
}

struct NoiseChoice {
  randomness::LaplaceParams lp;
  randomness::Precision mode;
};

// "auto": absolute precision unless some coin collapses to 0 or 1.
NoiseChoice noise_params(const std::string& t, unsigned gamma, unsigned nu, const std::string& prec) {
  Rational ts;
  try {
    ts = rational_from_string(t);
  } catch (const std::exception&) {
    throw i2dp::ConfigError("bad t: " + t);
  }
  std::vector<randomness::Precision> modes;
  if (prec == "auto")
    modes = {randomness::Precision::absolute, randomness::Precision::significant};
  else
    modes = {precision_from(prec)};
  for (std::size_t k = 0;; ++k) {
    try {
      return {randomness::derive_bernoulli(ts, gamma, nu, modes[k]), modes[k]};
    } catch (const randomness::PrecisionCollapse& e) {
      if (k + 1 == modes.size()) throw i2dp::ConfigError(e.what());
    } catch (const std::invalid_argument& e) {
      throw i2dp::ConfigError(e.what());
    }
  }
}

const char* mode_name(randomness::Precision m) {
  return m == randomness::Precision::absolute ? "absolute" : "significant";
}

json report_json(const randomness::LaplaceParams& lp, int sens, unsigned servers) {
  json j = json::parse(accountant::report_to_json(accountant::laplace_dp_closed_form(lp, sens), servers));
  auto l1 = accountant::expected_l1(lp);
  j["expected_l1"] = rational_to_string(l1);
  j["expected_l1_approx"] = to_double(l1);
  j["params"] = json::parse(randomness::to_config(lp));
  return j;
}

std::vector<std::string> split(const std::string& s, char sep = ',') {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, sep);)
    if (!item.empty()) out.push_back(item);
  return out;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text << "\n";
    return;
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text << "\n";
}

// Exit 0 whenever the protocol ran to the end, accepted or aborted.
int run_and_print(const i2dp::SessionConfig& cfg, const std::string& out, const std::string& dump) {
  auto o = i2dp::run_session(cfg);
  if (!dump.empty()) i2dp::dump_transcripts(o, dump);
  emit(i2dp::outcome_to_json(o), out);
  return 0;
}

struct BenchRow {
  std::string mechanism;
  std::size_t d, n_ser, n_cli;
  unsigned nu, n_lap, omega_bits;
  std::string epsilon_target;
  unsigned rep;
  double t_prove_ms, t_verify_ms;
  std::size_t bytes;
  double l1;
  std::string epsilon, delta;
};

const char* kCsvHeader =
    "mechanism,d,nu,n_lap,omega_bits,n_ser,n_cli,epsilon_target,rep,t_prove_ms,t_verify_ms,bytes,l1,epsilon,delta";

std::string csv_line(const BenchRow& r) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(3);
  s << r.mechanism << ',' << r.d << ',' << r.nu << ',' << r.n_lap << ',' << r.omega_bits << ',' << r.n_ser << ','
    << r.n_cli << ',' << r.epsilon_target << ',' << r.rep << ',' << r.t_prove_ms << ',' << r.t_verify_ms << ','
    << r.bytes << ',';
  s.precision(6);
  s << r.l1 << ',' << r.epsilon << ',' << r.delta;
  return s.str();
}

template <class T>
std::vector<T> parse_axis(const std::string& s, const char* name) {
  std::vector<T> out;
  for (auto& item : split(s)) {
    try {
      out.push_back(static_cast<T>(std::stoull(item)));
    } catch (const std::exception&) {
      throw i2dp::ConfigError(std::string("bad value in --") + name + ": " + item);
    }
  }
  if (out.empty()) throw i2dp::ConfigError(std::string("--") + name + " must not be empty");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verifiable distributed differential privacy: accountant, sampling and protocol simulator"};
  app.require_subcommand(1);

  // accountant
  auto* acc = app.add_subcommand("accountant", "Exact (epsilon, delta) and expected L1 error of the noise circuit");
  std::string acc_t = "1", acc_prec = "auto";
  unsigned acc_gamma = 6, acc_nu = 16, acc_servers = 1;
  int acc_sens = 1;
  acc->add_option("--t", acc_t, "Laplace scale t (rational, e.g. 5/2)")->required();
  acc->add_option("--gamma", acc_gamma, "Magnitude bits")->required();
  acc->add_option("--nu", acc_nu, "Bernoulli precision bits")->required();
  acc->add_option("--sens", acc_sens, "Sensitivity")->check(CLI::NonNegativeNumber);
  acc->add_option("--precision", acc_prec, "auto | absolute | significant");
  acc->add_option("--servers", acc_servers, "Servers contributing noise (tolerance report)");

  // suggest
  auto* sug = app.add_subcommand("suggest", "Search noise parameters meeting (epsilon, delta) targets");
  double sug_eps = 1;
  std::string sug_delta = "1/1000000";
  int sug_sens = 1;
  sug->add_option("--epsilon", sug_eps, "Target epsilon")->required()->check(CLI::PositiveNumber);
  sug->add_option("--delta", sug_delta, "Target delta (rational)");
  sug->add_option("--sens", sug_sens, "Sensitivity")->check(CLI::NonNegativeNumber);

  // sample
  auto* smp = app.add_subcommand("sample", "Draw noise from the sampling circuit with uniform input bits");
  std::string smp_t = "10", smp_prec = "auto";
  unsigned smp_gamma = 6, smp_nu = 16;
  std::size_t smp_count = 10;
  std::uint64_t smp_seed = 1;
  smp->add_option("--t", smp_t, "Laplace scale t")->required();
  smp->add_option("--gamma", smp_gamma, "Magnitude bits")->required();
  smp->add_option("--nu", smp_nu, "Bernoulli precision bits")->required();
  smp->add_option("--precision", smp_prec, "auto | absolute | significant");
  smp->add_option("--count", smp_count, "Number of samples");
  smp->add_option("--seed", smp_seed, "Seed");

  // vrr run
  auto* vrr = app.add_subcommand("vrr", "Verifiable randomized response");
  vrr->require_subcommand(1);
  auto* vrr_run = vrr->add_subcommand("run", "Run one session");
  unsigned vrr_k = 2, vrr_m = 8;
  std::string vrr_probs = "3/4,1/4", vrr_out, vrr_dump;
  std::size_t vrr_clients = 10;
  std::uint64_t vrr_seed = 1;
  vrr_run->add_option("--k", vrr_k, "Number of classes");
  vrr_run->add_option("--probs", vrr_probs, "Channel row for the true class, comma separated rationals");
  vrr_run->add_option("--omega-bits", vrr_m, "log2 of the coin domain size");
  vrr_run->add_option("--clients", vrr_clients, "Clients");
  vrr_run->add_option("--seed", vrr_seed, "Seed");
  vrr_run->add_option("--out", vrr_out, "Output file (default stdout)");
  vrr_run->add_option("--dump", vrr_dump, "Transcript dump directory");

  // vddlm run
  auto* vdd = app.add_subcommand("vddlm", "Verifiable distributed discrete Laplace mechanism");
  vdd->require_subcommand(1);
  auto* vdd_run = vdd->add_subcommand("run", "Run one session");
  std::size_t vdd_clients = 3, vdd_servers = 2, vdd_dim = 1;
  std::string vdd_t = "2", vdd_prec = "auto", vdd_out, vdd_dump, vdd_transport = "memory";
  unsigned vdd_gamma = 2, vdd_nu = 4;
  std::uint64_t vdd_seed = 1;
  vdd_run->add_option("--clients", vdd_clients, "Clients");
  vdd_run->add_option("--servers", vdd_servers, "Servers");
  vdd_run->add_option("--dim", vdd_dim, "Dimension d");
  vdd_run->add_option("--t-scale", vdd_t, "Laplace scale t");
  vdd_run->add_option("--gamma", vdd_gamma, "Magnitude bits");
  vdd_run->add_option("--nu", vdd_nu, "Bernoulli precision bits");
  vdd_run->add_option("--precision", vdd_prec, "auto | absolute | significant");
  vdd_run->add_option("--transport", vdd_transport, "memory | tcp");
  vdd_run->add_option("--seed", vdd_seed, "Seed");
  vdd_run->add_option("--out", vdd_out, "Output file (default stdout)");
  vdd_run->add_option("--dump", vdd_dump, "Transcript dump directory");

  // run
  auto* run = app.add_subcommand("run", "Run a session from a JSON config file");
  std::string run_config, run_out, run_dump;
  run->add_option("config", run_config, "Session config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--out", run_out, "Output file (default stdout)");
  run->add_option("--dump", run_dump, "Transcript dump directory");

  // bench
  auto* bench = app.add_subcommand("bench", "Benchmark sweep, one CSV row per cell and repetition");
  std::string b_mech = "vddlm", b_dims = "1", b_nus = "4", b_omega = "8", b_servers = "2", b_clients = "3",
              b_eps, b_delta = "1/1000000", b_t = "2", b_out;
  unsigned b_gamma = 2, b_reps = 1;
  std::uint64_t b_seed = 1;
  bench->add_option("--mechanism", b_mech, "vddlm | vrr")->check(CLI::IsMember({"vddlm", "vrr"}));
  bench->add_option("--dims", b_dims, "Axis: dimension d");
  bench->add_option("--nus", b_nus, "Axis: Bernoulli precision (ignored with --epsilons)");
  bench->add_option("--epsilons", b_eps, "Axis: epsilon targets, parameters chosen by suggest");
  bench->add_option("--delta", b_delta, "Delta target for --epsilons");
  bench->add_option("--omega-bits", b_omega, "Axis: log2 coin domain (vrr)");
  bench->add_option("--servers", b_servers, "Axis: servers (vddlm)");
  bench->add_option("--clients", b_clients, "Axis: clients");
  bench->add_option("--t", b_t, "Laplace scale without --epsilons");
  bench->add_option("--gamma", b_gamma, "Magnitude bits without --epsilons");
  bench->add_option("--reps", b_reps, "Repetitions per cell")->check(CLI::PositiveNumber);
  bench->add_option("--seed", b_seed, "Base seed");
  bench->add_option("--out", b_out, "CSV path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*acc) {
      auto nc = noise_params(acc_t, acc_gamma, acc_nu, acc_prec);
      auto j = report_json(nc.lp, acc_sens, acc_servers);
      j["precision"] = mode_name(nc.mode);
      emit(j.dump(2), "");
    } else if (*sug) {
      Rational delta;
      try {
        delta = rational_from_string(sug_delta);
      } catch (const std::exception&) {
        throw i2dp::ConfigError("bad --delta");
      }
      try {
        auto s = accountant::suggest_params(sug_eps, delta, sug_sens);
        json j = report_json(s.params, sug_sens, 1);
        j["t"] = rational_to_string(s.params.t_scale);
        j["gamma"] = s.params.gamma;
        emit(j.dump(2), "");
      } catch (const std::runtime_error& e) {
        std::cerr << "no configuration found: " << e.what() << "\n";
        return 1;
      }
    } else if (*smp) {
      auto lp = noise_params(smp_t, smp_gamma, smp_nu, smp_prec).lp;
      Rng rng(smp_seed);
      std::vector<std::uint8_t> bits(lp.n_lap);
      json samples = json::array();
      for (std::size_t k = 0; k < smp_count; ++k) {
        for (auto& b : bits) b = rng.bit();
        samples.push_back(randomness::c_lap_flat(bits, lp).noise);
      }
      emit(json{{"n_lap", lp.n_lap}, {"samples", samples}}.dump(), "");
    } else if (*vrr_run) {
      i2dp::SessionConfig c;
      c.mechanism = i2dp::Mechanism::vrr;
      c.n_cli = vrr_clients;
      c.n_ser = 0;
      c.vrr.K = vrr_k;
      c.vrr.log_omega = vrr_m;
      c.vrr.probs.clear();
      for (auto& p : split(vrr_probs)) {
        try {
          c.vrr.probs.push_back(rational_from_string(p));
        } catch (const std::exception&) {
          throw i2dp::ConfigError("bad probability: " + p);
        }
      }
      c.seed = vrr_seed;
      i2dp::validate(c);
      return run_and_print(c, vrr_out, vrr_dump);
    } else if (*vdd_run) {
      i2dp::SessionConfig c;
      c.n_cli = vdd_clients;
      c.n_ser = vdd_servers;
      c.vddlm.d = vdd_dim;
      try {
        c.vddlm.t_scale = rational_from_string(vdd_t);
      } catch (const std::exception&) {
        throw i2dp::ConfigError("bad --t-scale");
      }
      c.vddlm.gamma = vdd_gamma;
      c.vddlm.nu = vdd_nu;
      c.vddlm.precision = noise_params(vdd_t, vdd_gamma, vdd_nu, vdd_prec).mode;
      c.transport = vdd_transport;
      c.seed = vdd_seed;
      i2dp::validate(c);
      return run_and_print(c, vdd_out, vdd_dump);
    } else if (*run) {
      std::ifstream f(run_config);
      std::stringstream text;
      text << f.rdbuf();
      auto c = i2dp::config_from_json(text.str());
      return run_and_print(c, run_out, run_dump);
    } else if (*bench) {
      bool vrr_mode = b_mech == "vrr";
      auto dims = parse_axis<std::size_t>(b_dims, "dims");
      auto clients = parse_axis<std::size_t>(b_clients, "clients");
      auto servers = vrr_mode ? std::vector<std::size_t>{0} : parse_axis<std::size_t>(b_servers, "servers");
      auto omegas = vrr_mode ? parse_axis<unsigned>(b_omega, "omega-bits") : std::vector<unsigned>{0};
      if (vrr_mode) dims = {1};
      // Noise parameters: either a ν axis at fixed (t, γ) or ε targets.
      struct NoiseCell {
        std::string eps_target;
        randomness::LaplaceParams lp;
        std::string t;
        unsigned nu;
        randomness::Precision mode = randomness::Precision::absolute;
      };
      std::vector<NoiseCell> noise;
      if (vrr_mode) {
        noise.push_back({"", {}, "", 0});
      } else if (!b_eps.empty()) {
        Rational delta = rational_from_string(b_delta);
        for (auto& e : split(b_eps)) {
          auto s = accountant::suggest_params(std::stod(e), delta, 1);
          // Coins only ever shorten ν, so the longest one is the grid value.
          unsigned nu = s.params.zero_params.nu;
          for (auto& m : s.params.mag_params) nu = std::max(nu, m.nu);
          noise.push_back({e, s.params, rational_to_string(s.params.t_scale), nu});
        }
      } else {
        for (auto nu : parse_axis<unsigned>(b_nus, "nus")) {
          auto ch = noise_params(b_t, b_gamma, nu, "auto");
          noise.push_back({"", ch.lp, b_t, nu, ch.mode});
        }
      }

      std::ostringstream csv;
      csv << kCsvHeader << "\n";
      for (auto d : dims)
        for (auto& nc : noise)
          for (auto om : omegas)
            for (auto ns : servers)
              for (auto nv : clients)
                for (unsigned rep = 0; rep < b_reps; ++rep) {
                  i2dp::SessionConfig c;
                  c.mechanism = vrr_mode ? i2dp::Mechanism::vrr : i2dp::Mechanism::vddlm;
                  c.n_cli = nv;
                  c.n_ser = ns;
                  c.seed = b_seed + rep;
                  if (vrr_mode) {
                    c.vrr.log_omega = om;
                  } else {
                    c.vddlm.d = d;
                    c.vddlm.t_scale = nc.lp.t_scale;
                    c.vddlm.gamma = nc.lp.gamma;
                    c.vddlm.nu = nc.nu;
                    c.vddlm.precision = nc.mode;
                  }
                  i2dp::validate(c);
                  auto o = i2dp::run_session(c);
                  BenchRow r{};
                  r.mechanism = b_mech;
                  r.d = d;
                  r.nu = nc.nu;
                  r.n_lap = vrr_mode ? 0 : nc.lp.n_lap;
                  r.omega_bits = om;
                  r.n_ser = ns;
                  r.n_cli = nv;
                  r.epsilon_target = nc.eps_target;
                  r.rep = rep;
                  r.t_prove_ms = o.metrics.client_ms + o.metrics.server_ms;
                  r.t_verify_ms = o.metrics.verifier_ms;
                  r.bytes = o.metrics.total_bytes;
                  json priv = json::parse(o.privacy_json);
                  auto as_text = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
                  r.epsilon = as_text(priv.at("epsilon"));
                  r.delta = priv.contains("delta") ? as_text(priv.at("delta")) : "0";
                  if (vrr_mode) {
                    for (std::size_t k = 0; k < o.estimate.size(); ++k)
                      r.l1 += std::abs(to_double(o.estimate[k]) - double(o.true_histogram[k]));
                  } else if (!o.aborted) {
                    for (std::size_t k = 0; k < d; ++k) r.l1 += std::abs(double(o.output[k] - o.true_aggregate[k]));
                    r.l1 /= double(d);
                  }
                  csv << csv_line(r) << "\n";
                }
      auto text = csv.str();
      text.pop_back();
      emit(text, b_out);
    }
  } catch (const i2dp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigExit;
  } catch (const i2dp::TransportError& e) {
    std::cerr << "session error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
