#include "vddp/i2dp/session.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <mutex>
#include <set>

#include "vddp/accountant/accountant.hpp"
#include "vddp/i2dp/client_proof.hpp"
#include "vddp/vddlm/vddlm.hpp"
#include "vddp/vrr/vrr.hpp"

namespace vddp::i2dp {

using json = nlohmann::ordered_json;
using commit::PublicParams;
using sigma::Cursor;
using sigma::Role;
using sigma::Session;
using sigma::Transcript;

// ---------------------------------------------------------------- names

const char* mechanism_name(Mechanism m) { return m == Mechanism::vrr ? "vrr" : "vddlm"; }

const char* phase_name(Phase p) {
  switch (p) {
    case Phase::setup: return "setup";
    case Phase::commit: return "commit";
    case Phase::coin: return "coin";
    case Phase::cli_proofs: return "cli-proofs";
    case Phase::ser_proofs: return "ser-proofs";
    case Phase::aggregate: return "aggregate";
    case Phase::done: return "done";
  }
  return "?";
}

const char* deviation_name(Deviation d) {
  switch (d) {
    case Deviation::invalid_data: return "invalid-data";
    case Deviation::bit_flip: return "bit-flip";
    case Deviation::noise_omit: return "noise-omit";
    case Deviation::sigma_copy: return "sigma-copy";
    case Deviation::output_forge: return "output-forge";
  }
  return "?";
}

Deviation deviation_from_name(std::string_view name) {
  for (auto d : {Deviation::invalid_data, Deviation::bit_flip, Deviation::noise_omit, Deviation::sigma_copy,
                 Deviation::output_forge})
    if (name == deviation_name(d)) return d;
  throw ConfigError("unknown deviation kind: " + std::string(name));
}

// ---------------------------------------------------------------- state machine

SessionState::SessionState(std::size_t coin_parties) : psi_(coin_parties), coin_(coin_parties) {}

void SessionState::advance(Phase next) {
  if (phase_ == Phase::done || std::uint8_t(next) != std::uint8_t(phase_) + 1)
    throw std::logic_error(std::string("phase ") + phase_name(next) + " cannot follow " + phase_name(phase_));
  if (next == Phase::coin && !all_psi()) throw std::logic_error("coins requested before every commitment");
  if (next == Phase::cli_proofs)
    for (auto& c : coin_)
      if (!c) throw std::logic_error("proofs requested before every coin");
  phase_ = next;
  history_.push_back(next);
}

void SessionState::record_psi(std::size_t i, const G1& psi) {
  if (phase_ != Phase::commit) throw std::logic_error("commitment outside the commit phase");
  if (psi_.at(i)) throw std::logic_error("commitment recorded twice");
  psi_[i] = psi;
}

void SessionState::set_coin(std::size_t i, const Fr& coin) {
  if (phase_ != Phase::coin || !all_psi()) throw std::logic_error("coin drawn before every commitment");
  if (coin_.at(i)) throw std::logic_error("coin drawn twice");
  coin_[i] = coin;
}

bool SessionState::all_psi() const {
  for (auto& p : psi_)
    if (!p) return false;
  return true;
}

const Fr& SessionState::coin(std::size_t i) const {
  if (!coin_.at(i)) throw std::logic_error("coin not drawn");
  return *coin_[i];
}

// ---------------------------------------------------------------- config

namespace {

const char* role_str(PartyRole r) { return party_role_name(r); }

PartyRole role_from(const std::string& s) {
  if (s == "client") return PartyRole::client;
  if (s == "server") return PartyRole::server;
  throw ConfigError("adversary role must be client or server, got " + s);
}

Rational rational_field(const json& v, const char* what) {
  try {
    if (v.is_string()) return rational_from_string(v.get<std::string>());
    if (v.is_number()) return rational_from_string(v.dump());
  } catch (const std::exception&) {
  }
  throw ConfigError(std::string("bad number for ") + what);
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const char* where) {
  if (!j.is_object()) throw ConfigError(std::string(where) + " must be an object");
  for (auto& [k, v] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok |= k == a;
    if (!ok) throw ConfigError("unknown key '" + k + "' in " + where);
  }
}

template <class T>
T get_or(const json& j, const char* key, T def) {
  if (!j.contains(key)) return def;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("bad value for ") + key);
  }
}

}  // namespace

SessionConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(j,
             {"mechanism", "clients", "servers", "topology", "vddlm", "vrr", "data", "adversary", "seed", "live",
              "transport", "pp_seed"},
             "config");
  SessionConfig c;
  auto mech = get_or<std::string>(j, "mechanism", "vddlm");
  if (mech == "vrr")
    c.mechanism = Mechanism::vrr;
  else if (mech == "vddlm")
    c.mechanism = Mechanism::vddlm;
  else
    throw ConfigError("mechanism must be vrr or vddlm");
  c.n_cli = get_or<std::size_t>(j, "clients", c.n_cli);
  c.n_ser = get_or<std::size_t>(j, "servers", c.mechanism == Mechanism::vrr ? 0 : c.n_ser);
  c.seed = get_or<std::uint64_t>(j, "seed", c.seed);
  c.live = get_or<bool>(j, "live", false);
  c.transport = get_or<std::string>(j, "transport", c.transport);
  c.pp_seed = get_or<std::string>(j, "pp_seed", c.pp_seed);
  if (j.contains("topology")) {
    if (!j["topology"].is_array()) throw ConfigError("topology must be a list of blocks");
    for (auto& b : j["topology"]) {
      check_keys(b, {"clients", "servers"}, "topology block");
      c.topology.push_back({get_or<std::vector<std::size_t>>(b, "clients", {}),
                            get_or<std::vector<std::size_t>>(b, "servers", {})});
    }
  }
  if (j.contains("vddlm")) {
    auto& v = j["vddlm"];
    check_keys(v, {"t", "gamma", "nu", "precision", "dim", "sensitivity"}, "vddlm");
    if (v.contains("t")) c.vddlm.t_scale = rational_field(v["t"], "t");
    c.vddlm.gamma = get_or<unsigned>(v, "gamma", c.vddlm.gamma);
    c.vddlm.nu = get_or<unsigned>(v, "nu", c.vddlm.nu);
    auto prec = get_or<std::string>(v, "precision", "absolute");
    if (prec == "absolute")
      c.vddlm.precision = randomness::Precision::absolute;
    else if (prec == "significant")
      c.vddlm.precision = randomness::Precision::significant;
    else
      throw ConfigError("precision must be absolute or significant");
    c.vddlm.d = get_or<std::size_t>(v, "dim", c.vddlm.d);
    c.vddlm.sensitivity = get_or<int>(v, "sensitivity", c.vddlm.sensitivity);
  }
  if (j.contains("vrr")) {
    auto& v = j["vrr"];
    check_keys(v, {"k", "probs", "m"}, "vrr");
    c.vrr.K = get_or<unsigned>(v, "k", c.vrr.K);
    c.vrr.log_omega = get_or<unsigned>(v, "m", c.vrr.log_omega);
    if (v.contains("probs")) {
      if (!v["probs"].is_array()) throw ConfigError("probs must be a list");
      c.vrr.probs.clear();
      for (auto& p : v["probs"]) c.vrr.probs.push_back(rational_field(p, "probs"));
    } else if (c.vrr.K != 2) {
      // Default: probability 1/2 on the true class, the rest spread evenly.
      c.vrr.probs.assign(c.vrr.K, Rational(1, 2 * (c.vrr.K - 1)));
      c.vrr.probs[0] = Rational(1, 2);
    }
  }
  if (j.contains("data")) {
    if (!j["data"].is_array()) throw ConfigError("data must be a list");
    for (auto& row : j["data"]) {
      if (row.is_number_integer())
        c.data.push_back({row.get<std::int64_t>()});
      else if (row.is_array())
        c.data.push_back(get_or<std::vector<std::int64_t>>(json{{"r", row}}, "r", {}));
      else
        throw ConfigError("data rows must be integers or integer lists");
    }
  }
  if (j.contains("adversary")) {
    if (!j["adversary"].is_array()) throw ConfigError("adversary must be a list");
    for (auto& a : j["adversary"]) {
      check_keys(a, {"role", "index", "kind", "of"}, "adversary entry");
      AdversaryAction act;
      act.role = role_from(get_or<std::string>(a, "role", ""));
      act.index = get_or<std::size_t>(a, "index", 0);
      act.kind = deviation_from_name(get_or<std::string>(a, "kind", ""));
      act.of = get_or<std::size_t>(a, "of", 0);
      c.adversary.push_back(act);
    }
  }
  validate(c);
  return c;
}

std::string config_to_json(const SessionConfig& c) {
  json j;
  j["mechanism"] = mechanism_name(c.mechanism);
  j["clients"] = c.n_cli;
  j["servers"] = c.n_ser;
  j["seed"] = c.seed;
  j["live"] = c.live;
  j["transport"] = c.transport;
  j["pp_seed"] = c.pp_seed;
  json topo = json::array();
  for (auto& b : c.topology) topo.push_back({{"clients", b.clients}, {"servers", b.servers}});
  j["topology"] = topo;
  if (c.mechanism == Mechanism::vddlm) {
    j["vddlm"] = {{"t", rational_to_string(c.vddlm.t_scale)},
                  {"gamma", c.vddlm.gamma},
                  {"nu", c.vddlm.nu},
                  {"precision", c.vddlm.precision == randomness::Precision::absolute ? "absolute" : "significant"},
                  {"dim", c.vddlm.d},
                  {"sensitivity", c.vddlm.sensitivity}};
  } else {
    json probs = json::array();
    for (auto& p : c.vrr.probs) probs.push_back(rational_to_string(p));
    j["vrr"] = {{"k", c.vrr.K}, {"probs", probs}, {"m", c.vrr.log_omega}};
  }
  j["data"] = c.data;
  json adv = json::array();
  for (auto& a : c.adversary) {
    json e{{"role", role_str(a.role)}, {"index", a.index}, {"kind", deviation_name(a.kind)}};
    if (a.kind == Deviation::sigma_copy) e["of"] = a.of;
    adv.push_back(e);
  }
  j["adversary"] = adv;
  return j.dump(2);
}

namespace {

void check_action(const SessionConfig& c, const AdversaryAction& a) {
  std::string who = std::string(role_str(a.role)) + " " + std::to_string(a.index);
  std::size_t n = a.role == PartyRole::client ? c.n_cli : c.n_ser;
  if (a.index >= n) throw ConfigError("adversary targets missing " + who);
  bool ok = false;
  if (c.mechanism == Mechanism::vrr) {
    ok = a.role == PartyRole::client &&
         (a.kind == Deviation::invalid_data || a.kind == Deviation::bit_flip || a.kind == Deviation::output_forge);
  } else if (a.role == PartyRole::client) {
    ok = a.kind == Deviation::invalid_data;
  } else {
    ok = a.kind != Deviation::invalid_data;
    if (a.kind == Deviation::sigma_copy && (a.of >= c.n_ser || a.of == a.index))
      throw ConfigError("sigma-copy needs another existing server");
  }
  if (!ok)
    throw ConfigError(std::string("deviation ") + deviation_name(a.kind) + " does not apply to " + who + " under " +
                      mechanism_name(c.mechanism));
}

}  // namespace

void validate(SessionConfig& c) {
  if (c.n_cli == 0) throw ConfigError("at least one client is required");
  if (c.transport != "memory" && c.transport != "tcp") throw ConfigError("transport must be memory or tcp");
  if (c.mechanism == Mechanism::vrr) {
    if (c.n_ser != 0) throw ConfigError("randomized response sessions have no servers");
    if (c.vrr.K < 2) throw ConfigError("k must be at least 2");
    if (c.vrr.probs.size() != c.vrr.K) throw ConfigError("probs must have k entries");
    if (c.vrr.log_omega < 1 || c.vrr.log_omega > 20) throw ConfigError("m must be in [1, 20]");
    if (!algebra::Fr::order_divides(c.vrr.K))
      throw ConfigError("k must divide p-1; nearest admissible: " + std::to_string(vrr::nearest_admissible_k(c.vrr.K)));
    if (!c.topology.empty()) throw ConfigError("randomized response sessions take no topology");
  } else {
    if (c.n_ser == 0) throw ConfigError("at least one server is required");
    if (c.vddlm.d == 0 || c.vddlm.d > 1024) throw ConfigError("dim must be in [1, 1024]");
    if (c.vddlm.sensitivity < 0) throw ConfigError("sensitivity must be non-negative");
    if (c.vddlm.t_scale <= 0) throw ConfigError("t must be positive");
    if (c.vddlm.gamma > 30 || c.vddlm.nu == 0 || c.vddlm.nu > 256) throw ConfigError("gamma/nu out of range");
    try {
      randomness::derive_bernoulli(c.vddlm.t_scale, c.vddlm.gamma, c.vddlm.nu, c.vddlm.precision);
    } catch (const randomness::PrecisionCollapse& e) {
      throw ConfigError(std::string("noise parameters: ") + e.what());
    }
    if (c.topology.empty()) {
      Block b;
      for (std::size_t j = 0; j < c.n_cli; ++j) b.clients.push_back(j);
      for (std::size_t i = 0; i < c.n_ser; ++i) b.servers.push_back(i);
      c.topology.push_back(b);
    }
    // Every client in exactly one block; server sets equal or disjoint.
    std::vector<int> seen(c.n_cli, 0);
    std::set<std::size_t> used;
    for (auto& b : c.topology) {
      for (auto j : b.clients) {
        if (j >= c.n_cli) throw ConfigError("topology names a missing client");
        ++seen[j];
      }
      std::set<std::size_t> s(b.servers.begin(), b.servers.end());
      for (auto i : s) {
        if (i >= c.n_ser) throw ConfigError("topology names a missing server");
        if (used.count(i)) throw ConfigError("client blocks must map to identical or disjoint server sets");
      }
      used.insert(s.begin(), s.end());
    }
    for (auto k : seen)
      if (k != 1) throw ConfigError("every client must belong to exactly one block");
    if (c.topology.size() != 1 || used.size() != c.n_ser)
      throw ConfigError("the Laplace mechanism runs on a single block covering all servers");
  }
  if (!c.data.empty()) {
    if (c.data.size() != c.n_cli) throw ConfigError("data needs one row per client");
    for (auto& row : c.data) {
      if (c.mechanism == Mechanism::vddlm && row.size() != c.vddlm.d) throw ConfigError("data rows need dim entries");
      if (c.mechanism == Mechanism::vrr && (row.size() != 1 || row[0] < 0 || row[0] >= std::int64_t(c.vrr.K)))
        throw ConfigError("vrr data entries must be class indices below k");
    }
  }
  for (auto& a : c.adversary) check_action(c, a);
}

SessionConfig inject_adversary(SessionConfig c, const std::vector<AdversaryAction>& script) {
  for (auto& a : script) {
    check_action(c, a);
    c.adversary.push_back(a);
  }
  return c;
}

// ---------------------------------------------------------------- run

namespace {

using Clock = std::chrono::steady_clock;
double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Setup output is public and deterministic per seed, so it is shared
// across sessions.
template <class T>
class Cache {
 public:
  template <class Make>
  const T& get(const std::string& key, Make make) {
    std::lock_guard lk(mu_);
    auto it = items_.find(key);
    if (it == items_.end()) it = items_.emplace(key, std::make_unique<T>(make())).first;
    return *it->second;
  }

 private:
  std::mutex mu_;
  std::map<std::string, std::unique_ptr<T>> items_;
};

const PublicParams& shared_params(std::size_t degree, const std::string& seed) {
  static Cache<PublicParams> cache;
  std::size_t deg = 64;
  while (deg < degree) deg *= 2;
  return cache.get(std::to_string(deg) + "/" + seed, [&] { return commit::setup(deg, seed); });
}

struct Net {
  Channel& ch;
  std::uint64_t sid;
  Metrics& m;

  Message deliver(Phase ph, PartyRole role, std::size_t idx, Bytes payload) {
    Message msg{sid, std::uint8_t(ph), role, std::uint32_t(idx), std::move(payload)};
    auto before = ch.bytes_sent();
    ch.send(msg);
    auto got = ch.recv();
    if (got.session != sid || got.phase != std::uint8_t(ph)) throw TransportError("message out of order");
    std::size_t n = ch.bytes_sent() - before;
    m.phase_bytes[phase_name(ph)] += n;
    m.total_bytes += n;
    ++m.messages;
    return got;
  }

  // Prover messages travel from the party, challenges from the verifier.
  // Statement entries are recomputed by the verifier and checked by the
  // cursor, so they are not sent.
  Transcript relay(Phase ph, PartyRole role, std::size_t idx, const Transcript& t) {
    Transcript out;
    for (auto& e : t.entries()) {
      if (e.role == Role::statement) {
        out.append(e.role, e.label, e.data);
        continue;
      }
      Writer w;
      w.u8(std::uint8_t(e.role));
      w.blob(Bytes(e.label.begin(), e.label.end()));
      w.blob(e.data);
      auto got = deliver(ph, e.role == Role::prover ? role : PartyRole::verifier, idx, w.take());
      Reader r(got.payload);
      auto rl = r.u8();
      auto label = r.blob();
      auto data = r.blob();
      r.expect_done();
      out.append(Role(rl), std::string(label.begin(), label.end()), std::move(data));
    }
    return out;
  }
};

Bytes g1_list(const std::vector<G1>& v) {
  Writer w;
  for (auto& x : v) w.put(x);
  return w.take();
}

std::vector<G1> read_g1_list(std::span<const std::uint8_t> b, std::size_t n) {
  Reader r(b);
  std::vector<G1> out(n);
  for (auto& x : out) x = r.get<G1>();
  r.expect_done();
  return out;
}

std::optional<Deviation> deviation_of(const SessionConfig& c, PartyRole role, std::size_t idx, std::size_t* of = nullptr) {
  for (auto& a : c.adversary)
    if (a.role == role && a.index == idx) {
      if (of) *of = a.of;
      return a.kind;
    }
  return std::nullopt;
}

std::string party_key(PartyRole r, std::size_t i) { return std::string(party_role_name(r)) + "/" + std::to_string(i); }

Rng rng_for(const Rng& master, std::string_view label, std::size_t i) { return master.derive(label, i); }

std::vector<std::vector<std::int64_t>> session_data(const SessionConfig& c, const Rng& master) {
  if (!c.data.empty()) return c.data;
  std::vector<std::vector<std::int64_t>> out(c.n_cli);
  for (std::size_t j = 0; j < c.n_cli; ++j) {
    Rng r = rng_for(master, "data", j);
    if (c.mechanism == Mechanism::vrr)
      out[j] = {std::int64_t(r.uniform(c.vrr.K))};
    else
      for (std::size_t k = 0; k < c.vddlm.d; ++k) out[j].push_back(std::int64_t(r.uniform(2)));
  }
  return out;
}

void run_vddlm(const SessionConfig& cfg, const Rng& master, Net& net, SessionState& state, SessionOutcome& out) {
  auto& m = out.metrics;
  auto t0 = Clock::now();
  randomness::LaplaceParams lp;
  try {
    lp = randomness::derive_bernoulli(cfg.vddlm.t_scale, cfg.vddlm.gamma, cfg.vddlm.nu, cfg.vddlm.precision);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("sampling parameters: ") + e.what());
  }
  const std::size_t d = cfg.vddlm.d, nc = cfg.n_cli, ns = cfg.n_ser;
  static Cache<vddlm::ConstraintSystem> cs_cache;
  const auto& cs = cs_cache.get(randomness::to_config(lp) + "/" + std::to_string(d),
                                [&] { return vddlm::build_constraints(lp, d); });
  const auto& pp = shared_params(cs.layout.required_degree(), cfg.pp_seed);
  static Cache<LagrangeKey> lk_cache;
  unsigned log_d = sharing::vector_log_size(d);
  const auto& lk = lk_cache.get(std::to_string(log_d) + "/" + std::to_string(pp.max_degree) + "/" + cfg.pp_seed,
                                [&] { return lagrange_key(pp, log_d); });
  out.privacy_json = accountant::report_to_json(accountant::laplace_dp_closed_form(lp, cfg.vddlm.sensitivity), unsigned(ns));
  m.setup_ms = ms_since(t0);

  // commit: share commitments to the verifier, shares to the servers, ψ_i.
  state.advance(Phase::commit);
  auto data = session_data(cfg, master);
  std::vector<std::vector<Fr>> x(nc);
  std::vector<std::vector<G1>> coms(nc);                         // verifier view [j][i]
  std::vector<std::vector<sharing::ShareFile>> received(ns);     // server view [i][j]
  for (std::size_t j = 0; j < nc; ++j) {
    Rng rng = rng_for(master, "client", j);
    for (auto v : data[j]) x[j].push_back(Fr::from_i64(v));
    if (deviation_of(cfg, PartyRole::client, j) == Deviation::invalid_data) x[j][0] = Fr::from_u64(2);
    auto tc = Clock::now();
    auto set = sharing::secret_share(x[j], ns, rng);
    std::vector<G1> cj;
    for (std::size_t i = 0; i < ns; ++i) cj.push_back(sharing::commit_share(set.share_of(i), set.rand_of(i), pp).com);
    m.client_ms += ms_since(tc);
    coms[j] = read_g1_list(net.deliver(Phase::commit, PartyRole::client, j, g1_list(cj)).payload, ns);
    for (std::size_t i = 0; i < ns; ++i) {
      sharing::ShareFile f{std::uint32_t(ns), std::uint32_t(i), pp.fingerprint, set.share_of(i), set.rand_of(i)};
      auto got = net.deliver(Phase::commit, PartyRole::client, j, sharing::serialize_share_file(f));
      received[i].push_back(sharing::deserialize_share_file(got.payload));
    }
  }
  std::vector<vddlm::ServerState> servers(ns);
  for (std::size_t i = 0; i < ns; ++i) {
    Rng rng = rng_for(master, "server", i);
    servers[i] = vddlm::make_server(pp, rng);
  }
  for (std::size_t i = 0; i < ns; ++i) {
    std::size_t of = 0;
    if (deviation_of(cfg, PartyRole::server, i, &of) == Deviation::sigma_copy) {
      Rng rng = rng_for(master, "server-copy", i);
      servers[i] = vddlm::make_server_with_sigma(pp, servers[of].sigma, rng);
    }
  }
  for (std::size_t i = 0; i < ns; ++i) {
    auto got = net.deliver(Phase::commit, PartyRole::server, i, sigma::pack(servers[i].psi));
    G1 psi;
    sigma::unpack(got.payload, psi);
    state.record_psi(i, psi);
  }

  // coin: φ_i after every ψ_i.
  state.advance(Phase::coin);
  Rng vrng = master.derive("verifier");
  std::vector<Fr> phi(ns);
  for (std::size_t i = 0; i < ns; ++i) {
    state.set_coin(i, Fr::random(vrng));
    auto got = net.deliver(Phase::coin, PartyRole::verifier, i, sigma::pack(state.coin(i)));
    sigma::unpack(got.payload, phi[i]);
  }

  // client proofs.
  state.advance(Phase::cli_proofs);
  out.clients.assign(nc, {});
  for (std::size_t j = 0; j < nc; ++j) {
    Rng rng = rng_for(master, "client-proof", j);
    std::vector<sharing::ShareCommitment> parts;
    for (auto& c : coms[j]) parts.push_back({c, pp.fingerprint});
    BitVecStmt st{sharing::rec_data_com(parts).com, d};
    std::vector<Fr> r_total(d, Fr::zero());
    for (std::size_t i = 0; i < ns; ++i)
      for (std::size_t k = 0; k < d; ++k) r_total[k] += received[i][j].rand[k];
    auto tc = Clock::now();
    auto s = Session::interactive(rng_for(master, "verifier-cli", j));
    prove_bitvec(s, pp, lk, st, {x[j], r_total}, rng);
    m.client_ms += ms_since(tc);
    auto t = net.relay(Phase::cli_proofs, PartyRole::client, j, s.transcript());
    auto tv = Clock::now();
    PartyVerdict pv;
    pv.proof_bytes = t.prover_bytes();
    try {
      Cursor c(t);
      auto v = read_bitvec(c, st);
      pv.accepted = c.done() && verify_bitvec(pp, lk, st, v);
      if (!pv.accepted) pv.reason = "bit-validity proof failed";
    } catch (const DecodeError& e) {
      pv.reason = std::string("malformed message: ") + e.what();
    }
    // Each server checks its share against the published commitment.
    for (std::size_t i = 0; i < ns && pv.accepted; ++i) {
      auto& f = received[i][j];
      if (sharing::commit_share(f.values, f.rand, pp).com != coms[j][i]) {
        pv.accepted = false;
        pv.reason = "share does not match its commitment (server " + std::to_string(i) + ")";
      }
    }
    m.verifier_ms += ms_since(tv);
    out.transcripts[party_key(PartyRole::client, j)] = std::move(t);
    out.clients[j] = pv;
    if (pv.accepted) out.j_star.push_back(j);
  }

  // server proofs over J*.
  state.advance(Phase::ser_proofs);
  out.servers.assign(ns, {});
  std::vector<bool> ok(ns, false);
  std::vector<std::vector<Fr>> y_shares(ns);
  out.server_noise.assign(ns, {});
  for (std::size_t i = 0; i < ns; ++i) {
    Rng rng = rng_for(master, "server-proof", i);
    auto& st = servers[i];
    std::vector<std::vector<Fr>> xs, rs;
    std::vector<sharing::ShareCommitment> cs_j;
    for (auto j : out.j_star) {
      xs.push_back(received[i][j].values);
      rs.push_back(received[i][j].rand);
      cs_j.push_back({coms[j][i], pp.fingerprint});
    }
    st.x_share = sharing::aggr_share(xs, d);
    st.r_share = sharing::aggr_share(rs, d);
    vddlm::SerStmt stmt{*state.psi(i), phi[i], sharing::aggr_share_com(cs_j).com};
    auto ts = Clock::now();
    auto work = vddlm::server_compute(cs, st, phi[i]);
    out.server_noise[i] = work.witness.noise;
    if (auto dev = deviation_of(cfg, PartyRole::server, i)) {
      if (*dev == Deviation::bit_flip) vddlm::apply_cheat(cs, work, vddlm::SerCheat::lprf_bit_flip, rng);
      if (*dev == Deviation::noise_omit) vddlm::apply_cheat(cs, work, vddlm::SerCheat::noise_omit, rng);
      if (*dev == Deviation::output_forge) vddlm::apply_cheat(cs, work, vddlm::SerCheat::noise_tamper, rng);
    }
    auto s = Session::interactive(rng_for(master, "verifier-ser", i));
    vddlm::prove_ser(s, cs, pp, stmt, st, work, rng);
    m.server_ms += ms_since(ts);
    auto t = net.relay(Phase::ser_proofs, PartyRole::server, i, s.transcript());
    auto tv = Clock::now();
    PartyVerdict pv;
    pv.proof_bytes = t.prover_bytes();
    try {
      Cursor c(t);
      auto v = vddlm::read_ser(c, cs, pp, stmt);
      auto verdict = vddlm::verify_ser(cs, pp, stmt, v);
      pv.accepted = c.done() && verdict.accepted;
      pv.reason = verdict.reason;
      y_shares[i] = v.y;
    } catch (const DecodeError& e) {
      pv.reason = std::string("malformed message: ") + e.what();
    }
    m.verifier_ms += ms_since(tv);
    out.transcripts[party_key(PartyRole::server, i)] = std::move(t);
    out.servers[i] = pv;
    ok[i] = pv.accepted;
    if (pv.accepted) out.i_star.push_back(i);
  }

  state.advance(Phase::aggregate);
  auto tv = Clock::now();
  for (auto& y : y_shares) y.resize(d, Fr::zero());
  auto agg = vddlm::aggregate_outputs(ok, y_shares);
  m.verifier_ms += ms_since(tv);
  out.aborted = agg.aborted;
  out.output = agg.decoded;
  out.true_aggregate.assign(d, 0);
  for (auto j : out.j_star)
    for (std::size_t k = 0; k < d; ++k) out.true_aggregate[k] += data[j][k];
}

void run_vrr(const SessionConfig& cfg, const Rng& master, Net& net, SessionState& state, SessionOutcome& out) {
  auto& m = out.metrics;
  auto t0 = Clock::now();
  const std::size_t nc = cfg.n_cli;
  std::string key = std::to_string(cfg.vrr.K) + "/" + std::to_string(cfg.vrr.log_omega);
  for (auto& p : cfg.vrr.probs) key += "/" + rational_to_string(p);
  static Cache<vrr::RrScheme> schemes;
  const vrr::RrScheme* scheme;
  try {
    scheme = &schemes.get(key, [&] { return vrr::build_scheme(cfg.vrr.K, cfg.vrr.probs, cfg.vrr.log_omega); });
  } catch (const std::exception& e) {
    throw ConfigError(std::string("response scheme: ") + e.what());
  }
  const std::uint64_t M = scheme->omega_size;
  const auto& pp = shared_params(M, cfg.pp_seed);
  static Cache<vrr::VrrContext> contexts;
  const auto& ctx = contexts.get(key + "/" + std::to_string(pp.max_degree) + "/" + cfg.pp_seed,
                                 [&] { return vrr::make_context(*scheme, pp); });
  try {
    out.privacy_json = json{{"epsilon", double(accountant::rr_epsilon(scheme->A, M))},
                            {"max_ratio", rational_to_string(accountant::rr_ratio(scheme->A, M))}}
                           .dump();
  } catch (const std::domain_error&) {
    out.privacy_json = json{{"epsilon", "inf"}}.dump();
  }
  m.setup_ms = ms_since(t0);

  state.advance(Phase::commit);
  auto data = session_data(cfg, master);
  std::vector<vrr::VrrClient> clients(nc);
  std::vector<vrr::VrrCheat> cheats(nc, vrr::VrrCheat::none);
  std::vector<G1> com(nc);
  for (std::size_t j = 0; j < nc; ++j) {
    Rng rng = rng_for(master, "client", j);
    Fr x = scheme->chi_powers[std::size_t(data[j][0])];
    std::uint64_t i_sigma = rng.uniform(M);
    auto tc = Clock::now();
    auto dev = deviation_of(cfg, PartyRole::client, j);
    if (dev == Deviation::invalid_data) {
      clients[j] = vrr::make_client_with_sigma(ctx, Fr::from_u64(2), scheme->omega.pow(i_sigma), rng);
      clients[j].i_sigma = i_sigma;
    } else if (dev == Deviation::bit_flip) {
      clients[j] = vrr::make_client_with_sigma(ctx, x, Fr::random(rng), rng);
      cheats[j] = vrr::VrrCheat::outside_domain;
    } else {
      clients[j] = vrr::make_client(ctx, x, i_sigma, rng);
      if (dev == Deviation::output_forge) cheats[j] = vrr::VrrCheat::bad_y;
    }
    m.client_ms += ms_since(tc);
    auto got = net.deliver(Phase::commit, PartyRole::client, j, sigma::pack(clients[j].com, clients[j].psi));
    G1 psi;
    sigma::unpack(got.payload, com[j], psi);
    state.record_psi(j, psi);
  }

  state.advance(Phase::coin);
  Rng vrng = master.derive("verifier");
  std::vector<std::uint64_t> i_phi(nc);
  for (std::size_t j = 0; j < nc; ++j) {
    state.set_coin(j, Fr::from_u64(vrng.uniform(M)));
    auto got = net.deliver(Phase::coin, PartyRole::verifier, j, sigma::pack(state.coin(j)));
    Fr c;
    sigma::unpack(got.payload, c);
    i_phi[j] = c.low_u64();
  }

  state.advance(Phase::cli_proofs);
  out.clients.assign(nc, {});
  out.counts.assign(cfg.vrr.K, 0);
  out.true_histogram.assign(cfg.vrr.K, 0);
  for (std::size_t j = 0; j < nc; ++j) {
    Rng rng = rng_for(master, "client-proof", j);
    vrr::VrrStmt st{clients[j].com, clients[j].psi, i_phi[j]};
    vrr::VrrStmt vst{com[j], *state.psi(j), i_phi[j]};
    auto tc = Clock::now();
    auto s = Session::interactive(rng_for(master, "verifier-cli", j));
    vrr::prove_vrr(s, ctx, st, clients[j], rng, cheats[j]);
    m.client_ms += ms_since(tc);
    auto t = net.relay(Phase::cli_proofs, PartyRole::client, j, s.transcript());
    auto tv = Clock::now();
    PartyVerdict pv;
    pv.proof_bytes = t.prover_bytes();
    try {
      Cursor c(t);
      auto v = vrr::read_vrr(c, ctx, vst);
      auto verdict = vrr::verify_vrr(ctx, vst, v);
      pv.accepted = c.done() && verdict.accepted;
      pv.reason = verdict.reason;
      if (pv.accepted) ++out.counts[scheme->class_of(v.y)];
    } catch (const DecodeError& e) {
      pv.reason = std::string("malformed message: ") + e.what();
    }
    m.verifier_ms += ms_since(tv);
    out.transcripts[party_key(PartyRole::client, j)] = std::move(t);
    out.clients[j] = pv;
    if (pv.accepted) {
      out.j_star.push_back(j);
      ++out.true_histogram[std::size_t(data[j][0])];
    }
  }

  state.advance(Phase::ser_proofs);
  state.advance(Phase::aggregate);
  auto tv = Clock::now();
  out.estimate = vrr::histogram_estimate(out.counts, scheme->A, M);
  m.verifier_ms += ms_since(tv);
  out.aborted = false;
}

}  // namespace

SessionOutcome run_session(const SessionConfig& config) {
  SessionConfig cfg = config;
  validate(cfg);
  Rng master = cfg.live ? Rng::from_os() : Rng(cfg.seed);
  SessionOutcome out;
  out.mechanism = cfg.mechanism;
  auto channel = make_channel(cfg.transport);
  Net net{*channel, master.derive("session").next_u64(), out.metrics};
  SessionState state(cfg.mechanism == Mechanism::vrr ? cfg.n_cli : cfg.n_ser);
  if (cfg.mechanism == Mechanism::vrr)
    run_vrr(cfg, master, net, state, out);
  else
    run_vddlm(cfg, master, net, state, out);
  state.advance(Phase::done);
  out.phases = state.history();
  return out;
}

std::string outcome_to_json(const SessionOutcome& o, int indent) {
  json j;
  j["mechanism"] = mechanism_name(o.mechanism);
  json ph = json::array();
  for (auto p : o.phases) ph.push_back(phase_name(p));
  j["phases"] = ph;
  auto parties = [](const std::vector<PartyVerdict>& v) {
    json a = json::array();
    for (auto& p : v) {
      json e{{"accepted", p.accepted}, {"proof_bytes", p.proof_bytes}};
      if (!p.reason.empty()) e["reason"] = p.reason;
      a.push_back(e);
    }
    return a;
  };
  j["clients"] = parties(o.clients);
  j["servers"] = parties(o.servers);
  j["j_star"] = o.j_star;
  j["i_star"] = o.i_star;
  j["aborted"] = o.aborted;
  if (o.mechanism == Mechanism::vddlm) {
    j["output"] = o.aborted ? json(nullptr) : json(o.output);
    j["truth"] = {{"aggregate", o.true_aggregate}, {"server_noise", o.server_noise}};
  } else {
    j["counts"] = o.counts;
    json est = json::array(), estd = json::array();
    for (auto& e : o.estimate) {
      est.push_back(rational_to_string(e));
      estd.push_back(to_double(e));
    }
    j["estimate"] = estd;
    j["estimate_exact"] = est;
    j["truth"] = {{"histogram", o.true_histogram}};
  }
  j["privacy"] = o.privacy_json.empty() ? json(nullptr) : json::parse(o.privacy_json);
  const auto& m = o.metrics;
  j["metrics"] = {{"setup_ms", m.setup_ms},     {"client_ms", m.client_ms}, {"server_ms", m.server_ms},
                  {"verifier_ms", m.verifier_ms}, {"phase_bytes", m.phase_bytes}, {"total_bytes", m.total_bytes},
                  {"messages", m.messages}};
  return j.dump(indent);
}

void dump_transcripts(const SessionOutcome& o, const std::string& dir) {
  std::filesystem::create_directories(dir);
  for (auto& [key, t] : o.transcripts) {
    std::string name = key;
    std::replace(name.begin(), name.end(), '/', '-');
    auto bin = t.serialize();
    std::ofstream(dir + "/" + name + ".bin", std::ios::binary).write(reinterpret_cast<const char*>(bin.data()),
                                                                     std::streamsize(bin.size()));
    std::ofstream(dir + "/" + name + ".json") << t.to_json();
  }
}

}  // namespace vddp::i2dp
