// Copyright 2026 The spinlube Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <boost/math/tools/minima.hpp>

#include "analytics.hpp"
#include "perturbation.hpp"
#include "propagator.hpp"
#include "stochastic.hpp"

namespace spinlube {

const char* verdict_name(Verdict v) noexcept {
  switch (v) {
    case Verdict::match: return "match";
    case Verdict::mismatch: return "mismatch";
    case Verdict::documented_discrepancy: return "documented-discrepancy";
  }
  return "unknown";
}

void decide(CheckRecord& r) {
  const bool ok = std::isfinite(r.discrepancy) && r.discrepancy <= r.tolerance;
  if (ok)
    r.verdict = Verdict::match;
  else
    r.verdict = r.kind == CheckKind::engine ? Verdict::mismatch : Verdict::documented_discrepancy;
}

bool ConsistencyReport::engines_consistent() const noexcept {
  return std::none_of(checks.begin(), checks.end(), [](const CheckRecord& r) { return r.verdict == Verdict::mismatch; });
}

nlohmann::ordered_json ConsistencyReport::to_json() const {
  auto num = [](double x) -> nlohmann::ordered_json {
    if (std::isfinite(x)) return x;
    return nullptr;
  };
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : checks) {
    nlohmann::ordered_json j;
    j["name"] = r.name;
    j["kind"] = r.kind == CheckKind::engine ? "engine" : "claim";
    j["parameters"] = r.params;
    j["oracle"] = r.oracle;
    j["reference"] = num(r.reference);
    j["engine"] = num(r.engine);
    j["discrepancy"] = num(r.discrepancy);
    j["tolerance"] = num(r.tolerance);
    j["verdict"] = verdict_name(r.verdict);
    arr.push_back(std::move(j));
  }
  nlohmann::ordered_json doc;
  doc["engines_consistent"] = engines_consistent();
  doc["checks"] = std::move(arr);
  return doc;
}

std::string ConsistencyReport::to_text() const {
  std::size_t width = 5;
  for (const auto& r : checks) width = std::max(width, r.name.size());
  std::ostringstream out;
  char line[512];
  std::snprintf(line, sizeof line, "%-*s  %-22s  %13s  %13s  %10s  %9s\n", int(width), "check", "verdict",
                "reference", "engine", "discrep.", "tol.");
  out << line;
  std::size_t bad = 0, doc = 0;
  for (const auto& r : checks) {
    std::snprintf(line, sizeof line, "%-*s  %-22s  %13.6e  %13.6e  %10.3e  %9.2e\n", int(width), r.name.c_str(),
                  verdict_name(r.verdict), r.reference, r.engine, r.discrepancy, r.tolerance);
    out << line;
    bad += r.verdict == Verdict::mismatch;
    doc += r.verdict == Verdict::documented_discrepancy;
  }
  out << checks.size() << " checks, " << bad << " engine mismatches, " << doc << " documented discrepancies\n";
  return out.str();
}

std::vector<EngineAgreement> engine_agreement(const TransferSetup& setup, std::span<const double> times,
                                              const AgreementPlan& plan) {
  setup.validate();
  const auto l = build_liouvillian(setup);
  const NetworkState rho0 = initial_network_state(setup.n(), setup.input, kCanonicalProbe);

  const auto lind = evolve_to_times(l, rho0, times, {plan.dt, Integrator::rk4, {}});
  const auto lind_half = evolve_to_times(l, rho0, times, {plan.dt / 2, Integrator::rk4, {}});

  TrajectoryPlan tp;
  tp.n_traj = plan.n_traj;
  tp.dt = plan.dt;
  tp.master_seed = plan.master_seed;
  tp.noise = setup.noise;
  tp.t_final = times.empty() ? 0.0 : times.back();
  const auto h = single_excitation_hamiltonian(setup.graph);
  const auto ens = ensemble_average_at(tp, h, initial_network_vector(setup.n(), setup.input, kCanonicalProbe), times,
                                       plan.threads);

  std::vector<EngineAgreement> out;
  for (std::size_t k = 0; k < times.size(); ++k) {
    EngineAgreement a;
    a.t = times[k];
    a.lindblad = lind[k];
    a.ensemble = ens[k].rho_mean;
    a.std_err = ens[k].std_err;
    const RMatrix diff = (lind[k].rho() - ens[k].rho_mean.rho()).cwiseAbs();
    a.max_z_score = diff.cwiseQuotient(a.std_err.cwiseMax(1e-9)).maxCoeff();
    a.dt_halving_drift = (lind[k].rho() - lind_half[k].rho()).cwiseAbs().maxCoeff();
    out.push_back(std::move(a));
  }
  return out;
}

namespace {

using Json = nlohmann::ordered_json;

struct Builder {
  std::vector<CheckRecord> records;

  // discrepancy defaults to |reference - engine|
  void add(std::string name, CheckKind kind, Json params, std::string oracle, double reference, double engine,
           double tolerance, double discrepancy = NAN) {
    CheckRecord r;
    r.name = std::move(name);
    r.kind = kind;
    r.params = std::move(params);
    r.oracle = std::move(oracle);
    r.reference = reference;
    r.engine = engine;
    r.discrepancy = std::isnan(discrepancy) ? std::abs(reference - engine) : discrepancy;
    r.tolerance = tolerance;
    decide(r);
    records.push_back(std::move(r));
  }
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

std::string time_tag(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", t);
  return buf;
}

cplx lambda_z(const ChannelParams& c) { return c.lambda * c.z; }

void unitary_vs_lindblad(Builder& b) {
  const double times[] = {0.5, 1.0, 1.5 * kPi};
  for (int n : {4, 6}) {
    const TransferSetup setup = complete_setup(n, 2, 0.0);
    const auto lind = lindblad_channels(setup, times);
    for (std::size_t k = 0; k < std::size(times); ++k) {
      const ChannelParams u = unitary_channel(setup, times[k]);
      const double fu = optimal_avg_fidelity(u);
      const double fl = optimal_avg_fidelity(lind[k]);
      // lambda alone is ill-defined where z vanishes; compare |z|^2 and lambda z
      const double d = std::max({std::abs(std::norm(u.z) - std::norm(lind[k].z)),
                                 std::abs(lambda_z(u) - lambda_z(lind[k])), std::abs(fu - fl)});
      b.add("engines/unitary-vs-lindblad/n=" + num(n) + "/t=" + time_tag(times[k]), CheckKind::engine,
            {{"n", n}, {"m", 2}, {"eta", 0.0}, {"t", times[k]}}, "unitary propagator at eta = 0", fu, fl, 1e-8, d);
    }
  }
}

void lindblad_vs_trajectories(Builder& b, const ReportConfig& cfg) {
  const double times[] = {0.5, 1.0, 1.5 * kPi};
  const double eta = 1.0;
  const TransferSetup setup = complete_setup(4, 2, eta);
  const auto agree = engine_agreement(setup, times, {cfg.n_traj, cfg.dt, cfg.master_seed, cfg.threads});
  for (const auto& a : agree) {
    Json p = {{"n", 4},           {"m", 2},           {"eta", eta}, {"t", a.t}, {"n_traj", cfg.n_traj},
              {"dt", cfg.dt}, {"master_seed", cfg.master_seed}};
    b.add("engines/lindblad-vs-trajectories/t=" + time_tag(a.t), CheckKind::engine, p,
          "trajectory ensemble, max entry-wise |difference| / standard error", 0.0, a.max_z_score, 3.0,
          a.max_z_score);
    b.add("engines/lindblad-dt-halving/t=" + time_tag(a.t), CheckKind::engine, p, "RK4 at dt against dt/2", 0.0,
          a.dt_halving_drift, 1e-8, a.dt_halving_drift);
  }
  const double t_end[] = {1.5 * kPi};
  const auto l = build_liouvillian(setup);
  const NetworkState rho0 = initial_network_state(4, 1, kCanonicalProbe);
  const auto ex = evolve_to_times(l, rho0, t_end, {cfg.dt, Integrator::exact, {}});
  const auto rk = evolve_to_times(l, rho0, t_end, {cfg.dt, Integrator::rk4, {}});
  const double d = (ex[0].rho() - rk[0].rho()).cwiseAbs().maxCoeff();
  b.add("engines/lindblad-exact-vs-rk4", CheckKind::engine, {{"n", 4}, {"m", 2}, {"eta", eta}, {"t", t_end[0]}},
        "exponential of the generator against RK4", 0.0, d, 1e-8, d);
}

void no_pst(Builder& b) {
  const auto grid = linear_grid(0.0, kPi, 4001);
  for (int n = 2; n <= 12; ++n) {
    const TransferSetup setup = complete_setup(n, 0, 0.0);
    auto f = [&](double t) { return optimal_avg_fidelity(unitary_channel(setup, t)); };
    std::size_t best = 0;
    double fb = f(grid[0]);
    for (std::size_t k = 1; k < grid.size(); ++k) {
      const double fk = f(grid[k]);
      if (fk > fb) {
        fb = fk;
        best = k;
      }
    }
    const double lo = grid[best > 0 ? best - 1 : 0];
    const double hi = grid[std::min(best + 1, grid.size() - 1)];
    const auto r = boost::math::tools::brent_find_minima([&](double t) { return -f(t); }, lo, hi, 50);
    const double engine = std::max(fb, -r.second);
    char name[64];
    std::snprintf(name, sizeof name, "engines/no-pst-max-fidelity/n=%02d", n);
    b.add(name, CheckKind::engine, {{"n", n}, {"eta", 0.0}}, "1/2 + (2/n)/3 + (4/n^2)/6",
          complete_graph_max_fidelity(n), engine, 1e-6);
  }
  double worst = -1.0;
  for (int n = 3; n <= 12; ++n)
    worst = std::max(worst, complete_graph_max_fidelity(n) - complete_graph_max_fidelity(n - 1));
  b.add("engines/max-fidelity-decreasing-in-n", CheckKind::engine, {{"n_range", {2, 12}}},
        "largest F_max(n) - F_max(n-1), must be negative", 0.0, worst, 0.0, worst < 0.0 ? 0.0 : 1.0 + worst);
}

void beta_convention(Builder& b) {
  const auto grid = linear_grid(0.0, 2.0 * kPi, 401);
  for (int n : {4, 7}) {
    const auto h = single_excitation_hamiltonian(complete_graph(n));
    double lit = 0.0, res = 0.0;
    for (double t : grid) {
      const double z = std::abs(transfer_amplitude(h, t, 1, 2));
      lit = std::max(lit, std::abs(std::abs(beta(n, t)) - z));
      res = std::max(res, std::abs(std::abs(beta(n, 2.0 * t)) - z));
    }
    Json p = {{"n", n}, {"t_range", {0.0, 2.0 * kPi}}};
    b.add("claims/beta-time/literal/n=" + num(n), CheckKind::claim, p, "max_t ||beta(t)| - |z(t)||", 0.0, lit,
          1e-10, lit);
    b.add("claims/beta-time/rescaled-2t/n=" + num(n), CheckKind::claim, p, "max_t ||beta(2t)| - |z(t)||", 0.0, res,
          1e-10, res);
  }
}

void four_node(Builder& b) {
  const FourNodeClosedForm f0 = four_node_closed_form(0.0, 0.0);
  b.add("claims/four-node/z_sq-at-t0", CheckKind::claim, {{"eta", 0.0}, {"t", 0.0}}, "U(0) = I gives |z|^2 = 0", 0.0,
        f0.z_sq, 1e-8);

  const double points[][2] = {{0.5, 1.5 * kPi}, {4.0, 1.0}, {20.0, 1.0}};
  for (const auto& pt : points) {
    const double eta = pt[0], t = pt[1];
    const FourNodeClosedForm f = four_node_closed_form(eta, t);
    for (const bool rescaled : {false, true}) {
      // rescaled: the formulas read with unit hopping, i.e. the engine at (2 eta, t/2)
      const double ee = rescaled ? 2.0 * eta : eta;
      const double te = rescaled ? t / 2.0 : t;
      const double one[] = {te};
      EvolveOptions exact;
      exact.integrator = Integrator::exact;
      const ChannelParams c = lindblad_channels(complete_setup(4, 2, ee), one, exact).front();
      const std::string tag = std::string(rescaled ? "rescaled" : "literal") + "/eta=" + num(eta) + "/t=" + time_tag(t);
      Json p = {{"eta", eta}, {"t", t}, {"engine_eta", ee}, {"engine_t", te}};
      b.add("claims/four-node/z_sq/" + tag, CheckKind::claim, p, "Lindblad engine", std::norm(c.z), f.z_sq, 1e-6);
      b.add("claims/four-node/lambda_z/" + tag, CheckKind::claim, p, "Lindblad engine (|difference| of complex values)",
            std::abs(lambda_z(c)), std::abs(f.lambda_z), 1e-6, std::abs(lambda_z(c) - f.lambda_z));
      if (rescaled)
        b.add("claims/four-node/lambda_z/rescaled-conjugated/eta=" + num(eta) + "/t=" + time_tag(t), CheckKind::claim,
              p, "complex conjugate of the Lindblad lambda z (opposite phase convention)", std::abs(lambda_z(c)),
              std::abs(f.lambda_z), 1e-6, std::abs(std::conj(lambda_z(c)) - f.lambda_z));
    }
  }
}

void weak_noise(Builder& b) {
  const double t = 1.0;
  const int cases[][2] = {{4, 2}, {6, 2}, {10, 8}};
  for (const auto& [n, m] : cases) {
    const std::string tag = "/n=" + num(n) + "/m=" + num(m);
    const WeakNoiseChannel pr = printed_weak_noise_channel(n, m, 0.01, t);
    const WeakNoiseChannel lit = first_order_numeric(n, m, 0.01, t);
    const WeakNoiseChannel half = first_order_numeric(n, m, 0.01, t / 2.0);
    Json p = {{"n", n}, {"m", m}, {"t", t}};
    const std::string q = "interaction-picture quadrature";
    b.add("claims/weak-noise/xi1/literal" + tag, CheckKind::claim, p, q, lit.xi1, pr.xi1, 1e-6);
    b.add("claims/weak-noise/xi2/literal" + tag, CheckKind::claim, p, q, std::abs(lit.xi2), std::abs(pr.xi2),
          1e-6, std::abs(lit.xi2 - pr.xi2));
    b.add("claims/weak-noise/lambda_z0/literal" + tag, CheckKind::claim, p, q, std::abs(lit.lambda_z_0),
          std::abs(pr.lambda_z_0), 1e-8, std::abs(lit.lambda_z_0 - pr.lambda_z_0));
    // unit-hopping reading: xi(t) = 2 xi_engine(t/2)
    b.add("claims/weak-noise/xi1/rescaled" + tag, CheckKind::claim, p, q, 2.0 * half.xi1, pr.xi1, 1e-6);
    b.add("claims/weak-noise/xi2/rescaled" + tag, CheckKind::claim, p, q, std::abs(2.0 * half.xi2),
          std::abs(pr.xi2), 1e-6, std::abs(2.0 * half.xi2 - pr.xi2));
  }
}

void weak_noise_order(Builder& b) {
  for (double eta : {1e-2, 5e-3, 2.5e-3}) {
    const double ratio = weak_noise_gap(4, 2, eta, 1.0) / weak_noise_gap(4, 2, eta / 2.0, 1.0);
    b.add("engines/weak-noise-order/eta=" + num(eta), CheckKind::engine,
          {{"n", 4}, {"m", 2}, {"eta", eta}, {"t", 1.0}}, "gap(eta)/gap(eta/2), first order against Lindblad", 4.0,
          ratio, 1.4);
  }
}

void zeno(Builder& b) {
  const auto grid = linear_grid(0.0, 2.0 * kPi, 401);
  EvolveOptions exact;
  exact.integrator = Integrator::exact;
  const int cases[][2] = {{4, 2}, {6, 2}, {6, 4}};
  for (double eta : {1e3, 1e4}) {
    for (const auto& c : cases) {
      const std::string tag = "/eta=" + num(eta) + "/n=" + num(c[0]) + "/m=" + num(c[1]);
      const auto z = zeno_reduction_curves(c[0], c[1], eta, grid, exact);
      Json p = {{"n", c[0]}, {"m", c[1]}, {"eta", eta}, {"t_range", {0.0, 2.0 * kPi}}, {"points", grid.size()},
                {"t_at_max", z.t_at_max}};
      b.add("claims/zeno-reduction/literal" + tag, CheckKind::claim, p, "unitary curve of the effective Hamiltonian",
            0.0, z.max_deviation, 0.02, z.max_deviation);
      // same comparison with time in unit-hopping units
      std::vector<double> half(grid);
      for (double& t : half) t /= 2.0;
      const auto zr = zeno_reduction_curves(c[0], c[1], 2.0 * eta, half, exact);
      p["engine_eta"] = 2.0 * eta;
      p["t_at_max"] = 2.0 * zr.t_at_max;
      b.add("claims/zeno-reduction/rescaled" + tag, CheckKind::claim, p, "unitary curve of the effective Hamiltonian",
            0.0, zr.max_deviation, 0.02, zr.max_deviation);
    }
  }

  const TransferSetup s = complete_setup(4, 2, 1e4);
  const double at[] = {zeno_transfer_time(), kPi / 2.0};
  const auto ch = lindblad_channels(s, at, exact);
  Json p0 = {{"n", 4}, {"m", 2}, {"eta", 1e4}, {"t", at[0]}};
  Json p1 = {{"n", 4}, {"m", 2}, {"eta", 1e4}, {"t", at[1]}};
  b.add("claims/zeno-extreme/F-at-pi-over-4", CheckKind::claim, p0, "effective two-vertex Hamiltonian, z = i sin 2t",
        1.0, optimal_avg_fidelity(ch[0]), 0.01);
  b.add("claims/zeno-extreme/F-at-pi-over-2", CheckKind::claim, p1, "extreme-case state written with cos t, sin t",
        1.0, optimal_avg_fidelity(ch[1]), 0.01);
  b.add("claims/zeno-extreme/abs-z-at-pi-over-4", CheckKind::claim, p0, "zeno_limit_channel",
        std::abs(zeno_limit_channel(4, 2, at[0]).z), std::abs(ch[0].z), 0.01);

  const auto fine = linear_grid(0.0, 2.0 * kPi, 801);
  for (const auto& c : cases) {
    const TimeOptimum best = lindblad_best_time(complete_setup(c[0], c[1], 1e3), fine, exact);
    b.add("claims/network-reduction/n=" + num(c[0]) + "/m=" + num(c[1]), CheckKind::claim,
          {{"n", c[0]}, {"m", c[1]}, {"eta", 1e3}, {"t_best", best.t}}, "max_t F of complete_graph(n-m) at eta = 0",
          effective_network_max_fidelity(c[0] - c[1]), best.fidelity, 0.02);
  }
}

}  // namespace

ConsistencyReport consistency_report(const ReportConfig& config) {
  Builder b;
  unitary_vs_lindblad(b);
  lindblad_vs_trajectories(b, config);
  no_pst(b);
  beta_convention(b);
  four_node(b);
  weak_noise(b);
  weak_noise_order(b);
  zeno(b);
  ConsistencyReport r;
  r.checks = std::move(b.records);
  std::stable_sort(r.checks.begin(), r.checks.end(),
                   [](const CheckRecord& x, const CheckRecord& y) { return x.name < y.name; });
  return r;
}

}  // namespace spinlube
