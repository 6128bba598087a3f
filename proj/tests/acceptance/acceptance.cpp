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

// Acceptance checks. Each run evaluates one criterion and prints a single
// PASS/FAIL line followed by indented diagnostics; the exit code is 0 on PASS.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <CLI11.hpp>

#include "analytics.hpp"
#include "harness.hpp"
#include "lindblad.hpp"
#include "perturbation.hpp"
#include "propagator.hpp"
#include "report.hpp"
#include "stochastic.hpp"

namespace fs = std::filesystem;
using namespace spinlube;

namespace {

struct Outcome {
  bool pass = false;
  std::string summary;
  std::vector<std::string> details;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

EvolveOptions exact_options() {
  EvolveOptions o;
  o.integrator = Integrator::exact;
  return o;
}

// 1. No perfect transfer on complete graphs without noise.
Outcome no_pst() {
  Outcome out{true, {}, {}};
  double worst = 0.0;
  for (int n = 2; n <= 12; ++n) {
    const double formula = 0.5 + (2.0 / n) / 3.0 + (4.0 / (n * n)) / 6.0;
    const auto grid = linear_grid(0.0, kPi, 401);
    const double lind = lindblad_best_time(complete_setup(n, 0, 0.0), grid, exact_options()).fidelity;
    const double dev = std::abs(lind - formula);
    worst = std::max(worst, dev);
    const bool ok = dev <= 1e-6 && (n != 2 || std::abs(lind - 1.0) <= 1e-6);
    out.pass = out.pass && ok;
    out.details.push_back(fmt("n=%2d  max_t F = %.10f  formula = %.10f  |diff| = %.2e%s", n, lind, formula, dev,
                              ok ? "" : "  <-- out of tolerance"));
  }
  out.pass = out.pass && std::abs(0.5 + 1.0 / 6.0 + 1.0 / 24.0 - 17.0 / 24.0) < 1e-15;
  out.summary = fmt("no perfect transfer on complete graphs, n = 2..12 (worst |diff| %.2e, tol 1e-6)", worst);
  return out;
}

// 2. Unitary, Lindblad and trajectory ensemble agree.
Outcome triple_agreement(int threads, std::uint64_t seed) {
  Outcome out{true, {}, {}};
  const std::vector<double> times{0.5, 1.0, 1.5 * kPi};

  // eta = 0: Lindblad and a single trajectory against the propagator
  const TransferSetup clean = complete_setup(4, 2, 0.0);
  const auto lc = lindblad_channels(clean, times, {1e-3, Integrator::rk4, {}});
  const auto h = single_excitation_hamiltonian(clean.graph);
  const CVector psi0 = initial_network_vector(4, 1, kCanonicalProbe);
  double worst_unitary = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const cplx z = unitary_channel(clean, times[k]).z;
    worst_unitary = std::max({worst_unitary, std::abs(std::norm(lc[k].z) - std::norm(z)),
                              std::abs(lc[k].lambda * lc[k].z - z)});
    const CVector psi = evolve_trajectory(h, NoiseSpec::none(), psi0, times[k], 1e-3, seed);
    const CVector ref = propagator_matrix(h, times[k]) * psi0;
    worst_unitary = std::max(worst_unitary, (psi - ref).cwiseAbs().maxCoeff());
  }
  const bool unitary_ok = worst_unitary <= 1e-8;
  out.pass = unitary_ok;
  out.details.push_back(fmt("eta=0      unitary vs Lindblad vs single trajectory: max |diff| = %.2e (tol 1e-8)%s",
                            worst_unitary, unitary_ok ? "" : "  <-- out of tolerance"));

  double worst_z = 0.0, worst_drift = 0.0;
  for (double eta : {0.25, 1.0, 4.0}) {
    AgreementPlan plan;
    plan.n_traj = 20000;
    plan.dt = 1e-3;
    plan.master_seed = seed;
    plan.threads = threads;
    const auto agree = engine_agreement(complete_setup(4, 2, eta), times, plan);
    for (const auto& a : agree) {
      const bool ok = a.max_z_score <= 3.0 && a.dt_halving_drift <= 1e-8;
      out.pass = out.pass && ok;
      worst_z = std::max(worst_z, a.max_z_score);
      worst_drift = std::max(worst_drift, a.dt_halving_drift);
      out.details.push_back(fmt("eta=%-5g t=%.4f  max |Lindblad - ensemble| / std_err = %.3f  dt-halving drift = %.2e%s",
                                eta, a.t, a.max_z_score, a.dt_halving_drift, ok ? "" : "  <-- out of tolerance"));
    }
  }
  out.summary = fmt("unitary / Lindblad / trajectory agreement, n_traj = 20000, dt = 1e-3 "
                    "(worst z-score %.3f <= 3, worst dt-halving drift %.2e <= 1e-8)",
                    worst_z, worst_drift);
  return out;
}

// 3. Noise benefit at t = 3 pi / 2 and near-perfect transfer at eta = 200.
Outcome noise_benefit() {
  Outcome out{true, {}, {}};
  const double t[] = {1.5 * kPi};
  double prev = -1.0, worst_drop = 0.0;
  int first_drop = -1;
  for (int eta = 0; eta <= 64; eta += 2) {
    const double f = optimal_avg_fidelity(lindblad_channels(complete_setup(4, 2, eta), t, exact_options()).front());
    if (prev >= 0.0 && f < prev) {
      worst_drop = std::max(worst_drop, prev - f);
      if (first_drop < 0) first_drop = eta;
    }
    out.details.push_back(fmt("eta=%2d  F(3 pi/2) = %.9f%s", eta, f, prev >= 0.0 && f < prev ? "  <-- decrease" : ""));
    prev = f;
  }
  const bool monotone = first_drop < 0;
  const auto grid = linear_grid(0.0, 2 * kPi, 801);
  const TimeOptimum best = lindblad_best_time(complete_setup(4, 2, 200.0), grid, exact_options());
  const bool strong = best.fidelity > 0.99;
  out.details.push_back(fmt("eta=200  best t in [0, 2 pi]: t = %.6f  F = %.9f (needs > 0.99)", best.t, best.fidelity));
  out.pass = monotone && strong;
  out.summary = fmt("noise benefit, n = 4, W = {3,4}: F(3 pi/2) non-decreasing over eta = 0..64 [%s%s], "
                    "F(eta = 200, best t) = %.4f > 0.99 [%s]",
                    monotone ? "yes" : "no", monotone ? "" : fmt(", first decrease at eta=%d, largest drop %.3e",
                                                                   first_drop, worst_drop).c_str(),
                    best.fidelity, strong ? "yes" : "no");
  return out;
}

// 4. Strong noise removes the noisy vertices.
Outcome zeno_reduction() {
  Outcome out{true, {}, {}};
  const auto grid = linear_grid(0.0, 2 * kPi, 1001);
  double worst = 0.0;
  const int cases[][2] = {{4, 2}, {6, 2}, {6, 4}};
  for (const auto& c : cases) {
    const ZenoComparison z = zeno_reduction_curves(c[0], c[1], 1e3, grid, exact_options());
    const bool ok = z.max_deviation <= 0.02;
    out.pass = out.pass && ok;
    worst = std::max(worst, z.max_deviation);
    out.details.push_back(fmt("n=%d m=%d eta=1e3  max_t |F_noisy - F_effective| = %.4f at t = %.4f%s", c[0], c[1],
                              z.max_deviation, z.t_at_max, ok ? "" : "  <-- exceeds 0.02"));
  }
  out.summary = fmt("Zeno network reduction at eta = 1e3 on t in [0, 2 pi] (worst deviation %.4f, tol 0.02)", worst);
  return out;
}

// 5. First-order weak-noise expansion has a second-order remainder.
Outcome weak_noise_order() {
  Outcome out{true, {}, {}};
  for (double eta : {1e-2, 5e-3, 2.5e-3}) {
    const double g = weak_noise_gap(4, 2, eta, 1.0);
    const double g2 = weak_noise_gap(4, 2, eta / 2, 1.0);
    const double ratio = g / g2;
    const bool ok = ratio >= 2.6 && ratio <= 5.4;
    out.pass = out.pass && ok;
    out.details.push_back(fmt("eta=%-7g gap(eta) = %.4e  gap(eta/2) = %.4e  ratio = %.4f%s", eta, g, g2, ratio,
                              ok ? "" : "  <-- outside [2.6, 5.4]"));
  }
  out.summary = "weak-noise order, n = 4, m = 2, t = 1: gap(eta)/gap(eta/2) in [2.6, 5.4] for eta in {1e-2, 5e-3, 2.5e-3}";
  return out;
}

// 6. Delta maps: existence for every n, window widths non-decreasing in m.
Outcome delta_maps(std::size_t t_steps, int threads) {
  Outcome out{true, {}, {}};
  ExperimentConfig c2 = ExperimentConfig::defaults(Command::fig2);
  c2.time.t_steps = t_steps;
  c2.threads = threads;
  c2.validate();
  const auto rows2 = run_scan_fig2(c2);
  const double step = (c2.time.t_max - c2.time.t_min) / double(t_steps);
  for (int n : c2.n_grid) {
    std::size_t cells = 0;
    double best = 0.0;
    for (const auto& r : rows2)
      if (r.n == n && r.delta && *r.delta > 0.0) ++cells, best = std::max(best, *r.delta);
    out.pass = out.pass && cells > 0;
    out.details.push_back(fmt("fig2 n=%2d m=%2d  cells with Delta > 0: %3zu  max Delta = %.3e%s", n, n - 2, cells, best,
                              cells ? "" : "  <-- none"));
  }
  ExperimentConfig c3 = ExperimentConfig::defaults(Command::fig3);
  c3.time.t_steps = t_steps;
  c3.threads = threads;
  c3.validate();
  const auto rows3 = run_scan_fig3(c3);
  std::size_t prev = 0;
  bool monotone = true;
  for (int m : c3.m_grid) {
    std::size_t cells = 0;
    for (const auto& r : rows3)
      if (r.m == m && r.delta && *r.delta > 0.0) ++cells;
    const bool grows = cells >= prev;
    monotone = monotone && grows;
    out.pass = out.pass && cells > 0 && grows;
    out.details.push_back(fmt("fig3 n=10 m=%d  window width = %3zu cells = %.4f%s", m, cells, cells * step,
                              cells == 0 ? "  <-- none" : (grows ? "" : "  <-- narrower than m-1")));
    prev = cells;
  }
  out.summary = fmt("Delta maps at eta = 0.01 on (0, 4 pi] with %zu points: Delta > 0 for every n = 4..12 and "
                    "m = 2..8, window width non-decreasing in m [%s]",
                    t_steps, monotone ? "yes" : "no");
  return out;
}

// 7. Conservation along integration on random configurations.
Outcome conservation(std::uint64_t seed) {
  Outcome out{true, {}, {}};
  std::mt19937_64 rng(seed);
  auto uniform_int = [&](int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); };
  auto uniform = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
  double w_trace = 0, w_herm = 0, w_vac = 0, w_eig = 1;
  for (int rep = 0; rep < 100; ++rep) {
    const int n = uniform_int(3, 8);
    std::vector<int> verts(n);
    for (int k = 0; k < n; ++k) verts[k] = k + 1;
    std::shuffle(verts.begin(), verts.end(), rng);
    const int input = verts[0], output = verts[1];
    const int m = uniform_int(0, n - 2);
    std::vector<int> noisy(verts.begin() + 2, verts.begin() + 2 + m);
    NoiseSpec spec;
    if (rep % 2 == 0) {
      spec = NoiseSpec::uniform(noisy, uniform(0.0, 5.0));
    } else {
      std::map<Edge, double> rates;
      for (std::size_t a = 0; a < noisy.size(); ++a)
        for (std::size_t b = a + 1; b < noisy.size(); ++b) rates[Edge(noisy[a], noisy[b])] = uniform(0.0, 5.0);
      spec = NoiseSpec::per_edge(noisy, rates);
    }
    const TransferSetup s{complete_graph(n), spec, input, output};
    const Liouvillian l = build_liouvillian(s);
    NetworkState rho0;
    if (rep % 3 == 0) {
      std::normal_distribution<double> g;
      CMatrix a(n + 1, n + 1);
      for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = cplx(g(rng), g(rng));
      CMatrix rho = a * a.adjoint();
      rho0 = NetworkState(rho / rho.trace().real());
    } else {
      rho0 = initial_network_state(n, input, {uniform(0.0, kPi), uniform(0.0, 2 * kPi)});
    }
    const double vac0 = rho0.rho()(0, 0).real();
    const double t = uniform(0.5, 3.0);
    double tr = 0, he = 0, va = 0, ev = 1;
    EvolveOptions o;
    o.integrator = Integrator::rk4;
    o.dt = std::min(1e-3, 0.1 / l.norm_estimate());
    o.observer = [&](const StepReport& r) {
      const NetworkState st(r.rho);
      tr = std::max(tr, st.trace_defect());
      he = std::max(he, st.hermiticity_defect());
      va = std::max(va, std::abs(r.rho(0, 0).real() - vac0));
      ev = std::min(ev, st.min_eigenvalue());
    };
    evolve(l, rho0, t, o);
    const bool ok = tr < 1e-9 && he < 1e-9 && va < 1e-9 && ev >= -1e-8;
    out.pass = out.pass && ok;
    w_trace = std::max(w_trace, tr), w_herm = std::max(w_herm, he), w_vac = std::max(w_vac, va);
    w_eig = std::min(w_eig, ev);
    if (!ok)
      out.details.push_back(fmt("config %d (n=%d m=%d t=%.3f): trace %.2e herm %.2e vacuum %.2e min eig %.2e", rep, n,
                                m, t, tr, he, va, ev));
  }
  out.details.push_back(fmt("worst trace drift %.2e, Hermiticity drift %.2e, vacuum drift %.2e, min eigenvalue %.2e",
                            w_trace, w_herm, w_vac, w_eig));
  out.summary = "conservation on 100 random configurations, n <= 8 (trace, Hermiticity, vacuum < 1e-9; eigenvalues >= -1e-8)";
  return out;
}

// 8. CLI output bytes do not depend on repetition or thread count.
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism(const std::string& cli) {
  Outcome out{true, {}, {}};
  if (cli.empty() || !fs::exists(cli)) {
    out.pass = false;
    out.summary = "CLI determinism: executable not found (pass --cli)";
    return out;
  }
  const fs::path dir = fs::temp_directory_path() / ("spinlube_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  struct Case {
    std::string command, config;
  };
  const std::vector<Case> cases{
      {"simulate", R"({"method": "lindblad", "eta": 1.5, "time": {"t_steps": 16}})"},
      {"simulate", R"({"method": "trajectories", "eta": 1.0, "n_traj": 96, "master_seed": 5, "time": {"t_steps": 6}})"},
      {"fig1", R"({"eta_grid": [0, 4, 8], "time": {"t_steps": 9}})"},
      {"fig2", R"({"n_grid": [4, 7], "time": {"t_steps": 24}})"},
      {"fig3", R"({"m_grid": [2, 5], "time": {"t_steps": 24}})"},
      {"report", R"({"n_traj": 200})"},
  };
  int idx = 0;
  for (const Case& c : cases) {
    const fs::path cfg = dir / ("case" + std::to_string(idx) + ".json");
    std::ofstream(cfg) << c.config;
    std::string reference;
    bool same = true;
    int status = 0;
    for (int threads : {1, 1, 2, 4}) {
      const fs::path outp = dir / ("out" + std::to_string(idx) + "_" + std::to_string(threads) + ".dat");
      const fs::path textp = dir / ("text" + std::to_string(idx) + ".txt");
      const std::string cmd = "'" + cli + "' " + c.command + " --config '" + cfg.string() + "' --out '" +
                              outp.string() + "' --threads " + std::to_string(threads) + " > '" + textp.string() +
                              "' 2>&1";
      status = std::system(cmd.c_str());
      std::string bytes = slurp(outp) + "\n--meta--\n" + slurp(fs::path(outp.string() + ".meta.json")) +
                          "\n--stdout--\n" + slurp(textp);
      if (reference.empty())
        reference = bytes;
      else
        same = same && bytes == reference;
      if (status != 0) same = false;
    }
    out.pass = out.pass && same;
    out.details.push_back(fmt("%-8s %-100.100s %s (%zu bytes)%s", c.command.c_str(), c.config.c_str(),
                              same ? "identical" : "DIFFERENT", reference.size(),
                              status != 0 ? fmt("  exit status %d", status).c_str() : ""));
    ++idx;
  }
  fs::remove_all(dir);
  out.summary = "CLI determinism: every command byte-identical across repeats and 1, 2, 4 threads";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spinlube acceptance criteria"};
  int criterion = 0;
  std::string cli;
  int threads = 1;
  std::uint64_t seed = 20260101;
  std::size_t fig_steps = 800;
  app.add_option("--criterion", criterion, "criterion number 1..8")->required()->check(CLI::Range(1, 8));
  app.add_option("--cli", cli, "path to the spinlube executable (criterion 8)");
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "master seed for random parts");
  app.add_option("--fig-steps", fig_steps, "time points on (0, 4 pi] for criterion 6")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  Outcome o;
  try {
    switch (criterion) {
      case 1: o = no_pst(); break;
      case 2: o = triple_agreement(threads, seed); break;
      case 3: o = noise_benefit(); break;
      case 4: o = zeno_reduction(); break;
      case 5: o = weak_noise_order(); break;
      case 6: o = delta_maps(fig_steps, threads); break;
      case 7: o = conservation(seed); break;
      case 8: o = determinism(cli); break;
    }
  } catch (const std::exception& e) {
    o.pass = false;
    o.summary = std::string("raised: ") + e.what();
  }
  std::cout << "criterion " << criterion << " [PRIMARY] " << (o.pass ? "PASS" : "FAIL") << ": " << o.summary << "\n";
  for (const auto& d : o.details) std::cout << "    " << d << "\n";
  return o.pass ? 0 : 1;
}
