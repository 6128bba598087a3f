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

#include <doctest.h>

#include <random>

#include "lindblad.hpp"
#include "propagator.hpp"
#include "test_support.hpp"

using namespace spinlube;
using spinlube::testing::error_code_of;
using spinlube::testing::max_abs_diff;
using spinlube::testing::random_density;

namespace {

// -i[H, rho] + sum rate (L rho L - {L^2, rho}/2), written out with dense matrices.
CMatrix direct_rhs(const HermitianOperator& h, const std::vector<EdgeOperator>& ops, const CMatrix& rho) {
  CMatrix out = -kI * (h.matrix() * rho - rho * h.matrix());
  for (const auto& e : ops) {
    const CMatrix& l = e.op.matrix();
    out += e.rate * (l * rho * l - 0.5 * (l * l * rho + rho * l * l));
  }
  return out;
}

EvolveOptions with(Integrator i, double dt = 1e-3) {
  EvolveOptions o;
  o.dt = dt;
  o.integrator = i;
  return o;
}

TransferSetup per_edge_setup(int n, int m, double base) {
  TransferSetup s = complete_setup(n, m, 1.0);
  std::map<Edge, double> rates;
  double r = base;
  for (const Edge& e : s.noise.edges()) rates[e] = (r += 0.7);
  s.noise = NoiseSpec::per_edge(s.noise.vertices(), rates);
  return s;
}

}  // namespace

TEST_SUITE("lindblad") {

TEST_CASE("initial network states") {
  const CMatrix r0 = initial_network_state(4, 1, {0.0, 0.0}).rho();
  CHECK(std::abs(r0(0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(r0.trace() - 1.0) < 1e-15);
  const CMatrix rpi = initial_network_state(4, 3, {kPi, 0.0}).rho();
  CHECK(std::abs(rpi(3, 3) - 1.0) < 1e-15);
  CHECK(std::abs(rpi(0, 0)) < 1e-15);
  const CMatrix rh = initial_network_state(4, 1, kCanonicalProbe).rho();
  CHECK(std::abs(rh(0, 1) - 0.5) < 1e-15);
  CHECK(error_code_of([] { initial_network_state(4, 5, kCanonicalProbe); }) == Errc::invalid_argument);
}

TEST_CASE("vectorization is column stacking and round-trips") {
  std::mt19937_64 rng(1);
  const CMatrix rho = random_density(4, rng);
  const CVector v = vectorize(rho);
  CHECK(v(1) == rho(1, 0));
  CHECK(v(4) == rho(0, 1));
  CHECK(max_abs_diff(unvectorize(v, 4), rho) == 0.0);
}

TEST_CASE("generator agrees with the master equation written out densely") {
  std::mt19937_64 rng(2);
  for (int rep = 0; rep < 8; ++rep) {
    const int n = 3 + rep % 4;
    const int m = std::min(n - 2, 1 + rep % 3);
    const TransferSetup s = rep % 2 ? per_edge_setup(n, m, 0.1) : complete_setup(n, m, 0.3 + rep);
    const auto h = single_excitation_hamiltonian(s.graph);
    const auto ops = lindblad_edge_operators(s.graph, s.noise, s.input, s.output);
    const Liouvillian l = build_liouvillian(s);
    const CMatrix rho = random_density(n + 1, rng);
    const CMatrix got = unvectorize(l.apply(vectorize(rho)), n + 1);
    CHECK(max_abs_diff(got, direct_rhs(h, ops, rho)) < 1e-12);
  }
}

TEST_CASE("without noise the evolution is unitary conjugation") {
  const TransferSetup s = complete_setup(5, 0, 0.0);
  const Liouvillian l = build_liouvillian(s);
  std::mt19937_64 rng(4);
  const NetworkState rho0(random_density(6, rng));
  const CMatrix u = propagator_matrix(single_excitation_hamiltonian(s.graph), 1.7);
  const CMatrix expect = u * rho0.rho() * u.adjoint();
  CHECK(max_abs_diff(evolve(l, rho0, 1.7, 1e-3).rho(), expect) < 1e-9);
  CHECK(max_abs_diff(evolve(l, rho0, 1.7, with(Integrator::exact)).rho(), expect) < 1e-11);
}

TEST_CASE("single-edge dephasing against the hand-solved two-level dynamics") {
  // H = 0, L = |3><4| + |4><3| at rate eta on n = 4:
  //   coherence <3|rho|1> decays as exp(-eta t / 2),
  //   p3 - p4 decays as exp(-2 eta t),
  //   Im <3|rho|4> decays as exp(-2 eta t), Re <3|rho|4> is conserved.
  const double eta = 0.8, t = 1.3;
  const auto g = complete_graph(4);
  const auto ops = lindblad_edge_operators(g, NoiseSpec::uniform({3, 4}, eta), 1, 2);
  const Liouvillian l = build_liouvillian(HermitianOperator(CMatrix::Zero(5, 5)), ops);
  std::mt19937_64 rng(8);
  const NetworkState rho0(random_density(5, rng));
  const CMatrix r = evolve(l, rho0, t, with(Integrator::rk4, 1e-3)).rho();
  const CMatrix& a = rho0.rho();
  CHECK(std::abs(r(3, 1) - a(3, 1) * std::exp(-eta * t / 2)) < 1e-10);
  CHECK(std::abs((r(3, 3) - r(4, 4)) - (a(3, 3) - a(4, 4)) * std::exp(-2 * eta * t)) < 1e-10);
  CHECK(std::abs((r(3, 3) + r(4, 4)) - (a(3, 3) + a(4, 4))) < 1e-12);
  CHECK(std::abs(r(3, 4).imag() - a(3, 4).imag() * std::exp(-2 * eta * t)) < 1e-10);
  CHECK(std::abs(r(3, 4).real() - a(3, 4).real()) < 1e-10);
  // untouched block is frozen
  CHECK(std::abs(r(1, 2) - a(1, 2)) < 1e-12);
}

TEST_CASE("the identity on the support of L is a fixed point of the dissipator") {
  const auto ops = lindblad_edge_operators(complete_graph(5), NoiseSpec::uniform({3, 4, 5}, 2.0), 1, 2);
  const Liouvillian l = build_liouvillian(HermitianOperator(CMatrix::Zero(6, 6)), ops);
  CMatrix p = CMatrix::Zero(6, 6);
  p(3, 3) = p(4, 4) = p(5, 5) = 1.0;
  CHECK(l.apply(vectorize(p)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("t = 0 leaves the state unchanged") {
  const Liouvillian l = build_liouvillian(complete_setup(4, 2, 3.0));
  const NetworkState rho0 = initial_network_state(4, 1, kCanonicalProbe);
  CHECK(max_abs_diff(evolve(l, rho0, 0.0, 1e-3).rho(), rho0.rho()) == 0.0);
}

TEST_CASE("noiseless n = 4 output population is (1/8)(1 - cos 8t)") {
  const Liouvillian l = build_liouvillian(complete_setup(4, 2, 0.0));
  const NetworkState rho0 = initial_network_state(4, 1, {kPi, 0.0});
  const std::vector<double> ts{0.1, 0.4, 1.0, 2.2, 3.0};
  const auto states = evolve_to_times(l, rho0, ts, with(Integrator::rk4));
  for (std::size_t k = 0; k < ts.size(); ++k)
    CHECK(std::abs(states[k].rho()(2, 2).real() - (1 - std::cos(8 * ts[k])) / 8) < 1e-8);
}

TEST_CASE("exact exponential and RK4 agree, including the exceptional point eta = 16") {
  const std::vector<double> ts{0.3, 1.0, 2.5};
  for (double eta : {0.5, 8.0, 16.0, 40.0}) {
    const Liouvillian l = build_liouvillian(complete_setup(4, 2, eta));
    const NetworkState rho0 = initial_network_state(4, 1, kCanonicalProbe);
    const auto a = evolve_to_times(l, rho0, ts, with(Integrator::exact));
    const auto b = evolve_to_times(l, rho0, ts, with(Integrator::rk4, 2e-4));
    for (std::size_t k = 0; k < ts.size(); ++k) CHECK(max_abs_diff(a[k].rho(), b[k].rho()) < 1e-9);
  }
}

TEST_CASE("strict RK4 refuses steps that are too long for the generator") {
  const Liouvillian l = build_liouvillian(complete_setup(4, 2, 1000.0));
  const NetworkState rho0 = initial_network_state(4, 1, kCanonicalProbe);
  CHECK(error_code_of([&] { evolve(l, rho0, 1.0, 1e-3); }) == Errc::invalid_argument);
}

TEST_CASE("automatic integrator choice") {
  const Liouvillian stiff = build_liouvillian(complete_setup(4, 2, 1000.0));
  CHECK(resolve_integrator(stiff, 1.0, with(Integrator::automatic)).integrator == Integrator::exact);
  const Liouvillian mild = build_liouvillian(complete_setup(4, 2, 1.0));
  const IntegratorChoice c = resolve_integrator(mild, 1.0, with(Integrator::automatic));
  CHECK(c.integrator == Integrator::rk4);
  CHECK(c.dt * mild.norm_estimate() <= 0.1 + 1e-12);
  CHECK(integrator_from_name(integrator_name(Integrator::exact)) == Integrator::exact);
  CHECK(integrator_from_name("auto") == Integrator::automatic);
  CHECK(error_code_of([] { integrator_from_name("euler"); }) == Errc::invalid_argument);
}

TEST_CASE("observer sees every step and the invariants hold along the way") {
  const Liouvillian l = build_liouvillian(complete_setup(5, 3, 2.0));
  const NetworkState rho0 = initial_network_state(5, 1, {1.1, 0.4});
  std::size_t calls = 0, last = 0;
  double worst_trace = 0.0, worst_eig = 1.0;
  EvolveOptions o = with(Integrator::rk4, 1e-3);
  o.observer = [&](const StepReport& r) {
    CHECK((calls == 0 || r.step == last + 1));
    last = r.step;
    ++calls;
    const NetworkState s(r.rho);
    worst_trace = std::max(worst_trace, s.trace_defect());
    worst_eig = std::min(worst_eig, s.min_eigenvalue());
  };
  evolve(l, rho0, 0.5, o);
  CHECK(calls == 501);
  CHECK(worst_trace < 1e-12);
  CHECK(worst_eig > -1e-10);
}

TEST_CASE("channel extraction") {
  const TransferSetup s = complete_setup(5, 0, 0.0);
  const Liouvillian l = build_liouvillian(s);
  const BlochInput probe{1.1, 0.7};
  const NetworkState rho0 = initial_network_state(5, 1, probe);
  const double t = 0.37;
  const ChannelParams c = extract_channel(evolve(l, rho0, t, with(Integrator::exact)), probe, 1, 2);
  const cplx z = transfer_amplitude(single_excitation_hamiltonian(s.graph), t, 1, 2);
  CHECK(std::abs(c.lambda - 1.0) < 1e-8);
  CHECK(std::abs(c.z - z) < 1e-10);

  const ChannelParams c0 = extract_channel(rho0, probe, 1, 2);
  CHECK(c0.z == cplx(0.0, 0.0));
  CHECK(c0.lambda == 1.0);

  CHECK(error_code_of([&] { extract_channel(rho0, {0.0, 0.0}, 1, 2); }) == Errc::invalid_argument);
  CHECK(error_code_of([&] { extract_channel(rho0, probe, 1, 1); }) == Errc::invalid_argument);
  CMatrix bad = rho0.rho();
  bad(2, 2) = -1e-6;
  CHECK(error_code_of([&] { extract_channel(NetworkState(bad), probe, 1, 2); }) == Errc::numeric_failure);
}

TEST_CASE("noisy channels stay physical and dephase") {
  const std::vector<double> ts{0.2, 0.9, 2.0, 4.0};
  const auto ch = lindblad_channels(complete_setup(6, 3, 0.7), ts);
  for (const auto& c : ch) {
    CHECK(c.is_valid());
    CHECK(c.lambda < 1.0);
  }
}

TEST_CASE("state invariants") {
  std::mt19937_64 rng(9);
  const NetworkState ok(random_density(4, rng));
  ok.check_invariants();
  CMatrix neg = CMatrix::Zero(2, 2);
  neg(0, 0) = 1.1;
  neg(1, 1) = -0.1;
  CHECK(error_code_of([&] { NetworkState(neg).check_invariants(); }) == Errc::numeric_failure);
  CMatrix tr = CMatrix::Identity(2, 2);
  CHECK(error_code_of([&] { NetworkState(tr).check_invariants(); }) == Errc::numeric_failure);
}


TEST_CASE("vacuum population is conserved") {
  const Liouvillian l = build_liouvillian(per_edge_setup(6, 4, 0.2));
  const NetworkState rho0 = initial_network_state(6, 1, {0.9, 2.0});
  const double p0 = rho0.rho()(0, 0).real();
  double worst = 0.0;
  EvolveOptions o = with(Integrator::rk4);
  o.observer = [&](const StepReport& r) { worst = std::max(worst, std::abs(r.rho(0, 0).real() - p0)); };
  evolve(l, rho0, 2.0, o);
  CHECK(worst < 1e-12);
}

TEST_CASE("fidelity does not depend on which vertices are noisy or which pair transfers") {
  const std::vector<double> ts{0.4, 1.1, 2.7};
  const auto ref = lindblad_channels(complete_setup(6, 2, 1.5), ts);
  const TransferSetup other{complete_graph(6), NoiseSpec::uniform({1, 5}, 1.5), 2, 6};
  const TransferSetup swapped{complete_graph(6), NoiseSpec::uniform({6, 3}, 1.5), 4, 2};
  for (const TransferSetup& s : {other, swapped}) {
    const auto got = lindblad_channels(s, ts);
    for (std::size_t k = 0; k < ts.size(); ++k)
      CHECK(std::abs(optimal_avg_fidelity(got[k]) - optimal_avg_fidelity(ref[k])) < 1e-9);
  }
}

TEST_CASE("extracted channel does not depend on the probe") {
  const TransferSetup s = complete_setup(5, 2, 0.9);
  const Liouvillian l = build_liouvillian(s);
  const double t = 1.3;
  const auto ref = extract_channel(evolve(l, initial_network_state(5, 1, kCanonicalProbe), t, 1e-3),
                                   kCanonicalProbe, 1, 2);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> th(0.2, kPi - 0.2), ph(0.0, 2 * kPi);
  for (int rep = 0; rep < 6; ++rep) {
    const BlochInput probe{th(rng), ph(rng)};
    const auto c = extract_channel(evolve(l, initial_network_state(5, 1, probe), t, 1e-3), probe, 1, 2);
    CHECK(std::abs(c.z - ref.z) < 1e-10);
    CHECK(std::abs(c.lambda - ref.lambda) < 1e-9);
  }
}

TEST_CASE("halving dt moves the fidelity by at most 1e-8") {
  const double ts[] = {0.5, 1.0, 1.5 * kPi};
  for (double eta : {0.25, 1.0, 4.0}) {
    const auto a = lindblad_channels(complete_setup(4, 2, eta), ts, with(Integrator::rk4, 1e-3));
    const auto b = lindblad_channels(complete_setup(4, 2, eta), ts, with(Integrator::rk4, 5e-4));
    for (std::size_t k = 0; k < 3; ++k)
      CHECK(std::abs(optimal_avg_fidelity(a[k]) - optimal_avg_fidelity(b[k])) < 1e-8);
  }
}

TEST_CASE("noiseless channel equals the unitary transfer amplitude") {
  const double ts[] = {0.3, 0.9, 2.0};
  const TransferSetup s = complete_setup(7, 0, 0.0);
  const auto ex = lindblad_channels(s, ts, with(Integrator::exact));
  const auto rk = lindblad_channels(s, ts, with(Integrator::rk4));
  for (std::size_t k = 0; k < 3; ++k) {
    const ChannelParams u = unitary_channel(s, ts[k]);
    CHECK(std::abs(ex[k].z - u.z) < 1e-10);
    CHECK(std::abs(ex[k].lambda - 1.0) < 1e-10);
    CHECK(std::abs(optimal_avg_fidelity(rk[k]) - optimal_avg_fidelity(u)) < 1e-8);
  }
}

}
