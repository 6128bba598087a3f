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

#include "propagator.hpp"
#include "test_support.hpp"

using namespace spinlube;
using spinlube::testing::error_code_of;
using spinlube::testing::max_abs_diff;

TEST_SUITE("propagator") {

TEST_CASE("U(0) is the identity") {
  const auto h = single_excitation_hamiltonian(complete_graph(5));
  CHECK(max_abs_diff(propagator_matrix(h, 0.0), CMatrix::Identity(6, 6)) < 1e-14);
}

TEST_CASE("complete-graph propagator against its spectral closed form") {
  // U = |0><0| + e^{2it} P_sector + (e^{-i(2n-2)t} - e^{2it}) |u><u|, u uniform
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ut(0.0, 10.0);
  for (int n = 2; n <= 8; ++n) {
    const auto h = single_excitation_hamiltonian(complete_graph(n));
    for (int rep = 0; rep < 5; ++rep) {
      const double t = ut(rng);
      CMatrix expect = CMatrix::Zero(n + 1, n + 1);
      expect(0, 0) = 1.0;
      const cplx a = std::exp(kI * (2.0 * t));
      const cplx b = std::exp(-kI * ((2.0 * n - 2.0) * t));
      for (int k = 1; k <= n; ++k)
        for (int l = 1; l <= n; ++l) expect(k, l) = (k == l ? a : 0.0) + (b - a) / double(n);
      CHECK(max_abs_diff(propagator_matrix(h, t), expect) < 1e-12);
    }
  }
}

TEST_CASE("propagators of random Hermitian matrices are unitary") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int rep = 0; rep < 20; ++rep) {
    const int d = 2 + rep % 7;
    CMatrix a(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) a(i, j) = cplx(g(rng), g(rng));
    const HermitianOperator h(CMatrix((a + a.adjoint()) / 2.0));
    const CMatrix u = propagator_matrix(h, 3.7);
    CHECK(max_abs_diff(u.adjoint() * u, CMatrix::Identity(d, d)) < 1e-12);
    // group property U(s)U(t) = U(s+t)
    CHECK(max_abs_diff(propagator_matrix(h, 1.2) * propagator_matrix(h, 2.5), u) < 1e-11);
  }
}

TEST_CASE("transfer amplitude examples") {
  const auto h2 = single_excitation_hamiltonian(complete_graph(2));
  const auto h4 = single_excitation_hamiltonian(complete_graph(4));
  CHECK(std::abs(transfer_amplitude(h4, 0.0, 1, 2)) < 1e-15);
  CHECK(std::abs(transfer_amplitude(h2, kPi / 4, 1, 2)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::norm(transfer_amplitude(h4, kPi / 8, 1, 2)) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(error_code_of([&] { transfer_amplitude(h4, 1.0, 2, 2); }) == Errc::invalid_argument);
  CHECK(error_code_of([&] { transfer_amplitude(h4, 1.0, 1, 5); }) == Errc::invalid_argument);
}

TEST_CASE("closed-form transfer probability matches the propagator") {
  for (int n = 2; n <= 12; ++n) {
    const auto h = single_excitation_hamiltonian(complete_graph(n));
    for (int k = 0; k <= 40; ++k) {
      const double t = 0.173 * k;
      CHECK(complete_graph_transfer_prob(n, t) ==
            doctest::Approx(std::norm(transfer_amplitude(h, t, 1, 2))).epsilon(1e-12).scale(1.0));
    }
  }
  CHECK(complete_graph_transfer_prob(4, 0.0) == 0.0);
  CHECK(complete_graph_transfer_prob(4, kPi / 8) == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("grid search: max |z|^2 = 1/4 for n = 4, at pi/8 + k pi/4") {
  const auto h = single_excitation_hamiltonian(complete_graph(4));
  const int steps = 64000;
  double best = 0.0, best_t = 0.0;
  for (int k = 1; k <= steps; ++k) {
    const double t = 2.0 * kPi * k / steps;
    const double p = std::norm(transfer_amplitude(h, t, 1, 2));
    if (p > best) {
      best = p;
      best_t = t;
    }
  }
  CHECK(best == doctest::Approx(0.25).epsilon(1e-8));
  const double phase = std::fmod(best_t - kPi / 8, kPi / 4);
  CHECK(std::min(phase, kPi / 4 - phase) < 2.0 * kPi / steps);
}

TEST_CASE("fidelity given a decoder") {
  const ChannelParams zero{cplx(0.0, 0.0), 0.4};
  CHECK(avg_fidelity_given_V(zero, cplx(0.6, 0.3)) == doctest::Approx(0.5));
  const ChannelParams real{cplx(0.7, 0.0), 1.0};
  CHECK(avg_fidelity_given_V(real, 1.0) == doctest::Approx(0.5 + 0.7 / 3 + 0.49 / 6));
  const ChannelParams c{cplx(0.3, -0.5), 0.8};
  CHECK(avg_fidelity_given_V(c, 0.0) == doctest::Approx(0.5 - std::norm(c.z) / 6));
}

TEST_CASE("optimal fidelity examples") {
  CHECK(optimal_avg_fidelity({cplx(0.0, 1.0), 1.0}) == doctest::Approx(1.0));
  CHECK(optimal_avg_fidelity({cplx(0.0, 0.0), 1.0}) == doctest::Approx(0.5));
  CHECK(optimal_avg_fidelity({cplx(0.0, 0.5), 1.0}) == doctest::Approx(17.0 / 24.0).epsilon(1e-14));
}

TEST_CASE("optimal fidelity equals a brute-force maximum over the decoder disk") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int rep = 0; rep < 10; ++rep) {
    const ChannelParams ch{std::polar(uni(rng), 2.0 * kPi * uni(rng)), uni(rng)};
    double best = 0.0;
    for (int i = 0; i <= 100; ++i)
      for (int j = 0; j < 360; ++j)
        best = std::max(best, avg_fidelity_given_V(ch, std::polar(i / 100.0, 2.0 * kPi * j / 360.0)));
    const double f = optimal_avg_fidelity(ch);
    CHECK(f >= best - 1e-12);
    CHECK(f - best < 1e-4);
    CHECK(avg_fidelity_given_V(ch, optimal_decoder_phase(ch.z)) == doctest::Approx(f).epsilon(1e-13));
  }
  CHECK(optimal_decoder_phase(0.0) == cplx(1.0, 0.0));
}

TEST_CASE("Bloch-sphere quadrature against the closed form") {
  CHECK(bloch_sphere_average({cplx(1.0, 0.0), 1.0}, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(bloch_sphere_average({cplx(0.0, 0.0), 1.0}, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
  const ChannelParams ch{cplx(0.3, 0.4), 0.7};
  const cplx u = optimal_decoder_phase(ch.z);
  CHECK(std::abs(bloch_sphere_average(ch, u) - optimal_avg_fidelity(ch)) < 1e-6);

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int rep = 0; rep < 12; ++rep) {
    const ChannelParams c{std::polar(uni(rng), 2.0 * kPi * uni(rng)), uni(rng)};
    const cplx v = std::polar(std::sqrt(uni(rng)), 2.0 * kPi * uni(rng));
    CHECK(std::abs(bloch_sphere_average(c, v) - avg_fidelity_given_V(c, v)) < 1e-6);
  }
}

TEST_CASE("pointwise fidelity: identity channel is perfect for every input") {
  for (double th : {0.0, 0.4, kPi / 2, 2.9, kPi})
    CHECK(pointwise_fidelity({cplx(1.0, 0.0), 1.0}, 1.0, {th, 1.3}) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("channel parameter and probe validation") {
  CHECK_FALSE(ChannelParams{cplx(1.1, 0.0), 1.0}.is_valid());
  CHECK_FALSE(ChannelParams{cplx(0.1, 0.0), -0.1}.is_valid());
  CHECK(error_code_of([] { ChannelParams{cplx(0.0, 2.0), 0.5}.validate(); }) == Errc::invalid_argument);
  CHECK(error_code_of([] { BlochInput{4.0, 0.0}.validate(); }) == Errc::invalid_argument);
  CHECK(error_code_of([] { BlochInput{1.0, -0.1}.validate(); }) == Errc::invalid_argument);
}

TEST_CASE("maximal noiseless fidelity decreases with n and matches 1/2 + (2/n)/3 + (4/n^2)/6") {
  for (int n = 2; n <= 12; ++n) {
    const double expect = 0.5 + (2.0 / n) / 3.0 + (4.0 / (n * n)) / 6.0;
    CHECK(complete_graph_max_fidelity(n) == doctest::Approx(expect).epsilon(1e-14));
    if (n > 2) CHECK(complete_graph_max_fidelity(n) < complete_graph_max_fidelity(n - 1));
  }
  CHECK(complete_graph_max_fidelity(2) == doctest::Approx(1.0));
  CHECK(complete_graph_max_fidelity(4) == doctest::Approx(17.0 / 24.0));
}

TEST_CASE("unitary channel") {
  const auto s = complete_setup(5, 2, 3.0);
  const ChannelParams c = unitary_channel(s, 0.9);
  CHECK(c.lambda == 1.0);
  CHECK(std::norm(c.z) == doctest::Approx(complete_graph_transfer_prob(5, 0.9)).epsilon(1e-12));
}

}
