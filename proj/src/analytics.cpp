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

#include "analytics.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/tools/minima.hpp>

namespace spinlube {

namespace {

// sinh(w)/w, by series near zero.
cplx sinhc(cplx w) {
  if (std::abs(w) < 1e-4) {
    const cplx w2 = w * w;
    return 1.0 + w2 / 6.0 + w2 * w2 / 120.0;
  }
  return std::sinh(w) / w;
}

// cosh(x t/4) + (eta/x) sinh(x t/4), continuous through x = 0.
cplx bracket(cplx x, double eta, double t) {
  const cplx w = x * (t / 4.0);
  return std::cosh(w) + eta * (t / 4.0) * sinhc(w);
}

}  // namespace

double FourNodeClosedForm::fidelity() const noexcept {
  return 0.5 + std::abs(lambda_z) / 3.0 + z_sq / 6.0;
}

FourNodeClosedForm four_node_closed_form(double eta, double t) {
  require(eta >= 0.0 && std::isfinite(eta), Errc::invalid_argument, "four_node_closed_form: eta must be >= 0");
  require(t >= 0.0 && std::isfinite(t), Errc::invalid_argument, "four_node_closed_form: t must be >= 0");
  FourNodeClosedForm f;
  f.p = std::sqrt(cplx(eta * eta - 256.0, 0.0));
  f.q = std::sqrt(cplx(eta * eta - 64.0, 0.0));
  const double decay = std::exp(-eta * t / 4.0);
  const cplx zs = 2.0 * decay * (bracket(f.p, eta, t) - 4.0 * std::cos(2.0 * t) * bracket(f.q, eta, t)) - 1.5;
  f.z_sq = zs.real();
  f.lambda_z = std::exp(cplx(-eta * t / 4.0, t)) / 2.0 * bracket(f.q, eta, t) - std::exp(cplx(0.0, -t)) / 2.0;
  return f;
}

HermitianOperator zeno_effective_hamiltonian(int n, const NoiseSpec& spec) {
  spec.validate(n, 1, 2);
  CMatrix h = single_excitation_hamiltonian(complete_graph(n)).matrix();
  for (int w : spec.vertices()) {
    h.row(w).setZero();
    h.col(w).setZero();
  }
  return HermitianOperator(std::move(h));
}

ChannelParams zeno_limit_channel(int n, int m, double t) {
  require(n >= 2, Errc::invalid_argument, "zeno_limit_channel: n must be >= 2");
  if (m != n - 2)
    fail(Errc::unsupported, "zeno_limit_channel covers m = n-2 only; use zeno_effective_hamiltonian");
  return {cplx(0.0, std::sin(2.0 * t)), 1.0};
}

double zeno_transfer_time() noexcept { return kPi / 4.0; }

ChannelParams zeno_limit_channel_as_printed(double t) { return {cplx(0.0, std::sin(t)), 1.0}; }

ZenoComparison zeno_reduction_curves(int n, int m, double eta, std::span<const double> times,
                                     const EvolveOptions& opts) {
  const TransferSetup setup = complete_setup(n, m, eta);
  const auto channels = lindblad_channels(setup, times, opts);
  const SpectralDecomposition eff(zeno_effective_hamiltonian(n, setup.noise));
  CVector e = CVector::Zero(n + 1);
  e(setup.input) = 1.0;

  ZenoComparison out;
  out.times.assign(times.begin(), times.end());
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double fn = optimal_avg_fidelity(channels[k]);
    const double fe = optimal_avg_fidelity({eff.apply(times[k], e)(setup.output), 1.0});
    out.f_noisy.push_back(fn);
    out.f_effective.push_back(fe);
    if (std::abs(fn - fe) > out.max_deviation) {
      out.max_deviation = std::abs(fn - fe);
      out.t_at_max = times[k];
    }
  }
  return out;
}

TimeOptimum lindblad_best_time(const TransferSetup& setup, std::span<const double> t_grid,
                               const EvolveOptions& opts) {
  require(!t_grid.empty(), Errc::invalid_argument, "lindblad_best_time: empty grid");
  const auto channels = lindblad_channels(setup, t_grid, opts);
  std::size_t best = 0;
  for (std::size_t k = 1; k < channels.size(); ++k)
    if (optimal_avg_fidelity(channels[k]) > optimal_avg_fidelity(channels[best])) best = k;
  TimeOptimum out{t_grid[best], optimal_avg_fidelity(channels[best])};

  const double lo = t_grid[best > 0 ? best - 1 : best];
  const double hi = t_grid[best + 1 < t_grid.size() ? best + 1 : best];
  if (hi > lo) {
    // Each probe integrates from 0, so the result does not depend on the grid.
    auto neg_f = [&](double t) {
      const double one[] = {t};
      return -optimal_avg_fidelity(lindblad_channels(setup, one, opts).front());
    };
    const auto r = boost::math::tools::brent_find_minima(neg_f, lo, hi, 40);
    if (-r.second > out.fidelity) out = {r.first, -r.second};
  }
  return out;
}

double effective_network_max_fidelity(int n) { return complete_graph_max_fidelity(n); }

std::vector<double> linear_grid(double a, double b, std::size_t points) {
  require(points >= 1, Errc::invalid_argument, "grid needs at least one point");
  require(b >= a, Errc::invalid_argument, "grid bounds must be ascending");
  std::vector<double> g(points);
  if (points == 1) {
    g[0] = a;
    return g;
  }
  const double h = (b - a) / static_cast<double>(points - 1);
  for (std::size_t k = 0; k < points; ++k) g[k] = a + h * static_cast<double>(k);
  g.back() = b;
  return g;
}

}  // namespace spinlube
