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

#include "perturbation.hpp"

#include <cmath>

#include <boost/math/tools/minima.hpp>

#include "propagator.hpp"

namespace spinlube {

namespace {

template <class T>
double max_abs(const T& v) {
  if constexpr (std::is_same_v<T, cplx>)
    return std::abs(v);
  else
    return v.cwiseAbs().maxCoeff();
}

template <class T, class F>
T simpson(F&& f, double t, std::size_t intervals) {
  const double h = t / static_cast<double>(intervals);
  T acc = f(0.0) + f(t);
  for (std::size_t k = 1; k < intervals; ++k) acc += (k % 2 ? 4.0 : 2.0) * f(h * static_cast<double>(k));
  return acc * (h / 3.0);
}

// Composite Simpson from 0 to t with step <= max_step, halving until two
// successive estimates agree to `rtol` relative to the larger one.
template <class T, class F>
std::pair<T, double> adaptive_simpson(F&& f, double t, double max_step, double rtol = 1e-8) {
  require(max_step > 0.0, Errc::invalid_argument, "quadrature step must be positive");
  require(t >= 0.0, Errc::invalid_argument, "integration limit must be >= 0");
  auto intervals = static_cast<std::size_t>(std::ceil(t / max_step));
  intervals = std::max<std::size_t>(2, intervals + intervals % 2);
  T coarse = simpson<T>(f, t, intervals);
  for (int round = 0; round < 8; ++round) {
    intervals *= 2;
    T fine = simpson<T>(f, t, intervals);
    const double scale = std::max(max_abs(fine), max_abs(coarse));
    if (max_abs(T(fine - coarse)) <= rtol * scale || scale == 0.0)
      return {fine, t / static_cast<double>(intervals)};
    coarse = std::move(fine);
  }
  fail(Errc::numeric_failure, "Simpson quadrature did not reach the step-halving tolerance");
}

CMatrix dissipator(const std::vector<EdgeOperator>& ops, const CMatrix& rho) {
  CMatrix out = CMatrix::Zero(rho.rows(), rho.cols());
  for (const auto& e : ops) {
    const CMatrix& l = e.op.matrix();
    const CMatrix l2 = l * l;
    out += e.rate * (l * rho * l - 0.5 * (l2 * rho + rho * l2));
  }
  return out;
}

}  // namespace

cplx beta(int n, double t) {
  require(n >= 2, Errc::invalid_argument, "beta: n must be >= 2");
  return std::exp(kI * t) / double(n) * (std::exp(-kI * (double(n) * t)) - 1.0);
}

cplx beta_prime(int n, double t) {
  require(n >= 2, Errc::invalid_argument, "beta_prime: n must be >= 2");
  return std::exp(kI * t) / double(n) * (std::exp(-kI * (double(n) * t)) + double(n) - 1.0);
}

BCoefficients b_coefficients(int n, double t, double max_step) {
  require(n >= 2, Errc::invalid_argument, "b_coefficients: n must be >= 2");
  require(t >= 0.0, Errc::invalid_argument, "b_coefficients: t must be >= 0");
  using Vec8 = Eigen::Matrix<cplx, 8, 1>;
  BCoefficients out;
  if (t == 0.0) return out;
  auto integrand = [n](double tau) {
    const cplx b = beta(n, tau);
    const cplx bp = beta_prime(n, tau);
    const double b2 = std::norm(b);
    const double bp2 = std::norm(bp);
    const cplx cross = b * std::conj(bp);
    Vec8 v;
    v << cross, b2, cross * bp2, b * b * std::conj(bp) * std::conj(bp) + bp2 * b2, b2 * bp2,
        2.0 * std::real(cross) * b2, cross * b2, b2 * b2;
    return v;
  };
  auto [integral, step] = adaptive_simpson<Vec8>(integrand, t, max_step);
  const double pref = double(n - 3) * double(n - 3);
  for (int k = 0; k < 8; ++k) out.b[k] = pref * integral(k);
  out.step = step;
  return out;
}

double WeakNoiseChannel::fidelity() const noexcept { return 0.5 + std::abs(lambda_z()) / 3.0 + z_sq() / 6.0; }

WeakNoiseChannel printed_weak_noise_channel(int n, int m, double eta, double t) {
  require(n >= 2 && m >= 0 && m <= n - 2, Errc::invalid_argument, "printed_weak_noise_channel: need 0 <= m <= n-2");
  require(eta >= 0.0, Errc::invalid_argument, "eta must be >= 0");
  const BCoefficients bc = b_coefficients(n, t);
  const auto& b = bc.b;
  const cplx be = beta(n, t);
  const cplx bp = beta_prime(n, t);
  const double be2 = std::norm(be);
  const double bp2 = std::norm(bp);
  const double bpbe2 = std::norm(bp * be);
  const double mm = m;
  const double nn = n;
  const double s = mm * mm + nn - 1.0;

  const cplx inner = b[2] * be2 + b[3] * (std::conj(bp) * be + be2 * mm) + b[4] * (bp * std::conj(be) + be2 * mm) +
                     b[5] * (bp2 + bpbe2 * mm * mm + be2 * mm * mm) + b[6] * (std::conj(bp) + be2 * s) +
                     b[7] * (bp2 + bpbe2 * s * mm * mm * (nn - 2.0) + be2 * mm * s);
  const cplx braced = mm * inner;

  WeakNoiseChannel w;
  w.eta = eta;
  w.z_sq_0 = be2;
  w.lambda_z_0 = be2;
  w.xi1 = 2.0 * std::real(braced);  // {...} + c.c.
  w.xi2 = mm * (b[0] * be + b[1] * bp + b[1] * be * mm);
  return w;
}

CMatrix first_order_correction(const TransferSetup& setup, const NetworkState& rho0, double t,
                               double quadrature_step) {
  setup.validate();
  require(t >= 0.0, Errc::invalid_argument, "t must be >= 0");
  const auto h = single_excitation_hamiltonian(setup.graph);
  const auto ops = lindblad_edge_operators(setup.graph, setup.noise, setup.input, setup.output);
  require(rho0.dim() == h.dim(), Errc::invalid_argument, "state dimension mismatch");
  const auto d = h.dim();
  if (ops.empty() || t == 0.0) return CMatrix::Zero(d, d);

  const SpectralDecomposition spec(h);
  const CMatrix& r0 = rho0.rho();
  auto integrand = [&](double s) {
    const CMatrix u = spec.propagator(s);
    return CMatrix(u.adjoint() * dissipator(ops, u * r0 * u.adjoint()) * u);
  };
  const CMatrix r1_int = adaptive_simpson<CMatrix>(integrand, t, quadrature_step).first;
  const CMatrix ut = spec.propagator(t);
  return ut * r1_int * ut.adjoint();
}

NetworkState first_order_state(const TransferSetup& setup, double t, double quadrature_step) {
  const NetworkState rho0 = initial_network_state(setup.n(), setup.input, kCanonicalProbe);
  const CMatrix ut = propagator_matrix(single_excitation_hamiltonian(setup.graph), t);
  const CMatrix r1 = first_order_correction(setup, rho0, t, quadrature_step);
  return NetworkState(ut * rho0.rho() * ut.adjoint() + r1);
}

WeakNoiseChannel first_order_numeric(const TransferSetup& setup, double t, double quadrature_step) {
  setup.validate();
  TransferSetup unit = setup;
  double eta = 1.0;
  if (setup.noise.is_uniform()) {
    eta = setup.noise.uniform_rate();
    unit.noise = NoiseSpec::uniform(setup.noise.vertices(), 1.0);
  }
  const NetworkState rho0 = initial_network_state(unit.n(), unit.input, kCanonicalProbe);
  const CMatrix ut = propagator_matrix(single_excitation_hamiltonian(unit.graph), t);
  const CMatrix r0 = ut * rho0.rho() * ut.adjoint();
  const CMatrix r1 = first_order_correction(unit, rho0, t, quadrature_step);

  const cplx a = kCanonicalProbe.ground_amplitude();
  const cplx b = kCanonicalProbe.excited_amplitude();
  const int o = unit.output;
  WeakNoiseChannel w;
  w.eta = eta;
  w.z_sq_0 = std::real(r0(o, o)) / std::norm(b);
  w.lambda_z_0 = r0(o, 0) / (b * std::conj(a));
  w.xi1 = std::real(r1(o, o)) / std::norm(b);
  w.xi2 = r1(o, 0) / (b * std::conj(a));
  return w;
}

WeakNoiseChannel first_order_numeric(int n, int m, double eta, double t, double quadrature_step) {
  require(eta >= 0.0, Errc::invalid_argument, "eta must be >= 0");
  return first_order_numeric(complete_setup(n, m, eta), t, quadrature_step);
}

double weak_noise_gap(int n, int m, double eta, double t) {
  const WeakNoiseChannel w = first_order_numeric(n, m, eta, t);
  const double one[] = {t};
  EvolveOptions opts;
  opts.integrator = Integrator::exact;
  const ChannelParams c = lindblad_channels(complete_setup(n, m, eta), one, opts).front();
  return std::max(std::abs(w.z_sq() - std::norm(c.z)), std::abs(w.lambda_z() - c.lambda * c.z));
}

double noiseless_max_fidelity(const TransferSetup& setup, std::span<const double> t_grid) {
  setup.validate();
  if (setup.graph.is_complete()) return complete_graph_max_fidelity(setup.n());
  require(!t_grid.empty(), Errc::invalid_argument, "baseline grid is empty");
  const auto h = single_excitation_hamiltonian(setup.graph);
  const SpectralDecomposition spec(h);
  CVector e = CVector::Zero(h.dim());
  e(setup.input) = 1.0;
  auto fid = [&](double t) {
    return optimal_avg_fidelity({spec.apply(t, e)(setup.output), 1.0});
  };
  std::size_t best = 0;
  double best_f = fid(t_grid[0]);
  for (std::size_t k = 1; k < t_grid.size(); ++k) {
    const double f = fid(t_grid[k]);
    if (f > best_f) {
      best_f = f;
      best = k;
    }
  }
  const double lo = t_grid[best > 0 ? best - 1 : best];
  const double hi = t_grid[best + 1 < t_grid.size() ? best + 1 : best];
  if (hi > lo) {
    const auto r = boost::math::tools::brent_find_minima([&](double t) { return -fid(t); }, lo, hi, 50);
    best_f = std::max(best_f, -r.second);
  }
  return best_f;
}

std::vector<DeltaStatistic> delta_series(const TransferSetup& setup, std::span<const double> times,
                                         std::span<const double> t_grid_for_baseline, const EvolveOptions& opts) {
  const double baseline = noiseless_max_fidelity(setup, t_grid_for_baseline);
  // Without noise F never exceeds the baseline; suppress roundoff excess.
  const bool noiseless = setup.noise.edges().empty() || setup.noise.max_rate() == 0.0;
  const auto channels = lindblad_channels(setup, times, opts);
  std::vector<DeltaStatistic> out;
  out.reserve(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    DeltaStatistic d;
    d.t = times[k];
    d.n = setup.n();
    d.m = static_cast<int>(setup.noise.size());
    d.eta = setup.noise.max_rate();
    d.channel = channels[k];
    d.fidelity = optimal_avg_fidelity(channels[k]);
    d.baseline = baseline;
    d.value = noiseless ? 0.0 : std::max(d.fidelity - baseline, 0.0);
    out.push_back(d);
  }
  return out;
}

DeltaStatistic delta_statistic(int n, int m, double eta, double t, std::span<const double> t_grid_for_baseline,
                               const EvolveOptions& opts) {
  const TransferSetup setup = complete_setup(n, m, eta);
  const double times[] = {t};
  DeltaStatistic d = delta_series(setup, times, t_grid_for_baseline, opts).front();
  d.eta = eta;
  return d;
}

}  // namespace spinlube
