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

#pragma once

// Weak-noise expansion rho ~ r0 + eta r1 of the transfer channel, in two
// independent forms: the closed-form coefficients (beta, beta', b1..b8,
// xi1, xi2) evaluated literally, and a numeric interaction-picture quadrature
// of the first-order correction. Also the noise-benefit statistic Delta.

#include <array>
#include <span>
#include <vector>

#include "common.hpp"
#include "lindblad.hpp"
#include "network.hpp"
#include "propagator.hpp"

namespace spinlube {

/// (e^{it}/n)(e^{-int} - 1): the input->output amplitude of the complete
/// graph with unit hopping, i.e. z(t/2) of the engine's Hamiltonian.
cplx beta(int n, double t);
/// (e^{it}/n)(e^{-int} + n - 1): the matching return amplitude.
cplx beta_prime(int n, double t);

/// b1..b8 (stored at b[0]..b[7]).
struct BCoefficients {
  std::array<cplx, 8> b{};
  double step = 0.0;  // Simpson step finally accepted
};

/// Composite Simpson with step <= max_step, halved until successive
/// estimates agree to 1e-8 relative.
BCoefficients b_coefficients(int n, double t, double max_step = 1e-3);

/// |z|^2 = z_sq_0 + eta xi1, lambda z = lambda_z_0 + eta xi2.
struct WeakNoiseChannel {
  double z_sq_0 = 0.0;
  cplx lambda_z_0{0.0, 0.0};
  double xi1 = 0.0;
  cplx xi2{0.0, 0.0};
  double eta = 0.0;

  double z_sq() const noexcept { return z_sq_0 + eta * xi1; }
  cplx lambda_z() const noexcept { return lambda_z_0 + eta * xi2; }
  /// 1/2 + |lambda z|/3 + |z|^2/6.
  double fidelity() const noexcept;
};

/// Closed forms evaluated as printed, including lambda z = |beta|^2 + eta xi2
/// and the "+ c.c." on xi1. Arguments are in the units of those formulas
/// (unit hopping); no time rescaling is applied.
WeakNoiseChannel printed_weak_noise_channel(int n, int m, double eta, double t);

/// First-order correction r1(t) for the setup's noise (rates included):
/// U(t) [ int_0^t U^dag(s) D(U(s) rho0 U^dag(s)) U(s) ds ] U^dag(t).
CMatrix first_order_correction(const TransferSetup& setup, const NetworkState& rho0, double t,
                               double quadrature_step = 1e-3);

/// r0(t) + r1(t) as a state (not renormalized; the correction is traceless).
NetworkState first_order_state(const TransferSetup& setup, double t, double quadrature_step = 1e-3);

/// First-order channel of the complete graph with m noisy vertices, from the
/// numeric correction; exactly linear in eta.
WeakNoiseChannel first_order_numeric(int n, int m, double eta, double t, double quadrature_step = 1e-3);

/// Same for any setup. Uniform noise gives xi per unit eta; per-edge rates
/// are folded into xi1, xi2 and eta is reported as 1.
WeakNoiseChannel first_order_numeric(const TransferSetup& setup, double t, double quadrature_step = 1e-3);

/// Second-order remainder: max(||z|^2 - |z|^2_L|, |lambda z - (lambda z)_L|)
/// between first_order_numeric and an exact Lindblad run.
double weak_noise_gap(int n, int m, double eta, double t);

struct DeltaStatistic {
  double value = 0.0;  // max(F - baseline, 0)
  double t = 0.0;
  int n = 0;
  int m = 0;
  double eta = 0.0;
  double fidelity = 0.0;
  double baseline = 0.0;
  ChannelParams channel;
};

/// max_t F at eta = 0. Complete graphs use the closed form; other graphs take
/// the best point of `t_grid` and refine it with Brent's method.
double noiseless_max_fidelity(const TransferSetup& setup, std::span<const double> t_grid);

/// Delta at one time, with F from the Lindblad engine.
DeltaStatistic delta_statistic(int n, int m, double eta, double t, std::span<const double> t_grid_for_baseline,
                               const EvolveOptions& opts = {});

/// Delta along ascending times in one integration.
std::vector<DeltaStatistic> delta_series(const TransferSetup& setup, std::span<const double> times,
                                         std::span<const double> t_grid_for_baseline,
                                         const EvolveOptions& opts = {});

}  // namespace spinlube
