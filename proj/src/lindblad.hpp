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

// Noise-averaged dynamics: the Liouvillian of the edge-noise model, its
// integration, and recovery of the reduced channel from the network state.

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "common.hpp"
#include "network.hpp"
#include "propagator.hpp"

namespace spinlube {

/// Density matrix on the vacuum + single-excitation space.
class NetworkState {
 public:
  NetworkState() = default;
  explicit NetworkState(CMatrix rho);

  static NetworkState pure(const CVector& psi);

  const CMatrix& rho() const noexcept { return rho_; }
  Eigen::Index dim() const noexcept { return rho_.rows(); }

  double hermiticity_defect() const;
  double trace_defect() const;  // |tr rho - 1|
  double min_eigenvalue() const;

  /// Throws numeric_failure unless Hermitian (1e-10), unit trace (1e-10) and
  /// positive semidefinite down to -1e-8.
  void check_invariants(const std::string& context = {}) const;

 private:
  CMatrix rho_;
};

/// cos(theta/2)|0> + e^{i phi} sin(theta/2)|input> on a network of n vertices.
NetworkState initial_network_state(int n, int input, const BlochInput& in);
CVector initial_network_vector(int n, int input, const BlochInput& in);

/// d vec(rho)/dt = G vec(rho) with column-stacked vec. The dissipator is
/// sum_e rate_e (L rho L - {L^2, rho}/2).
class Liouvillian {
 public:
  Liouvillian(CSparse hamiltonian_part, CSparse dissipator_part, double max_rate);

  Eigen::Index state_dim() const noexcept { return dim_; }
  const CSparse& generator() const noexcept { return generator_; }
  const CSparse& hamiltonian_part() const noexcept { return hamiltonian_; }
  const CSparse& dissipator_part() const noexcept { return dissipator_; }
  double max_rate() const noexcept { return max_rate_; }
  /// Spectral norm estimate from power iteration on G^dag G.
  double norm_estimate() const noexcept { return norm_; }

  CVector apply(const CVector& v) const { return generator_ * v; }

 private:
  Eigen::Index dim_;
  CSparse hamiltonian_;
  CSparse dissipator_;
  CSparse generator_;
  double max_rate_;
  double norm_;
};

Liouvillian build_liouvillian(const HermitianOperator& h, const std::vector<EdgeOperator>& ops);
Liouvillian build_liouvillian(const TransferSetup& setup);

CVector vectorize(const CMatrix& rho);
CMatrix unvectorize(const CVector& v, Eigen::Index dim);

enum class Integrator {
  rk4,        // classical 4th order, fixed step
  exact,      // exp(G h) between output times
  automatic,  // rk4 unless the problem is stiff for the requested step
};

const char* integrator_name(Integrator i) noexcept;
Integrator integrator_from_name(const std::string& name);

struct StepReport {
  std::size_t step;
  double t;
  const CMatrix& rho;
};

struct EvolveOptions {
  double dt = 1e-3;
  Integrator integrator = Integrator::automatic;
  /// Called after every accepted step (and once for the initial state).
  std::function<void(const StepReport&)> observer;
};

/// exp(G h) applied exactly. Uses the eigendecomposition of G when its residual
/// ||G V - V diag(w)|| and reconstruction error pass 1e-8; falls back to
/// scaling-and-squaring Pade otherwise (defective generators at exceptional
/// points).
class ExactPropagator {
 public:
  explicit ExactPropagator(const Liouvillian& l);

  bool uses_eigendecomposition() const noexcept { return diagonal_; }
  /// exp(G h). Cached per distinct h.
  const CMatrix& step(double h) const;

 private:
  CMatrix generator_;
  bool diagonal_ = false;
  CMatrix vectors_;
  CMatrix inverse_;
  CVector values_;
  mutable std::vector<std::pair<double, CMatrix>> cache_;
};

/// Fixed-step RK4 to time t; the final step is shortened to land on t.
/// Requires dt * ||G|| <= 0.1 (invalid_argument otherwise); every step is
/// checked against the NetworkState invariants (numeric_failure with the step
/// index on violation).
NetworkState evolve(const Liouvillian& l, const NetworkState& rho0, double t, double dt);

/// Evolution with a selectable integrator.
NetworkState evolve(const Liouvillian& l, const NetworkState& rho0, double t,
                    const EvolveOptions& opts);

/// States at each of the ascending `times` (times[0] may be 0).
std::vector<NetworkState> evolve_to_times(const Liouvillian& l, const NetworkState& rho0,
                                          std::span<const double> times,
                                          const EvolveOptions& opts);

/// The integrator and step that `automatic` resolves to.
struct IntegratorChoice {
  Integrator integrator;
  double dt;
};
IntegratorChoice resolve_integrator(const Liouvillian& l, double horizon, const EvolveOptions& opts);

/// Reduced channel from rho(t): |z|^2 = <o|rho|o>/|b|^2 and
/// lambda z = <o|rho|0>/(b a*), with (a, b) the probe amplitudes.
/// When |z| <= 1e-12 the channel is reported as z = 0, lambda = 1.
ChannelParams extract_channel(const NetworkState& rho_t, const BlochInput& probe, int input,
                              int output);

/// Canonical probe theta = pi/2, phi = 0.
inline constexpr BlochInput kCanonicalProbe{kPi / 2, 0.0};

/// Channels of the noisy setup at the requested ascending times.
std::vector<ChannelParams> lindblad_channels(const TransferSetup& setup,
                                             std::span<const double> times,
                                             const EvolveOptions& opts = {});

}  // namespace spinlube
