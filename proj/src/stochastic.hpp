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

// Monte Carlo unraveling of the white-noise Hamiltonian. Each trajectory
// evolves a pure state under H + sum_kl g_kl L_kl with the couplings redrawn
// every step; averaging |psi><psi| over trajectories reproduces the Lindblad
// flow of lindblad.hpp.

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "common.hpp"
#include "lindblad.hpp"
#include "network.hpp"

namespace spinlube {

using Rng = std::mt19937_64;

struct TrajectoryPlan {
  std::size_t n_traj = 1000;
  double dt = 1e-3;
  double t_final = 1.0;
  std::uint64_t master_seed = 0;
  NoiseSpec noise;

  void validate() const;
};

struct EnsembleResult {
  NetworkState rho_mean;
  /// Standard error of each entry of the mean, sqrt(E|x - mean|^2 / N).
  RMatrix std_err;
  std::size_t n_traj = 0;
  double t = 0.0;
};

/// Per-trajectory 64-bit seed derived from (master_seed, index) by a
/// SplitMix64 finalizer; independent of how trajectories are scheduled.
std::uint64_t trajectory_seed(std::uint64_t master_seed, std::uint64_t index);

/// H + sum over noisy pairs of g_kl (|k><l| + |l><k|), g_kl ~ N(0, eta_kl / dt)
/// drawn in lexicographic edge order.
HermitianOperator sample_step_hamiltonian(const HermitianOperator& h, const NoiseSpec& spec, double dt,
                                          Rng& rng);

/// Single noise realization. Each step applies exp(-i H_step h) to machine
/// precision (Taylor series on the state), the
/// last step of a segment is shortened to land on the requested time.
/// Requires max_rate * dt <= 0.05 and ||H|| * dt <= 0.05.
CVector evolve_trajectory(const HermitianOperator& h, const NoiseSpec& spec, const CVector& psi0, double t,
                          double dt, std::uint64_t seed);

std::vector<CVector> evolve_trajectory_to_times(const HermitianOperator& h, const NoiseSpec& spec,
                                                const CVector& psi0, std::span<const double> times,
                                                double dt, std::uint64_t seed);

/// Ensemble mean of |psi_j(t)><psi_j(t)| at plan.t_final.
EnsembleResult ensemble_average(const TrajectoryPlan& plan, const HermitianOperator& h, const CVector& psi0,
                                int threads = 1);

/// Same trajectories observed at several ascending times. Bit-identical for
/// every thread count.
std::vector<EnsembleResult> ensemble_average_at(const TrajectoryPlan& plan, const HermitianOperator& h,
                                                const CVector& psi0, std::span<const double> times,
                                                int threads = 1);

}  // namespace spinlube
