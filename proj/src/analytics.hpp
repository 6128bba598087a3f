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

// Closed forms: the four-node noisy solution, the strong-noise effective
// Hamiltonian and its extreme case, plus helpers comparing them to the engine.

#include <span>
#include <vector>

#include "common.hpp"
#include "lindblad.hpp"
#include "network.hpp"
#include "propagator.hpp"

namespace spinlube {

struct FourNodeClosedForm {
  double z_sq = 0.0;
  cplx lambda_z{0.0, 0.0};
  cplx p{0.0, 0.0};  // sqrt(eta^2 - 256)
  cplx q{0.0, 0.0};  // sqrt(eta^2 - 64)

  /// 1/2 + |lambda z|/3 + |z|^2/6 on the stored values, as printed.
  double fidelity() const noexcept;
};

/// The printed four-node expressions, evaluated verbatim with complex square
/// roots (trigonometric below eta = 8, 16; the x = 0 points use sinh(x)/x -> 1).
FourNodeClosedForm four_node_closed_form(double eta, double t);

/// Complete-graph Hamiltonian with every row and column touching W zeroed.
HermitianOperator zeno_effective_hamiltonian(int n, const NoiseSpec& spec);

/// Extreme case m = n - 2: z = i sin(2t), lambda = 1 (only i and o survive,
/// coupled with strength 2). Throws unsupported otherwise.
ChannelParams zeno_limit_channel(int n, int m, double t);

/// First time the extreme-case channel reaches |z| = 1.
double zeno_transfer_time() noexcept;

/// Time phase the printed extreme-case state uses, cos t / sin t, against the
/// 2t of the effective Hamiltonian.
ChannelParams zeno_limit_channel_as_printed(double t);

/// Lindblad F(t) for (n, m, eta) next to the unitary F(t) of the effective
/// Hamiltonian.
struct ZenoComparison {
  std::vector<double> times;
  std::vector<double> f_noisy;
  std::vector<double> f_effective;
  double max_deviation = 0.0;
  double t_at_max = 0.0;
};

ZenoComparison zeno_reduction_curves(int n, int m, double eta, std::span<const double> times,
                                     const EvolveOptions& opts = {});

/// max over t of the optimal fidelity for a noisy setup: best grid point of
/// `t_grid`, refined with Brent's method between its neighbours.
struct TimeOptimum {
  double t = 0.0;
  double fidelity = 0.0;
};

TimeOptimum lindblad_best_time(const TransferSetup& setup, std::span<const double> t_grid,
                               const EvolveOptions& opts = {});

/// max_t F on the noiseless complete graph of `n` vertices (closed form).
double effective_network_max_fidelity(int n);

/// Evenly spaced grid on [a, b] with `points` entries (both ends included).
std::vector<double> linear_grid(double a, double b, std::size_t points);

}  // namespace spinlube
