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

// Closed-system propagation and the fidelity calculus of the reduced
// input->output channel.

#include "common.hpp"
#include "network.hpp"

namespace spinlube {

/// Eigendecomposition of a Hermitian operator, reusable for many times t.
class SpectralDecomposition {
 public:
  explicit SpectralDecomposition(const HermitianOperator& h);

  const RVector& eigenvalues() const noexcept { return values_; }
  const CMatrix& eigenvectors() const noexcept { return vectors_; }

  /// exp(-i H t).
  CMatrix propagator(double t) const;
  /// exp(-i H t) |psi>, without forming the full matrix.
  CVector apply(double t, const CVector& psi) const;

 private:
  RVector values_;
  CMatrix vectors_;
};

/// Unitary exp(-iHt). Throws numeric_failure when the eigensolver fails or the
/// unitarity defect exceeds 1e-10.
CMatrix propagator_matrix(const HermitianOperator& h, double t);

/// <o| exp(-iHt) |i> for 1-based vertices i != o.
cplx transfer_amplitude(const HermitianOperator& h, double t, int input, int output);

/// |z|^2 = (2/n^2) (1 - cos 2nt) on the complete graph.
double complete_graph_transfer_prob(int n, double t);

/// Largest optimal average fidelity of the noiseless complete graph over t,
/// reached where |z| = 2/n.
double complete_graph_max_fidelity(int n);

/// Amplitude-damping + dephasing channel: output coherence lambda*z,
/// excited population |z|^2.
struct ChannelParams {
  cplx z{0.0, 0.0};
  double lambda = 1.0;

  /// |z| <= 1 and 0 <= lambda <= 1, both with 1e-9 slack.
  bool is_valid() const noexcept;
  void validate() const;
};

struct BlochInput {
  double theta = kPi / 2;
  double phi = 0.0;

  void validate() const;
  cplx ground_amplitude() const;   // cos(theta/2)
  cplx excited_amplitude() const;  // e^{i phi} sin(theta/2)
};

/// Average fidelity for the decoder parametrized by u (|v|^2 = 1 - |u|^2):
/// 1/2 + lambda Re(z u^2)/3 + |z|^2 (2|u|^2 - 1)/6.
double avg_fidelity_given_V(const ChannelParams& ch, cplx u);

/// u = exp(-i arg(z) / 2), with u = 1 at z = 0.
cplx optimal_decoder_phase(cplx z);

/// 1/2 + lambda|z|/3 + |z|^2/6.
double optimal_avg_fidelity(const ChannelParams& ch);

/// <psi| V rho_out V^dag |psi> for the input state given by `in`. The decoder
/// is [[conj(u), v], [-conj(v), u]] with v = sqrt(1 - |u|^2) real; this
/// orientation is the one whose Bloch average is avg_fidelity_given_V.
double pointwise_fidelity(const ChannelParams& ch, cplx u, const BlochInput& in);

/// Bloch-sphere average of pointwise_fidelity: Gauss-Legendre in cos(theta)
/// (32 nodes) times the trapezoid rule in phi (64 nodes).
double bloch_sphere_average(const ChannelParams& ch, cplx u);

/// Noiseless channel of a transfer setup: z = <o|U_t|i>, lambda = 1.
ChannelParams unitary_channel(const TransferSetup& setup, double t);

}  // namespace spinlube
