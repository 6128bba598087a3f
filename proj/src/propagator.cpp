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

#include "propagator.hpp"

#include <array>
#include <cmath>

#include <boost/math/quadrature/gauss.hpp>

namespace spinlube {

SpectralDecomposition::SpectralDecomposition(const HermitianOperator& h) {
  if (h.is_real()) {
    Eigen::SelfAdjointEigenSolver<RMatrix> es(h.matrix().real());
    require(es.info() == Eigen::Success, Errc::numeric_failure, "eigendecomposition failed");
    values_ = es.eigenvalues();
    vectors_ = es.eigenvectors().cast<cplx>();
  } else {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h.matrix());
    require(es.info() == Eigen::Success, Errc::numeric_failure, "eigendecomposition failed");
    values_ = es.eigenvalues();
    vectors_ = es.eigenvectors();
  }
}

CMatrix SpectralDecomposition::propagator(double t) const {
  CVector phases(values_.size());
  for (Eigen::Index k = 0; k < values_.size(); ++k) phases(k) = std::exp(-kI * (values_(k) * t));
  return vectors_ * phases.asDiagonal() * vectors_.adjoint();
}

CVector SpectralDecomposition::apply(double t, const CVector& psi) const {
  CVector c = vectors_.adjoint() * psi;
  for (Eigen::Index k = 0; k < values_.size(); ++k) c(k) *= std::exp(-kI * (values_(k) * t));
  return vectors_ * c;
}

CMatrix propagator_matrix(const HermitianOperator& h, double t) {
  CMatrix u = SpectralDecomposition(h).propagator(t);
  const auto d = u.rows();
  const double defect = (u.adjoint() * u - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
  require(defect < 1e-10, Errc::numeric_failure,
          "propagator unitarity defect " + std::to_string(defect));
  return u;
}

cplx transfer_amplitude(const HermitianOperator& h, double t, int input, int output) {
  const auto n = h.dim() - 1;
  require(input != output, Errc::invalid_argument, "transfer_amplitude: input equals output");
  require(input >= 1 && input <= n && output >= 1 && output <= n, Errc::invalid_argument,
          "transfer_amplitude: vertex out of range");
  CVector e = CVector::Zero(h.dim());
  e(input) = 1.0;
  return SpectralDecomposition(h).apply(t, e)(output);
}

double complete_graph_transfer_prob(int n, double t) {
  require(n >= 2, Errc::invalid_argument, "complete_graph_transfer_prob: n must be >= 2");
  const double nn = n;
  return 2.0 / (nn * nn) * (1.0 - std::cos(2.0 * nn * t));
}

double complete_graph_max_fidelity(int n) {
  require(n >= 2, Errc::invalid_argument, "complete_graph_max_fidelity: n must be >= 2");
  const double z = 2.0 / n;
  return optimal_avg_fidelity({cplx(z, 0.0), 1.0});
}

bool ChannelParams::is_valid() const noexcept {
  return std::abs(z) <= 1.0 + 1e-9 && lambda >= 0.0 && lambda <= 1.0 + 1e-9;
}

void ChannelParams::validate() const {
  require(is_valid(), Errc::invalid_argument,
          "channel parameters out of range (|z| = " + std::to_string(std::abs(z)) +
              ", lambda = " + std::to_string(lambda) + ")");
}

void BlochInput::validate() const {
  require(theta >= 0.0 && theta <= kPi, Errc::invalid_argument, "theta must lie in [0, pi]");
  require(phi >= 0.0 && phi <= 2.0 * kPi, Errc::invalid_argument, "phi must lie in [0, 2pi]");
}

cplx BlochInput::ground_amplitude() const { return {std::cos(theta / 2.0), 0.0}; }

cplx BlochInput::excited_amplitude() const { return std::polar(std::sin(theta / 2.0), phi); }

double avg_fidelity_given_V(const ChannelParams& ch, cplx u) {
  const double z2 = std::norm(ch.z);
  return 0.5 + ch.lambda * std::real(ch.z * u * u) / 3.0 + z2 * (2.0 * std::norm(u) - 1.0) / 6.0;
}

cplx optimal_decoder_phase(cplx z) {
  if (z == cplx(0.0, 0.0)) return {1.0, 0.0};
  return std::polar(1.0, -0.5 * std::arg(z));
}

double optimal_avg_fidelity(const ChannelParams& ch) {
  const double a = std::abs(ch.z);
  return 0.5 + ch.lambda * a / 3.0 + a * a / 6.0;
}

double pointwise_fidelity(const ChannelParams& ch, cplx u, const BlochInput& in) {
  using M2 = Eigen::Matrix2cd;
  using V2 = Eigen::Vector2cd;
  const double z2 = std::min(std::norm(ch.z), 1.0);
  const double lam = std::clamp(ch.lambda, 0.0, 1.0);

  M2 m0p = M2::Zero(), m0m = M2::Zero(), m1 = M2::Zero();
  m0p(0, 0) = std::sqrt((1.0 + lam) / 2.0);
  m0p(1, 1) = std::sqrt((1.0 + lam) / 2.0) * ch.z;
  m0m(0, 0) = std::sqrt((1.0 - lam) / 2.0);
  m0m(1, 1) = -std::sqrt((1.0 - lam) / 2.0) * ch.z;
  m1(0, 1) = std::sqrt(1.0 - z2);

  V2 psi(in.ground_amplitude(), in.excited_amplitude());
  const M2 rho_in = psi * psi.adjoint();
  const M2 rho_out = m0p * rho_in * m0p.adjoint() + m0m * rho_in * m0m.adjoint() +
                     m1 * rho_in * m1.adjoint();

  const double v = std::sqrt(std::max(0.0, 1.0 - std::norm(u)));
  M2 dec;
  dec << std::conj(u), v, -v, u;
  return std::real(psi.dot(dec * rho_out * dec.adjoint() * psi));
}

double bloch_sphere_average(const ChannelParams& ch, cplx u) {
  constexpr int kPhiNodes = 64;
  auto ring = [&](double c) {
    const double theta = std::acos(std::clamp(c, -1.0, 1.0));
    double s = 0.0;
    for (int k = 0; k < kPhiNodes; ++k)
      s += pointwise_fidelity(ch, u, {theta, 2.0 * kPi * k / kPhiNodes});
    return s * (2.0 * kPi / kPhiNodes);
  };
  const double total = boost::math::quadrature::gauss<double, 32>::integrate(ring, -1.0, 1.0);
  return total / (4.0 * kPi);
}

ChannelParams unitary_channel(const TransferSetup& setup, double t) {
  setup.validate();
  const auto h = single_excitation_hamiltonian(setup.graph);
  return {transfer_amplitude(h, t, setup.input, setup.output), 1.0};
}

}  // namespace spinlube
