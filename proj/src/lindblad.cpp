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

#include "lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace spinlube {

// NetworkState

NetworkState::NetworkState(CMatrix rho) : rho_(std::move(rho)) {
  require(rho_.rows() == rho_.cols() && rho_.rows() >= 2, Errc::invalid_argument,
          "network state must be a square matrix of dimension >= 2");
}

NetworkState NetworkState::pure(const CVector& psi) { return NetworkState(psi * psi.adjoint()); }

double NetworkState::hermiticity_defect() const { return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff(); }

double NetworkState::trace_defect() const { return std::abs(rho_.trace() - cplx(1.0, 0.0)); }

double NetworkState::min_eigenvalue() const {
  const CMatrix herm = 0.5 * (rho_ + rho_.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
  require(es.info() == Eigen::Success, Errc::numeric_failure, "state eigensolver failed");
  return es.eigenvalues().minCoeff();
}

void NetworkState::check_invariants(const std::string& context) const {
  const std::string where = context.empty() ? std::string() : " (" + context + ")";
  const double h = hermiticity_defect();
  require(h <= 1e-10, Errc::numeric_failure, "state lost Hermiticity: defect " + std::to_string(h) + where);
  const double tr = trace_defect();
  require(tr <= 1e-10, Errc::numeric_failure, "state lost unit trace: defect " + std::to_string(tr) + where);
  const double ev = min_eigenvalue();
  require(ev >= -1e-8, Errc::numeric_failure, "state lost positivity: eigenvalue " + std::to_string(ev) + where);
}

CVector initial_network_vector(int n, int input, const BlochInput& in) {
  require(n >= 1, Errc::invalid_argument, "network needs at least one vertex");
  require(input >= 1 && input <= n, Errc::invalid_argument, "input vertex out of range");
  in.validate();
  CVector psi = CVector::Zero(n + 1);
  psi(0) = in.ground_amplitude();
  psi(input) = in.excited_amplitude();
  return psi;
}

NetworkState initial_network_state(int n, int input, const BlochInput& in) {
  return NetworkState::pure(initial_network_vector(n, input, in));
}

// Liouvillian

namespace {

double power_iteration_norm(const CSparse& g) {
  const auto n = g.cols();
  if (n == 0) return 0.0;
  std::mt19937_64 rng(0x5eed5eedULL);
  std::normal_distribution<double> normal;
  CVector v(n);
  for (Eigen::Index k = 0; k < n; ++k) v(k) = cplx(normal(rng), normal(rng));
  v.normalize();
  const CSparse gh = g.adjoint();
  double sigma2 = 0.0;
  for (int it = 0; it < 200; ++it) {
    CVector w = gh * (g * v);
    const double nrm = w.norm();
    if (nrm == 0.0) return 0.0;
    const double prev = sigma2;
    sigma2 = std::real(v.dot(w));
    v = w / nrm;
    if (it > 10 && std::abs(sigma2 - prev) <= 1e-12 * sigma2) break;
  }
  return std::sqrt(std::max(sigma2, 0.0));
}

CSparse sparse_of(const CMatrix& m) { return m.sparseView(0.0, 0.0); }

}  // namespace

Liouvillian::Liouvillian(CSparse hamiltonian_part, CSparse dissipator_part, double max_rate)
    : dim_(static_cast<Eigen::Index>(std::llround(std::sqrt(double(hamiltonian_part.rows()))))),
      hamiltonian_(std::move(hamiltonian_part)),
      dissipator_(std::move(dissipator_part)),
      generator_(hamiltonian_ + dissipator_),
      max_rate_(max_rate) {
  generator_.makeCompressed();
  norm_ = power_iteration_norm(generator_);
}

Liouvillian build_liouvillian(const HermitianOperator& h, const std::vector<EdgeOperator>& ops) {
  const auto d = h.dim();
  require(d >= 2, Errc::invalid_argument, "Hamiltonian dimension must be >= 2");
  const CSparse id = sparse_of(CMatrix::Identity(d, d));
  const CSparse hs = sparse_of(h.matrix());
  const CSparse ht = sparse_of(h.matrix().transpose());

  // vec(A X B) = (B^T kron A) vec(X)
  CSparse ham = CSparse(Eigen::kroneckerProduct(id, hs)) - CSparse(Eigen::kroneckerProduct(ht, id));
  ham = cplx(0.0, -1.0) * ham;

  CSparse diss(d * d, d * d);
  double max_rate = 0.0;
  for (const auto& e : ops) {
    require(e.op.dim() == d, Errc::invalid_argument, "Lindblad operator dimension mismatch");
    require(e.rate >= 0.0, Errc::invalid_noise_spec, "negative Lindblad rate");
    const CMatrix& l = e.op.matrix();
    const CMatrix ldl = l.adjoint() * l;
    CSparse term = CSparse(Eigen::kroneckerProduct(sparse_of(l.conjugate()), sparse_of(l))) -
                   0.5 * CSparse(Eigen::kroneckerProduct(id, sparse_of(ldl))) -
                   0.5 * CSparse(Eigen::kroneckerProduct(sparse_of(ldl.transpose()), id));
    diss += e.rate * term;
    max_rate = std::max(max_rate, e.rate);
  }
  ham.prune(cplx(0.0, 0.0));
  diss.prune(cplx(0.0, 0.0));
  return Liouvillian(std::move(ham), std::move(diss), max_rate);
}

Liouvillian build_liouvillian(const TransferSetup& setup) {
  setup.validate();
  return build_liouvillian(single_excitation_hamiltonian(setup.graph),
                           lindblad_edge_operators(setup.graph, setup.noise, setup.input, setup.output));
}

CVector vectorize(const CMatrix& rho) { return Eigen::Map<const CVector>(rho.data(), rho.size()); }

CMatrix unvectorize(const CVector& v, Eigen::Index dim) {
  require(v.size() == dim * dim, Errc::invalid_argument, "vector length does not match dimension");
  return Eigen::Map<const CMatrix>(v.data(), dim, dim);
}

const char* integrator_name(Integrator i) noexcept {
  switch (i) {
    case Integrator::rk4: return "rk4";
    case Integrator::exact: return "exact";
    case Integrator::automatic: return "auto";
  }
  return "auto";
}

Integrator integrator_from_name(const std::string& name) {
  if (name == "rk4") return Integrator::rk4;
  if (name == "exact") return Integrator::exact;
  if (name == "auto") return Integrator::automatic;
  fail(Errc::invalid_argument, "unknown integrator '" + name + "' (expected rk4, exact or auto)");
}

// ExactPropagator

ExactPropagator::ExactPropagator(const Liouvillian& l) : generator_(CMatrix(l.generator())) {
  Eigen::ComplexEigenSolver<CMatrix> es(generator_);
  if (es.info() != Eigen::Success) return;
  const CMatrix& v = es.eigenvectors();
  const CVector& w = es.eigenvalues();
  const double residual = (generator_ * v - v * w.asDiagonal()).cwiseAbs().maxCoeff();
  if (!(residual < 1e-8)) return;
  Eigen::FullPivLU<CMatrix> lu(v);
  if (!lu.isInvertible()) return;
  CMatrix inv = lu.inverse();
  const double cond = v.cwiseAbs().rowwise().sum().maxCoeff() * inv.cwiseAbs().rowwise().sum().maxCoeff();
  const double recon = (v * w.asDiagonal() * inv - generator_).cwiseAbs().maxCoeff();
  if (!(cond < 1e6) || !(recon < 1e-8)) return;
  vectors_ = v;
  values_ = w;
  inverse_ = std::move(inv);
  diagonal_ = true;
}

const CMatrix& ExactPropagator::step(double h) const {
  for (const auto& [key, m] : cache_)
    if (key == h) return m;
  CMatrix p;
  if (diagonal_) {
    CVector e(values_.size());
    for (Eigen::Index k = 0; k < values_.size(); ++k) e(k) = std::exp(values_(k) * h);
    p = vectors_ * e.asDiagonal() * inverse_;
  } else {
    p = (generator_ * cplx(h, 0.0)).exp();
  }
  if (cache_.size() >= 16) cache_.erase(cache_.begin());
  cache_.emplace_back(h, std::move(p));
  return cache_.back().second;
}

// Integration

IntegratorChoice resolve_integrator(const Liouvillian& l, double horizon, const EvolveOptions& opts) {
  require(opts.dt > 0.0 && std::isfinite(opts.dt), Errc::invalid_argument, "dt must be positive");
  switch (opts.integrator) {
    case Integrator::rk4:
    case Integrator::exact:
      return {opts.integrator, opts.dt};
    case Integrator::automatic:
      break;
  }
  if (l.max_rate() * opts.dt > 0.5) return {Integrator::exact, opts.dt};
  double h = opts.dt;
  if (l.norm_estimate() * h > 0.1) h = 0.1 / l.norm_estimate();
  if (horizon / h > 2e6) return {Integrator::exact, opts.dt};
  return {Integrator::rk4, h};
}

namespace {

void check_step(const CVector& y, Eigen::Index d, std::size_t step, double t) {
  const NetworkState s(unvectorize(y, d));
  try {
    s.check_invariants();
  } catch (const Error& e) {
    std::ostringstream os;
    os << e.what() << " at step " << step << " (t = " << t << ")";
    fail(Errc::numeric_failure, os.str());
  }
}

void notify(const EvolveOptions& opts, const CVector& y, Eigen::Index d, std::size_t step, double t) {
  if (!opts.observer) return;
  const CMatrix rho = unvectorize(y, d);
  opts.observer(StepReport{step, t, rho});
}

}  // namespace

std::vector<NetworkState> evolve_to_times(const Liouvillian& l, const NetworkState& rho0,
                                          std::span<const double> times, const EvolveOptions& opts) {
  const auto d = l.state_dim();
  require(rho0.dim() == d, Errc::invalid_argument, "state and Liouvillian dimensions differ");
  for (std::size_t k = 0; k < times.size(); ++k) {
    require(times[k] >= 0.0 && std::isfinite(times[k]), Errc::invalid_argument, "times must be >= 0");
    require(k == 0 || times[k] >= times[k - 1], Errc::invalid_argument, "times must be ascending");
  }
  std::vector<NetworkState> out;
  out.reserve(times.size());
  if (times.empty()) return out;

  const IntegratorChoice choice = resolve_integrator(l, times.back(), opts);
  CVector y = vectorize(rho0.rho());
  std::size_t step = 0;
  double t_now = 0.0;
  notify(opts, y, d, step, t_now);

  if (choice.integrator == Integrator::exact) {
    ExactPropagator prop(l);
    for (double target : times) {
      if (target > t_now) {
        y = prop.step(target - t_now) * y;
        t_now = target;
        ++step;
        check_step(y, d, step, t_now);
        notify(opts, y, d, step, t_now);
      }
      out.emplace_back(unvectorize(y, d));
    }
    return out;
  }

  const double dt = choice.dt;
  const double bound = l.norm_estimate() * dt;
  if (bound > 0.1 + 1e-12) {
    std::ostringstream os;
    os << "rk4 step too large: dt * ||G|| = " << bound << " exceeds 0.1 (||G|| ~ " << l.norm_estimate()
       << ")";
    fail(Errc::invalid_argument, os.str());
  }

  const CSparse& g = l.generator();
  CVector k1(y.size()), k2(y.size()), k3(y.size()), k4(y.size()), tmp(y.size());
  for (double target : times) {
    const double span = target - t_now;
    if (span > 0.0) {
      const auto n_steps = static_cast<std::size_t>(std::max(1.0, std::ceil(span / dt - 1e-9)));
      const double t_start = t_now;
      for (std::size_t j = 0; j < n_steps; ++j) {
        const double h = (j + 1 == n_steps) ? span - dt * static_cast<double>(n_steps - 1) : dt;
        k1.noalias() = g * y;
        tmp = y + (0.5 * h) * k1;
        k2.noalias() = g * tmp;
        tmp = y + (0.5 * h) * k2;
        k3.noalias() = g * tmp;
        tmp = y + h * k3;
        k4.noalias() = g * tmp;
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        ++step;
        t_now = (j + 1 == n_steps) ? target : t_start + dt * static_cast<double>(j + 1);
        check_step(y, d, step, t_now);
        notify(opts, y, d, step, t_now);
      }
    }
    out.emplace_back(unvectorize(y, d));
  }
  return out;
}

NetworkState evolve(const Liouvillian& l, const NetworkState& rho0, double t, const EvolveOptions& opts) {
  const double times[] = {t};
  return std::move(evolve_to_times(l, rho0, times, opts).front());
}

NetworkState evolve(const Liouvillian& l, const NetworkState& rho0, double t, double dt) {
  EvolveOptions opts;
  opts.dt = dt;
  opts.integrator = Integrator::rk4;
  return evolve(l, rho0, t, opts);
}

ChannelParams extract_channel(const NetworkState& rho_t, const BlochInput& probe, int input, int output) {
  const auto n = rho_t.dim() - 1;
  require(input >= 1 && input <= n && output >= 1 && output <= n && input != output,
          Errc::invalid_argument, "extract_channel: bad input/output vertices");
  probe.validate();
  const cplx a = probe.ground_amplitude();
  const cplx b = probe.excited_amplitude();
  require(std::abs(b) > 1e-12, Errc::invalid_argument, "probe carries no excitation (theta = 0)");
  require(std::abs(a) > 1e-12, Errc::invalid_argument, "probe has no vacuum component (theta = pi)");

  const double pop = std::real(rho_t.rho()(output, output));
  require(pop >= -1e-10, Errc::numeric_failure, "negative output population " + std::to_string(pop));
  const double z_abs = std::sqrt(std::max(pop, 0.0) / std::norm(b));
  const cplx lz = rho_t.rho()(output, 0) / (b * std::conj(a));

  if (z_abs <= 1e-12) return {cplx(0.0, 0.0), 1.0};
  const double lz_abs = std::abs(lz);
  if (lz_abs == 0.0) return {cplx(z_abs, 0.0), 0.0};
  return {lz * (z_abs / lz_abs), lz_abs / z_abs};
}

std::vector<ChannelParams> lindblad_channels(const TransferSetup& setup, std::span<const double> times,
                                             const EvolveOptions& opts) {
  const Liouvillian l = build_liouvillian(setup);
  const NetworkState rho0 = initial_network_state(setup.n(), setup.input, kCanonicalProbe);
  const auto states = evolve_to_times(l, rho0, times, opts);
  std::vector<ChannelParams> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(extract_channel(s, kCanonicalProbe, setup.input, setup.output));
  return out;
}

}  // namespace spinlube
