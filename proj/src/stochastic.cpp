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

#include "stochastic.hpp"

#include <algorithm>
#include <cmath>

#include "parallel.hpp"

namespace spinlube {

void TrajectoryPlan::validate() const {
  require(n_traj >= 1, Errc::invalid_argument, "trajectory plan needs n_traj >= 1");
  require(dt > 0.0 && std::isfinite(dt), Errc::invalid_argument, "trajectory plan needs dt > 0");
  require(t_final >= 0.0 && std::isfinite(t_final), Errc::invalid_argument, "trajectory plan needs t_final >= 0");
}

std::uint64_t trajectory_seed(std::uint64_t master_seed, std::uint64_t index) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(master_seed) ^ index);
}

namespace {

struct NoiseEdge {
  int k;
  int l;
  double rate;
};

std::vector<NoiseEdge> noise_edges(const NoiseSpec& spec, Eigen::Index dim) {
  std::vector<NoiseEdge> out;
  for (const Edge& e : spec.edges()) {
    require(e.l < dim, Errc::invalid_noise_spec, "noisy vertex outside the Hamiltonian's range");
    out.push_back({e.k, e.l, spec.rate(e)});
  }
  return out;
}

// Pure-state stepper; the hot loop of every trajectory.
class Stepper {
 public:
  Stepper(const HermitianOperator& h, const NoiseSpec& spec, double dt)
      : real_(h.is_real()), edges_(noise_edges(spec, h.dim())) {
    require(dt > 0.0, Errc::invalid_argument, "dt must be positive");
    const double h_norm = SpectralDecomposition(h).eigenvalues().cwiseAbs().maxCoeff();
    const double rate = spec.edges().empty() ? 0.0 : spec.max_rate();
    require(rate * dt <= 0.05 + 1e-15, Errc::invalid_argument,
            "trajectory step too large: eta * dt = " + std::to_string(rate * dt) + " > 0.05");
    require(h_norm * dt <= 0.05 + 1e-15, Errc::invalid_argument,
            "trajectory step too large: ||H|| * dt = " + std::to_string(h_norm * dt) + " > 0.05");
    if (real_)
      hr_ = h.matrix().real();
    else
      hc_ = h.matrix();
  }

  void step(CVector& psi, double h, Rng& rng, std::normal_distribution<double>& normal) {
    if (real_) {
      work_r_ = hr_;
      add_noise(work_r_, h, rng, normal);
      apply_exponential(work_r_, psi, h);
    } else {
      work_c_ = hc_;
      add_noise(work_c_, h, rng, normal);
      apply_exponential(work_c_, psi, h);
    }
  }

 private:
  template <class M>
  void add_noise(M& m, double h, Rng& rng, std::normal_distribution<double>& normal) const {
    for (const auto& e : edges_) {
      // integrated coupling over the step has variance rate * h
      const double g = std::sqrt(e.rate / h) * normal(rng);
      m(e.k, e.l) += g;
      m(e.l, e.k) += g;
    }
  }

  // exp(-i M h) psi by its Taylor series, summed until the next term drops
  // below machine precision. Sub-steps keep ||M|| h <= 1 so the series
  // converges in ~15 terms; large Gaussian kicks just cost more sub-steps.
  template <class M>
  void apply_exponential(const M& m, CVector& psi, double h) {
    const double norm = m.cwiseAbs().rowwise().sum().maxCoeff();
    const int pieces = std::max(1, static_cast<int>(std::ceil(norm * h)));
    const double hs = h / pieces;
    for (int p = 0; p < pieces; ++p) {
      term_ = psi;
      int k = 1;
      for (; k <= 40; ++k) {
        next_.noalias() = m * term_;
        term_ = next_ * cplx(0.0, -hs / k);
        psi += term_;
        if (term_.squaredNorm() <= 1e-34 * psi.squaredNorm()) break;
      }
      require(k <= 40, Errc::numeric_failure, "trajectory step exponential did not converge");
    }
  }

  bool real_;
  std::vector<NoiseEdge> edges_;
  RMatrix hr_, work_r_;
  CMatrix hc_, work_c_;
  CVector term_, next_;
};

void check_times(std::span<const double> times) {
  for (std::size_t k = 0; k < times.size(); ++k) {
    require(times[k] >= 0.0 && std::isfinite(times[k]), Errc::invalid_argument, "times must be >= 0");
    require(k == 0 || times[k] >= times[k - 1], Errc::invalid_argument, "times must be ascending");
  }
}

template <class Visit>
void run_trajectory(Stepper& stepper, const CVector& psi0, std::span<const double> times, double dt,
                    std::uint64_t seed, Visit&& visit) {
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  CVector psi = psi0;
  double t_now = 0.0;
  for (std::size_t idx = 0; idx < times.size(); ++idx) {
    const double span = times[idx] - t_now;
    if (span > 0.0) {
      const auto n_steps = static_cast<std::size_t>(std::max(1.0, std::ceil(span / dt - 1e-9)));
      for (std::size_t j = 0; j < n_steps; ++j) {
        const double h = (j + 1 == n_steps) ? span - dt * static_cast<double>(n_steps - 1) : dt;
        stepper.step(psi, h, rng, normal);
      }
      t_now = times[idx];
    }
    visit(idx, psi);
  }
}

}  // namespace

HermitianOperator sample_step_hamiltonian(const HermitianOperator& h, const NoiseSpec& spec, double dt,
                                          Rng& rng) {
  require(dt > 0.0, Errc::invalid_argument, "dt must be positive");
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix m = h.matrix();
  for (const auto& e : noise_edges(spec, h.dim())) {
    const double g = std::sqrt(e.rate / dt) * normal(rng);
    m(e.k, e.l) += g;
    m(e.l, e.k) += g;
  }
  return HermitianOperator(std::move(m));
}

std::vector<CVector> evolve_trajectory_to_times(const HermitianOperator& h, const NoiseSpec& spec,
                                                const CVector& psi0, std::span<const double> times,
                                                double dt, std::uint64_t seed) {
  require(psi0.size() == h.dim(), Errc::invalid_argument, "state and Hamiltonian dimensions differ");
  check_times(times);
  Stepper stepper(h, spec, dt);
  std::vector<CVector> out(times.size());
  run_trajectory(stepper, psi0, times, dt, seed, [&](std::size_t idx, const CVector& psi) { out[idx] = psi; });
  return out;
}

CVector evolve_trajectory(const HermitianOperator& h, const NoiseSpec& spec, const CVector& psi0, double t,
                          double dt, std::uint64_t seed) {
  const double times[] = {t};
  return evolve_trajectory_to_times(h, spec, psi0, times, dt, seed).front();
}

std::vector<EnsembleResult> ensemble_average_at(const TrajectoryPlan& plan, const HermitianOperator& h,
                                                const CVector& psi0, std::span<const double> times,
                                                int threads) {
  plan.validate();
  require(psi0.size() == h.dim(), Errc::invalid_argument, "state and Hamiltonian dimensions differ");
  require(std::abs(psi0.norm() - 1.0) < 1e-12, Errc::invalid_argument, "initial state must be normalized");
  check_times(times);
  const auto d = h.dim();
  const std::size_t n_times = times.size();

  // Fixed block partition: the reduction order depends only on n_traj.
  constexpr std::size_t kBlock = 64;
  const std::size_t n_blocks = (plan.n_traj + kBlock - 1) / kBlock;
  struct Partial {
    std::vector<CMatrix> sum;
    std::vector<RMatrix> sum_sq;
  };
  std::vector<Partial> partials(n_blocks);

  parallel_for(n_blocks, threads, [&](std::size_t b) {
    Stepper stepper(h, plan.noise, plan.dt);
    Partial p;
    p.sum.assign(n_times, CMatrix::Zero(d, d));
    p.sum_sq.assign(n_times, RMatrix::Zero(d, d));
    const std::size_t end = std::min(plan.n_traj, (b + 1) * kBlock);
    for (std::size_t j = b * kBlock; j < end; ++j) {
      run_trajectory(stepper, psi0, times, plan.dt, trajectory_seed(plan.master_seed, j),
                     [&](std::size_t idx, const CVector& psi) {
                       const CMatrix x = psi * psi.adjoint();
                       p.sum[idx] += x;
                       p.sum_sq[idx] += x.cwiseAbs2();
                     });
    }
    partials[b] = std::move(p);
  });

  std::vector<EnsembleResult> out;
  out.reserve(n_times);
  const double n = static_cast<double>(plan.n_traj);
  for (std::size_t idx = 0; idx < n_times; ++idx) {
    CMatrix sum = CMatrix::Zero(d, d);
    RMatrix sum_sq = RMatrix::Zero(d, d);
    for (const auto& p : partials) {
      sum += p.sum[idx];
      sum_sq += p.sum_sq[idx];
    }
    CMatrix mean = sum / n;
    RMatrix err = RMatrix::Zero(d, d);
    if (plan.n_traj > 1) {
      const RMatrix var = ((sum_sq - n * mean.cwiseAbs2()) / (n - 1.0)).cwiseMax(0.0);
      err = (var / n).cwiseSqrt();
    }
    out.push_back({NetworkState(std::move(mean)), std::move(err), plan.n_traj, times[idx]});
  }
  return out;
}

EnsembleResult ensemble_average(const TrajectoryPlan& plan, const HermitianOperator& h, const CVector& psi0,
                                int threads) {
  const double times[] = {plan.t_final};
  return std::move(ensemble_average_at(plan, h, psi0, times, threads).front());
}

}  // namespace spinlube
