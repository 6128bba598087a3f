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

#include "spinlube/spinlube.h"

#include <cmath>
#include <map>
#include <memory>
#include <new>
#include <set>
#include <string>

#include "analytics.hpp"
#include "harness.hpp"
#include "lindblad.hpp"
#include "network.hpp"
#include "perturbation.hpp"
#include "propagator.hpp"
#include "stochastic.hpp"

using namespace spinlube;

struct spl_network {
  int n = 0;
  int input = 1;
  int output = 2;
  NoiseSpec noise;
  double dt = 1e-3;
  std::size_t n_traj = 1000;
  std::uint64_t seed = 0;
  int threads = 0;

  TransferSetup setup() const { return {complete_graph(n), noise, input, output}; }
};

struct spl_experiment {
  Experiment exp;
};

namespace {

thread_local std::string g_last_error;

template <class F>
spl_status guarded(F&& body) {
  try {
    g_last_error.clear();
    return body();
  } catch (const Error& e) {
    g_last_error = e.what();
    return static_cast<spl_status>(static_cast<int>(e.code()));
  } catch (const nlohmann::json::exception& e) {
    g_last_error = std::string("configuration: ") + e.what();
    return SPL_E_CONFIG;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return SPL_E_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SPL_E_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return SPL_E_INTERNAL;
  }
}

spl_status null_arg(const char* what) {
  g_last_error = std::string(what) + " must not be NULL";
  return SPL_E_INVALID_ARGUMENT;
}

spl_channel to_c(const ChannelParams& c) {
  return {c.z.real(), c.z.imag(), c.lambda, optimal_avg_fidelity(c)};
}

spl_channel to_c(const WeakNoiseChannel& w) {
  const double abs_z = std::sqrt(std::max(w.z_sq(), 0.0));
  const cplx lz = w.lambda_z();
  spl_channel out{};
  // phase of lambda z carries the phase of z
  out.lambda = abs_z > 1e-12 ? std::abs(lz) / abs_z : 1.0;
  const cplx z = std::abs(lz) > 0.0 ? lz / std::abs(lz) * abs_z : cplx(abs_z, 0.0);
  out.z_re = z.real();
  out.z_im = z.imag();
  out.fidelity = w.fidelity();
  return out;
}

spl_status output_of(const std::string& s, const char** data, std::size_t* size) {
  if (!data) return null_arg("data");
  *data = s.c_str();
  if (size) *size = s.size();
  return SPL_OK;
}

}  // namespace

extern "C" {

const char* spl_version(void) { return "0.1.0"; }

const char* spl_status_name(spl_status s) {
  switch (s) {
    case SPL_OK: return "ok";
    case SPL_E_INVALID_ARGUMENT: return "invalid-argument";
    case SPL_E_INVALID_NOISE_SPEC: return "invalid-noise-spec";
    case SPL_E_NUMERIC: return "numeric-failure";
    case SPL_E_UNSUPPORTED: return "unsupported";
    case SPL_E_CONFIG: return "config";
    case SPL_E_CONSISTENCY: return "consistency";
    case SPL_E_IO: return "io";
    case SPL_E_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* spl_last_error(void) { return g_last_error.c_str(); }

spl_status spl_network_create_complete(int n, int input, int output, spl_network** out) {
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    auto net = std::make_unique<spl_network>();
    net->n = n;
    net->input = input;
    net->output = output;
    net->setup().validate();
    *out = net.release();
    return SPL_OK;
  });
}

void spl_network_destroy(spl_network* net) { delete net; }

spl_status spl_network_set_noise(spl_network* net, const int* vertices, size_t count, double eta) {
  if (!net) return null_arg("net");
  if (count > 0 && !vertices) return null_arg("vertices");
  return guarded([&] {
    NoiseSpec spec = NoiseSpec::uniform(std::vector<int>(vertices, vertices + count), eta);
    spec.validate(net->n, net->input, net->output);
    net->noise = std::move(spec);
    return SPL_OK;
  });
}

spl_status spl_network_set_noise_edges(spl_network* net, const int* k, const int* l, const double* eta,
                                       size_t count) {
  if (!net) return null_arg("net");
  if (count > 0 && (!k || !l || !eta)) return null_arg("k, l and eta");
  return guarded([&] {
    std::map<Edge, double> rates;
    std::set<int> vs;
    for (size_t i = 0; i < count; ++i) {
      require(k[i] != l[i], Errc::invalid_noise_spec, "noise edge is a self-loop");
      require(rates.emplace(Edge(k[i], l[i]), eta[i]).second, Errc::invalid_noise_spec, "noise edge listed twice");
      vs.insert(k[i]);
      vs.insert(l[i]);
    }
    NoiseSpec spec = NoiseSpec::per_edge(std::vector<int>(vs.begin(), vs.end()), std::move(rates));
    spec.validate(net->n, net->input, net->output);
    net->noise = std::move(spec);
    return SPL_OK;
  });
}

spl_status spl_network_clear_noise(spl_network* net) {
  if (!net) return null_arg("net");
  net->noise = NoiseSpec::none();
  return SPL_OK;
}

spl_status spl_network_set_dt(spl_network* net, double dt) {
  if (!net) return null_arg("net");
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    g_last_error = "dt must be > 0";
    return SPL_E_INVALID_ARGUMENT;
  }
  net->dt = dt;
  return SPL_OK;
}

spl_status spl_network_set_trajectories(spl_network* net, size_t n_traj, uint64_t master_seed) {
  if (!net) return null_arg("net");
  if (n_traj == 0) {
    g_last_error = "n_traj must be >= 1";
    return SPL_E_INVALID_ARGUMENT;
  }
  net->n_traj = n_traj;
  net->seed = master_seed;
  return SPL_OK;
}

spl_status spl_network_set_threads(spl_network* net, int threads) {
  if (!net) return null_arg("net");
  if (threads < 0) {
    g_last_error = "threads must be >= 0";
    return SPL_E_INVALID_ARGUMENT;
  }
  net->threads = threads;
  return SPL_OK;
}

spl_status spl_network_channels(const spl_network* net, spl_method method, const double* times, size_t count,
                                spl_channel* out) {
  if (!net) return null_arg("net");
  if (count > 0 && (!times || !out)) return null_arg("times and out");
  return guarded([&] {
    const TransferSetup setup = net->setup();
    setup.validate();
    const std::span<const double> ts(times, count);
    for (size_t i = 0; i < count; ++i) {
      require(std::isfinite(ts[i]) && ts[i] >= 0.0, Errc::invalid_argument, "times must be >= 0");
      require(i == 0 || ts[i] >= ts[i - 1], Errc::invalid_argument, "times must be ascending");
    }
    if (count == 0) return SPL_OK;
    switch (method) {
      case SPL_METHOD_UNITARY:
        for (size_t i = 0; i < count; ++i) out[i] = to_c(unitary_channel(setup, ts[i]));
        break;
      case SPL_METHOD_LINDBLAD: {
        EvolveOptions o;
        o.dt = net->dt;
        const auto ch = lindblad_channels(setup, ts, o);
        for (size_t i = 0; i < count; ++i) out[i] = to_c(ch[i]);
        break;
      }
      case SPL_METHOD_TRAJECTORIES: {
        TrajectoryPlan plan;
        plan.n_traj = net->n_traj;
        plan.dt = net->dt;
        plan.master_seed = net->seed;
        plan.noise = setup.noise;
        plan.t_final = ts.back();
        const auto ens = ensemble_average_at(plan, single_excitation_hamiltonian(setup.graph),
                                             initial_network_vector(net->n, net->input, kCanonicalProbe), ts,
                                             resolve_threads(net->threads));
        for (size_t i = 0; i < count; ++i)
          out[i] = to_c(extract_channel(ens[i].rho_mean, kCanonicalProbe, net->input, net->output));
        break;
      }
      case SPL_METHOD_PERTURBATION_NUMERIC:
        for (size_t i = 0; i < count; ++i) out[i] = to_c(first_order_numeric(setup, ts[i]));
        break;
      case SPL_METHOD_PERTURBATION_PRINTED:
        require(setup.noise.is_uniform(), Errc::unsupported, "printed weak-noise forms need a single eta");
        for (size_t i = 0; i < count; ++i)
          out[i] = to_c(printed_weak_noise_channel(net->n, static_cast<int>(setup.noise.size()),
                                                   setup.noise.uniform_rate(), ts[i]));
        break;
      default:
        fail(Errc::invalid_argument, "unknown method");
    }
    return SPL_OK;
  });
}

spl_status spl_complete_graph_max_fidelity(int n, double* out) {
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = complete_graph_max_fidelity(n);
    return SPL_OK;
  });
}

spl_status spl_optimal_fidelity(double z_re, double z_im, double lambda, double* out) {
  if (!out) return null_arg("out");
  return guarded([&] {
    const ChannelParams c{cplx(z_re, z_im), lambda};
    c.validate();
    *out = optimal_avg_fidelity(c);
    return SPL_OK;
  });
}

spl_status spl_four_node_closed_form(double eta, double t, double* z_sq, double* lambda_z_re, double* lambda_z_im) {
  if (!z_sq || !lambda_z_re || !lambda_z_im) return null_arg("outputs");
  return guarded([&] {
    const FourNodeClosedForm f = four_node_closed_form(eta, t);
    *z_sq = f.z_sq;
    *lambda_z_re = f.lambda_z.real();
    *lambda_z_im = f.lambda_z.imag();
    return SPL_OK;
  });
}

spl_status spl_experiment_create(const char* command, const char* config_json, spl_experiment** out) {
  if (!out) return null_arg("out");
  if (!command) return null_arg("command");
  *out = nullptr;
  return guarded([&] {
    nlohmann::json doc;
    if (config_json && *config_json) {
      doc = nlohmann::json::parse(config_json, nullptr, false);
      require(!doc.is_discarded(), Errc::config, "configuration is not valid JSON");
    }
    auto e = std::make_unique<spl_experiment>(spl_experiment{Experiment(command_from_name(command), doc)});
    *out = e.release();
    return SPL_OK;
  });
}

void spl_experiment_destroy(spl_experiment* exp) { delete exp; }

spl_status spl_experiment_set(spl_experiment* exp, const char* key, const char* value) {
  if (!exp) return null_arg("exp");
  if (!key || !value) return null_arg("key and value");
  return guarded([&] {
    exp->exp.config().set_field(key, value);
    return SPL_OK;
  });
}

spl_status spl_experiment_set_seed(spl_experiment* exp, uint64_t seed) {
  if (!exp) return null_arg("exp");
  exp->exp.config().master_seed = seed;
  return SPL_OK;
}

spl_status spl_experiment_set_threads(spl_experiment* exp, int threads) {
  if (!exp) return null_arg("exp");
  if (threads < 0) {
    g_last_error = "threads must be >= 0";
    return SPL_E_INVALID_ARGUMENT;
  }
  exp->exp.config().threads = threads;
  return SPL_OK;
}

spl_status spl_experiment_run(spl_experiment* exp) {
  if (!exp) return null_arg("exp");
  return guarded([&] {
    if (exp->exp.run()) return SPL_OK;
    g_last_error = "engines disagree; see the report";
    return SPL_E_CONSISTENCY;
  });
}

spl_status spl_experiment_output(const spl_experiment* exp, const char** data, size_t* size) {
  if (!exp) return null_arg("exp");
  return output_of(exp->exp.output(), data, size);
}

spl_status spl_experiment_metadata(const spl_experiment* exp, const char** data, size_t* size) {
  if (!exp) return null_arg("exp");
  return output_of(exp->exp.metadata(), data, size);
}

spl_status spl_experiment_text(const spl_experiment* exp, const char** data, size_t* size) {
  if (!exp) return null_arg("exp");
  return output_of(exp->exp.text(), data, size);
}

}  // extern "C"
