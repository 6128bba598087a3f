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

#ifndef SPINLUBE_SPINLUBE_H_
#define SPINLUBE_SPINLUBE_H_

/* C interface to the spinlube engine: noisy single-excitation transfer on
 * complete XY networks. All functions return an spl_status; results come back
 * through out-parameters. Strings returned by the library stay valid until the
 * owning handle is modified or destroyed. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SPINLUBE_BUILDING_LIBRARY)
#    define SPL_API __declspec(dllexport)
#  else
#    define SPL_API __declspec(dllimport)
#  endif
#else
#  define SPL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum spl_status {
  SPL_OK = 0,
  SPL_E_INVALID_ARGUMENT = 1,
  SPL_E_INVALID_NOISE_SPEC = 2,
  SPL_E_NUMERIC = 3,
  SPL_E_UNSUPPORTED = 4,
  SPL_E_CONFIG = 5,
  SPL_E_CONSISTENCY = 6,
  SPL_E_IO = 7,
  SPL_E_INTERNAL = 99
} spl_status;

typedef enum spl_method {
  SPL_METHOD_UNITARY = 0,
  SPL_METHOD_LINDBLAD = 1,
  SPL_METHOD_TRAJECTORIES = 2,
  SPL_METHOD_PERTURBATION_NUMERIC = 3,
  SPL_METHOD_PERTURBATION_PRINTED = 4
} spl_method;

typedef struct spl_network spl_network;
typedef struct spl_experiment spl_experiment;

/* Channel of the transfer i -> o: output qubit map with z and lambda. */
typedef struct spl_channel {
  double z_re;
  double z_im;
  double lambda;
  double fidelity; /* optimal average fidelity */
} spl_channel;

SPL_API const char* spl_version(void);
SPL_API const char* spl_status_name(spl_status s);
/* Message of the last failing call on this thread ("" if none). */
SPL_API const char* spl_last_error(void);

/* ---- networks ---------------------------------------------------------- */

/* Complete graph on n vertices with the given transfer endpoints. */
SPL_API spl_status spl_network_create_complete(int n, int input, int output, spl_network** out);
SPL_API void spl_network_destroy(spl_network* net);

/* Noise of strength eta on every pair within `vertices`. */
SPL_API spl_status spl_network_set_noise(spl_network* net, const int* vertices, size_t count, double eta);
/* One strength per pair; k[i], l[i], eta[i] for i < count. The noisy vertex
 * set is the union of the endpoints and every pair within it must be listed. */
SPL_API spl_status spl_network_set_noise_edges(spl_network* net, const int* k, const int* l, const double* eta,
                                               size_t count);
SPL_API spl_status spl_network_clear_noise(spl_network* net);

/* Trajectory controls (SPL_METHOD_TRAJECTORIES); dt also drives RK4. */
SPL_API spl_status spl_network_set_dt(spl_network* net, double dt);
SPL_API spl_status spl_network_set_trajectories(spl_network* net, size_t n_traj, uint64_t master_seed);
SPL_API spl_status spl_network_set_threads(spl_network* net, int threads);

/* Channel at each of `count` ascending times. */
SPL_API spl_status spl_network_channels(const spl_network* net, spl_method method, const double* times,
                                        size_t count, spl_channel* out);

/* ---- closed forms ------------------------------------------------------ */

SPL_API spl_status spl_complete_graph_max_fidelity(int n, double* out);
SPL_API spl_status spl_optimal_fidelity(double z_re, double z_im, double lambda, double* out);
/* Printed four-node expressions, verbatim. */
SPL_API spl_status spl_four_node_closed_form(double eta, double t, double* z_sq, double* lambda_z_re,
                                             double* lambda_z_im);

/* ---- experiments (CLI commands) ---------------------------------------- */

/* command: "simulate", "fig1", "fig2", "fig3" or "report"; config_json may be
 * NULL or "" for the defaults. */
SPL_API spl_status spl_experiment_create(const char* command, const char* config_json, spl_experiment** out);
SPL_API void spl_experiment_destroy(spl_experiment* exp);
/* Override one field; value is JSON text (bare words are read as strings). */
SPL_API spl_status spl_experiment_set(spl_experiment* exp, const char* key, const char* value);
SPL_API spl_status spl_experiment_set_seed(spl_experiment* exp, uint64_t seed);
SPL_API spl_status spl_experiment_set_threads(spl_experiment* exp, int threads);
/* SPL_E_CONSISTENCY when the report finds two engines disagreeing; the output
 * is still available in that case. */
SPL_API spl_status spl_experiment_run(spl_experiment* exp);
/* CSV (scans) or JSON (report). */
SPL_API spl_status spl_experiment_output(const spl_experiment* exp, const char** data, size_t* size);
/* JSON sidecar of a scan; empty for the report. */
SPL_API spl_status spl_experiment_metadata(const spl_experiment* exp, const char** data, size_t* size);
/* Text table of the report; empty for scans. */
SPL_API spl_status spl_experiment_text(const spl_experiment* exp, const char** data, size_t* size);

#ifdef __cplusplus
}
#endif

#endif /* SPINLUBE_SPINLUBE_H_ */
