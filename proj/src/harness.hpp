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

// Experiment configuration, the figure scans and their CSV/JSON output.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "common.hpp"
#include "lindblad.hpp"
#include "network.hpp"

namespace spinlube {

enum class Command { simulate, fig1, fig2, fig3, report };
const char* command_name(Command c) noexcept;
Command command_from_name(const std::string& name);

enum class Method { unitary, lindblad, trajectories, perturbation_numeric, perturbation_printed };
const char* method_name(Method m) noexcept;
Method method_from_name(const std::string& name);

struct TimeGrid {
  double t_min = 0.0;
  double t_max = 2.0 * kPi;
  std::size_t t_steps = 64;
  /// Leave t_min itself out: points t_min + k (t_max - t_min)/t_steps, k = 1..t_steps.
  bool open_start = false;

  std::vector<double> points() const;
};

struct ExperimentConfig {
  Command command = Command::simulate;
  int n = 4;
  int input_vertex = 1;
  int output_vertex = 2;
  std::optional<std::vector<int>> noisy_vertices;
  std::optional<int> m;
  double eta = 0.0;
  std::optional<std::map<Edge, double>> eta_per_edge;
  TimeGrid time;
  std::vector<double> eta_grid;
  std::vector<int> n_grid;
  std::vector<int> m_grid;
  Method method = Method::lindblad;
  Integrator integrator = Integrator::automatic;
  double dt = 1e-3;
  std::size_t n_traj = 1000;
  std::uint64_t master_seed = 0;
  int threads = 0;  // 0: environment or 1

  /// Defaults of each command.
  static ExperimentConfig defaults(Command c);
  /// Defaults overridden by the fields of `doc`; unknown fields are rejected.
  static ExperimentConfig from_json(Command c, const nlohmann::json& doc);

  /// One field from its JSON text (bare words are taken as strings).
  void set_field(const std::string& key, const std::string& value);
  void validate() const;

  /// Noisy vertices after resolving `m` (smallest vertices other than i, o).
  std::vector<int> resolved_noisy_vertices(int n_override = 0, int m_override = -1) const;
  TransferSetup setup() const;

  /// Everything that determines the output (threads excluded).
  nlohmann::ordered_json to_json() const;
};

struct ScanRecord {
  int n = 0;
  int m = 0;
  double eta = 0.0;
  double t = 0.0;
  double F = 0.0;
  double abs_z = 0.0;
  double lambda = 0.0;
  std::optional<double> delta;
  std::string method;
  std::uint64_t seed = 0;
};

inline constexpr const char* kCsvHeader = "n,m,eta,t,F,abs_z,lambda,delta,method,seed";
std::string to_csv(const std::vector<ScanRecord>& rows);

std::vector<ScanRecord> run_simulate(const ExperimentConfig& c);
std::vector<ScanRecord> run_scan_fig1(const ExperimentConfig& c);
std::vector<ScanRecord> run_scan_fig2(const ExperimentConfig& c);
std::vector<ScanRecord> run_scan_fig3(const ExperimentConfig& c);

/// A configured run: the object behind the C API's experiment handle.
class Experiment {
 public:
  Experiment(Command c, const nlohmann::json& doc);

  ExperimentConfig& config() noexcept { return config_; }
  const ExperimentConfig& config() const noexcept { return config_; }

  /// Runs and stores the outputs. Returns false when the report finds two
  /// engines disagreeing (outputs are still stored).
  bool run();

  /// CSV for scans, JSON for the report.
  const std::string& output() const noexcept { return output_; }
  /// JSON metadata sidecar (scans) or empty.
  const std::string& metadata() const noexcept { return metadata_; }
  /// Human-readable table (report) or empty.
  const std::string& text() const noexcept { return text_; }

 private:
  ExperimentConfig config_;
  std::string output_;
  std::string metadata_;
  std::string text_;
};

}  // namespace spinlube
