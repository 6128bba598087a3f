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

// Cross-oracle consistency checks and the structured report they produce.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "common.hpp"
#include "lindblad.hpp"
#include "network.hpp"

namespace spinlube {

enum class Verdict { match, mismatch, documented_discrepancy };
const char* verdict_name(Verdict v) noexcept;

enum class CheckKind {
  engine,  // two engines of this library; disagreement is a failure
  claim,   // a printed formula or prediction; disagreement is documented
};

struct CheckRecord {
  std::string name;
  CheckKind kind = CheckKind::engine;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  std::string oracle;
  double reference = 0.0;
  double engine = 0.0;
  double discrepancy = 0.0;
  double tolerance = 0.0;
  Verdict verdict = Verdict::match;
};

/// Verdict from discrepancy <= tolerance, honouring the check kind.
void decide(CheckRecord& r);

struct ConsistencyReport {
  std::vector<CheckRecord> checks;  // sorted by name

  bool engines_consistent() const noexcept;
  nlohmann::ordered_json to_json() const;
  std::string to_text() const;
};

/// Lindblad vs trajectory ensemble (and the unitary channel) at several times.
struct EngineAgreement {
  double t = 0.0;
  NetworkState lindblad;
  NetworkState ensemble;
  RMatrix std_err;
  /// max over entries of |lindblad - ensemble| / max(std_err, 1e-9)
  double max_z_score = 0.0;
  /// max entry difference between Lindblad runs at dt and dt/2
  double dt_halving_drift = 0.0;
};

struct AgreementPlan {
  std::size_t n_traj = 20000;
  double dt = 1e-3;
  std::uint64_t master_seed = 0;
  int threads = 1;
};

std::vector<EngineAgreement> engine_agreement(const TransferSetup& setup, std::span<const double> times,
                                              const AgreementPlan& plan);

struct ReportConfig {
  std::size_t n_traj = 4000;
  double dt = 1e-3;
  std::uint64_t master_seed = 0;
  int threads = 1;
};

ConsistencyReport consistency_report(const ReportConfig& config = {});

}  // namespace spinlube
