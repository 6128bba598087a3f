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

#include "common.hpp"

#include <cstdlib>
#include <string>

#include "parallel.hpp"

namespace spinlube {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::invalid_noise_spec: return "invalid-noise-spec";
    case Errc::numeric_failure: return "numeric-failure";
    case Errc::unsupported: return "unsupported";
    case Errc::config: return "config-error";
    case Errc::consistency: return "consistency-failure";
    case Errc::io: return "io-error";
  }
  return "unknown";
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("SPINLUBE_THREADS")) {
    try {
      const int v = std::stoi(env);
      if (v > 0) return v;
    } catch (const std::exception&) {
    }
  }
  return 1;
}

}  // namespace spinlube
