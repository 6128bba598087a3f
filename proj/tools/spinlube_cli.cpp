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

// spinlube command line: simulate, fig1, fig2, fig3, report.
// Exit codes: 0 success, 1 configuration error, 2 numerical or consistency failure.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spinlube/spinlube.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumeric = 2;

int exit_code(spl_status s) {
  switch (s) {
    case SPL_OK: return kExitOk;
    case SPL_E_NUMERIC:
    case SPL_E_CONSISTENCY:
    case SPL_E_INTERNAL: return kExitNumeric;
    default: return kExitConfig;
  }
}

int report_failure(spl_status s) {
  std::cerr << "spinlube: " << spl_status_name(s) << ": " << spl_last_error() << "\n";
  return exit_code(s);
}

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::vector<std::string> set;
};

bool read_file(const std::string& path, std::string& text) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  text = ss.str();
  return static_cast<bool>(in) || in.eof();
}

bool write_file(const std::string& path, const char* data, std::size_t size) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) return false;
  f.write(data, static_cast<std::streamsize>(size));
  return static_cast<bool>(f);
}

int run(const std::string& command, const Options& o) {
  std::string config;
  if (!o.config.empty() && !read_file(o.config, config)) {
    std::cerr << "spinlube: io: cannot read config '" << o.config << "'\n";
    return kExitConfig;
  }
  spl_experiment* exp = nullptr;
  if (spl_status s = spl_experiment_create(command.c_str(), config.c_str(), &exp); s != SPL_OK)
    return report_failure(s);
  std::unique_ptr<spl_experiment, void (*)(spl_experiment*)> guard(exp, spl_experiment_destroy);

  for (const auto& kv : o.set) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::cerr << "spinlube: config: --set expects key=value, got '" << kv << "'\n";
      return kExitConfig;
    }
    const std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
    if (spl_status s = spl_experiment_set(exp, key.c_str(), value.c_str()); s != SPL_OK) return report_failure(s);
  }
  if (o.seed) spl_experiment_set_seed(exp, *o.seed);
  if (o.threads) {
    if (spl_status s = spl_experiment_set_threads(exp, *o.threads); s != SPL_OK) return report_failure(s);
  }

  const spl_status run_status = spl_experiment_run(exp);
  if (run_status != SPL_OK && run_status != SPL_E_CONSISTENCY) return report_failure(run_status);

  const char* data = nullptr;
  std::size_t size = 0;
  spl_experiment_output(exp, &data, &size);
  if (o.out.empty()) {
    std::fwrite(data, 1, size, stdout);
  } else if (!write_file(o.out, data, size)) {
    std::cerr << "spinlube: io: cannot write '" << o.out << "'\n";
    return kExitConfig;
  }

  if (command == "report") {
    const char* text = nullptr;
    std::size_t text_size = 0;
    spl_experiment_text(exp, &text, &text_size);
    std::FILE* sink = o.out.empty() ? stderr : stdout;
    std::fwrite(text, 1, text_size, sink);
  } else if (!o.out.empty()) {
    const char* meta = nullptr;
    std::size_t meta_size = 0;
    spl_experiment_metadata(exp, &meta, &meta_size);
    if (!write_file(o.out + ".meta.json", meta, meta_size)) {
      std::cerr << "spinlube: io: cannot write '" << o.out << ".meta.json'\n";
      return kExitConfig;
    }
  }
  if (run_status == SPL_E_CONSISTENCY) return report_failure(run_status);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spinlube: noisy state transfer on complete XY networks"};
  app.set_version_flag("--version", spl_version());
  app.require_subcommand(1);

  struct Sub {
    const char* name;
    const char* help;
  };
  const Sub subs[] = {
      {"simulate", "channel and fidelity along a time grid for one configuration"},
      {"fig1", "fidelity surface over (eta, t) for n = 4 with noise on the 3-4 edge"},
      {"fig2", "noise benefit Delta over (n, t) with m = n - 2"},
      {"fig3", "noise benefit Delta over (m, t) at n = 10"},
      {"report", "cross-engine consistency report (JSON + text table)"},
  };
  Options opts;
  std::string chosen;
  std::uint64_t seed = 0;
  int threads = 0;
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    sub->add_option("--config", opts.config, "JSON configuration file")->check(CLI::ExistingFile);
    sub->add_option("--out", opts.out, "output path (stdout if omitted)");
    sub->add_option("--seed", seed, "master seed (overrides the config)");
    sub->add_option("--threads", threads, "worker threads (overrides SPINLUBE_THREADS)")->check(CLI::NonNegativeNumber);
    sub->add_option("--set", opts.set, "override one config field, key=value (repeatable)");
    sub->callback([&, sub, name = std::string(s.name)] {
      chosen = name;
      if (sub->count("--seed")) opts.seed = seed;
      if (sub->count("--threads")) opts.threads = threads;
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }
  return run(chosen, opts);
}
