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

#include "harness.hpp"

#include <cmath>
#include <cstdio>
#include <set>

#include "analytics.hpp"
#include "parallel.hpp"
#include "perturbation.hpp"
#include "propagator.hpp"
#include "report.hpp"
#include "stochastic.hpp"

namespace spinlube {

using Json = nlohmann::json;

const char* command_name(Command c) noexcept {
  switch (c) {
    case Command::simulate: return "simulate";
    case Command::fig1: return "fig1";
    case Command::fig2: return "fig2";
    case Command::fig3: return "fig3";
    case Command::report: return "report";
  }
  return "unknown";
}

Command command_from_name(const std::string& name) {
  for (Command c : {Command::simulate, Command::fig1, Command::fig2, Command::fig3, Command::report})
    if (name == command_name(c)) return c;
  fail(Errc::config, "unknown command '" + name + "'");
}

const char* method_name(Method m) noexcept {
  switch (m) {
    case Method::unitary: return "unitary";
    case Method::lindblad: return "lindblad";
    case Method::trajectories: return "trajectories";
    case Method::perturbation_numeric: return "perturbation-numeric";
    case Method::perturbation_printed: return "perturbation-printed";
  }
  return "unknown";
}

Method method_from_name(const std::string& name) {
  for (Method m : {Method::unitary, Method::lindblad, Method::trajectories, Method::perturbation_numeric,
                   Method::perturbation_printed})
    if (name == method_name(m)) return m;
  fail(Errc::config, "method: unknown value '" + name + "'");
}

std::vector<double> TimeGrid::points() const {
  if (!open_start) return linear_grid(t_min, t_max, t_steps);
  std::vector<double> g(t_steps);
  const double h = (t_max - t_min) / static_cast<double>(t_steps);
  for (std::size_t k = 0; k < t_steps; ++k) g[k] = t_min + h * static_cast<double>(k + 1);
  g.back() = t_max;
  return g;
}

namespace {

[[noreturn]] void bad_field(const std::string& key, const std::string& what) {
  fail(Errc::config, key + ": " + what);
}

double get_number(const std::string& key, const Json& v) {
  if (!v.is_number()) bad_field(key, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) bad_field(key, "must be finite");
  return x;
}

long long get_int(const std::string& key, const Json& v) {
  if (v.is_number_integer()) return v.get<long long>();
  if (v.is_number_float()) {
    const double x = v.get<double>();
    if (std::isfinite(x) && x == std::floor(x) && std::abs(x) < 9e15) return static_cast<long long>(x);
  }
  bad_field(key, "expected an integer");
}

std::uint64_t get_seed(const std::string& key, const Json& v) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<long long>() >= 0) return static_cast<std::uint64_t>(v.get<long long>());
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    try {
      std::size_t used = 0;
      const auto x = std::stoull(s, &used, 0);
      if (used == s.size() && !s.empty() && s[0] != '-') return x;
    } catch (const std::exception&) {
    }
  }
  bad_field(key, "expected an unsigned 64-bit integer");
}

std::string get_string(const std::string& key, const Json& v) {
  if (!v.is_string()) bad_field(key, "expected a string");
  return v.get<std::string>();
}

std::vector<int> get_int_list(const std::string& key, const Json& v) {
  std::vector<int> out;
  if (v.is_array()) {
    for (const auto& x : v) out.push_back(static_cast<int>(get_int(key, x)));
    return out;
  }
  if (v.is_object()) {
    // {"min": a, "max": b}
    for (const auto& [k, _] : v.items())
      if (k != "min" && k != "max") bad_field(key + "." + k, "unknown field");
    if (!v.contains("min") || !v.contains("max")) bad_field(key, "range needs min and max");
    const auto lo = get_int(key + ".min", v["min"]);
    const auto hi = get_int(key + ".max", v["max"]);
    if (hi < lo || hi - lo > 10000) bad_field(key, "bad range");
    for (auto x = lo; x <= hi; ++x) out.push_back(static_cast<int>(x));
    return out;
  }
  bad_field(key, "expected an array of integers or {min, max}");
}

std::vector<double> get_real_list(const std::string& key, const Json& v) {
  std::vector<double> out;
  if (v.is_array()) {
    for (const auto& x : v) out.push_back(get_number(key, x));
    return out;
  }
  if (v.is_object()) {
    // {"min": a, "max": b, "steps": k} with both ends included
    for (const auto& [k, _] : v.items())
      if (k != "min" && k != "max" && k != "steps") bad_field(key + "." + k, "unknown field");
    if (!v.contains("min") || !v.contains("max") || !v.contains("steps"))
      bad_field(key, "range needs min, max and steps");
    const double lo = get_number(key + ".min", v["min"]);
    const double hi = get_number(key + ".max", v["max"]);
    const auto steps = get_int(key + ".steps", v["steps"]);
    if (steps < 1 || hi < lo) bad_field(key, "bad range");
    return linear_grid(lo, hi, static_cast<std::size_t>(steps));
  }
  bad_field(key, "expected an array of numbers or {min, max, steps}");
}

Edge parse_edge(const std::string& key, const std::string& s) {
  const auto dash = s.find('-');
  if (dash == std::string::npos) bad_field(key, "edge keys look like \"3-4\"");
  try {
    std::size_t a_used = 0, b_used = 0;
    const int a = std::stoi(s.substr(0, dash), &a_used);
    const int b = std::stoi(s.substr(dash + 1), &b_used);
    if (a_used != dash || b_used != s.size() - dash - 1) throw std::invalid_argument(s);
    if (a == b) bad_field(key, "edge '" + s + "' is a self-loop");
    return Edge(a, b);
  } catch (const std::logic_error&) {
    bad_field(key, "edge keys look like \"3-4\", got '" + s + "'");
  }
}

const std::set<std::string>& keys_for(Command c) {
  static const std::set<std::string> report_keys = {"n_traj", "dt", "master_seed", "threads"};
  static const std::set<std::string> scan_keys = {
      "n", "input_vertex", "output_vertex", "noisy_vertices", "m", "eta", "time", "eta_grid", "n_grid", "m_grid",
      "method", "integrator", "dt", "n_traj", "master_seed", "threads"};
  return c == Command::report ? report_keys : scan_keys;
}

void apply_field(ExperimentConfig& c, const std::string& key, const Json& v) {
  const auto dot = key.find('.');
  const std::string head = key.substr(0, dot);
  if (!keys_for(c.command).count(head))
    bad_field(key, std::string("unknown field for command ") + command_name(c.command));

  if (head == "time") {
    const auto set_time = [&](const std::string& k, const Json& x) {
      if (k == "t_min")
        c.time.t_min = get_number("time.t_min", x);
      else if (k == "t_max")
        c.time.t_max = get_number("time.t_max", x);
      else if (k == "t_steps") {
        const auto s = get_int("time.t_steps", x);
        if (s < 1) bad_field("time.t_steps", "must be >= 1");
        c.time.t_steps = static_cast<std::size_t>(s);
      } else if (k == "open_start") {
        if (!x.is_boolean()) bad_field("time.open_start", "expected true or false");
        c.time.open_start = x.get<bool>();
      } else
        bad_field("time." + k, "unknown field");
    };
    if (dot != std::string::npos) {
      set_time(key.substr(dot + 1), v);
    } else {
      if (!v.is_object()) bad_field("time", "expected an object");
      for (const auto& [k, x] : v.items()) set_time(k, x);
    }
    return;
  }
  if (dot != std::string::npos) bad_field(key, "unknown field");

  if (key == "n") {
    c.n = static_cast<int>(get_int(key, v));
  } else if (key == "input_vertex") {
    c.input_vertex = static_cast<int>(get_int(key, v));
  } else if (key == "output_vertex") {
    c.output_vertex = static_cast<int>(get_int(key, v));
  } else if (key == "noisy_vertices") {
    c.noisy_vertices = get_int_list(key, v);
    c.m.reset();
  } else if (key == "m") {
    c.m = static_cast<int>(get_int(key, v));
    c.noisy_vertices.reset();
  } else if (key == "eta") {
    if (v.is_object()) {
      std::map<Edge, double> rates;
      for (const auto& [k, x] : v.items()) {
        const Edge e = parse_edge("eta", k);
        if (!rates.emplace(e, get_number("eta." + k, x)).second) bad_field("eta", "edge '" + k + "' given twice");
      }
      c.eta_per_edge = std::move(rates);
      c.eta = 0.0;
      // the map names the noisy pairs; an explicit noisy_vertices must then agree
      c.noisy_vertices.reset();
      c.m.reset();
    } else {
      c.eta = get_number(key, v);
      c.eta_per_edge.reset();
    }
  } else if (key == "eta_grid") {
    c.eta_grid = get_real_list(key, v);
  } else if (key == "n_grid") {
    c.n_grid = get_int_list(key, v);
  } else if (key == "m_grid") {
    c.m_grid = get_int_list(key, v);
  } else if (key == "method") {
    c.method = method_from_name(get_string(key, v));
  } else if (key == "integrator") {
    try {
      c.integrator = integrator_from_name(get_string(key, v));
    } catch (const Error& e) {
      bad_field(key, e.what());
    }
  } else if (key == "dt") {
    c.dt = get_number(key, v);
  } else if (key == "n_traj") {
    const auto x = get_int(key, v);
    if (x < 1) bad_field(key, "must be >= 1");
    c.n_traj = static_cast<std::size_t>(x);
  } else if (key == "master_seed") {
    c.master_seed = get_seed(key, v);
  } else if (key == "threads") {
    const auto x = get_int(key, v);
    if (x < 0) bad_field(key, "must be >= 0");
    c.threads = static_cast<int>(x);
  }
}

std::vector<int> default_noisy(int n, int m, int input, int output) {
  std::vector<int> w;
  for (int v = 1; v <= n && static_cast<int>(w.size()) < m; ++v)
    if (v != input && v != output) w.push_back(v);
  return w;
}

}  // namespace

ExperimentConfig ExperimentConfig::defaults(Command c) {
  ExperimentConfig cfg;
  cfg.command = c;
  switch (c) {
    case Command::simulate:
      cfg.noisy_vertices = std::vector<int>{3, 4};
      cfg.eta = 1.0;
      cfg.time = {0.0, 2.0 * kPi, 64, false};
      break;
    case Command::fig1:
      cfg.noisy_vertices = std::vector<int>{3, 4};
      cfg.time = {0.0, 2.0 * kPi, 64, false};
      cfg.eta_grid = linear_grid(0.0, 64.0, 64);
      break;
    case Command::fig2:
      cfg.eta = 0.01;
      cfg.time = {0.0, 4.0 * kPi, 200, true};
      for (int n = 4; n <= 12; ++n) cfg.n_grid.push_back(n);
      cfg.integrator = Integrator::exact;
      break;
    case Command::fig3:
      cfg.n = 10;
      cfg.eta = 0.01;
      cfg.time = {0.0, 4.0 * kPi, 200, true};
      for (int m = 2; m <= 8; ++m) cfg.m_grid.push_back(m);
      cfg.integrator = Integrator::exact;
      break;
    case Command::report:
      cfg.n_traj = 4000;
      break;
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::from_json(Command c, const Json& doc) {
  ExperimentConfig cfg = defaults(c);
  if (doc.is_null()) return cfg;
  if (!doc.is_object()) fail(Errc::config, "configuration must be a JSON object");
  for (const auto& [k, v] : doc.items()) apply_field(cfg, k, v);
  return cfg;
}

void ExperimentConfig::set_field(const std::string& key, const std::string& value) {
  Json v = Json::parse(value, nullptr, false);
  if (v.is_discarded()) v = value;
  apply_field(*this, key, v);
}

std::vector<int> ExperimentConfig::resolved_noisy_vertices(int n_override, int m_override) const {
  const int nn = n_override > 0 ? n_override : n;
  if (m_override >= 0) return default_noisy(nn, m_override, input_vertex, output_vertex);
  if (noisy_vertices) return *noisy_vertices;
  if (m) return default_noisy(nn, *m, input_vertex, output_vertex);
  if (eta_per_edge) {
    std::set<int> vs;
    for (const auto& [e, _] : *eta_per_edge) {
      vs.insert(e.k);
      vs.insert(e.l);
    }
    return {vs.begin(), vs.end()};
  }
  return {};
}

TransferSetup ExperimentConfig::setup() const {
  auto w = resolved_noisy_vertices();
  NoiseSpec noise = eta_per_edge ? NoiseSpec::per_edge(std::move(w), *eta_per_edge)
                                 : NoiseSpec::uniform(std::move(w), eta);
  return TransferSetup{complete_graph(n), std::move(noise), input_vertex, output_vertex};
}

void ExperimentConfig::validate() const {
  auto check = [](bool ok, const std::string& key, const std::string& what) {
    if (!ok) bad_field(key, what);
  };
  check(dt > 0.0, "dt", "must be > 0");
  check(n_traj >= 1, "n_traj", "must be >= 1");
  if (command == Command::report) return;

  check(n >= 2 && n <= 32, "n", "must lie in 2..32");
  check(input_vertex >= 1 && input_vertex <= n, "input_vertex", "must lie in 1..n");
  check(output_vertex >= 1 && output_vertex <= n, "output_vertex", "must lie in 1..n");
  check(input_vertex != output_vertex, "output_vertex", "must differ from input_vertex");
  check(time.t_min >= 0.0, "time.t_min", "must be >= 0");
  check(time.t_max >= time.t_min, "time.t_max", "must be >= t_min");
  check(time.t_steps >= 1, "time.t_steps", "must be >= 1");
  check(!time.open_start || time.t_max > time.t_min, "time", "open_start needs t_max > t_min");
  check(eta >= 0.0, "eta", "must be >= 0");
  if (m) check(*m >= 0 && *m <= n - 2, "m", "must lie in 0..n-2");

  switch (command) {
    case Command::simulate: {
      try {
        setup().validate();
      } catch (const Error& e) {
        bad_field(noisy_vertices ? "noisy_vertices" : "eta", e.what());
      }
      const bool printed = method == Method::perturbation_printed;
      check(!printed || !eta_per_edge, "method", "perturbation-printed needs a single eta");
      break;
    }
    case Command::fig1:
      check(!eta_grid.empty(), "eta_grid", "must not be empty");
      for (double e : eta_grid) check(e >= 0.0, "eta_grid", "entries must be >= 0");
      check(!eta_per_edge, "eta", "fig1 takes its strengths from eta_grid");
      check(method == Method::lindblad, "method", "fig1 runs the lindblad engine");
      try {
        TransferSetup{complete_graph(n), NoiseSpec::uniform(resolved_noisy_vertices(), 1.0), input_vertex,
                      output_vertex}
            .validate();
      } catch (const Error& e) {
        bad_field("noisy_vertices", e.what());
      }
      break;
    case Command::fig2:
      check(!n_grid.empty(), "n_grid", "must not be empty");
      for (int k : n_grid) check(k >= 3 && k <= 32, "n_grid", "entries must lie in 3..32");
      check(!eta_per_edge, "eta", "fig2 takes a single eta");
      check(method == Method::lindblad, "method", "fig2 runs the lindblad engine");
      check(input_vertex == 1 && output_vertex == 2, "input_vertex", "fig2 uses vertices 1 and 2");
      break;
    case Command::fig3:
      check(!m_grid.empty(), "m_grid", "must not be empty");
      for (int k : m_grid) check(k >= 0 && k <= n - 2, "m_grid", "entries must lie in 0..n-2");
      check(!eta_per_edge, "eta", "fig3 takes a single eta");
      check(method == Method::lindblad, "method", "fig3 runs the lindblad engine");
      check(input_vertex == 1 && output_vertex == 2, "input_vertex", "fig3 uses vertices 1 and 2");
      break;
    case Command::report:
      break;
  }
}

nlohmann::ordered_json ExperimentConfig::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command_name(command);
  if (command == Command::report) {
    j["n_traj"] = n_traj;
    j["dt"] = dt;
    j["master_seed"] = master_seed;
    return j;
  }
  j["n"] = n;
  j["input_vertex"] = input_vertex;
  j["output_vertex"] = output_vertex;
  if (noisy_vertices) j["noisy_vertices"] = *noisy_vertices;
  if (m) j["m"] = *m;
  if (eta_per_edge) {
    nlohmann::ordered_json rates = nlohmann::ordered_json::object();
    for (const auto& [e, r] : *eta_per_edge) rates[std::to_string(e.k) + "-" + std::to_string(e.l)] = r;
    j["eta"] = rates;
  } else {
    j["eta"] = eta;
  }
  j["time"] = {{"t_min", time.t_min}, {"t_max", time.t_max}, {"t_steps", time.t_steps},
               {"open_start", time.open_start}};
  if (!eta_grid.empty()) j["eta_grid"] = eta_grid;
  if (!n_grid.empty()) j["n_grid"] = n_grid;
  if (!m_grid.empty()) j["m_grid"] = m_grid;
  j["method"] = method_name(method);
  j["integrator"] = integrator_name(integrator);
  j["dt"] = dt;
  j["n_traj"] = n_traj;
  j["master_seed"] = master_seed;
  return j;
}

std::string to_csv(const std::vector<ScanRecord>& rows) {
  std::string out = kCsvHeader;
  out += '\n';
  char buf[512];
  for (const auto& r : rows) {
    char delta[40] = "";
    if (r.delta) std::snprintf(delta, sizeof delta, "%.12e", *r.delta);
    std::snprintf(buf, sizeof buf, "%d,%d,%.12e,%.12e,%.12e,%.12e,%.12e,%s,%s,%llu\n", r.n, r.m, r.eta, r.t, r.F,
                  r.abs_z, r.lambda, delta, r.method.c_str(), static_cast<unsigned long long>(r.seed));
    out += buf;
  }
  return out;
}

namespace {

ScanRecord record(const ExperimentConfig& c, int n, int m, double eta, double t, const ChannelParams& ch) {
  ScanRecord r;
  r.n = n;
  r.m = m;
  r.eta = eta;
  r.t = t;
  r.F = optimal_avg_fidelity(ch);
  r.abs_z = std::abs(ch.z);
  r.lambda = ch.lambda;
  r.method = method_name(c.method);
  r.seed = c.master_seed;
  return r;
}

ScanRecord weak_record(const ExperimentConfig& c, int n, int m, double eta, double t, const WeakNoiseChannel& w) {
  ScanRecord r;
  r.n = n;
  r.m = m;
  r.eta = eta;
  r.t = t;
  r.F = w.fidelity();
  r.abs_z = std::sqrt(std::max(w.z_sq(), 0.0));
  r.lambda = r.abs_z > 1e-12 ? std::abs(w.lambda_z()) / r.abs_z : 1.0;
  r.method = method_name(c.method);
  r.seed = c.master_seed;
  return r;
}

EvolveOptions evolve_options(const ExperimentConfig& c) {
  EvolveOptions o;
  o.dt = c.dt;
  o.integrator = c.integrator;
  return o;
}

}  // namespace

std::vector<ScanRecord> run_simulate(const ExperimentConfig& c) {
  c.validate();
  const TransferSetup setup = c.setup();
  const auto times = c.time.points();
  const int m = static_cast<int>(setup.noise.size());
  const double eta = setup.noise.max_rate();
  const int threads = resolve_threads(c.threads);
  std::vector<ScanRecord> rows;
  rows.reserve(times.size());

  switch (c.method) {
    case Method::unitary: {
      for (double t : times) rows.push_back(record(c, c.n, m, eta, t, unitary_channel(setup, t)));
      break;
    }
    case Method::lindblad: {
      const auto ch = lindblad_channels(setup, times, evolve_options(c));
      for (std::size_t k = 0; k < times.size(); ++k) rows.push_back(record(c, c.n, m, eta, times[k], ch[k]));
      break;
    }
    case Method::trajectories: {
      TrajectoryPlan plan;
      plan.n_traj = c.n_traj;
      plan.dt = c.dt;
      plan.master_seed = c.master_seed;
      plan.noise = setup.noise;
      plan.t_final = times.back();
      const auto ens = ensemble_average_at(plan, single_excitation_hamiltonian(setup.graph),
                                           initial_network_vector(c.n, c.input_vertex, kCanonicalProbe), times,
                                           threads);
      for (std::size_t k = 0; k < times.size(); ++k)
        rows.push_back(record(c, c.n, m, eta, times[k],
                              extract_channel(ens[k].rho_mean, kCanonicalProbe, c.input_vertex, c.output_vertex)));
      break;
    }
    case Method::perturbation_numeric: {
      const auto w = parallel_map<WeakNoiseChannel>(times.size(), threads,
                                                    [&](std::size_t k) { return first_order_numeric(setup, times[k]); });
      for (std::size_t k = 0; k < times.size(); ++k) rows.push_back(weak_record(c, c.n, m, eta, times[k], w[k]));
      break;
    }
    case Method::perturbation_printed: {
      for (double t : times) rows.push_back(weak_record(c, c.n, m, eta, t, printed_weak_noise_channel(c.n, m, c.eta, t)));
      break;
    }
  }
  return rows;
}

std::vector<ScanRecord> run_scan_fig1(const ExperimentConfig& c) {
  c.validate();
  const auto times = c.time.points();
  const auto w = c.resolved_noisy_vertices();
  const auto per_eta = parallel_map<std::vector<ScanRecord>>(c.eta_grid.size(), resolve_threads(c.threads),
                                                             [&](std::size_t i) {
    const double eta = c.eta_grid[i];
    const TransferSetup setup{complete_graph(c.n), NoiseSpec::uniform(w, eta), c.input_vertex, c.output_vertex};
    const auto ch = lindblad_channels(setup, times, evolve_options(c));
    std::vector<ScanRecord> rows;
    for (std::size_t k = 0; k < times.size(); ++k)
      rows.push_back(record(c, c.n, static_cast<int>(w.size()), eta, times[k], ch[k]));
    return rows;
  });
  std::vector<ScanRecord> rows;
  for (const auto& block : per_eta) rows.insert(rows.end(), block.begin(), block.end());
  return rows;
}

namespace {

std::vector<ScanRecord> delta_rows(const ExperimentConfig& c, const std::vector<std::pair<int, int>>& cells) {
  const auto times = c.time.points();
  const auto per_cell =
      parallel_map<std::vector<ScanRecord>>(cells.size(), resolve_threads(c.threads), [&](std::size_t i) {
        const auto [n, m] = cells[i];
        const TransferSetup setup = complete_setup(n, m, c.eta);
        const auto ds = delta_series(setup, times, times, evolve_options(c));
        std::vector<ScanRecord> rows;
        for (const auto& d : ds) {
          ScanRecord r;
          r.n = n;
          r.m = m;
          r.eta = c.eta;
          r.t = d.t;
          r.F = d.fidelity;
          r.abs_z = std::abs(d.channel.z);
          r.lambda = d.channel.lambda;
          r.delta = d.value;
          r.method = method_name(c.method);
          r.seed = c.master_seed;
          rows.push_back(r);
        }
        return rows;
      });
  std::vector<ScanRecord> rows;
  for (const auto& block : per_cell) rows.insert(rows.end(), block.begin(), block.end());
  return rows;
}

}  // namespace

std::vector<ScanRecord> run_scan_fig2(const ExperimentConfig& c) {
  c.validate();
  std::vector<std::pair<int, int>> cells;
  for (int n : c.n_grid) cells.emplace_back(n, n - 2);
  return delta_rows(c, cells);
}

std::vector<ScanRecord> run_scan_fig3(const ExperimentConfig& c) {
  c.validate();
  std::vector<std::pair<int, int>> cells;
  for (int m : c.m_grid) cells.emplace_back(c.n, m);
  return delta_rows(c, cells);
}

Experiment::Experiment(Command c, const Json& doc) : config_(ExperimentConfig::from_json(c, doc)) {}

bool Experiment::run() {
  output_.clear();
  metadata_.clear();
  text_.clear();
  const ExperimentConfig& c = config_;
  c.validate();
  if (c.command == Command::report) {
    ReportConfig rc;
    rc.n_traj = c.n_traj;
    rc.dt = c.dt;
    rc.master_seed = c.master_seed;
    rc.threads = resolve_threads(c.threads);
    const ConsistencyReport r = consistency_report(rc);
    nlohmann::ordered_json doc = r.to_json();
    doc["config"] = c.to_json();
    output_ = doc.dump(2) + "\n";
    text_ = r.to_text();
    return r.engines_consistent();
  }

  std::vector<ScanRecord> rows;
  switch (c.command) {
    case Command::simulate: rows = run_simulate(c); break;
    case Command::fig1: rows = run_scan_fig1(c); break;
    case Command::fig2: rows = run_scan_fig2(c); break;
    case Command::fig3: rows = run_scan_fig3(c); break;
    case Command::report: break;
  }
  output_ = to_csv(rows);

  nlohmann::ordered_json meta;
  meta["generator"] = "spinlube";
  meta["version"] = "0.1.0";
  meta["config"] = c.to_json();
  meta["csv_header"] = kCsvHeader;
  meta["rows"] = rows.size();
  meta["time_points"] = c.time.points().size();
  meta["time_axis"] = c.time.open_start ? "(t_min, t_max], t_steps evenly spaced points"
                                        : "[t_min, t_max], t_steps evenly spaced points";
  if (c.command == Command::fig2 || c.command == Command::fig3) {
    meta["delta_baseline"] = "closed-form max_t F of the noiseless complete graph";
    meta["blank_cells"] = "delta = 0 where the noisy fidelity does not exceed the baseline";
  }
  metadata_ = meta.dump(2) + "\n";
  return true;
}

}  // namespace spinlube
