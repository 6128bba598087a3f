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

#include "network.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace spinlube {

namespace {

std::string edge_str(Edge e) {
  std::ostringstream os;
  os << '{' << e.k << ',' << e.l << '}';
  return os.str();
}

}  // namespace

Graph::Graph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  require(n >= 1, Errc::invalid_argument, "graph needs at least one vertex");
  std::sort(edges_.begin(), edges_.end());
  for (std::size_t j = 0; j < edges_.size(); ++j) {
    const Edge& e = edges_[j];
    require(e.k != e.l, Errc::invalid_argument, "self-loop " + edge_str(e));
    require(e.k >= 1 && e.l <= n, Errc::invalid_argument, "edge " + edge_str(e) + " out of range");
    require(j == 0 || edges_[j - 1] != e, Errc::invalid_argument, "duplicate edge " + edge_str(e));
  }
}

bool Graph::has_edge(int k, int l) const {
  if (k == l) return false;
  return std::binary_search(edges_.begin(), edges_.end(), Edge(k, l));
}

bool Graph::is_complete() const noexcept {
  return edges_.size() == static_cast<std::size_t>(n_) * (n_ - 1) / 2;
}

Eigen::MatrixXi Graph::adjacency() const {
  Eigen::MatrixXi a = Eigen::MatrixXi::Zero(n_, n_);
  for (const Edge& e : edges_) {
    a(e.k - 1, e.l - 1) = 1;
    a(e.l - 1, e.k - 1) = 1;
  }
  return a;
}

Graph complete_graph(int n) {
  require(n >= 1, Errc::invalid_argument, "complete_graph: n must be positive");
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int k = 1; k <= n; ++k)
    for (int l = k + 1; l <= n; ++l) edges.emplace_back(k, l);
  return Graph(n, std::move(edges));
}

HermitianOperator::HermitianOperator(CMatrix entries) : m_(std::move(entries)) {
  require(m_.rows() == m_.cols(), Errc::invalid_argument, "operator must be square");
  const double defect = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
  require(m_.size() == 0 || defect <= kTolerance, Errc::invalid_argument,
          "operator is not Hermitian (defect " + std::to_string(defect) + ")");
  real_ = m_.imag().isZero(0.0);
}

HermitianOperator single_excitation_hamiltonian(const Graph& g) {
  const int n = g.order();
  CMatrix h = CMatrix::Zero(n + 1, n + 1);
  for (const Edge& e : g.edges()) {
    h(e.k, e.l) = 2.0;
    h(e.l, e.k) = 2.0;
  }
  return HermitianOperator(std::move(h));
}

HermitianOperator hopping_operator(int n, Edge e) {
  require(e.k >= 1 && e.l <= n && e.k != e.l, Errc::invalid_argument,
          "hopping operator edge " + edge_str(e) + " invalid");
  CMatrix l = CMatrix::Zero(n + 1, n + 1);
  l(e.k, e.l) = 1.0;
  l(e.l, e.k) = 1.0;
  return HermitianOperator(std::move(l));
}

// NoiseSpec

namespace {

void check_vertex_set(const std::vector<int>& vertices) {
  std::set<int> seen;
  for (int v : vertices) {
    require(v >= 1, Errc::invalid_noise_spec, "noisy vertex " + std::to_string(v) + " out of range");
    require(seen.insert(v).second, Errc::invalid_noise_spec,
            "noisy vertex " + std::to_string(v) + " listed twice");
  }
}

}  // namespace

NoiseSpec NoiseSpec::uniform(std::vector<int> vertices, double eta) {
  check_vertex_set(vertices);
  require(eta >= 0.0 && std::isfinite(eta), Errc::invalid_noise_spec, "noise strength must be >= 0");
  NoiseSpec s;
  s.vertices_ = std::move(vertices);
  s.eta_ = eta;
  return s;
}

NoiseSpec NoiseSpec::per_edge(std::vector<int> vertices, std::map<Edge, double> rates) {
  check_vertex_set(vertices);
  NoiseSpec s;
  s.vertices_ = std::move(vertices);
  const auto pairs = s.edges();
  require(rates.size() == pairs.size(), Errc::invalid_noise_spec,
          "per-edge noise needs exactly one rate per pair of noisy vertices (" +
              std::to_string(pairs.size()) + " expected, " + std::to_string(rates.size()) +
              " given)");
  for (const Edge& e : pairs) {
    auto it = rates.find(e);
    require(it != rates.end(), Errc::invalid_noise_spec, "missing rate for edge " + edge_str(e));
    require(it->second >= 0.0 && std::isfinite(it->second), Errc::invalid_noise_spec,
            "negative rate on edge " + edge_str(e));
  }
  s.per_edge_ = std::move(rates);
  return s;
}

bool NoiseSpec::contains(int v) const {
  return std::find(vertices_.begin(), vertices_.end(), v) != vertices_.end();
}

double NoiseSpec::max_rate() const {
  if (!per_edge_) return vertices_.size() >= 2 ? eta_ : 0.0;
  double r = 0.0;
  for (const auto& [e, eta] : *per_edge_) r = std::max(r, eta);
  return r;
}

std::vector<Edge> NoiseSpec::edges() const {
  std::vector<Edge> out;
  for (std::size_t a = 0; a < vertices_.size(); ++a)
    for (std::size_t b = a + 1; b < vertices_.size(); ++b) out.emplace_back(vertices_[a], vertices_[b]);
  std::sort(out.begin(), out.end());
  return out;
}

double NoiseSpec::rate(Edge e) const {
  require(contains(e.k) && contains(e.l), Errc::invalid_noise_spec,
          "edge " + edge_str(e) + " is not inside the noisy set");
  if (!per_edge_) return eta_;
  return per_edge_->at(e);
}

NoiseSpec NoiseSpec::scaled(double factor) const {
  require(factor >= 0.0, Errc::invalid_noise_spec, "noise scale factor must be >= 0");
  NoiseSpec s = *this;
  s.eta_ *= factor;
  if (s.per_edge_)
    for (auto& [e, eta] : *s.per_edge_) eta *= factor;
  return s;
}

void NoiseSpec::validate(int n, int input, int output) const {
  require(static_cast<int>(vertices_.size()) <= std::max(n - 2, 0), Errc::invalid_noise_spec,
          "at most n-2 = " + std::to_string(n - 2) + " noisy vertices allowed, got " +
              std::to_string(vertices_.size()));
  for (int v : vertices_) {
    require(v >= 1 && v <= n, Errc::invalid_noise_spec,
            "noisy vertex " + std::to_string(v) + " outside 1.." + std::to_string(n));
    require(v != input && v != output, Errc::invalid_noise_spec,
            "noisy vertex " + std::to_string(v) + " coincides with the input or output vertex");
  }
}

std::vector<EdgeOperator> lindblad_edge_operators(const Graph& g, const NoiseSpec& spec, int input,
                                                  int output) {
  spec.validate(g.order(), input, output);
  std::vector<EdgeOperator> ops;
  for (const Edge& e : spec.edges()) ops.push_back({e, hopping_operator(g.order(), e), spec.rate(e)});
  return ops;
}

void TransferSetup::validate() const {
  const int n = graph.order();
  require(n >= 2, Errc::invalid_argument, "transfer needs at least two vertices");
  require(input >= 1 && input <= n, Errc::invalid_argument, "input vertex out of range");
  require(output >= 1 && output <= n, Errc::invalid_argument, "output vertex out of range");
  require(input != output, Errc::invalid_argument, "input and output vertices must differ");
  noise.validate(n, input, output);
}

TransferSetup complete_setup(int n, int m, double eta) {
  require(n >= 2, Errc::invalid_argument, "complete_setup: n must be >= 2");
  require(m >= 0 && m <= n - 2, Errc::invalid_noise_spec, "complete_setup: need 0 <= m <= n-2");
  std::vector<int> w;
  for (int k = 0; k < m; ++k) w.push_back(3 + k);
  TransferSetup s{complete_graph(n), NoiseSpec::uniform(std::move(w), eta), 1, 2};
  s.validate();
  return s;
}

}  // namespace spinlube
