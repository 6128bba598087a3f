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

// Graphs, single-excitation Hamiltonians and edge noise operators.
//
// Vertices are 1-based (1..n). Matrices act on the (n+1)-dimensional space
// spanned by the vacuum |0> (row/column 0) and the single-excitation states
// |1>..|n> (row/column k for vertex k).

#include <map>
#include <optional>
#include <vector>

#include "common.hpp"

namespace spinlube {

/// Unordered vertex pair stored with k < l.
struct Edge {
  int k = 0;
  int l = 0;

  Edge() = default;
  Edge(int a, int b) : k(a < b ? a : b), l(a < b ? b : a) {}

  auto operator<=>(const Edge&) const = default;
};

class Graph {
 public:
  /// Throws invalid_argument on self-loops, duplicates or out-of-range endpoints.
  Graph(int n, std::vector<Edge> edges);

  int order() const noexcept { return n_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  bool has_edge(int k, int l) const;
  bool is_complete() const noexcept;

  Eigen::MatrixXi adjacency() const;

 private:
  int n_;
  std::vector<Edge> edges_;  // sorted
};

Graph complete_graph(int n);

/// Dense Hermitian matrix; construction checks Hermiticity to 1e-12.
class HermitianOperator {
 public:
  HermitianOperator() = default;
  explicit HermitianOperator(CMatrix entries);

  static constexpr double kTolerance = 1e-12;

  Eigen::Index dim() const noexcept { return m_.rows(); }
  const CMatrix& matrix() const noexcept { return m_; }
  /// True when every imaginary part is exactly zero.
  bool is_real() const noexcept { return real_; }

 private:
  CMatrix m_;
  bool real_ = true;
};

/// [H]_{kl} = 2 A_{kl} in the vacuum-extended basis (unit coupling).
HermitianOperator single_excitation_hamiltonian(const Graph& g);

/// |k><l| + |l><k| on the (n+1)-dimensional space.
HermitianOperator hopping_operator(int n, Edge e);

/// Noisy vertex set W_m with either one strength or one strength per pair.
class NoiseSpec {
 public:
  NoiseSpec() = default;

  static NoiseSpec uniform(std::vector<int> vertices, double eta);
  /// `rates` must hold exactly one entry per unordered pair within `vertices`.
  static NoiseSpec per_edge(std::vector<int> vertices, std::map<Edge, double> rates);
  static NoiseSpec none() { return NoiseSpec{}; }

  const std::vector<int>& vertices() const noexcept { return vertices_; }
  std::size_t size() const noexcept { return vertices_.size(); }
  bool contains(int v) const;
  bool is_uniform() const noexcept { return !per_edge_.has_value(); }
  double uniform_rate() const noexcept { return eta_; }
  double max_rate() const;

  /// All m(m-1)/2 pairs within W_m, in lexicographic order.
  std::vector<Edge> edges() const;
  double rate(Edge e) const;

  /// Same noise with every rate multiplied by `factor`.
  NoiseSpec scaled(double factor) const;

  /// Checks m <= n-2, membership in 1..n and disjointness from {input, output}.
  void validate(int n, int input, int output) const;

 private:
  std::vector<int> vertices_;
  double eta_ = 0.0;
  std::optional<std::map<Edge, double>> per_edge_;
};

struct EdgeOperator {
  Edge edge;
  HermitianOperator op;
  double rate = 0.0;
};

std::vector<EdgeOperator> lindblad_edge_operators(const Graph& g, const NoiseSpec& spec, int input,
                                                  int output);

/// Graph, noise and the transfer endpoints in one value.
struct TransferSetup {
  Graph graph;
  NoiseSpec noise;
  int input = 1;
  int output = 2;

  int n() const noexcept { return graph.order(); }
  void validate() const;
};

/// Complete graph on n vertices, input 1, output 2, and the m noisy vertices
/// {3, ..., m+2} at uniform strength eta. By symmetry of the complete graph the
/// transfer channel does not depend on which m vertices are picked.
TransferSetup complete_setup(int n, int m, double eta);

}  // namespace spinlube
