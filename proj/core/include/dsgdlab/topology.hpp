// Copyright 2026 The dsgdlab Authors.
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

// Communication graphs, doubly stochastic mixing matrices and their
// spectral quantities.

#ifndef DSGDLAB_TOPOLOGY_HPP_
#define DSGDLAB_TOPOLOGY_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "dsgdlab/linalg.hpp"

namespace dsgdlab {

using Edge = std::pair<std::size_t, std::size_t>;

/// Undirected, connected, simple graph.  Edges are stored once with
/// first < second, sorted.
class Graph {
 public:
  /// Validates node indices and rejects self-loops; duplicate and reversed
  /// pairs collapse into one edge.  Throws unless the result is connected.
  static Graph from_edges(std::size_t n, std::span<const Edge> edges);

  std::size_t size() const noexcept { return adjacency_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<std::size_t>& neighbors(std::size_t i) const {
    return adjacency_[i];
  }
  std::size_t degree(std::size_t i) const { return adjacency_[i].size(); }
  bool has_edge(std::size_t i, std::size_t j) const;

 private:
  Graph() = default;

  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> adjacency_;
};

/// True when every node is reachable from node 0.
bool is_connected(std::size_t n, std::span<const Edge> edges);

Graph build_ring(std::size_t n);
/// side x side lattice, node (r, c) has index r * side + c.
Graph build_grid(std::size_t side);
Graph build_complete(std::size_t n);
/// G(n, p) resampled until connected; fails after `max_attempts` draws.
Graph build_erdos_renyi(std::size_t n, double p, std::uint64_t seed,
                        int max_attempts = 100);

/// Nonnegative doubly stochastic matrix.  Construction validates the
/// stochasticity contract and caches the nonzero pattern of every row, which
/// the DSGD step iterates over.
class MixingMatrix {
 public:
  static constexpr double kStochasticTol = 1e-12;

  /// Throws kInvalidArgument if `w` is not square, has a negative entry or
  /// a row/column sum off 1 by more than kStochasticTol; when `support` is
  /// given, nonzeros off the diagonal must sit on its edges.
  explicit MixingMatrix(Matrix w, const Graph* support = nullptr);

  std::size_t size() const noexcept { return w_.rows(); }
  const Matrix& weights() const noexcept { return w_; }
  double operator()(std::size_t i, std::size_t j) const { return w_(i, j); }
  bool symmetric() const noexcept { return symmetric_; }

  struct Entry {
    std::size_t col;
    double weight;
  };
  std::span<const Entry> row_support(std::size_t i) const {
    return row_support_[i];
  }

 private:
  Matrix w_;
  bool symmetric_ = false;
  std::vector<std::vector<Entry>> row_support_;
};

/// w_ij = 1 / (1 + max(d_i, d_j)) on edges; the diagonal absorbs the rest.
MixingMatrix metropolis_weights(const Graph& g);
/// w_ij = 1 / (2 max(d_i, d_j)) on edges; diagonal entries are >= 1/2.
MixingMatrix lazy_metropolis_weights(const Graph& g);

struct SpectralInfo {
  double rho_w = 0.0;  // ||W - 11^T/n||_2
  double gap = 1.0;    // 1 - rho_w
  /// Unit eigenvector of W, orthogonal to 1, whose eigenvalue has magnitude
  /// rho_w.  Positive eigenvalues are preferred on ties.  Symmetric W only.
  std::optional<std::vector<double>> eigvec_at_rho;
  int eigenvalue_sign = 0;  // sign of that eigenvalue, 0 when absent
  /// All eigenvalues of W - 11^T/n, descending (symmetric W only).
  std::vector<double> deflated_eigenvalues;
};

SpectralInfo spectral_info(const MixingMatrix& w);

}  // namespace dsgdlab

#endif  // DSGDLAB_TOPOLOGY_HPP_
