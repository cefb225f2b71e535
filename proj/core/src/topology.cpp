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

#include "dsgdlab/topology.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dsgdlab/error.hpp"
#include "dsgdlab/rng.hpp"

namespace dsgdlab {

bool is_connected(std::size_t n, std::span<const Edge> edges) {
  if (n == 0) return false;
  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const std::size_t u = stack.back();
    stack.pop_back();
    for (std::size_t v : adj[u]) {
      if (!seen[v]) {
        seen[v] = true;
        ++reached;
        stack.push_back(v);
      }
    }
  }
  return reached == n;
}

Graph Graph::from_edges(std::size_t n, std::span<const Edge> edges) {
  if (n == 0) fail(ErrorKind::kInvalidArgument, "graph must have at least one node");
  std::vector<Edge> norm;
  norm.reserve(edges.size());
  for (const auto& [a, b] : edges) {
    if (a >= n || b >= n) {
      fail(ErrorKind::kInvalidArgument,
           "edge (" + std::to_string(a) + "," + std::to_string(b) +
               ") out of range for n=" + std::to_string(n));
    }
    if (a == b) {
      fail(ErrorKind::kInvalidArgument,
           "self-loop at node " + std::to_string(a));
    }
    norm.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(norm.begin(), norm.end());
  norm.erase(std::unique(norm.begin(), norm.end()), norm.end());
  if (!is_connected(n, norm)) {
    fail(ErrorKind::kInvalidArgument, "graph is not connected");
  }

  Graph g;
  g.edges_ = std::move(norm);
  g.adjacency_.assign(n, {});
  for (const auto& [a, b] : g.edges_) {
    g.adjacency_[a].push_back(b);
    g.adjacency_[b].push_back(a);
  }
  for (auto& nb : g.adjacency_) std::sort(nb.begin(), nb.end());
  return g;
}

bool Graph::has_edge(std::size_t i, std::size_t j) const {
  const auto& nb = adjacency_.at(i);
  return std::binary_search(nb.begin(), nb.end(), j);
}

Graph build_ring(std::size_t n) {
  if (n < 3) {
    fail(ErrorKind::kInvalidArgument,
         "ring needs n >= 3, got " + std::to_string(n));
  }
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  return Graph::from_edges(n, edges);
}

Graph build_grid(std::size_t side) {
  if (side < 2) {
    fail(ErrorKind::kInvalidArgument,
         "grid needs side >= 2, got " + std::to_string(side));
  }
  std::vector<Edge> edges;
  for (std::size_t r = 0; r < side; ++r) {
    for (std::size_t c = 0; c < side; ++c) {
      const std::size_t u = r * side + c;
      if (c + 1 < side) edges.emplace_back(u, u + 1);
      if (r + 1 < side) edges.emplace_back(u, u + side);
    }
  }
  return Graph::from_edges(side * side, edges);
}

Graph build_complete(std::size_t n) {
  if (n < 2) {
    fail(ErrorKind::kInvalidArgument,
         "complete graph needs n >= 2, got " + std::to_string(n));
  }
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  return Graph::from_edges(n, edges);
}

Graph build_erdos_renyi(std::size_t n, double p, std::uint64_t seed,
                        int max_attempts) {
  if (n < 1) fail(ErrorKind::kInvalidArgument, "Erdos-Renyi needs n >= 1");
  if (!(p > 0.0 && p <= 1.0)) {
    fail(ErrorKind::kInvalidArgument,
         "Erdos-Renyi edge probability must lie in (0, 1]");
  }
  Rng rng(seed);
  std::vector<Edge> edges;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    edges.clear();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        // 53-bit uniform in [0, 1); p = 1 keeps every pair.
        const double u = uniform01(rng);
        if (u < p) edges.emplace_back(i, j);
      }
    }
    if (is_connected(n, edges)) return Graph::from_edges(n, edges);
  }
  fail(ErrorKind::kGeneration,
       "Erdos-Renyi graph (n=" + std::to_string(n) + ", p=" +
           std::to_string(p) + ") not connected after " +
           std::to_string(max_attempts) + " attempts");
}

MixingMatrix::MixingMatrix(Matrix w, const Graph* support) : w_(std::move(w)) {
  const std::size_t n = w_.rows();
  if (n == 0 || w_.cols() != n) {
    fail(ErrorKind::kInvalidArgument, "mixing matrix must be square and nonempty");
  }
  if (support != nullptr && support->size() != n) {
    fail(ErrorKind::kInvalidArgument, "mixing matrix and graph sizes differ");
  }
  std::vector<double> col_sum(n, 0.0);
  symmetric_ = true;
  row_support_.assign(n, {});
  for (std::size_t i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double v = w_(i, j);
      if (!(v >= 0.0)) {
        fail(ErrorKind::kInvalidArgument,
             "mixing matrix entry (" + std::to_string(i) + "," +
                 std::to_string(j) + ") is negative or NaN");
      }
      if (v > 0.0) {
        if (support != nullptr && i != j && !support->has_edge(i, j)) {
          fail(ErrorKind::kInvalidArgument,
               "mixing weight on non-edge (" + std::to_string(i) + "," +
                   std::to_string(j) + ")");
        }
        row_support_[i].push_back({j, v});
      }
      if (v != w_(j, i)) symmetric_ = false;
      row_sum += v;
      col_sum[j] += v;
    }
    if (std::abs(row_sum - 1.0) > kStochasticTol) {
      fail(ErrorKind::kInvalidArgument,
           "row " + std::to_string(i) + " of mixing matrix does not sum to 1");
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (std::abs(col_sum[j] - 1.0) > kStochasticTol) {
      fail(ErrorKind::kInvalidArgument,
           "column " + std::to_string(j) + " of mixing matrix does not sum to 1");
    }
  }
}

namespace {

template <typename EdgeWeight>
MixingMatrix weights_from_rule(const Graph& g, EdgeWeight edge_weight) {
  const std::size_t n = g.size();
  Matrix w(n, n);
  for (const auto& [i, j] : g.edges()) {
    const double v = edge_weight(g.degree(i), g.degree(j));
    w(i, j) = v;
    w(j, i) = v;
  }
  for (std::size_t i = 0; i < n; ++i) {
    double off = 0.0;
    for (std::size_t j : g.neighbors(i)) off += w(i, j);
    w(i, i) = 1.0 - off;
  }
  return MixingMatrix(std::move(w), &g);
}

}  // namespace

MixingMatrix metropolis_weights(const Graph& g) {
  return weights_from_rule(g, [](std::size_t di, std::size_t dj) {
    return 1.0 / (1.0 + static_cast<double>(std::max(di, dj)));
  });
}

MixingMatrix lazy_metropolis_weights(const Graph& g) {
  return weights_from_rule(g, [](std::size_t di, std::size_t dj) {
    return 1.0 / (2.0 * static_cast<double>(std::max(di, dj)));
  });
}

namespace {

constexpr double kTieTol = 1e-12;

Matrix deflated(const MixingMatrix& w) {
  const std::size_t n = w.size();
  const double inv_n = 1.0 / static_cast<double>(n);
  Matrix b = w.weights();
  for (double& v : b.flat()) v -= inv_n;
  return b;
}

// Projects v onto the complement of the all-ones direction and normalizes;
// returns false when nothing is left.
bool orthogonalize_to_ones(std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  for (double& x : v) x -= mean;
  const double nv = norm(v);
  if (nv < 1e-6) return false;
  for (double& x : v) x /= nv;
  return true;
}

}  // namespace

SpectralInfo spectral_info(const MixingMatrix& w) {
  const std::size_t n = w.size();
  const Matrix b = deflated(w);
  SpectralInfo info;

  if (!w.symmetric()) {
    // Largest singular value via the eigenvalues of B^T B.
    const SymmetricEigen e = jacobi_eigen(multiply(transpose(b), b));
    const double top = std::max(0.0, e.values.front());
    info.rho_w = std::sqrt(top);
    info.gap = 1.0 - info.rho_w;
    return info;
  }

  const SymmetricEigen e = jacobi_eigen(b);
  info.deflated_eigenvalues = e.values;
  double rho = 0.0;
  for (double v : e.values) rho = std::max(rho, std::abs(v));
  info.rho_w = rho;
  info.gap = 1.0 - rho;

  // Candidates at magnitude rho: positive eigenvalues first, then by index
  // in descending-eigenvalue order.
  std::vector<std::size_t> candidates;
  for (int sign : {+1, -1}) {
    for (std::size_t j = 0; j < n; ++j) {
      const double lam = e.values[j];
      if (std::abs(std::abs(lam) - rho) > kTieTol) continue;
      const bool positive = lam > 0.0 || (rho <= kTieTol && lam >= -kTieTol);
      if ((sign > 0) == positive) candidates.push_back(j);
    }
  }
  for (std::size_t j : candidates) {
    std::vector<double> v(n);
    for (std::size_t k = 0; k < n; ++k) v[k] = e.vectors(k, j);
    if (!orthogonalize_to_ones(v)) continue;
    info.eigvec_at_rho = std::move(v);
    info.eigenvalue_sign = e.values[j] < -kTieTol ? -1 : +1;
    break;
  }
  return info;
}

}  // namespace dsgdlab
