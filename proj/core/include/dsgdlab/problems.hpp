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

// Per-agent gradient oracles.  Every oracle exposes an unbiased stochastic
// gradient g_i(x, xi) and the exact gradient of its local objective f_i,
// together with the strong convexity / smoothness constants and the
// noise-model constants (sigma^2, M) of
//
//   E ||g_i(x, xi) - grad f_i(x)||^2 <= sigma^2 + M ||grad f_i(x)||^2.
//
// Oracles are immutable; all randomness comes from the caller's Rng.

#ifndef DSGDLAB_PROBLEMS_HPP_
#define DSGDLAB_PROBLEMS_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dsgdlab/linalg.hpp"
#include "dsgdlab/rng.hpp"
#include "dsgdlab/topology.hpp"

namespace dsgdlab {

struct OracleConstants {
  double mu = 1.0;
  double L = 1.0;
  double M = 0.0;
  double sigma2 = 0.0;
  /// True when (sigma2, M) are known in closed form.  Ridge and logistic
  /// oracles advertise false with zeros; callers needing the noise model
  /// merge in an estimate (see estimate_noise_constants in theory.hpp).
  bool noise_exact = true;

  /// Throws kInvalidArgument unless 0 < mu <= L and M, sigma2 >= 0.
  void validate() const;
};

class ProblemOracle {
 public:
  virtual ~ProblemOracle() = default;

  virtual std::string name() const = 0;
  virtual std::size_t agents() const = 0;
  virtual std::size_t dim() const = 0;
  virtual const OracleConstants& constants() const = 0;

  /// Global minimizer of f = (1/n) sum_i f_i when known in closed form.
  virtual std::optional<std::vector<double>> optimum() const {
    return std::nullopt;
  }
  /// Initial iterate matrix the instance prescribes (n x p), if any.
  virtual std::optional<Matrix> initial_state() const { return std::nullopt; }

  virtual void sample_gradient(std::size_t agent, std::span<const double> x,
                               Rng& rng, std::span<double> out) const = 0;
  virtual void exact_gradient(std::size_t agent, std::span<const double> x,
                              std::span<double> out) const = 0;

  std::vector<double> sample_gradient(std::size_t agent,
                                      std::span<const double> x,
                                      Rng& rng) const;
  std::vector<double> exact_gradient(std::size_t agent,
                                     std::span<const double> x) const;
  /// grad f(x) = (1/n) sum_i grad f_i(x).
  std::vector<double> full_gradient(std::span<const double> x) const;

 protected:
  void check_agent(std::size_t agent) const;
};

// ---------------------------------------------------------------------------
// f_i(x) = 1/2 ||x - x_i*||^2, gradient noise N(0, sigma^2 I).

class QuadraticProblem final : public ProblemOracle {
 public:
  /// `targets` is n x p.  sigma is the per-coordinate noise std, so the
  /// advertised sigma2 is p * sigma^2.
  QuadraticProblem(Matrix targets, double sigma,
                   std::optional<Matrix> initial = std::nullopt);

  std::string name() const override { return "quadratic"; }
  std::size_t agents() const override { return targets_.rows(); }
  std::size_t dim() const override { return targets_.cols(); }
  const OracleConstants& constants() const override { return constants_; }
  std::optional<std::vector<double>> optimum() const override;
  std::optional<Matrix> initial_state() const override { return initial_; }

  using ProblemOracle::exact_gradient;
  using ProblemOracle::sample_gradient;
  void sample_gradient(std::size_t agent, std::span<const double> x, Rng& rng,
                       std::span<double> out) const override;
  void exact_gradient(std::size_t agent, std::span<const double> x,
                      std::span<double> out) const override;

  const Matrix& targets() const noexcept { return targets_; }
  double sigma() const noexcept { return sigma_; }

 private:
  Matrix targets_;
  double sigma_;
  std::optional<Matrix> initial_;
  OracleConstants constants_;
};

/// Targets 10 (i - 1) / (n - 1) * 1_p for agents i = 1..n (5 * 1_p for n = 1).
Matrix evenly_spaced_targets(std::size_t n, std::size_t p);

/// Scalar quadratic whose targets form an eigenvector of W at eigenvalue
/// +rho_w, scaled to ||x*||^2 = n, with x(0) = targets.  Fails with
/// kConstruction when W is not symmetric or the extreme eigenvalue is not
/// positive.
QuadraticProblem hard_instance(const MixingMatrix& w, const SpectralInfo& spec,
                               double sigma);

// ---------------------------------------------------------------------------
// Streaming ridge regression:
//   f_i(x) = E[(u^T x - v)^2] + rho ||x||^2,  v = u^T x~_i + eps.
// u has i.i.d. uniform coordinates on [-h, h] with h = sqrt(3 s), so that
// E[u u^T] = s I; s = 1/12 is the [-0.5, 0.5] cube.

struct RidgeParams {
  std::size_t agents = 25;
  std::size_t p = 10;
  double rho = 1.0;
  double noise_var = 0.01;
  double feature_second_moment = 1.0 / 12.0;
};

class RidgeStreamProblem final : public ProblemOracle {
 public:
  explicit RidgeStreamProblem(const RidgeParams& params);

  std::string name() const override { return "ridge"; }
  std::size_t agents() const override { return tilde_x_.rows(); }
  std::size_t dim() const override { return tilde_x_.cols(); }
  const OracleConstants& constants() const override { return constants_; }
  std::optional<std::vector<double>> optimum() const override;

  using ProblemOracle::exact_gradient;
  using ProblemOracle::sample_gradient;
  void sample_gradient(std::size_t agent, std::span<const double> x, Rng& rng,
                       std::span<double> out) const override;
  void exact_gradient(std::size_t agent, std::span<const double> x,
                      std::span<double> out) const override;

  const RidgeParams& params() const noexcept { return params_; }
  const Matrix& tilde_x() const noexcept { return tilde_x_; }
  double feature_half_width() const noexcept { return half_width_; }

 private:
  RidgeParams params_;
  Matrix tilde_x_;
  double half_width_;
  OracleConstants constants_;
};

/// x* = s (s + rho)^{-1} (1/n) sum_i x~_i.
std::vector<double> ridge_exact_optimum(const RidgeStreamProblem& prob);

// ---------------------------------------------------------------------------
// Binary logistic regression on per-agent datasets:
//   f_i(x) = (1/|S_i|) sum_j [log(1 + exp(-x^T u_j)) + (1 - v_j) x^T u_j]
//            + (lambda / 2) ||x||^2

struct AgentDataset {
  Matrix features;             // |S_i| x d
  std::vector<double> labels;  // values in {0, 1}
};

class LogisticProblem final : public ProblemOracle {
 public:
  LogisticProblem(std::vector<AgentDataset> datasets, double lambda,
                  std::size_t minibatch = 1);

  std::string name() const override { return "logistic"; }
  std::size_t agents() const override { return datasets_.size(); }
  std::size_t dim() const override { return dim_; }
  const OracleConstants& constants() const override { return constants_; }

  using ProblemOracle::exact_gradient;
  using ProblemOracle::sample_gradient;
  void sample_gradient(std::size_t agent, std::span<const double> x, Rng& rng,
                       std::span<double> out) const override;
  void exact_gradient(std::size_t agent, std::span<const double> x,
                      std::span<double> out) const override;

  double local_objective(std::size_t agent, std::span<const double> x) const;
  double objective(std::span<const double> x) const;

  const std::vector<AgentDataset>& datasets() const noexcept {
    return datasets_;
  }
  double lambda() const noexcept { return lambda_; }
  std::size_t minibatch() const noexcept { return minibatch_; }

 private:
  void add_point_gradient(std::span<const double> u, double v,
                          std::span<const double> x, double scale,
                          std::span<double> out) const;

  std::vector<AgentDataset> datasets_;
  double lambda_;
  std::size_t minibatch_;
  std::size_t dim_ = 0;
  OracleConstants constants_;
};

/// Full-gradient descent with step 1/L until ||grad f|| <= tol.  Fails with
/// kNumeric after `max_iterations`.
std::vector<double> logistic_optimum(const LogisticProblem& prob, double tol,
                                     std::size_t max_iterations = 1'000'000);

// ---------------------------------------------------------------------------

/// Sums appearing in the bound constants: A = sum_i ||x_i(0) - x*||^2 and
/// B = sum_i ||grad f_i(x*)||^2.
double initial_error_sum(const Matrix& init, std::span<const double> x_star);
double heterogeneity_sum(const ProblemOracle& oracle,
                         std::span<const double> x_star);

}  // namespace dsgdlab

#endif  // DSGDLAB_PROBLEMS_HPP_
