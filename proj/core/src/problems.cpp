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

#include "dsgdlab/problems.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "dsgdlab/error.hpp"

namespace dsgdlab {

void OracleConstants::validate() const {
  if (!(mu > 0.0)) fail(ErrorKind::kInvalidArgument, "mu must be positive");
  if (!(L >= mu)) fail(ErrorKind::kInvalidArgument, "L must be >= mu");
  if (!(M >= 0.0)) fail(ErrorKind::kInvalidArgument, "M must be >= 0");
  if (!(sigma2 >= 0.0)) {
    fail(ErrorKind::kInvalidArgument, "sigma2 must be >= 0");
  }
}

std::vector<double> ProblemOracle::sample_gradient(std::size_t agent,
                                                   std::span<const double> x,
                                                   Rng& rng) const {
  std::vector<double> g(dim());
  sample_gradient(agent, x, rng, g);
  return g;
}

std::vector<double> ProblemOracle::exact_gradient(
    std::size_t agent, std::span<const double> x) const {
  std::vector<double> g(dim());
  exact_gradient(agent, x, g);
  return g;
}

std::vector<double> ProblemOracle::full_gradient(
    std::span<const double> x) const {
  std::vector<double> total(dim(), 0.0);
  std::vector<double> g(dim());
  for (std::size_t i = 0; i < agents(); ++i) {
    exact_gradient(i, x, g);
    axpy(1.0, g, total);
  }
  const double inv = 1.0 / static_cast<double>(agents());
  for (double& v : total) v *= inv;
  return total;
}

void ProblemOracle::check_agent(std::size_t agent) const {
  if (agent >= agents()) {
    fail(ErrorKind::kInvalidArgument,
         "agent index " + std::to_string(agent) + " out of range for " +
             std::to_string(agents()) + " agents");
  }
}

// --- quadratic --------------------------------------------------------------

QuadraticProblem::QuadraticProblem(Matrix targets, double sigma,
                                   std::optional<Matrix> initial)
    : targets_(std::move(targets)), sigma_(sigma), initial_(std::move(initial)) {
  if (targets_.rows() == 0 || targets_.cols() == 0) {
    fail(ErrorKind::kInvalidArgument, "quadratic problem needs n, p >= 1");
  }
  if (!(sigma_ >= 0.0)) {
    fail(ErrorKind::kInvalidArgument, "noise std must be >= 0");
  }
  if (initial_ && (initial_->rows() != targets_.rows() ||
                   initial_->cols() != targets_.cols())) {
    fail(ErrorKind::kInvalidArgument, "initial state shape differs from targets");
  }
  constants_.mu = 1.0;
  constants_.L = 1.0;
  constants_.M = 0.0;
  constants_.sigma2 = static_cast<double>(targets_.cols()) * sigma_ * sigma_;
  constants_.noise_exact = true;
}

std::optional<std::vector<double>> QuadraticProblem::optimum() const {
  return row_mean(targets_);
}

void QuadraticProblem::sample_gradient(std::size_t agent,
                                       std::span<const double> x, Rng& rng,
                                       std::span<double> out) const {
  check_agent(agent);
  exact_gradient(agent, x, out);
  if (sigma_ > 0.0) {
    std::normal_distribution<double> noise(0.0, sigma_);
    for (double& v : out) v += noise(rng);
  }
}

void QuadraticProblem::exact_gradient(std::size_t agent,
                                      std::span<const double> x,
                                      std::span<double> out) const {
  check_agent(agent);
  const auto t = targets_.row(agent);
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = x[j] - t[j];
}

Matrix evenly_spaced_targets(std::size_t n, std::size_t p) {
  Matrix t(n, p);
  for (std::size_t i = 0; i < n; ++i) {
    const double level =
        n == 1 ? 5.0
               : 10.0 * static_cast<double>(i) / static_cast<double>(n - 1);
    for (std::size_t j = 0; j < p; ++j) t(i, j) = level;
  }
  return t;
}

QuadraticProblem hard_instance(const MixingMatrix& w, const SpectralInfo& spec,
                               double sigma) {
  if (!w.symmetric()) {
    fail(ErrorKind::kConstruction, "hard instance needs a symmetric W");
  }
  if (!spec.eigvec_at_rho || spec.eigvec_at_rho->size() != w.size()) {
    fail(ErrorKind::kConstruction,
         "hard instance needs an eigenvector of W at magnitude rho_w");
  }
  if (spec.eigenvalue_sign <= 0 || !(spec.rho_w > 0.0)) {
    fail(ErrorKind::kConstruction,
         "extreme eigenvalue of W - 11^T/n is not positive; no eigenvector "
         "with W x* = rho_w x* exists");
  }
  const std::size_t n = w.size();
  std::vector<double> v = *spec.eigvec_at_rho;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(n);
  for (double& x : v) x -= mean;
  const double scale = std::sqrt(static_cast<double>(n)) / norm(v);
  Matrix targets(n, 1);
  for (std::size_t i = 0; i < n; ++i) targets(i, 0) = v[i] * scale;
  Matrix init = targets;
  return QuadraticProblem(std::move(targets), sigma, std::move(init));
}

// --- ridge ------------------------------------------------------------------

RidgeStreamProblem::RidgeStreamProblem(const RidgeParams& params)
    : params_(params) {
  if (params_.agents == 0 || params_.p == 0) {
    fail(ErrorKind::kInvalidArgument, "ridge problem needs n, p >= 1");
  }
  if (!(params_.rho >= 0.0)) {
    fail(ErrorKind::kInvalidArgument, "ridge penalty must be >= 0");
  }
  if (!(params_.noise_var >= 0.0)) {
    fail(ErrorKind::kInvalidArgument, "observation noise variance must be >= 0");
  }
  if (!(params_.feature_second_moment > 0.0)) {
    fail(ErrorKind::kInvalidArgument, "feature second moment must be positive");
  }
  tilde_x_ = evenly_spaced_targets(params_.agents, params_.p);
  half_width_ = std::sqrt(3.0 * params_.feature_second_moment);
  const double curvature = 2.0 * (params_.feature_second_moment + params_.rho);
  constants_.mu = curvature;
  constants_.L = curvature;
  constants_.M = 0.0;
  constants_.sigma2 = 0.0;
  constants_.noise_exact = false;
}

std::optional<std::vector<double>> RidgeStreamProblem::optimum() const {
  return ridge_exact_optimum(*this);
}

void RidgeStreamProblem::sample_gradient(std::size_t agent,
                                         std::span<const double> x, Rng& rng,
                                         std::span<double> out) const {
  check_agent(agent);
  std::normal_distribution<double> noise(0.0, std::sqrt(params_.noise_var));
  const auto tx = tilde_x_.row(agent);
  // out holds u until the residual is known.
  double ux = 0.0;
  double utx = 0.0;
  for (std::size_t j = 0; j < out.size(); ++j) {
    const double u = half_width_ * (2.0 * uniform01(rng) - 1.0);
    out[j] = u;
    ux += u * x[j];
    utx += u * tx[j];
  }
  const double v = utx + noise(rng);
  const double r = 2.0 * (ux - v);
  const double reg = 2.0 * params_.rho;
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = r * out[j] + reg * x[j];
}

void RidgeStreamProblem::exact_gradient(std::size_t agent,
                                        std::span<const double> x,
                                        std::span<double> out) const {
  check_agent(agent);
  const double s = params_.feature_second_moment;
  const auto tx = tilde_x_.row(agent);
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = 2.0 * s * (x[j] - tx[j]) + 2.0 * params_.rho * x[j];
  }
}

std::vector<double> ridge_exact_optimum(const RidgeStreamProblem& prob) {
  const double s = prob.params().feature_second_moment;
  std::vector<double> x = row_mean(prob.tilde_x());
  const double shrink = s / (s + prob.params().rho);
  for (double& v : x) v *= shrink;
  return x;
}

// --- logistic ---------------------------------------------------------------

LogisticProblem::LogisticProblem(std::vector<AgentDataset> datasets,
                                 double lambda, std::size_t minibatch)
    : datasets_(std::move(datasets)), lambda_(lambda), minibatch_(minibatch) {
  if (datasets_.empty()) {
    fail(ErrorKind::kConfig, "logistic problem needs at least one agent");
  }
  if (!(lambda_ > 0.0)) {
    fail(ErrorKind::kConfig, "logistic regularizer lambda must be positive");
  }
  if (minibatch_ == 0) fail(ErrorKind::kConfig, "minibatch size must be >= 1");
  dim_ = datasets_.front().features.cols();
  double curvature = 0.0;
  for (std::size_t i = 0; i < datasets_.size(); ++i) {
    const AgentDataset& d = datasets_[i];
    if (d.features.rows() == 0) {
      fail(ErrorKind::kConfig,
           "agent " + std::to_string(i) + " has an empty local dataset");
    }
    if (d.features.cols() != dim_ || d.labels.size() != d.features.rows()) {
      fail(ErrorKind::kConfig,
           "agent " + std::to_string(i) + " dataset has inconsistent shape");
    }
    double sum_sq = 0.0;
    for (std::size_t j = 0; j < d.features.rows(); ++j) {
      sum_sq += squared_norm(d.features.row(j));
    }
    curvature = std::max(
        curvature, sum_sq / (4.0 * static_cast<double>(d.features.rows())));
  }
  constants_.mu = lambda_;
  constants_.L = lambda_ + curvature;
  constants_.M = 0.0;
  constants_.sigma2 = 0.0;
  constants_.noise_exact = false;
}

void LogisticProblem::add_point_gradient(std::span<const double> u, double v,
                                         std::span<const double> x,
                                         double scale,
                                         std::span<double> out) const {
  const double z = dot(x, u);
  const double coeff = (1.0 - v) - 1.0 / (1.0 + std::exp(z));
  axpy(scale * coeff, u, out);
}

void LogisticProblem::sample_gradient(std::size_t agent,
                                      std::span<const double> x, Rng& rng,
                                      std::span<double> out) const {
  check_agent(agent);
  const AgentDataset& d = datasets_[agent];
  std::uniform_int_distribution<std::size_t> pick(0, d.features.rows() - 1);
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = lambda_ * x[j];
  const double scale = 1.0 / static_cast<double>(minibatch_);
  for (std::size_t b = 0; b < minibatch_; ++b) {
    const std::size_t idx = pick(rng);
    add_point_gradient(d.features.row(idx), d.labels[idx], x, scale, out);
  }
}

void LogisticProblem::exact_gradient(std::size_t agent,
                                     std::span<const double> x,
                                     std::span<double> out) const {
  check_agent(agent);
  const AgentDataset& d = datasets_[agent];
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = lambda_ * x[j];
  const double scale = 1.0 / static_cast<double>(d.features.rows());
  for (std::size_t idx = 0; idx < d.features.rows(); ++idx) {
    add_point_gradient(d.features.row(idx), d.labels[idx], x, scale, out);
  }
}

double LogisticProblem::local_objective(std::size_t agent,
                                        std::span<const double> x) const {
  check_agent(agent);
  const AgentDataset& d = datasets_[agent];
  double total = 0.0;
  for (std::size_t idx = 0; idx < d.features.rows(); ++idx) {
    const double z = dot(x, d.features.row(idx));
    // log(1 + exp(-z)) without overflow
    const double softplus =
        z > 0.0 ? std::log1p(std::exp(-z)) : -z + std::log1p(std::exp(z));
    total += softplus + (1.0 - d.labels[idx]) * z;
  }
  return total / static_cast<double>(d.features.rows()) +
         0.5 * lambda_ * squared_norm(x);
}

double LogisticProblem::objective(std::span<const double> x) const {
  double total = 0.0;
  for (std::size_t i = 0; i < agents(); ++i) total += local_objective(i, x);
  return total / static_cast<double>(agents());
}

std::vector<double> logistic_optimum(const LogisticProblem& prob, double tol,
                                     std::size_t max_iterations) {
  if (!(tol > 0.0)) fail(ErrorKind::kInvalidArgument, "tolerance must be positive");
  const double step = 1.0 / prob.constants().L;
  std::vector<double> x(prob.dim(), 0.0);
  for (std::size_t it = 0; it <= max_iterations; ++it) {
    const std::vector<double> g = prob.full_gradient(x);
    if (norm(g) <= tol) return x;
    axpy(-step, g, x);
  }
  fail(ErrorKind::kNumeric, "logistic_optimum: gradient norm above " +
                                std::to_string(tol) + " after " +
                                std::to_string(max_iterations) + " iterations");
}

// ---------------------------------------------------------------------------

double initial_error_sum(const Matrix& init, std::span<const double> x_star) {
  double s = 0.0;
  for (std::size_t i = 0; i < init.rows(); ++i) {
    s += squared_distance(init.row(i), x_star);
  }
  return s;
}

double heterogeneity_sum(const ProblemOracle& oracle,
                         std::span<const double> x_star) {
  double s = 0.0;
  std::vector<double> g(oracle.dim());
  for (std::size_t i = 0; i < oracle.agents(); ++i) {
    oracle.exact_gradient(i, x_star, g);
    s += squared_norm(g);
  }
  return s;
}

}  // namespace dsgdlab
