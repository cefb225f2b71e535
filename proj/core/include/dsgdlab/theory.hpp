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

// Closed-form constants and bound curves for DSGD with the stepsize
// alpha_k = theta / (mu (k + K)), empirical transient times, and the
// lower-bound curve of the eigenvector hard instance.
//
// Bound curves take the raw iteration k and shift internally to
// k~ = k + K.  hard_lower_bound is the exception: it is stated on the
// shifted sequence V~(k~) = V(k~ - K) and takes k~ directly.

#ifndef DSGDLAB_THEORY_HPP_
#define DSGDLAB_THEORY_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dsgdlab/engine.hpp"
#include "dsgdlab/problems.hpp"

namespace dsgdlab {

struct TheoryConstants {
  double theta = 0.0;
  double mu = 0.0;
  double L = 0.0;
  double M = 0.0;
  double sigma2 = 0.0;
  double rho_w = 0.0;
  std::size_t n = 0;
  double A = 0.0;  // sum_i ||x_i(0) - x*||^2
  double B = 0.0;  // sum_i ||grad f_i(x*)||^2 = ||grad F(1 x*^T)||^2

  std::size_t K = 0;   // ceil(2 theta (1 + M) L^2 / mu^2)
  std::size_t K1 = 0;  // ceil(max{2K, 16 / (1 - rho_w^2)})
  double Mbar = 0.0;   // 2 M B / n + sigma^2
  double Xhat = 0.0;   // max{A, 9 B / mu^2 + n sigma^2 / ((1 + M) L^2)}
  double c1 = 0.0;     // 2 (3 / (1 - rho^2) + M)(L^2 Xhat + B) + n sigma^2
  double Vhat = 0.0;   // max{K1^2 Xhat, 8 theta^2 rho^2 c1 / (mu^2 (1 - rho^2))}
  double c2 = 0.0;     // 2 M L^2 Xhat / n + Mbar

  friend bool operator==(const TheoryConstants&,
                         const TheoryConstants&) = default;
};

/// Requires theta > 2 (kInvalidArgument otherwise) and 0 <= rho_w < 1.
TheoryConstants compute_constants(const OracleConstants& oc, double rho_w,
                                  std::size_t n, double theta, double A,
                                  double B);

/// Explicit three-term bound on U(k), valid for k >= K1 - K.
double u_bound_curve(const TheoryConstants& tc, std::size_t k);
/// Vhat / (k + K)^2, valid for k >= K1 - K.
double v_bound_curve(const TheoryConstants& tc, std::size_t k);
/// theta^2 Mbar / ((2 theta - 1) n mu^2 (k + K)).
double asymptotic_rate(const TheoryConstants& tc, std::size_t k);
/// First raw iteration where the U / V bound curves apply.
std::size_t bound_validity_start(const TheoryConstants& tc);

/// Smallest recorded k with dsgd.mean_err <= 2 sgd.mean_err holding at k
/// and at the next `window` - 1 recorded points (window = 1 is the literal
/// infimum).  Traces shorter than the window need every point to hold.
/// nullopt = not reached.
struct TransientOptions {
  std::size_t window = 5;
  double factor = 2.0;
};
std::optional<std::size_t> transient_time(const MonteCarloAggregate& dsgd,
                                          const MonteCarloAggregate& sgd,
                                          const TransientOptions& opts = {});

/// coefficient * n / (1 - rho_w)^exponent.
double transient_reference(std::size_t n, double rho_w, double coefficient,
                           double exponent);

/// [theta rho_w / (2 (-ln rho_w) k~)]^2 ||x*||^2 for k~ >= 4 theta / (-ln rho_w).
double hard_lower_bound(double theta, double rho_w, double norm_x_star_sq,
                        double k_shifted);
double hard_lower_bound_threshold(double theta, double rho_w);

struct ProductBounds {
  double lower;    // a^{2 gamma} / k^{2 gamma}
  double product;  // prod_{t=a}^{k-1} (1 - gamma / t)
  double upper;    // a^gamma / k^gamma
};
/// Requires integers 1 < a < k and 1 < gamma <= a / 2.
ProductBounds product_bounds(std::size_t a, std::size_t k, double gamma);

/// Fitted noise model E||g - grad f||^2 <= sigma2 + M ||grad f||^2.
struct NoiseEstimate {
  double sigma2 = 0.0;
  double M = 0.0;
  std::size_t samples_per_point = 0;
};

/// For each agent, measures the empirical second moment of g_i - grad f_i at
/// x* and at 10 displaced points, least-squares fits M >= 0 through the
/// pooled (||grad f_i||^2, moment) pairs and then takes the smallest sigma2
/// that puts every measured point under the envelope.
NoiseEstimate estimate_noise_constants(const ProblemOracle& oracle,
                                       std::span<const double> x_star,
                                       std::size_t samples_per_point,
                                       std::uint64_t seed);

OracleConstants with_noise(OracleConstants c, const NoiseEstimate& est);

}  // namespace dsgdlab

#endif  // DSGDLAB_THEORY_HPP_
