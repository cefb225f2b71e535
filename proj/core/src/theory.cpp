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

#include "dsgdlab/theory.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "dsgdlab/error.hpp"
#include "rounding.hpp"

namespace dsgdlab {

TheoryConstants compute_constants(const OracleConstants& oc, double rho_w,
                                  std::size_t n, double theta, double A,
                                  double B) {
  if (!(theta > 2.0)) {
    fail(ErrorKind::kInvalidArgument,
         "bound constants need theta > 2, got " + std::to_string(theta));
  }
  oc.validate();
  if (!(rho_w >= 0.0 && rho_w < 1.0)) {
    fail(ErrorKind::kInvalidArgument, "rho_w must lie in [0, 1)");
  }
  if (n == 0) fail(ErrorKind::kInvalidArgument, "n must be >= 1");
  if (!(A >= 0.0) || !(B >= 0.0)) {
    fail(ErrorKind::kInvalidArgument, "A and B must be >= 0");
  }

  TheoryConstants tc;
  tc.theta = theta;
  tc.mu = oc.mu;
  tc.L = oc.L;
  tc.M = oc.M;
  tc.sigma2 = oc.sigma2;
  tc.rho_w = rho_w;
  tc.n = n;
  tc.A = A;
  tc.B = B;

  const double nn = static_cast<double>(n);
  const double mu2 = oc.mu * oc.mu;
  const double L2 = oc.L * oc.L;
  const double rho2 = rho_w * rho_w;
  const double one_minus_rho2 = 1.0 - rho2;

  tc.K = theory_shift(theta, oc);
  tc.K1 = detail::ceil_count(
      std::max(2.0 * static_cast<double>(tc.K), 16.0 / one_minus_rho2));
  tc.Mbar = 2.0 * oc.M * B / nn + oc.sigma2;
  tc.Xhat = std::max(A, 9.0 * B / mu2 + nn * oc.sigma2 / ((1.0 + oc.M) * L2));
  tc.c1 = 2.0 * (3.0 / one_minus_rho2 + oc.M) * (L2 * tc.Xhat + B) +
          nn * oc.sigma2;
  const double k1 = static_cast<double>(tc.K1);
  tc.Vhat = std::max(k1 * k1 * tc.Xhat,
                     8.0 * theta * theta * rho2 * tc.c1 / (mu2 * one_minus_rho2));
  tc.c2 = 2.0 * oc.M * L2 * tc.Xhat / nn + tc.Mbar;
  return tc;
}

std::size_t bound_validity_start(const TheoryConstants& tc) {
  return tc.K1 - tc.K;
}

namespace {

double shifted(const TheoryConstants& tc, std::size_t k, const char* what) {
  if (k < bound_validity_start(tc)) {
    fail(ErrorKind::kDomain, std::string(what) + ": k=" + std::to_string(k) +
                                 " below validity start K1-K=" +
                                 std::to_string(bound_validity_start(tc)));
  }
  return static_cast<double>(k + tc.K);
}

}  // namespace

double u_bound_curve(const TheoryConstants& tc, std::size_t k) {
  const double kt = shifted(tc, k, "u_bound_curve");
  const double th = tc.theta;
  const double nmu2 = static_cast<double>(tc.n) * tc.mu * tc.mu;
  const double leading = th * th * tc.c2 / ((1.5 * th - 1.0) * nmu2 * kt);
  const double initial = std::pow(static_cast<double>(tc.K1) / kt, 1.5 * th) *
                         tc.Xhat / static_cast<double>(tc.n);
  const double second =
      (3.0 * th * th * (1.5 * th - 1.0) * tc.c2 / ((1.5 * th - 2.0) * nmu2) +
       6.0 * th * tc.L * tc.L * tc.Vhat / ((1.5 * th - 2.0) * nmu2)) /
      (kt * kt);
  return leading + initial + second;
}

double v_bound_curve(const TheoryConstants& tc, std::size_t k) {
  const double kt = shifted(tc, k, "v_bound_curve");
  return tc.Vhat / (kt * kt);
}

double asymptotic_rate(const TheoryConstants& tc, std::size_t k) {
  const double kt = static_cast<double>(k + tc.K);
  return tc.theta * tc.theta * tc.Mbar /
         ((2.0 * tc.theta - 1.0) * static_cast<double>(tc.n) * tc.mu * tc.mu *
          kt);
}

std::optional<std::size_t> transient_time(const MonteCarloAggregate& dsgd,
                                          const MonteCarloAggregate& sgd,
                                          const TransientOptions& opts) {
  if (dsgd.k != sgd.k) {
    fail(ErrorKind::kInvalidArgument,
         "transient_time: DSGD and SGD recorded on different grids");
  }
  if (opts.window == 0) {
    fail(ErrorKind::kInvalidArgument, "transient_time: window must be >= 1");
  }
  const std::size_t m = dsgd.k.size();
  const std::size_t need = std::min(opts.window, m);
  std::size_t run = 0;  // consecutive satisfied points ending at i
  for (std::size_t i = 0; i < m; ++i) {
    const bool ok = dsgd.mean_err_mean[i] <= opts.factor * sgd.mean_err_mean[i];
    run = ok ? run + 1 : 0;
    if (run == need) return dsgd.k[i + 1 - need];
  }
  return std::nullopt;
}

double transient_reference(std::size_t n, double rho_w, double coefficient,
                           double exponent) {
  if (!(rho_w < 1.0)) {
    fail(ErrorKind::kInvalidArgument, "transient_reference needs rho_w < 1");
  }
  return coefficient * static_cast<double>(n) / std::pow(1.0 - rho_w, exponent);
}

double hard_lower_bound_threshold(double theta, double rho_w) {
  return 4.0 * theta / (-std::log(rho_w));
}

double hard_lower_bound(double theta, double rho_w, double norm_x_star_sq,
                        double k_shifted) {
  if (!(rho_w > 0.0 && rho_w < 1.0)) {
    fail(ErrorKind::kDomain, "hard_lower_bound needs 0 < rho_w < 1");
  }
  if (k_shifted < hard_lower_bound_threshold(theta, rho_w)) {
    fail(ErrorKind::kDomain, "hard_lower_bound: k below 4 theta / (-ln rho_w)");
  }
  const double r = theta * rho_w / (2.0 * (-std::log(rho_w)) * k_shifted);
  return r * r * norm_x_star_sq;
}

ProductBounds product_bounds(std::size_t a, std::size_t k, double gamma) {
  if (!(a > 1 && a < k)) {
    fail(ErrorKind::kDomain, "product_bounds needs 1 < a < k");
  }
  if (!(gamma > 1.0 && gamma <= static_cast<double>(a) / 2.0)) {
    fail(ErrorKind::kDomain, "product_bounds needs 1 < gamma <= a/2");
  }
  double prod = 1.0;
  for (std::size_t t = a; t < k; ++t) {
    prod *= 1.0 - gamma / static_cast<double>(t);
  }
  const double ratio = static_cast<double>(a) / static_cast<double>(k);
  return {std::pow(ratio, 2.0 * gamma), prod, std::pow(ratio, gamma)};
}

NoiseEstimate estimate_noise_constants(const ProblemOracle& oracle,
                                       std::span<const double> x_star,
                                       std::size_t samples_per_point,
                                       std::uint64_t seed) {
  if (samples_per_point < 2) {
    fail(ErrorKind::kInvalidArgument, "noise estimate needs >= 2 samples per point");
  }
  const std::size_t p = oracle.dim();
  if (x_star.size() != p) {
    fail(ErrorKind::kInvalidArgument, "x_star dimension differs from oracle");
  }
  constexpr int kDisplaced = 10;
  Rng rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double scale = std::max(1.0, norm(x_star));

  std::vector<double> qs, vs;
  std::vector<double> x(p), exact(p), g(p);
  for (std::size_t agent = 0; agent < oracle.agents(); ++agent) {
    for (int j = 0; j <= kDisplaced; ++j) {
      std::copy(x_star.begin(), x_star.end(), x.begin());
      if (j > 0) {
        std::vector<double> dir(p);
        for (double& d : dir) d = gauss(rng);
        const double radius = scale * std::pow(2.0, j - 6);
        const double dn = norm(dir);
        for (std::size_t c = 0; c < p; ++c) x[c] += radius * dir[c] / dn;
      }
      oracle.exact_gradient(agent, x, exact);
      double moment = 0.0;
      for (std::size_t s = 0; s < samples_per_point; ++s) {
        oracle.sample_gradient(agent, x, rng, g);
        moment += squared_distance(g, exact);
      }
      qs.push_back(squared_norm(exact));
      vs.push_back(moment / static_cast<double>(samples_per_point));
    }
  }

  const double m = static_cast<double>(qs.size());
  double q_mean = 0.0, v_mean = 0.0;
  for (std::size_t i = 0; i < qs.size(); ++i) {
    q_mean += qs[i] / m;
    v_mean += vs[i] / m;
  }
  double sqq = 0.0, sqv = 0.0;
  for (std::size_t i = 0; i < qs.size(); ++i) {
    sqq += (qs[i] - q_mean) * (qs[i] - q_mean);
    sqv += (qs[i] - q_mean) * (vs[i] - v_mean);
  }
  NoiseEstimate est;
  est.samples_per_point = samples_per_point;
  est.M = sqq > 0.0 ? std::max(0.0, sqv / sqq) : 0.0;
  double sigma2 = 0.0;
  for (std::size_t i = 0; i < qs.size(); ++i) {
    sigma2 = std::max(sigma2, vs[i] - est.M * qs[i]);
  }
  est.sigma2 = sigma2;
  return est;
}

OracleConstants with_noise(OracleConstants c, const NoiseEstimate& est) {
  c.sigma2 = est.sigma2;
  c.M = est.M;
  c.noise_exact = false;
  return c;
}

}  // namespace dsgdlab
