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


#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dsgdlab/idx.hpp"
#include "dsgdlab/problems.hpp"
#include "dsgdlab/theory.hpp"
#include "dsgdlab/topology.hpp"
#include "stat_checks.hpp"
#include "test_util.hpp"

using namespace dsgdlab;

namespace {

std::vector<double> random_point(std::mt19937_64& gen, std::size_t p, double scale) {
  std::normal_distribution<double> g(0.0, scale);
  std::vector<double> x(p);
  for (double& v : x) v = g(gen);
  return x;
}

LogisticProblem small_logistic(std::size_t n, std::size_t per_agent,
                               std::size_t minibatch = 1) {
  const IdxDataset ds = synthetic_two_cluster(60, 5, 1, 2, 11);
  return build_binary_task(ds, 1, 2, per_agent, n, 3, 1.0, minibatch);
}

}  // namespace

TEST(Quadratic, ExactAndNoiseless) {
  Matrix t(2, 3);
  t(0, 0) = 1;
  t(1, 2) = -2;
  const QuadraticProblem q(t, 0.0);
  Rng rng(1);
  const std::vector<double> at_target = {1, 0, 0};
  for (double g : q.sample_gradient(0, at_target, rng)) EXPECT_EQ(g, 0.0);
  const std::vector<double> shifted = {1.5, -1, 2};
  const auto g = q.sample_gradient(0, shifted, rng);
  EXPECT_DOUBLE_EQ(g[0], 0.5);
  EXPECT_DOUBLE_EQ(g[1], -1.0);
  EXPECT_DOUBLE_EQ(g[2], 2.0);
  EXPECT_EQ(q.constants().mu, 1.0);
  EXPECT_EQ(q.constants().L, 1.0);
  EXPECT_EQ(q.constants().M, 0.0);
  EXPECT_ERROR_KIND(q.exact_gradient(2, shifted), ErrorKind::kInvalidArgument);
}

TEST(Quadratic, SampleMeanWithinTolerance) {
  const QuadraticProblem q(evenly_spaced_targets(3, 4), 1.0);
  const std::vector<double> x = {0.3, -1.0, 2.0, 7.0};
  Rng rng(5);
  std::vector<double> mean(4, 0.0), g(4);
  const int draws = 100000;
  for (int s = 0; s < draws; ++s) {
    q.sample_gradient(1, x, rng, g);
    for (int j = 0; j < 4; ++j) mean[j] += g[j] / draws;
  }
  const auto exact = q.exact_gradient(1, x);
  for (int j = 0; j < 4; ++j) EXPECT_NEAR(mean[j], exact[j], 0.02);
  EXPECT_DOUBLE_EQ(q.constants().sigma2, 4.0);
}

TEST(Quadratic, EvenlySpacedTargets) {
  const Matrix t = evenly_spaced_targets(5, 2);
  EXPECT_DOUBLE_EQ(t(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(t(2, 1), 5.0);
  EXPECT_DOUBLE_EQ(t(4, 0), 10.0);
  EXPECT_DOUBLE_EQ(evenly_spaced_targets(1, 3)(0, 2), 5.0);
}

TEST(HardInstance, FourRing) {
  const MixingMatrix w = metropolis_weights(build_ring(4));
  const SpectralInfo s = spectral_info(w);
  const QuadraticProblem h = hard_instance(w, s, 1.0);
  const Matrix& t = h.targets();
  ASSERT_EQ(t.cols(), 1u);
  double sum = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    sum += t(i, 0);
    sq += t(i, 0) * t(i, 0);
  }
  EXPECT_NEAR(sum, 0.0, 1e-9);
  EXPECT_NEAR(sq, 4.0, 1e-12);
  // Eigenspace of +1/3 on C4 is spanned by (1,0,-1,0) and (0,1,0,-1):
  // opposite entries cancel.
  EXPECT_NEAR(t(0, 0) + t(2, 0), 0.0, 1e-9);
  EXPECT_NEAR(t(1, 0) + t(3, 0), 0.0, 1e-9);
  const auto wt = multiply(w.weights(), std::vector<double>{t(0, 0), t(1, 0), t(2, 0), t(3, 0)});
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(wt[i], t(i, 0) / 3.0, 1e-8);
  ASSERT_TRUE(h.initial_state().has_value());
  EXPECT_EQ(*h.initial_state(), t);
  EXPECT_NEAR((*h.optimum())[0], 0.0, 1e-12);
}

TEST(HardInstance, ResidualOnLargerRings) {
  for (std::size_t n : {8u, 9u, 16u}) {
    const MixingMatrix w = metropolis_weights(build_ring(n));
    const SpectralInfo s = spectral_info(w);
    const QuadraticProblem h = hard_instance(w, s, 0.0);
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = h.targets()(i, 0);
    const auto wv = multiply(w.weights(), v);
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) res += std::pow(wv[i] - s.rho_w * v[i], 2);
    EXPECT_LE(std::sqrt(res), 1e-8);
  }
}

TEST(HardInstance, NegativeExtremeRejected) {
  Matrix m(2, 2);
  m(0, 0) = m(1, 1) = 0.2;
  m(0, 1) = m(1, 0) = 0.8;
  const MixingMatrix w(m);
  const SpectralInfo s = spectral_info(w);
  EXPECT_EQ(s.eigenvalue_sign, -1);
  EXPECT_ERROR_KIND(hard_instance(w, s, 1.0), ErrorKind::kConstruction);
}

TEST(Ridge, ExactGradientAndOptimum) {
  RidgeParams rp;
  rp.agents = 5;
  rp.p = 3;
  const RidgeStreamProblem r(rp);
  const double s = 1.0 / 12.0;
  const std::vector<double> zero(3, 0.0);
  const auto g0 = r.exact_gradient(4, zero);
  for (double g : g0) EXPECT_NEAR(g, -2.0 * s * 10.0, 1e-14);
  EXPECT_DOUBLE_EQ(r.feature_half_width(), 0.5);
  const auto xs = ridge_exact_optimum(r);
  for (double v : xs) EXPECT_NEAR(v, 5.0 / 13.0, 1e-14);
  EXPECT_LE(norm(r.full_gradient(xs)), 1e-10);
  EXPECT_DOUBLE_EQ(r.constants().mu, 2.0 * (s + 1.0));
  EXPECT_DOUBLE_EQ(r.constants().L, r.constants().mu);
  EXPECT_FALSE(r.constants().noise_exact);
}

TEST(Ridge, LiteralSecondMomentOptimum) {
  RidgeParams rp;
  rp.agents = 4;
  rp.p = 2;
  rp.feature_second_moment = 1.0 / 3.0;
  const RidgeStreamProblem r(rp);
  EXPECT_DOUBLE_EQ(r.feature_half_width(), 1.0);
  for (double v : ridge_exact_optimum(r)) EXPECT_NEAR(v, 5.0 / 4.0, 1e-14);
  rp.rho = 0.0;
  for (double v : ridge_exact_optimum(RidgeStreamProblem(rp))) EXPECT_NEAR(v, 5.0, 1e-14);
}

TEST(Ridge, OptimumMatchesGradientDescentOracle) {
  RidgeParams rp;
  rp.agents = 6;
  rp.p = 4;
  const RidgeStreamProblem r(rp);
  // Gradient descent on (1/n) sum_i [s ||x - x~_i||^2 + rho ||x||^2] written
  // out by hand.
  const double s = rp.feature_second_moment;
  std::vector<double> x(4, 0.0);
  for (int it = 0; it < 2000; ++it) {
    for (std::size_t j = 0; j < 4; ++j) {
      double g = 0.0;
      for (std::size_t i = 0; i < 6; ++i) {
        const double xt = 10.0 * i / 5.0;
        g += (2.0 * s * (x[j] - xt) + 2.0 * rp.rho * x[j]) / 6.0;
      }
      x[j] -= 0.2 * g;
    }
  }
  const auto xs = ridge_exact_optimum(r);
  for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(x[j], xs[j], 1e-12);
}

TEST(Ridge, MonteCarloMatchesExpectedGradient) {
  RidgeParams rp;
  rp.agents = 3;
  rp.p = 5;
  const RidgeStreamProblem r(rp);
  const std::vector<double> x = {1.0, -2.0, 0.5, 3.0, 0.0};
  const auto m = stat_checks::sample_moments(r, 2, x, 1000000, 17);
  EXPECT_LT(m.max_z, 4.5);
}

TEST(Ridge, NoiseMomentMatchesAnalyticValue) {
  // For u uniform on [-h, h]^p and e ~ N(0, v):
  // E||g - grad f||^2 = 4 v p s + 4 (m4 + (p - 2) s^2) ||x - x~||^2,
  // m4 = E[u^4] = h^4 / 5.
  RidgeParams rp;
  rp.agents = 2;
  rp.p = 4;
  const RidgeStreamProblem r(rp);
  const double s = rp.feature_second_moment;
  const double h = 0.5;
  const double m4 = std::pow(h, 4) / 5.0;
  const std::vector<double> x = {1.0, 2.0, -1.0, 0.0};
  double d2 = 0.0;
  for (double v : x) d2 += std::pow(v - 10.0, 2);
  const double expected = 4.0 * rp.noise_var * 4 * s + 4.0 * (m4 + 2.0 * s * s) * d2;
  const auto m = stat_checks::sample_moments(r, 1, x, 400000, 23);
  EXPECT_NEAR(m.noise_moment, expected, 4.0 * m.noise_stderr);
}

TEST(Logistic, SinglePointGradients) {
  AgentDataset d;
  d.features = Matrix(1, 3);
  d.features(0, 0) = 2.0;
  d.features(0, 1) = -1.0;
  d.features(0, 2) = 1.0;
  d.labels = {1.0};
  const std::vector<double> zero(3, 0.0);
  {
    const LogisticProblem lp({d}, 1e-9);
    Rng rng(1);
    const auto g = lp.sample_gradient(0, zero, rng);
    EXPECT_NEAR(g[0], -1.0, 1e-12);
    EXPECT_NEAR(g[1], 0.5, 1e-12);
    EXPECT_NEAR(g[2], -0.5, 1e-12);
  }
  d.labels = {0.0};
  const LogisticProblem lp({d}, 1e-9);
  const auto g = lp.exact_gradient(0, zero);
  EXPECT_NEAR(g[0], 1.0, 1e-12);
  EXPECT_NEAR(g[1], -0.5, 1e-12);
}

TEST(Logistic, Constants) {
  const LogisticProblem lp = small_logistic(3, 10);
  double worst = 0.0;
  for (const auto& d : lp.datasets()) {
    double s = 0.0;
    for (std::size_t j = 0; j < d.features.rows(); ++j) s += squared_norm(d.features.row(j));
    worst = std::max(worst, s / (4.0 * d.features.rows()));
  }
  EXPECT_DOUBLE_EQ(lp.constants().mu, 1.0);
  EXPECT_NEAR(lp.constants().L, 1.0 + worst, 1e-12);
  EXPECT_EQ(lp.dim(), 26u);
}

TEST(Logistic, FiniteDifferences) {
  const LogisticProblem lp = small_logistic(2, 8);
  std::mt19937_64 gen(4);
  for (int trial = 0; trial < 5; ++trial) {
    auto x = random_point(gen, lp.dim(), 0.5);
    const auto g = lp.exact_gradient(1, x);
    for (std::size_t j = 0; j < lp.dim(); ++j) {
      const double h = 1e-5;
      auto xp = x, xm = x;
      xp[j] += h;
      xm[j] -= h;
      const double fd = (lp.local_objective(1, xp) - lp.local_objective(1, xm)) / (2 * h);
      EXPECT_NEAR(g[j], fd, 1e-6 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST(Logistic, OptimumMatchesBisectionInOneDimension) {
  // f(x) = log(1 + exp(-x u)) + (1 - v) x u + (lambda / 2) x^2 with u = 1.5,
  // v = 1: f'(x) = -u / (1 + exp(x u)) + lambda x.
  AgentDataset d;
  d.features = Matrix(1, 1, 1.5);
  d.labels = {1.0};
  const double lambda = 0.3;
  const LogisticProblem lp({d}, lambda);
  auto fprime = [&](double x) { return -1.5 / (1.0 + std::exp(1.5 * x)) + lambda * x; };
  double lo = -10.0, hi = 10.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (fprime(mid) > 0.0 ? hi : lo) = mid;
  }
  const auto xs = logistic_optimum(lp, 1e-12);
  EXPECT_NEAR(xs[0], 0.5 * (lo + hi), 1e-10);
}

TEST(Logistic, OptimumGradientNormAndLargeLambda) {
  const LogisticProblem lp = small_logistic(3, 10);
  const auto xs = logistic_optimum(lp, 1e-10);
  EXPECT_LE(norm(lp.full_gradient(xs)), 1e-8);
  const IdxDataset ds = synthetic_two_cluster(20, 4, 1, 2, 2);
  const LogisticProblem big = build_binary_task(ds, 1, 2, 5, 2, 1, 1e6);
  for (double v : logistic_optimum(big, 1e-9)) EXPECT_NEAR(v, 0.0, 1e-3);
  EXPECT_ERROR_KIND(logistic_optimum(lp, 1e-14, 3), ErrorKind::kNumeric);
}

TEST(Logistic, EmptyDatasetIsConfigError) {
  AgentDataset d;
  d.features = Matrix(0, 3);
  EXPECT_ERROR_KIND(LogisticProblem({d}, 1.0), ErrorKind::kConfig);
}

TEST(Logistic, MinibatchUnbiased) {
  const LogisticProblem lp = small_logistic(2, 12, 4);
  std::mt19937_64 gen(8);
  const auto x = random_point(gen, lp.dim(), 0.3);
  const auto m = stat_checks::sample_moments(lp, 0, x, 100000, 3);
  EXPECT_LT(m.max_z, 4.5);
}

TEST(Assumption3, StrongConvexityAndSmoothness) {
  RidgeParams rp;
  rp.agents = 4;
  rp.p = 3;
  const RidgeStreamProblem ridge(rp);
  const QuadraticProblem quad(evenly_spaced_targets(4, 3), 1.0);
  const LogisticProblem logi = small_logistic(4, 10);
  std::mt19937_64 gen(99);
  for (const ProblemOracle* o : std::initializer_list<const ProblemOracle*>{&ridge, &quad, &logi}) {
    const auto& c = o->constants();
    for (int t = 0; t < 100; ++t) {
      const std::size_t i = t % o->agents();
      const auto x = random_point(gen, o->dim(), 2.0);
      const auto y = random_point(gen, o->dim(), 2.0);
      const auto gx = o->exact_gradient(i, x);
      const auto gy = o->exact_gradient(i, y);
      std::vector<double> dg(o->dim()), dx(o->dim());
      for (std::size_t j = 0; j < o->dim(); ++j) {
        dg[j] = gx[j] - gy[j];
        dx[j] = x[j] - y[j];
      }
      const double d2 = squared_norm(dx);
      EXPECT_GE(dot(dg, dx), c.mu * d2 * (1 - 1e-12)) << o->name();
      EXPECT_LE(norm(dg), c.L * std::sqrt(d2) * (1 + 1e-12)) << o->name();
    }
  }
}

TEST(GradientStep, ContractsAtRateOfCurvatureBounds) {
  RidgeParams rp;
  rp.agents = 5;
  rp.p = 3;
  const RidgeStreamProblem ridge(rp);
  const QuadraticProblem quad(evenly_spaced_targets(5, 3), 0.0);
  std::mt19937_64 gen(5);
  for (const ProblemOracle* o : std::initializer_list<const ProblemOracle*>{&ridge, &quad}) {
    const auto xs = *o->optimum();
    const auto& c = o->constants();
    for (double frac : {0.1, 0.5, 0.9, 1.5, 1.99}) {
      const double alpha = frac / c.L;
      const double lam = std::max(std::abs(1 - alpha * c.mu), std::abs(1 - alpha * c.L));
      for (int t = 0; t < 20; ++t) {
        auto x = random_point(gen, o->dim(), 3.0);
        const auto g = o->full_gradient(x);
        std::vector<double> y(x.size());
        for (std::size_t j = 0; j < x.size(); ++j) y[j] = x[j] - alpha * g[j];
        EXPECT_LE(std::sqrt(squared_distance(y, xs)),
                  lam * std::sqrt(squared_distance(x, xs)) + 1e-12);
      }
    }
  }
}

TEST(Sums, InitialErrorAndHeterogeneity) {
  const QuadraticProblem q(evenly_spaced_targets(3, 1), 0.0);
  const std::vector<double> xs = {5.0};
  EXPECT_DOUBLE_EQ(initial_error_sum(Matrix(3, 1), xs), 75.0);
  // grad f_i(5) = 5 - {0, 5, 10}.
  EXPECT_DOUBLE_EQ(heterogeneity_sum(q, xs), 50.0);
}
