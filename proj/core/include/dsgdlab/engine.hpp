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

// DSGD and centralized SGD iterations, metric traces and Monte-Carlo
// aggregation.
//
// DSGD:  x(k+1) = W (x(k) - alpha_k g(k)),  x is n x p, row i = agent i.
// SGD:   x(k+1) = x(k) - alpha_k (1/n) sum_i g_i(x(k), xi_i(k)).
//
// Randomness: a run with seed s gives agent i the stream make_stream(s, i).
// SGD draws its i-th gradient from the same stream, so DSGD and SGD runs
// with equal seeds consume identical noise (paired); comparisons that want
// independent noise pass different seeds.

#ifndef DSGDLAB_ENGINE_HPP_
#define DSGDLAB_ENGINE_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "dsgdlab/linalg.hpp"
#include "dsgdlab/problems.hpp"
#include "dsgdlab/rng.hpp"
#include "dsgdlab/topology.hpp"

namespace dsgdlab {

class StepsizeSchedule {
 public:
  enum class Kind { kTheory, kSimple };

  /// alpha_k = theta / (mu (k + K)), K = ceil(2 theta (1 + M) L^2 / mu^2).
  static StepsizeSchedule theory(double theta, const OracleConstants& c);
  /// alpha_k = a / (k + b).
  static StepsizeSchedule simple(double a, double b);

  double operator()(std::size_t k) const noexcept;

  Kind kind() const noexcept { return kind_; }
  double theta() const noexcept { return theta_; }
  double mu() const noexcept { return mu_; }
  std::size_t shift() const noexcept { return shift_; }  // K
  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }

 private:
  StepsizeSchedule() = default;

  Kind kind_ = Kind::kSimple;
  double theta_ = 0.0;
  double mu_ = 1.0;
  std::size_t shift_ = 0;
  double a_ = 1.0;
  double b_ = 1.0;
};

/// K = ceil(2 theta (1 + M) L^2 / mu^2).
std::size_t theory_shift(double theta, const OracleConstants& c);

/// Iterations at which metrics are recorded.  Always contains 0 and the
/// final iteration.
struct RecordPlan {
  enum class Mode { kGeometric, kLinear };
  Mode mode = Mode::kGeometric;
  double ratio = 2.0;       // geometric: next = max(k + 1, ceil(k * ratio))
  std::size_t stride = 1;   // linear: 0, stride, 2 stride, ...

  std::vector<std::size_t> iterations(std::size_t total) const;

  friend bool operator==(const RecordPlan&, const RecordPlan&) = default;
};

struct MetricsTrace {
  std::vector<std::size_t> k;
  std::vector<double> U;         // ||x̄ - x*||^2
  std::vector<double> V;         // ||x - 1 x̄^T||_F^2
  std::vector<double> mean_err;  // (1/n) sum_i ||x_i - x*||^2

  std::size_t size() const noexcept { return k.size(); }
  friend bool operator==(const MetricsTrace&, const MetricsTrace&) = default;
};

struct Metrics {
  double U = 0.0;
  double V = 0.0;
  double mean_err = 0.0;
};

Metrics measure(const Matrix& x, std::span<const double> x_star);

/// One DSGD step into `out`; `half` is scratch for x - alpha g.  Draws one
/// gradient per agent from rngs[i].  Throws kNumeric on a non-finite iterate.
void dsgd_step(const Matrix& x, const MixingMatrix& w,
               const ProblemOracle& oracle, double alpha, std::span<Rng> rngs,
               Matrix& half, Matrix& out);
Matrix dsgd_step(const Matrix& x, const MixingMatrix& w,
                 const ProblemOracle& oracle, double alpha,
                 std::span<Rng> rngs);

/// One centralized step; rngs[i] feeds the i-th agent oracle's draw.
void sgd_step(std::span<double> x, const ProblemOracle& oracle, double alpha,
              std::span<Rng> rngs, std::span<double> grad_scratch);
std::vector<double> sgd_step(std::span<const double> x,
                             const ProblemOracle& oracle, double alpha,
                             std::span<Rng> rngs);

struct SimulationConfig {
  std::shared_ptr<const ProblemOracle> oracle;
  /// Null selects centralized SGD.
  std::shared_ptr<const MixingMatrix> mixing;
  StepsizeSchedule schedule = StepsizeSchedule::simple(1.0, 1.0);
  std::size_t iterations = 1;
  RecordPlan record;
  std::uint64_t seed = 0;
  /// Initial iterates (n x p).  Defaults to the oracle's prescribed state,
  /// else zeros.  SGD starts from the row mean.
  std::optional<Matrix> init;
  /// Reference optimum for the metrics; defaults to oracle->optimum().
  std::optional<std::vector<double>> x_star;
};

std::vector<Rng> agent_streams(std::uint64_t seed, std::size_t n);

MetricsTrace run_simulation(const SimulationConfig& cfg);

struct MonteCarloAggregate {
  std::vector<std::size_t> k;
  std::vector<double> U_mean, U_stderr;
  std::vector<double> V_mean, V_stderr;
  std::vector<double> mean_err_mean, mean_err_stderr;
  std::size_t runs = 0;
  std::uint64_t base_seed = 0;

  std::size_t size() const noexcept { return k.size(); }
  friend bool operator==(const MonteCarloAggregate&,
                         const MonteCarloAggregate&) = default;
};

/// Seed of run r: mix_seed(base_seed, r).
std::uint64_t run_seed(std::uint64_t base_seed, std::size_t run);

/// Runs `runs` simulations (cfg.seed is the base seed) across `workers`
/// threads and reduces in run order; the result does not depend on
/// `workers`.  A failing run aborts with an error naming its seed.
MonteCarloAggregate monte_carlo(const SimulationConfig& cfg, std::size_t runs,
                                std::size_t workers = 1);

MonteCarloAggregate aggregate(std::span<const MetricsTrace> traces,
                              std::uint64_t base_seed);

}  // namespace dsgdlab

#endif  // DSGDLAB_ENGINE_HPP_
