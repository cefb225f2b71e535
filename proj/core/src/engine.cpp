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

#include "dsgdlab/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <string>
#include <thread>

#include "dsgdlab/error.hpp"
#include "rounding.hpp"

namespace dsgdlab {

std::size_t theory_shift(double theta, const OracleConstants& c) {
  return detail::ceil_count(2.0 * theta * (1.0 + c.M) * c.L * c.L /
                            (c.mu * c.mu));
}

StepsizeSchedule StepsizeSchedule::theory(double theta,
                                          const OracleConstants& c) {
  if (!(theta > 1.0)) {
    fail(ErrorKind::kInvalidArgument, "theory schedule needs theta > 1");
  }
  c.validate();
  StepsizeSchedule s;
  s.kind_ = Kind::kTheory;
  s.theta_ = theta;
  s.mu_ = c.mu;
  s.shift_ = theory_shift(theta, c);
  return s;
}

StepsizeSchedule StepsizeSchedule::simple(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    fail(ErrorKind::kInvalidArgument, "simple schedule needs a > 0 and b > 0");
  }
  StepsizeSchedule s;
  s.kind_ = Kind::kSimple;
  s.a_ = a;
  s.b_ = b;
  return s;
}

double StepsizeSchedule::operator()(std::size_t k) const noexcept {
  const double kk = static_cast<double>(k);
  if (kind_ == Kind::kTheory) {
    return theta_ / (mu_ * (kk + static_cast<double>(shift_)));
  }
  return a_ / (kk + b_);
}

std::vector<std::size_t> RecordPlan::iterations(std::size_t total) const {
  std::vector<std::size_t> ks{0};
  if (mode == Mode::kLinear) {
    if (stride == 0) fail(ErrorKind::kInvalidArgument, "record stride must be >= 1");
    for (std::size_t k = stride; k < total; k += stride) ks.push_back(k);
  } else {
    if (!(ratio > 1.0)) {
      fail(ErrorKind::kInvalidArgument, "geometric record ratio must exceed 1");
    }
    std::size_t k = 1;
    while (k < total) {
      ks.push_back(k);
      const double next = std::ceil(static_cast<double>(k) * ratio);
      k = std::max(k + 1, static_cast<std::size_t>(next));
    }
  }
  if (total > 0) ks.push_back(total);
  return ks;
}

Metrics measure(const Matrix& x, std::span<const double> x_star) {
  const std::vector<double> mean = row_mean(x);
  Metrics m;
  m.U = squared_distance(mean, x_star);
  double err = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    m.V += squared_distance(x.row(i), mean);
    err += squared_distance(x.row(i), x_star);
  }
  m.mean_err = err / static_cast<double>(x.rows());
  return m;
}

void dsgd_step(const Matrix& x, const MixingMatrix& w,
               const ProblemOracle& oracle, double alpha, std::span<Rng> rngs,
               Matrix& half, Matrix& out) {
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();
  if (w.size() != n || oracle.agents() != n || oracle.dim() != p ||
      rngs.size() != n) {
    fail(ErrorKind::kInvalidArgument, "dsgd_step: dimension mismatch");
  }
  if (half.rows() != n || half.cols() != p) half = Matrix(n, p);
  if (out.rows() != n || out.cols() != p) out = Matrix(n, p);

  for (std::size_t i = 0; i < n; ++i) {
    auto h = half.row(i);
    oracle.sample_gradient(i, x.row(i), rngs[i], h);
    const auto xi = x.row(i);
    for (std::size_t j = 0; j < p; ++j) h[j] = xi[j] - alpha * h[j];
  }
  for (std::size_t i = 0; i < n; ++i) {
    auto o = out.row(i);
    std::fill(o.begin(), o.end(), 0.0);
    for (const auto& e : w.row_support(i)) axpy(e.weight, half.row(e.col), o);
  }
  if (!out.all_finite()) fail(ErrorKind::kNumeric, "non-finite DSGD iterate");
}

Matrix dsgd_step(const Matrix& x, const MixingMatrix& w,
                 const ProblemOracle& oracle, double alpha,
                 std::span<Rng> rngs) {
  Matrix half, out;
  dsgd_step(x, w, oracle, alpha, rngs, half, out);
  return out;
}

void sgd_step(std::span<double> x, const ProblemOracle& oracle, double alpha,
              std::span<Rng> rngs, std::span<double> grad_scratch) {
  const std::size_t n = oracle.agents();
  const std::size_t p = oracle.dim();
  if (x.size() != p || rngs.size() != n || grad_scratch.size() != 2 * p) {
    fail(ErrorKind::kInvalidArgument, "sgd_step: dimension mismatch");
  }
  auto avg = grad_scratch.first(p);
  auto g = grad_scratch.last(p);
  std::fill(avg.begin(), avg.end(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    oracle.sample_gradient(i, x, rngs[i], g);
    axpy(1.0, g, avg);
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t j = 0; j < p; ++j) x[j] = x[j] - alpha * (avg[j] * inv_n);
  for (double v : x) {
    if (!std::isfinite(v)) fail(ErrorKind::kNumeric, "non-finite SGD iterate");
  }
}

std::vector<double> sgd_step(std::span<const double> x,
                             const ProblemOracle& oracle, double alpha,
                             std::span<Rng> rngs) {
  std::vector<double> out(x.begin(), x.end());
  std::vector<double> scratch(2 * oracle.dim());
  sgd_step(out, oracle, alpha, rngs, scratch);
  return out;
}

std::vector<Rng> agent_streams(std::uint64_t seed, std::size_t n) {
  std::vector<Rng> rngs;
  rngs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) rngs.push_back(make_stream(seed, i));
  return rngs;
}

namespace {

void record(MetricsTrace& trace, std::size_t k, const Metrics& m) {
  trace.k.push_back(k);
  trace.U.push_back(m.U);
  trace.V.push_back(m.V);
  trace.mean_err.push_back(m.mean_err);
}

[[noreturn]] void rethrow_at(const Error& e, std::size_t k) {
  throw Error(e.kind(), std::string(e.what()) + " at iteration " +
                            std::to_string(k));
}

}  // namespace

MetricsTrace run_simulation(const SimulationConfig& cfg) {
  if (!cfg.oracle) fail(ErrorKind::kInvalidArgument, "simulation needs an oracle");
  if (cfg.iterations < 1) {
    fail(ErrorKind::kInvalidArgument, "simulation needs iterations >= 1");
  }
  const ProblemOracle& oracle = *cfg.oracle;
  const std::size_t n = oracle.agents();
  const std::size_t p = oracle.dim();

  std::vector<double> x_star;
  if (cfg.x_star) {
    x_star = *cfg.x_star;
  } else if (auto opt = oracle.optimum()) {
    x_star = std::move(*opt);
  } else {
    fail(ErrorKind::kInvalidArgument,
         "oracle has no closed-form optimum; pass x_star explicitly");
  }
  if (x_star.size() != p) {
    fail(ErrorKind::kInvalidArgument, "x_star dimension differs from oracle");
  }

  Matrix x = cfg.init ? *cfg.init
                      : oracle.initial_state().value_or(Matrix(n, p, 0.0));
  if (x.rows() != n || x.cols() != p) {
    fail(ErrorKind::kInvalidArgument, "initial state shape differs from oracle");
  }

  const std::vector<std::size_t> plan = cfg.record.iterations(cfg.iterations);
  std::vector<Rng> rngs = agent_streams(cfg.seed, n);
  MetricsTrace trace;
  std::size_t next = 0;

  if (cfg.mixing) {
    const MixingMatrix& w = *cfg.mixing;
    Matrix half(n, p), out(n, p);
    for (std::size_t k = 0; k <= cfg.iterations; ++k) {
      if (k == plan[next]) {
        record(trace, k, measure(x, x_star));
        ++next;
      }
      if (k == cfg.iterations) break;
      try {
        dsgd_step(x, w, oracle, cfg.schedule(k), rngs, half, out);
      } catch (const Error& e) {
        rethrow_at(e, k);
      }
      std::swap(x, out);
    }
  } else {
    std::vector<double> xc = row_mean(x);
    std::vector<double> scratch(2 * p);
    for (std::size_t k = 0; k <= cfg.iterations; ++k) {
      if (k == plan[next]) {
        const double u = squared_distance(xc, x_star);
        record(trace, k, Metrics{u, 0.0, u});
        ++next;
      }
      if (k == cfg.iterations) break;
      try {
        sgd_step(xc, oracle, cfg.schedule(k), rngs, scratch);
      } catch (const Error& e) {
        rethrow_at(e, k);
      }
    }
  }
  return trace;
}

std::uint64_t run_seed(std::uint64_t base_seed, std::size_t run) {
  return mix_seed(base_seed, static_cast<std::uint64_t>(run));
}

namespace {

struct MomentPair {
  double mean;
  double stderr_;
};

MomentPair moments(std::span<const MetricsTrace> traces, std::size_t point,
                   std::vector<double> MetricsTrace::*field) {
  const std::size_t runs = traces.size();
  const double first = (traces[0].*field)[point];
  bool constant = true;
  double sum = 0.0;
  for (const auto& t : traces) {
    const double v = (t.*field)[point];
    constant = constant && v == first;
    sum += v;
  }
  if (constant) return {first, 0.0};
  const double mean = sum / static_cast<double>(runs);
  double ss = 0.0;
  for (const auto& t : traces) {
    const double d = (t.*field)[point] - mean;
    ss += d * d;
  }
  const double var = ss / static_cast<double>(runs - 1);
  return {mean, std::sqrt(var / static_cast<double>(runs))};
}

}  // namespace

MonteCarloAggregate aggregate(std::span<const MetricsTrace> traces,
                              std::uint64_t base_seed) {
  if (traces.empty()) fail(ErrorKind::kInvalidArgument, "no traces to aggregate");
  MonteCarloAggregate agg;
  agg.k = traces[0].k;
  agg.runs = traces.size();
  agg.base_seed = base_seed;
  for (const auto& t : traces) {
    if (t.k != agg.k) {
      fail(ErrorKind::kInvalidArgument, "traces recorded on different grids");
    }
  }
  for (std::size_t i = 0; i < agg.k.size(); ++i) {
    auto u = moments(traces, i, &MetricsTrace::U);
    auto v = moments(traces, i, &MetricsTrace::V);
    auto e = moments(traces, i, &MetricsTrace::mean_err);
    agg.U_mean.push_back(u.mean);
    agg.U_stderr.push_back(u.stderr_);
    agg.V_mean.push_back(v.mean);
    agg.V_stderr.push_back(v.stderr_);
    agg.mean_err_mean.push_back(e.mean);
    agg.mean_err_stderr.push_back(e.stderr_);
  }
  return agg;
}

MonteCarloAggregate monte_carlo(const SimulationConfig& cfg, std::size_t runs,
                                std::size_t workers) {
  if (runs < 1) fail(ErrorKind::kInvalidArgument, "monte_carlo needs runs >= 1");
  workers = std::clamp<std::size_t>(workers, 1, runs);

  std::vector<MetricsTrace> traces(runs);
  std::vector<std::exception_ptr> errors(runs);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t r = next.fetch_add(1); r < runs; r = next.fetch_add(1)) {
      SimulationConfig local = cfg;
      local.seed = run_seed(cfg.seed, r);
      try {
        traces[r] = run_simulation(local);
      } catch (...) {
        errors[r] = std::current_exception();
      }
    }
  };

  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  for (std::size_t r = 0; r < runs; ++r) {
    if (!errors[r]) continue;
    const std::string prefix = "Monte-Carlo run " + std::to_string(r) +
                               " (seed " + std::to_string(run_seed(cfg.seed, r)) +
                               ") failed: ";
    try {
      std::rethrow_exception(errors[r]);
    } catch (const Error& e) {
      throw Error(e.kind(), prefix + e.what());
    } catch (const std::exception& e) {
      throw Error(ErrorKind::kNumeric, prefix + e.what());
    }
  }
  return aggregate(traces, cfg.seed);
}

}  // namespace dsgdlab
