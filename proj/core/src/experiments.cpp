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


#include "dsgdlab/experiments.hpp"

#include <cmath>
#include <cstdlib>
#include <string>
#include <utility>

#include "dsgdlab/error.hpp"
#include "dsgdlab/idx.hpp"
#include "dsgdlab/rng.hpp"

namespace dsgdlab {
namespace {

constexpr std::uint64_t kSgdStream = 0x5347'4400;
constexpr std::uint64_t kNoiseStream = 0x4e4f'4953;

std::string bool_str(bool b) { return b ? "true" : "false"; }

std::filesystem::path resolve_mnist_dir(const ProblemSpec& p) {
  if (!p.data_dir.empty()) return p.data_dir;
  if (const char* env = std::getenv(kMnistDirEnv); env && *env) return env;
  return {};
}

std::size_t single_n(const ExperimentConfig& cfg, const char* cmd) {
  if (cfg.topology.n.size() != 1) {
    fail(ErrorKind::kConfig, std::string("config field 'topology.n': ") + cmd +
                                 " needs exactly one node count");
  }
  return cfg.topology.n.front();
}

StepsizeSchedule make_schedule(const ScheduleSpec& s, const OracleConstants& c) {
  if (s.kind == ScheduleKind::kTheory) return StepsizeSchedule::theory(s.theta, c);
  return StepsizeSchedule::simple(s.a, s.b);
}

}  // namespace

Graph build_graph(const TopologySpec& spec, std::size_t n) {
  switch (spec.kind) {
    case TopologyKind::kRing:
      return build_ring(n);
    case TopologyKind::kGrid: {
      const auto side = static_cast<std::size_t>(std::llround(std::sqrt(double(n))));
      if (side * side != n) {
        fail(ErrorKind::kConfig, "grid node count " + std::to_string(n) +
                                     " is not a perfect square");
      }
      return build_grid(side);
    }
    case TopologyKind::kComplete:
      return build_complete(n);
    case TopologyKind::kErdosRenyi:
      return build_erdos_renyi(n, spec.edge_probability, spec.graph_seed);
  }
  fail(ErrorKind::kConfig, "unknown topology kind");
}

MixingMatrix build_mixing(const TopologySpec& spec, std::size_t n) {
  const Graph g = build_graph(spec, n);
  return spec.weights == WeightRule::kMetropolis ? metropolis_weights(g)
                                                 : lazy_metropolis_weights(g);
}

ProblemInstance build_problem(const ExperimentConfig& cfg, std::size_t n,
                              const MixingMatrix& w, const SpectralInfo& spec) {
  const ProblemSpec& p = cfg.problem;
  ProblemInstance inst;
  switch (p.kind) {
    case ProblemKind::kQuadratic:
      inst.oracle = std::make_shared<QuadraticProblem>(
          evenly_spaced_targets(n, p.p), p.sigma);
      break;
    case ProblemKind::kRidge: {
      RidgeParams rp;
      rp.agents = n;
      rp.p = p.p;
      rp.rho = p.rho;
      rp.noise_var = p.noise_var;
      rp.feature_second_moment = p.feature_second_moment;
      inst.oracle = std::make_shared<RidgeStreamProblem>(rp);
      break;
    }
    case ProblemKind::kHard:
      inst.oracle = std::make_shared<QuadraticProblem>(hard_instance(w, spec, p.sigma));
      break;
    case ProblemKind::kLogistic: {
      const auto a = static_cast<std::uint8_t>(p.digit_a);
      const auto b = static_cast<std::uint8_t>(p.digit_b);
      const std::filesystem::path dir = resolve_mnist_dir(p);
      IdxDataset ds;
      if (!dir.empty()) {
        ds = load_idx(dir / kMnistImages, dir / kMnistLabels);
        inst.data_source = dir.string();
      } else {
        ds = synthetic_two_cluster(p.synthetic_per_class, p.synthetic_side, a, b,
                                   p.data_seed);
        inst.data_source = "synthetic";
      }
      auto prob = std::make_shared<LogisticProblem>(build_binary_task(
          ds, a, b, p.per_agent, n, p.data_seed, p.lambda, p.minibatch));
      inst.x_star = logistic_optimum(*prob, 1e-10);
      inst.oracle = std::move(prob);
      break;
    }
  }
  if (inst.x_star.empty()) inst.x_star = *inst.oracle->optimum();
  inst.init = inst.oracle->initial_state().value_or(
      Matrix(inst.oracle->agents(), inst.oracle->dim()));
  return inst;
}

std::uint64_t dsgd_seed(const ExperimentConfig& cfg) { return cfg.seed; }

std::uint64_t sgd_seed(const ExperimentConfig& cfg) {
  return cfg.paired_noise ? cfg.seed : mix_seed(cfg.seed, kSgdStream);
}

PairResult run_pair(const ExperimentConfig& cfg, std::size_t n) {
  validate(cfg);
  PairResult r;
  r.n = n;
  auto w = std::make_shared<MixingMatrix>(build_mixing(cfg.topology, n));
  r.spectral = spectral_info(*w);
  r.problem = build_problem(cfg, n, *w, r.spectral);
  const ProblemOracle& oracle = *r.problem.oracle;

  OracleConstants oc = oracle.constants();
  if (cfg.schedule.kind == ScheduleKind::kTheory && !oc.noise_exact) {
    r.noise = estimate_noise_constants(oracle, r.problem.x_star, cfg.noise_samples,
                                       mix_seed(cfg.seed, kNoiseStream));
    oc = with_noise(oc, *r.noise);
  }
  r.A = initial_error_sum(r.problem.init, r.problem.x_star);
  r.B = heterogeneity_sum(oracle, r.problem.x_star);

  SimulationConfig sim;
  sim.oracle = r.problem.oracle;
  sim.mixing = w;
  sim.schedule = make_schedule(cfg.schedule, oc);
  sim.iterations = cfg.iterations;
  sim.record = cfg.record;
  sim.seed = dsgd_seed(cfg);
  sim.init = r.problem.init;
  sim.x_star = r.problem.x_star;
  r.dsgd = monte_carlo(sim, cfg.runs, cfg.workers);

  sim.mixing = nullptr;
  sim.seed = sgd_seed(cfg);
  r.sgd = monte_carlo(sim, cfg.runs, cfg.workers);

  r.transient = transient_time(r.dsgd, r.sgd,
                               {cfg.transient.window, cfg.transient.factor});
  const auto [coef, expo] = transient_reference_params(cfg);
  r.transient_ref = transient_reference(n, r.spectral.rho_w, coef, expo);
  return r;
}

CsvTable cmd_topology(const ExperimentConfig& cfg) {
  validate(cfg);
  const auto [coef, expo] = transient_reference_params(cfg);
  CsvTable t({"n", "topology", "weights", "rho_w", "gap", "K_T_ref"});
  for (std::size_t n : cfg.topology.n) {
    const SpectralInfo s = spectral_info(build_mixing(cfg.topology, n));
    t.add_row({std::to_string(n), std::string(to_string(cfg.topology.kind)),
               std::string(to_string(cfg.topology.weights)),
               format_double(s.rho_w), format_double(s.gap),
               format_double(transient_reference(n, s.rho_w, coef, expo))});
  }
  return t;
}

PairResult cmd_run(const ExperimentConfig& cfg) {
  const std::size_t n = single_n(cfg, "run");
  PairResult r = run_pair(cfg, n);
  const std::filesystem::path out(cfg.out);
  write_text_file(out / "dsgd.csv", trace_csv(r.dsgd));
  write_text_file(out / "sgd.csv", trace_csv(r.sgd));

  const double kn = cfg.kappa * static_cast<double>(n);
  std::vector<std::pair<std::string, std::string>> m = {
      {"command", "run"},
      {"dsgd_seed", std::to_string(dsgd_seed(cfg))},
      {"sgd_seed", std::to_string(sgd_seed(cfg))},
      {"rho_w", format_double(r.spectral.rho_w)},
      {"A", format_double(r.A)},
      {"B", format_double(r.B)},
      {"A_le_kappa_n", bool_str(r.A <= kn)},
      {"B_le_kappa_n", bool_str(r.B <= kn)},
      {"transient", r.transient ? std::to_string(*r.transient) : "not-reached"},
      {"transient_reference", format_double(r.transient_ref)}};
  if (!r.problem.data_source.empty()) m.emplace_back("data_source", r.problem.data_source);
  if (r.noise) {
    m.emplace_back("sigma2_estimate", format_double(r.noise->sigma2));
    m.emplace_back("M_estimate", format_double(r.noise->M));
  }
  write_text_file(out / "manifest.json", manifest_json(cfg, m));
  return r;
}

CsvTable cmd_sweep(const ExperimentConfig& cfg) {
  validate(cfg);
  const std::filesystem::path out(cfg.out);
  CsvTable t({"n", "rho_w", "K_T_emp", "K_T_ref", "ratio", "reached"});
  for (std::size_t n : cfg.topology.n) {
    const PairResult r = run_pair(cfg, n);
    const std::string tag = "n" + std::to_string(n);
    write_text_file(out / (tag + "_dsgd.csv"), trace_csv(r.dsgd));
    write_text_file(out / (tag + "_sgd.csv"), trace_csv(r.sgd));
    t.add_row({std::to_string(n), format_double(r.spectral.rho_w),
               r.transient ? std::to_string(*r.transient) : "NA",
               format_double(r.transient_ref),
               r.transient ? format_double(double(*r.transient) / r.transient_ref)
                           : "NA",
               bool_str(r.transient.has_value())});
  }
  write_text_file(out / "transient.csv", t.str());
  write_text_file(out / "manifest.json",
                  manifest_json(cfg, {{"command", "sweep"},
                                      {"dsgd_seed", std::to_string(dsgd_seed(cfg))},
                                      {"sgd_seed", std::to_string(sgd_seed(cfg))}}));
  return t;
}

CsvTable cmd_hard(const ExperimentConfig& cfg) {
  validate(cfg);
  const std::size_t n = single_n(cfg, "hard");
  auto w = std::make_shared<MixingMatrix>(build_mixing(cfg.topology, n));
  const SpectralInfo spec = spectral_info(*w);
  const double theta = cfg.schedule.theta;

  auto noiseless = std::make_shared<QuadraticProblem>(hard_instance(*w, spec, 0.0));
  auto noisy = std::make_shared<QuadraticProblem>(
      hard_instance(*w, spec, cfg.problem.sigma));
  const std::vector<double> x_star(1, 0.0);
  const double norm_sq = frobenius_squared(noiseless->targets());

  SimulationConfig sim;
  sim.oracle = noiseless;
  sim.mixing = w;
  sim.schedule = StepsizeSchedule::theory(theta, noiseless->constants());
  sim.iterations = cfg.iterations;
  sim.record = cfg.record;
  sim.seed = cfg.seed;
  sim.x_star = x_star;
  const MetricsTrace clean = run_simulation(sim);
  sim.oracle = noisy;
  const MonteCarloAggregate mc = monte_carlo(sim, cfg.runs, cfg.workers);

  const std::size_t K = sim.schedule.shift();
  const double threshold = hard_lower_bound_threshold(theta, spec.rho_w);
  CsvTable t({"k", "k_shifted", "V_sim", "V_noisy", "V_lower_bound", "pass"});
  for (std::size_t i = 0; i < clean.size(); ++i) {
    const std::size_t ks = clean.k[i] + K;
    std::string bound = "NA";
    std::string pass = "NA";
    if (static_cast<double>(ks) >= threshold) {
      const double lb = hard_lower_bound(theta, spec.rho_w, norm_sq, double(ks));
      bound = format_double(lb);
      pass = bool_str(clean.V[i] >= lb);
    }
    t.add_row({std::to_string(clean.k[i]), std::to_string(ks),
               format_double(clean.V[i]), format_double(mc.V_mean[i]), bound,
               pass});
  }
  const std::filesystem::path out(cfg.out);
  write_text_file(out / "hard.csv", t.str());
  write_text_file(out / "manifest.json",
                  manifest_json(cfg, {{"command", "hard"},
                                      {"rho_w", format_double(spec.rho_w)},
                                      {"K", std::to_string(K)},
                                      {"threshold", format_double(threshold)}}));
  return t;
}

}  // namespace dsgdlab
