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


#include "dsgdlab_cli/cli.hpp"

#include <optional>

#include "CLI11.hpp"
#include "dsgdlab/config.hpp"
#include "dsgdlab/experiments.hpp"

namespace dsgdlab::cli {
namespace {

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  std::optional<std::string> out;
  std::optional<std::size_t> runs;
  std::optional<std::size_t> iterations;
  std::optional<std::string> problem;
  std::optional<std::string> topology;
  std::optional<std::string> weights;
  std::vector<std::size_t> n;
  std::optional<std::string> schedule;
  std::optional<double> a;
  std::optional<double> b;
  std::optional<double> theta;
  std::optional<double> sigma;
  std::optional<double> record_ratio;
  std::optional<std::size_t> window;
  std::optional<std::string> mnist_dir;
  bool paired_noise = false;
};

void add_common(CLI::App& app, Overrides& o) {
  app.add_option("--config", o.config_path, "JSON experiment config");
  app.add_option("--seed", o.seed, "Base seed");
  app.add_option("--workers", o.workers, "Monte-Carlo worker threads");
  app.add_option("--out", o.out, "Output directory");
  app.add_option("--runs", o.runs, "Monte-Carlo runs");
  app.add_option("--iterations", o.iterations, "Iterations per run");
  app.add_option("--problem", o.problem, "quadratic | ridge | logistic | hard");
  app.add_option("--topology", o.topology, "ring | grid | complete | erdos_renyi");
  app.add_option("--weights", o.weights, "metropolis | lazy_metropolis");
  app.add_option("--n", o.n, "Node count(s)")->delimiter(',');
  app.add_option("--schedule", o.schedule, "simple | theory");
  app.add_option("--a", o.a, "Simple schedule numerator");
  app.add_option("--b", o.b, "Simple schedule offset");
  app.add_option("--theta", o.theta, "Theory schedule theta");
  app.add_option("--sigma", o.sigma, "Quadratic / hard-instance noise std");
  app.add_option("--record-ratio", o.record_ratio, "Geometric record ratio");
  app.add_option("--window", o.window, "Transient persistence window");
  app.add_option("--mnist-dir", o.mnist_dir, "Directory with MNIST IDX files");
  app.add_flag("--paired-noise", o.paired_noise, "Share DSGD / SGD noise");
}

ExperimentConfig resolve(const Overrides& o) {
  ExperimentConfig cfg =
      o.config_path.empty() ? ExperimentConfig{} : load_config(o.config_path);
  if (o.problem) cfg.problem.kind = parse_problem_kind(*o.problem, "--problem");
  if (o.topology) {
    cfg.topology.kind = parse_topology_kind(*o.topology, "--topology");
  }
  if (o.weights) cfg.topology.weights = parse_weight_rule(*o.weights, "--weights");
  if (o.schedule) {
    cfg.schedule.kind = parse_schedule_kind(*o.schedule, "--schedule");
  }
  if (o.seed) cfg.seed = *o.seed;
  if (o.workers) cfg.workers = *o.workers;
  if (o.out) cfg.out = *o.out;
  if (o.runs) cfg.runs = *o.runs;
  if (o.iterations) cfg.iterations = *o.iterations;
  if (!o.n.empty()) cfg.topology.n = o.n;
  if (o.a) cfg.schedule.a = *o.a;
  if (o.b) cfg.schedule.b = *o.b;
  if (o.theta) cfg.schedule.theta = *o.theta;
  if (o.sigma) cfg.problem.sigma = *o.sigma;
  if (o.record_ratio) {
    cfg.record.mode = RecordPlan::Mode::kGeometric;
    cfg.record.ratio = *o.record_ratio;
  }
  if (o.window) cfg.transient.window = *o.window;
  if (o.mnist_dir) cfg.problem.data_dir = *o.mnist_dir;
  if (o.paired_noise) cfg.paired_noise = true;
  validate(cfg);
  return cfg;
}

void print_table(std::ostream& out, const CsvTable& t) { out << t.str(); }

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kNumeric:
    case ErrorKind::kGeneration:
      return kExitNumeric;
    case ErrorKind::kIo:
    case ErrorKind::kFormat:
    case ErrorKind::kLength:
    case ErrorKind::kConsistency:
      return kExitIo;
    case ErrorKind::kInvalidArgument:
    case ErrorKind::kConfig:
    case ErrorKind::kDomain:
    case ErrorKind::kConstruction:
      return kExitUsage;
  }
  return kExitUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app("Decentralized SGD simulation laboratory", "dsgdlab");
  app.require_subcommand(1);
  app.fallthrough();
  Overrides o;
  add_common(app, o);
  CLI::App* topo = app.add_subcommand("topology", "Spectral table of the configured graphs");
  CLI::App* run = app.add_subcommand("run", "DSGD and SGD traces for one network");
  CLI::App* sweep = app.add_subcommand("sweep", "Transient times over topology.n");
  CLI::App* hard = app.add_subcommand("hard", "Hard-instance lower-bound check");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "dsgdlab: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    const ExperimentConfig cfg = resolve(o);
    if (topo->parsed()) {
      const CsvTable t = cmd_topology(cfg);
      write_text_file(std::filesystem::path(cfg.out) / "topology.csv", t.str());
      print_table(out, t);
    } else if (run->parsed()) {
      const PairResult r = cmd_run(cfg);
      const double kn = cfg.kappa * static_cast<double>(r.n);
      out << "rho_w " << format_double(r.spectral.rho_w) << "\n"
          << "final mean_err dsgd " << format_double(r.dsgd.mean_err_mean.back())
          << " sgd " << format_double(r.sgd.mean_err_mean.back()) << "\n"
          << "transient "
          << (r.transient ? std::to_string(*r.transient) : std::string("not-reached"))
          << " reference " << format_double(r.transient_ref) << "\n"
          << "A " << format_double(r.A) << (r.A <= kn ? " <= " : " > ")
          << "kappa n, B " << format_double(r.B) << (r.B <= kn ? " <= " : " > ")
          << "kappa n\n";
      if (r.noise) {
        out << "estimated sigma2 " << format_double(r.noise->sigma2) << " M "
            << format_double(r.noise->M) << "\n";
      }
      out << "wrote " << cfg.out << "/{dsgd.csv,sgd.csv,manifest.json}\n";
    } else if (sweep->parsed()) {
      print_table(out, cmd_sweep(cfg));
    } else if (hard->parsed()) {
      const CsvTable t = cmd_hard(cfg);
      std::size_t fails = 0, checked = 0;
      for (const auto& row : t.rows()) {
        if (row[5] == "NA") continue;
        ++checked;
        if (row[5] != "true") ++fails;
      }
      out << "checked " << checked << " rows, " << fails << " below the bound\n"
          << "wrote " << cfg.out << "/hard.csv\n";
    }
  } catch (const Error& e) {
    err << "dsgdlab: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "dsgdlab: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitOk;
}

}  // namespace dsgdlab::cli
