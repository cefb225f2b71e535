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


// Experiment drivers behind the dsgdlab command line: build the graph,
// mixing matrix and problem a config describes, run the DSGD / SGD Monte
// Carlo pair and write the resulting tables.

#ifndef DSGDLAB_EXPERIMENTS_HPP_
#define DSGDLAB_EXPERIMENTS_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dsgdlab/config.hpp"
#include "dsgdlab/csv.hpp"
#include "dsgdlab/engine.hpp"
#include "dsgdlab/problems.hpp"
#include "dsgdlab/theory.hpp"
#include "dsgdlab/topology.hpp"

namespace dsgdlab {

inline constexpr const char* kMnistDirEnv = "DSGDLAB_MNIST_DIR";
inline constexpr const char* kMnistImages = "train-images-idx3-ubyte";
inline constexpr const char* kMnistLabels = "train-labels-idx1-ubyte";

Graph build_graph(const TopologySpec& spec, std::size_t n);
MixingMatrix build_mixing(const TopologySpec& spec, std::size_t n);

struct ProblemInstance {
  std::shared_ptr<const ProblemOracle> oracle;
  std::vector<double> x_star;
  Matrix init;             // x(0), zeros unless the problem prescribes one
  std::string data_source;  // logistic only: IDX directory or "synthetic"
};

/// Only the hard instance reads `w` and its spectral info.
ProblemInstance build_problem(const ExperimentConfig& cfg, std::size_t n,
                              const MixingMatrix& w, const SpectralInfo& spec);

/// Seeds of the DSGD and SGD Monte-Carlo families.  They coincide only in
/// paired-noise mode.
std::uint64_t dsgd_seed(const ExperimentConfig& cfg);
std::uint64_t sgd_seed(const ExperimentConfig& cfg);

struct PairResult {
  std::size_t n = 0;
  SpectralInfo spectral;
  MonteCarloAggregate dsgd;
  MonteCarloAggregate sgd;
  ProblemInstance problem;
  double A = 0.0;
  double B = 0.0;
  /// Present when the schedule needed (sigma^2, M) and the oracle lacks
  /// them in closed form.
  std::optional<NoiseEstimate> noise;
  std::optional<std::size_t> transient;
  double transient_ref = 0.0;
};

/// Runs DSGD and SGD for node count n with the settings of `cfg`.
PairResult run_pair(const ExperimentConfig& cfg, std::size_t n);

/// Rows {n, topology, weights, rho_w, gap, reference} for every configured n.
CsvTable cmd_topology(const ExperimentConfig& cfg);

/// Writes dsgd.csv, sgd.csv and manifest.json under cfg.out.  Requires a
/// single configured n.
PairResult cmd_run(const ExperimentConfig& cfg);

/// Writes transient.csv and per-n traces under cfg.out; returns the table
/// {n, rho_w, K_T_emp, K_T_ref, ratio, reached}.
CsvTable cmd_sweep(const ExperimentConfig& cfg);

/// Hard instance on the configured topology (single n) with the theory
/// schedule at schedule.theta: one noiseless run and a noisy Monte Carlo
/// at problem.sigma.  Writes hard.csv with {k, k_shifted, V_sim, V_noisy,
/// V_lower_bound, pass}; rows below the validity threshold carry NA.
CsvTable cmd_hard(const ExperimentConfig& cfg);

}  // namespace dsgdlab

#endif  // DSGDLAB_EXPERIMENTS_HPP_
