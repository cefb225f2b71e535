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


// Experiment configuration.  The on-disk form is a JSON object with nested
// sections; every key is optional and unknown keys are rejected.
//
//   {
//     "problem":   {"kind": "ridge", "p": 10, "rho": 1.0, ...},
//     "topology":  {"kind": "ring", "n": [9, 16, 25], "weights": "metropolis"},
//     "schedule":  {"kind": "simple", "a": 20, "b": 20},
//     "record":    {"mode": "geometric", "ratio": 1.1},
//     "transient": {"window": 5, "factor": 2},
//     "iterations": 1000000, "runs": 50, "seed": 1, "workers": 1,
//     "out": "out"
//   }
//
// A run manifest is the same object plus a "manifest" section, which the
// parser accepts and ignores.

#ifndef DSGDLAB_CONFIG_HPP_
#define DSGDLAB_CONFIG_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dsgdlab/engine.hpp"

namespace dsgdlab {

enum class ProblemKind { kQuadratic, kRidge, kLogistic, kHard };
enum class TopologyKind { kRing, kGrid, kComplete, kErdosRenyi };
enum class WeightRule { kMetropolis, kLazyMetropolis };
enum class ScheduleKind { kSimple, kTheory };

struct ProblemSpec {
  ProblemKind kind = ProblemKind::kRidge;
  std::size_t p = 10;  // quadratic and ridge dimension
  // ridge
  double rho = 1.0;
  double noise_var = 0.01;
  double feature_second_moment = 1.0 / 12.0;
  // quadratic and hard
  double sigma = 1.0;
  // logistic
  double lambda = 1.0;
  std::size_t minibatch = 1;
  std::size_t per_agent = 50;
  unsigned digit_a = 1;
  unsigned digit_b = 2;
  /// Directory holding train-images-idx3-ubyte / train-labels-idx1-ubyte.
  /// Empty falls back to DSGDLAB_MNIST_DIR, then to synthetic data.
  std::string data_dir;
  std::size_t synthetic_per_class = 600;
  std::uint32_t synthetic_side = 28;
  std::uint64_t data_seed = 7;

  friend bool operator==(const ProblemSpec&, const ProblemSpec&) = default;
};

struct TopologySpec {
  TopologyKind kind = TopologyKind::kRing;
  /// Node counts; grids need perfect squares.
  std::vector<std::size_t> n = {25};
  WeightRule weights = WeightRule::kMetropolis;
  double edge_probability = 0.3;  // erdos_renyi
  std::uint64_t graph_seed = 1;

  friend bool operator==(const TopologySpec&, const TopologySpec&) = default;
};

struct ScheduleSpec {
  ScheduleKind kind = ScheduleKind::kSimple;
  double a = 20.0;
  double b = 20.0;
  double theta = 3.0;

  friend bool operator==(const ScheduleSpec&, const ScheduleSpec&) = default;
};

struct TransientSpec {
  std::size_t window = 5;
  double factor = 2.0;
  /// Reference curve coefficient * n / (1 - rho_w)^exponent.  Unset picks
  /// (1/4, 1.5) for logistic, (7, 2) for grids and (4, 2) otherwise.
  std::optional<double> coefficient;
  std::optional<double> exponent;

  friend bool operator==(const TransientSpec&, const TransientSpec&) = default;
};

struct ExperimentConfig {
  ProblemSpec problem;
  TopologySpec topology;
  ScheduleSpec schedule;
  RecordPlan record{RecordPlan::Mode::kGeometric, 1.1, 1};
  TransientSpec transient;
  std::size_t iterations = 1'000'000;
  std::size_t runs = 50;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  std::string out = "out";
  /// DSGD and SGD share noise streams when set.
  bool paired_noise = false;
  /// Threshold for the A <= kappa n, B <= kappa n annotation.
  double kappa = 10.0;
  /// Draws per point for the (sigma^2, M) estimate.
  std::size_t noise_samples = 2000;

  friend bool operator==(const ExperimentConfig&,
                         const ExperimentConfig&) = default;
};

/// Throws kConfig naming the offending field.
void validate(const ExperimentConfig& cfg);

/// Parses and validates.  Syntax errors, type mismatches and unknown keys
/// are kConfig errors.
ExperimentConfig parse_config(std::string_view json_text);
/// kIo when the file cannot be read.
ExperimentConfig load_config(const std::filesystem::path& path);

/// Full resolved config as JSON; parse_config(to_json(c)) == c.
std::string to_json(const ExperimentConfig& cfg);
/// to_json plus a "manifest" section with the given string entries.
std::string manifest_json(
    const ExperimentConfig& cfg,
    const std::vector<std::pair<std::string, std::string>>& entries);

std::string_view to_string(ProblemKind k);
std::string_view to_string(TopologyKind k);
std::string_view to_string(WeightRule k);
std::string_view to_string(ScheduleKind k);

/// Inverses of to_string; kConfig naming `field` on an unknown name.
ProblemKind parse_problem_kind(std::string_view s, std::string_view field);
TopologyKind parse_topology_kind(std::string_view s, std::string_view field);
WeightRule parse_weight_rule(std::string_view s, std::string_view field);
ScheduleKind parse_schedule_kind(std::string_view s, std::string_view field);

/// Reference-curve (coefficient, exponent) after applying the defaults.
std::pair<double, double> transient_reference_params(
    const ExperimentConfig& cfg);

}  // namespace dsgdlab

#endif  // DSGDLAB_CONFIG_HPP_
