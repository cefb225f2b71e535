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


#include "dsgdlab/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <type_traits>
#include <utility>

#include "dsgdlab/error.hpp"
#include "json.hpp"

namespace dsgdlab {
namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& field, const std::string& msg) {
  fail(ErrorKind::kConfig, "config field '" + field + "': " + msg);
}

template <typename E>
struct EnumName {
  E value;
  std::string_view name;
};

constexpr EnumName<ProblemKind> kProblemNames[] = {
    {ProblemKind::kQuadratic, "quadratic"},
    {ProblemKind::kRidge, "ridge"},
    {ProblemKind::kLogistic, "logistic"},
    {ProblemKind::kHard, "hard"}};
constexpr EnumName<TopologyKind> kTopologyNames[] = {
    {TopologyKind::kRing, "ring"},
    {TopologyKind::kGrid, "grid"},
    {TopologyKind::kComplete, "complete"},
    {TopologyKind::kErdosRenyi, "erdos_renyi"}};
constexpr EnumName<WeightRule> kWeightNames[] = {
    {WeightRule::kMetropolis, "metropolis"},
    {WeightRule::kLazyMetropolis, "lazy_metropolis"}};
constexpr EnumName<ScheduleKind> kScheduleNames[] = {
    {ScheduleKind::kSimple, "simple"}, {ScheduleKind::kTheory, "theory"}};
constexpr EnumName<RecordPlan::Mode> kRecordNames[] = {
    {RecordPlan::Mode::kGeometric, "geometric"},
    {RecordPlan::Mode::kLinear, "linear"}};

template <typename E, std::size_t N>
E enum_from(const EnumName<E> (&table)[N], std::string_view s,
            const std::string& field) {
  std::string allowed;
  for (const auto& e : table) {
    if (e.name == s) return e.value;
    allowed += (allowed.empty() ? "" : ", ") + std::string(e.name);
  }
  bad(field, "unknown value '" + std::string(s) + "' (expected one of " +
                 allowed + ")");
}

template <typename E, std::size_t N>
std::string_view name_of(const EnumName<E> (&table)[N], E v) {
  for (const auto& e : table) {
    if (e.value == v) return e.name;
  }
  return "?";
}

// Reads the keys of one JSON object, remembering which were seen so that
// leftovers can be reported.
class Section {
 public:
  Section(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) bad(path_.empty() ? "<root>" : path_, "expected an object");
  }

  std::string field(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const json* find(const std::string& key) {
    seen_.insert(key);
    auto it = obj_.find(key);
    if (it == obj_.end() || it->is_null()) return nullptr;
    return &*it;
  }

  void read(const std::string& key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) bad(field(key), "expected a number");
      out = v->get<double>();
      if (!std::isfinite(out)) bad(field(key), "must be finite");
    }
  }

  void read(const std::string& key, std::optional<double>& out) {
    if (const json* v = find(key)) {
      double d = 0.0;
      if (!v->is_number()) bad(field(key), "expected a number");
      d = v->get<double>();
      if (!std::isfinite(d)) bad(field(key), "must be finite");
      out = d;
    } else {
      out.reset();
    }
  }

  static std::uint64_t as_count(const json& v, const std::string& f) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) {
      if (v.get<std::int64_t>() < 0) bad(f, "must be nonnegative");
      return static_cast<std::uint64_t>(v.get<std::int64_t>());
    }
    if (v.is_number_float()) {
      const double d = v.get<double>();
      if (d >= 0.0 && d < 1.8e19 && std::floor(d) == d) {
        return static_cast<std::uint64_t>(d);
      }
      bad(f, "expected a nonnegative integer");
    }
    bad(f, "expected a nonnegative integer");
  }

  template <typename U>
    requires(std::is_unsigned_v<U> && !std::is_same_v<U, bool>)
  void read(const std::string& key, U& out) {
    if (const json* v = find(key)) {
      const std::uint64_t c = as_count(*v, field(key));
      if (c > std::numeric_limits<U>::max()) bad(field(key), "out of range");
      out = static_cast<U>(c);
    }
  }

  void read(const std::string& key, bool& out) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) bad(field(key), "expected true or false");
      out = v->get<bool>();
    }
  }

  void read(const std::string& key, std::string& out) {
    if (const json* v = find(key)) {
      if (!v->is_string()) bad(field(key), "expected a string");
      out = v->get<std::string>();
    }
  }

  template <typename E, std::size_t N>
  void read_enum(const std::string& key, const EnumName<E> (&table)[N],
                 E& out) {
    const json* v = find(key);
    if (v == nullptr) return;
    if (!v->is_string()) bad(field(key), "expected a string");
    out = enum_from(table, v->get<std::string>(), field(key));
  }

  void read_counts(const std::string& key, std::vector<std::size_t>& out) {
    const json* v = find(key);
    if (v == nullptr) return;
    out.clear();
    if (v->is_array()) {
      for (const auto& e : *v) {
        out.push_back(static_cast<std::size_t>(as_count(e, field(key))));
      }
    } else {
      out.push_back(static_cast<std::size_t>(as_count(*v, field(key))));
    }
  }

  Section sub(const std::string& key) {
    seen_.insert(key);
    auto it = obj_.find(key);
    static const json kEmpty = json::object();
    if (it == obj_.end() || it->is_null()) return Section(kEmpty, field(key));
    return Section(*it, field(key));
  }

  void ignore(const std::string& key) { seen_.insert(key); }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!seen_.count(it.key())) bad(field(it.key()), "unknown key");
    }
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

bool is_perfect_square(std::size_t n) {
  const auto r = static_cast<std::size_t>(std::llround(std::sqrt(double(n))));
  return r * r == n;
}

json to_json_value(const ExperimentConfig& c) {
  auto opt = [](const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
  };
  const ProblemSpec& p = c.problem;
  json j;
  j["problem"] = {
      {"kind", name_of(kProblemNames, p.kind)},
      {"p", p.p},
      {"rho", p.rho},
      {"noise_var", p.noise_var},
      {"feature_second_moment", p.feature_second_moment},
      {"sigma", p.sigma},
      {"lambda", p.lambda},
      {"minibatch", p.minibatch},
      {"per_agent", p.per_agent},
      {"digit_a", p.digit_a},
      {"digit_b", p.digit_b},
      {"data_dir", p.data_dir},
      {"synthetic_per_class", p.synthetic_per_class},
      {"synthetic_side", p.synthetic_side},
      {"data_seed", p.data_seed}};
  j["topology"] = {{"kind", name_of(kTopologyNames, c.topology.kind)},
                   {"n", c.topology.n},
                   {"weights", name_of(kWeightNames, c.topology.weights)},
                   {"edge_probability", c.topology.edge_probability},
                   {"graph_seed", c.topology.graph_seed}};
  j["schedule"] = {{"kind", name_of(kScheduleNames, c.schedule.kind)},
                   {"a", c.schedule.a},
                   {"b", c.schedule.b},
                   {"theta", c.schedule.theta}};
  j["record"] = {{"mode", name_of(kRecordNames, c.record.mode)},
                 {"ratio", c.record.ratio},
                 {"stride", c.record.stride}};
  j["transient"] = {{"window", c.transient.window},
                    {"factor", c.transient.factor},
                    {"coefficient", opt(c.transient.coefficient)},
                    {"exponent", opt(c.transient.exponent)}};
  j["iterations"] = c.iterations;
  j["runs"] = c.runs;
  j["seed"] = c.seed;
  j["workers"] = c.workers;
  j["out"] = c.out;
  j["paired_noise"] = c.paired_noise;
  j["kappa"] = c.kappa;
  j["noise_samples"] = c.noise_samples;
  return j;
}

}  // namespace

std::string_view to_string(ProblemKind k) { return name_of(kProblemNames, k); }
std::string_view to_string(TopologyKind k) {
  return name_of(kTopologyNames, k);
}
std::string_view to_string(WeightRule k) { return name_of(kWeightNames, k); }
std::string_view to_string(ScheduleKind k) {
  return name_of(kScheduleNames, k);
}

ProblemKind parse_problem_kind(std::string_view s, std::string_view field) {
  return enum_from(kProblemNames, s, std::string(field));
}
TopologyKind parse_topology_kind(std::string_view s, std::string_view field) {
  return enum_from(kTopologyNames, s, std::string(field));
}
WeightRule parse_weight_rule(std::string_view s, std::string_view field) {
  return enum_from(kWeightNames, s, std::string(field));
}
ScheduleKind parse_schedule_kind(std::string_view s, std::string_view field) {
  return enum_from(kScheduleNames, s, std::string(field));
}

void validate(const ExperimentConfig& c) {
  const ProblemSpec& p = c.problem;
  if (p.p == 0) bad("problem.p", "must be >= 1");
  if (!(p.rho >= 0.0)) bad("problem.rho", "must be >= 0");
  if (!(p.noise_var >= 0.0)) bad("problem.noise_var", "must be >= 0");
  if (!(p.feature_second_moment > 0.0)) {
    bad("problem.feature_second_moment", "must be > 0");
  }
  if (!(p.sigma >= 0.0)) bad("problem.sigma", "must be >= 0");
  if (!(p.lambda > 0.0)) bad("problem.lambda", "must be > 0");
  if (p.minibatch == 0) bad("problem.minibatch", "must be >= 1");
  if (p.per_agent == 0) bad("problem.per_agent", "must be >= 1");
  if (p.digit_a > 9) bad("problem.digit_a", "must be a digit 0-9");
  if (p.digit_b > 9) bad("problem.digit_b", "must be a digit 0-9");
  if (p.digit_a == p.digit_b) bad("problem.digit_b", "must differ from digit_a");
  if (p.synthetic_per_class == 0) {
    bad("problem.synthetic_per_class", "must be >= 1");
  }
  if (p.synthetic_side == 0) bad("problem.synthetic_side", "must be >= 1");

  const TopologySpec& t = c.topology;
  if (t.n.empty()) bad("topology.n", "needs at least one node count");
  for (std::size_t n : t.n) {
    const std::string v = std::to_string(n);
    switch (t.kind) {
      case TopologyKind::kRing:
        if (n < 3) bad("topology.n", "ring needs n >= 3, got " + v);
        break;
      case TopologyKind::kGrid:
        if (n < 4 || !is_perfect_square(n)) {
          bad("topology.n", "grid needs a perfect square >= 4, got " + v);
        }
        break;
      case TopologyKind::kComplete:
      case TopologyKind::kErdosRenyi:
        if (n < 2) bad("topology.n", "needs n >= 2, got " + v);
        break;
    }
  }
  if (t.kind == TopologyKind::kErdosRenyi &&
      !(t.edge_probability > 0.0 && t.edge_probability <= 1.0)) {
    bad("topology.edge_probability", "must lie in (0, 1]");
  }

  if (c.schedule.kind == ScheduleKind::kSimple) {
    if (!(c.schedule.a > 0.0)) bad("schedule.a", "must be > 0");
    if (!(c.schedule.b > 0.0)) bad("schedule.b", "must be > 0");
  } else if (!(c.schedule.theta > 1.0)) {
    bad("schedule.theta", "must be > 1");
  }

  if (c.record.mode == RecordPlan::Mode::kGeometric && !(c.record.ratio > 1.0)) {
    bad("record.ratio", "must be > 1");
  }
  if (c.record.mode == RecordPlan::Mode::kLinear && c.record.stride == 0) {
    bad("record.stride", "must be >= 1");
  }

  if (c.transient.window == 0) bad("transient.window", "must be >= 1");
  if (!(c.transient.factor > 0.0)) bad("transient.factor", "must be > 0");
  if (c.transient.coefficient && !(*c.transient.coefficient > 0.0)) {
    bad("transient.coefficient", "must be > 0");
  }
  if (c.transient.exponent && !(*c.transient.exponent > 0.0)) {
    bad("transient.exponent", "must be > 0");
  }

  if (c.iterations == 0) bad("iterations", "must be >= 1");
  if (c.runs == 0) bad("runs", "must be >= 1");
  if (c.workers == 0) bad("workers", "must be >= 1");
  if (c.out.empty()) bad("out", "must not be empty");
  if (!(c.kappa > 0.0)) bad("kappa", "must be > 0");
  if (c.noise_samples < 2) bad("noise_samples", "must be >= 2");
}

ExperimentConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    fail(ErrorKind::kConfig, std::string("config is not valid JSON: ") + e.what());
  }

  ExperimentConfig c;
  Section top(root, "");
  {
    Section s = top.sub("problem");
    ProblemSpec& p = c.problem;
    s.read_enum("kind", kProblemNames, p.kind);
    s.read("p", p.p);
    s.read("rho", p.rho);
    s.read("noise_var", p.noise_var);
    s.read("feature_second_moment", p.feature_second_moment);
    s.read("sigma", p.sigma);
    s.read("lambda", p.lambda);
    s.read("minibatch", p.minibatch);
    s.read("per_agent", p.per_agent);
    s.read("digit_a", p.digit_a);
    s.read("digit_b", p.digit_b);
    s.read("data_dir", p.data_dir);
    s.read("synthetic_per_class", p.synthetic_per_class);
    s.read("synthetic_side", p.synthetic_side);
    s.read("data_seed", p.data_seed);
    s.finish();
  }
  {
    Section s = top.sub("topology");
    s.read_enum("kind", kTopologyNames, c.topology.kind);
    s.read_counts("n", c.topology.n);
    s.read_enum("weights", kWeightNames, c.topology.weights);
    s.read("edge_probability", c.topology.edge_probability);
    s.read("graph_seed", c.topology.graph_seed);
    s.finish();
  }
  {
    Section s = top.sub("schedule");
    s.read_enum("kind", kScheduleNames, c.schedule.kind);
    s.read("a", c.schedule.a);
    s.read("b", c.schedule.b);
    s.read("theta", c.schedule.theta);
    s.finish();
  }
  {
    Section s = top.sub("record");
    s.read_enum("mode", kRecordNames, c.record.mode);
    s.read("ratio", c.record.ratio);
    s.read("stride", c.record.stride);
    s.finish();
  }
  {
    Section s = top.sub("transient");
    s.read("window", c.transient.window);
    s.read("factor", c.transient.factor);
    s.read("coefficient", c.transient.coefficient);
    s.read("exponent", c.transient.exponent);
    s.finish();
  }
  top.read("iterations", c.iterations);
  top.read("runs", c.runs);
  top.read("seed", c.seed);
  top.read("workers", c.workers);
  top.read("out", c.out);
  top.read("paired_noise", c.paired_noise);
  top.read("kappa", c.kappa);
  top.read("noise_samples", c.noise_samples);
  top.ignore("manifest");
  top.finish();

  validate(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kIo, "cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) fail(ErrorKind::kIo, "error reading config file " + path.string());
  return parse_config(ss.str());
}

std::string to_json(const ExperimentConfig& cfg) {
  return to_json_value(cfg).dump(2) + "\n";
}

std::string manifest_json(
    const ExperimentConfig& cfg,
    const std::vector<std::pair<std::string, std::string>>& entries) {
  json j = to_json_value(cfg);
  json m = json::object();
  for (const auto& [k, v] : entries) m[k] = v;
  j["manifest"] = std::move(m);
  return j.dump(2) + "\n";
}

std::pair<double, double> transient_reference_params(
    const ExperimentConfig& cfg) {
  double coef = 4.0;
  double expo = 2.0;
  if (cfg.problem.kind == ProblemKind::kLogistic) {
    coef = 0.25;
    expo = 1.5;
  } else if (cfg.topology.kind == TopologyKind::kGrid) {
    coef = 7.0;
  }
  return {cfg.transient.coefficient.value_or(coef),
          cfg.transient.exponent.value_or(expo)};
}

}  // namespace dsgdlab
