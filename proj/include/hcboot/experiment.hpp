// Copyright 2026 The hcboot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HCBOOT_EXPERIMENT_HPP_
#define HCBOOT_EXPERIMENT_HPP_

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hcboot/engine.hpp"
#include "hcboot/estimator.hpp"

namespace hcboot {

inline constexpr std::string_view kVersion = "0.1.0";

/// Inconsistent or malformed configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// --help was given; what() holds the usage text.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Real-valued parameters become integers by ceiling. Values within 1e-9 of
/// an integer snap to it first, so e.g. 16^0.5 resolves to 4.
std::int64_t ceil_policy(double x);

struct ThresholdSpec {
  enum class Kind { kConst, kPower, kMajority };
  Kind kind = Kind::kConst;
  double value = 1;  // r for const, a for power

  /// "const:<r>", "power:<a>" or "majority".
  static ThresholdSpec parse(std::string_view text);
  std::string str() const;
  bool operator==(const ThresholdSpec&) const = default;
};

struct RelaxationSpec {
  enum class Kind { kLiteral, kEps2Na, kHalfPower, kLinear, kKPower };
  Kind kind = Kind::kLiteral;
  double value = 0;

  /// "<int>", "eps2_na:<eps>" (eps n^a), "half_power:<delta>"
  /// (n^(a/2+delta)/10), "linear:<c>" (c n) or "k_power:<c>" (c n^(k/2)).
  static RelaxationSpec parse(std::string_view text);
  std::string str() const;
  bool operator==(const RelaxationSpec&) const = default;
};

struct ProbabilitySpec {
  enum class Kind { kLiteral, kSweep, kAutoPc, kReference };
  Kind kind = Kind::kLiteral;
  double value = 0.5;  // literal p, or the factor c in p = c n^(a-1)
  double start = 0;
  double stop = 1;
  int points = 1;

  /// "<p>", "sweep:<start>:<stop>:<points>", "auto-pc" or "ref:<c>".
  static ProbabilitySpec parse(std::string_view text);
  std::string str() const;
  bool operator==(const ProbabilitySpec&) const = default;
};

struct ExperimentConfig {
  std::string experiment = "custom";
  std::vector<int> n_values{10};
  int k = 1;
  ThresholdSpec threshold;
  Variant variant = Variant::kBoot;
  RelaxationSpec t;
  ProbabilitySpec p;
  std::uint64_t trials = 10'000;
  std::uint64_t seed = 1;
  double tolerance = 0.01;
  double confidence = kDefaultConfidence;
  double delta = 0.15;   // second-order exponent used by the theorem2 references
  bool stabilization = false;
  std::string output;    // empty: stdout
  std::string format = "csv";

  bool operator==(const ExperimentConfig&) const = default;
};

/// Integers resolved for one dimension n.
struct ResolvedParams {
  int n = 0;
  int k = 1;
  std::uint64_t degree = 0;  // N
  std::int64_t r = 0;
  std::int64_t t = 0;
  bool operator==(const ResolvedParams&) const = default;
};

/// Throws ConfigError on any inconsistency (k > n, threshold < 1, a
/// relaxation that drives a threshold below 1, formulas needing an exponent
/// a without a power threshold, ...).
ResolvedParams resolve(const ExperimentConfig& config, int n);

/// Semicolon-separated rounding and parameter metadata for output rows.
std::string policy_string(const ExperimentConfig& config);

/// Parses CLI arguments (without the program name). Presets fill defaults;
/// explicit flags override them. Throws ConfigError.
ExperimentConfig parse_config(const std::vector<std::string>& args);

/// Applies a named preset: theorem1, theorem2, theorem3 or lemma29.
void apply_preset(ExperimentConfig& config, std::string_view name);

struct StabilizationSummary {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> fixpoint_histogram;
  PercProbEstimate stable_by_step1;
  PercProbEstimate stable_by_step2;
  bool operator==(const StabilizationSummary&) const = default;
};

struct PointResult {
  double p = 0;
  PercProbEstimate estimate;
  std::optional<StabilizationSummary> stabilization;
  bool operator==(const PointResult&) const = default;
};

struct PcBracket {
  double lo = 0;
  double hi = 1;
  double target = 0.5;
  bool ci_limited = false;
  bool operator==(const PcBracket&) const = default;
};

struct RunResult {
  ResolvedParams params;
  std::vector<PointResult> points;
  std::optional<PcBracket> pc;
  /// Named reference values for presets, e.g. {"n^(a-1)", 0.5743}.
  std::vector<std::pair<std::string, double>> references;
  bool operator==(const RunResult&) const = default;
};

struct RunRecord {
  std::string version{kVersion};
  ExperimentConfig config;
  std::vector<RunResult> runs;
  double wall_time_seconds = 0;
  bool operator==(const RunRecord&) const = default;
};

/// Deterministic given the config; only wall_time_seconds varies.
RunRecord run_experiment(const ExperimentConfig& config);

std::string to_csv(const RunRecord& record);
std::string to_json(const RunRecord& record);
RunRecord record_from_json(std::string_view text);

std::string config_to_json(const ExperimentConfig& config);
/// Accepts a config object or a whole RunRecord (its "config" member).
ExperimentConfig config_from_json(std::string_view text);

/// Writes to_csv or to_json according to format to the configured output
/// (stdout when empty). Throws std::runtime_error on I/O failure.
void emit_results(const RunRecord& record, std::string_view format,
                  const std::string& output, std::ostream& stdout_stream);

inline constexpr std::string_view kCsvHeader =
    "experiment,n,k,variant,r,t,p,trials,successes,p_hat,ci_low,ci_high,"
    "pc_lo,pc_hi,seed,policy";

/// 10 significant digits, '.' separator, independent of locale.
std::string format_double(double x);

}  // namespace hcboot

#endif  // HCBOOT_EXPERIMENT_HPP_
