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

#include "hcboot/experiment.hpp"

#include <gtest/gtest.h>
#include <omp.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

namespace hcboot {
namespace {

std::vector<std::string> split_args(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> fields_of(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

TEST(CeilPolicy, RoundsUpAndSnaps) {
  EXPECT_EQ(ceil_policy(9.19), 10);
  EXPECT_EQ(ceil_policy(3.0), 3);
  EXPECT_EQ(ceil_policy(27.5), 28);
  EXPECT_EQ(ceil_policy(10.0 + 1e-12), 10);
  EXPECT_EQ(ceil_policy(0.2), 1);
}

TEST(ParseConfig, PowerThresholdWithPc) {
  const ExperimentConfig c =
      parse_config(split_args("--n 16 --k 1 --threshold power:0.8 --variant boot --pc "
                              "--trials 20000 --seed 7"));
  EXPECT_EQ(c.p.kind, ProbabilitySpec::Kind::kAutoPc);
  EXPECT_EQ(c.trials, 20000u);
  EXPECT_EQ(c.seed, 7u);
  const ResolvedParams r = resolve(c, 16);
  EXPECT_EQ(r.r, 10);
  EXPECT_EQ(r.degree, 16u);
  EXPECT_EQ(r.t, 0);
}

TEST(ParseConfig, MajorityBoot3) {
  const ExperimentConfig c = parse_config(split_args(
      "--n 10 --k 2 --threshold majority --variant boot3 --t k_power:1 --p 0.45"));
  const ResolvedParams r = resolve(c, 10);
  EXPECT_EQ(r.degree, 55u);
  EXPECT_EQ(r.r, 28);
  EXPECT_EQ(r.t, 10);
  EXPECT_EQ(c.p.kind, ProbabilitySpec::Kind::kLiteral);
  EXPECT_EQ(c.p.value, 0.45);
  EXPECT_EQ(parse_config(split_args("--n 10 --k 2 --threshold majority --variant boot3:k_power:1")).t,
            c.t);
}

TEST(ParseConfig, Errors) {
  EXPECT_THROW(parse_config(split_args("--n 4 --k 5")), ConfigError);
  EXPECT_THROW(parse_config(split_args("--n 4 --bogus 1")), ConfigError);
  EXPECT_THROW(parse_config(split_args("--n 4 --threshold const:0")), ConfigError);
  EXPECT_THROW(parse_config(split_args("--n 8 --threshold const:4 --variant boot2 --t 2")),
               ConfigError);
  EXPECT_THROW(parse_config(split_args("--n 8 --threshold fancy")), ConfigError);
  EXPECT_THROW(parse_config(split_args("--n 8 --p sweep:0:1")), ConfigError);
  EXPECT_THROW(parse_config(split_args("--n 8 --pc --trials 10")), ConfigError);
  EXPECT_THROW(parse_config(split_args("--n 8 --format xml")), ConfigError);
  EXPECT_THROW(parse_config(split_args("--preset theorem9")), ConfigError);
  EXPECT_THROW(parse_config(split_args("--help")), HelpRequested);
}

TEST(ParseConfig, SpecsRoundTripThroughText) {
  for (const char* s : {"const:7", "power:0.8", "majority"}) {
    EXPECT_EQ(ThresholdSpec::parse(ThresholdSpec::parse(s).str()), ThresholdSpec::parse(s));
  }
  for (const char* s : {"3", "eps2_na:0.05", "half_power:0.15", "linear:10", "k_power:1"}) {
    EXPECT_EQ(RelaxationSpec::parse(RelaxationSpec::parse(s).str()), RelaxationSpec::parse(s));
  }
  for (const char* s : {"0.25", "sweep:0.1:0.9:9", "auto-pc", "ref:0.8"}) {
    EXPECT_EQ(ProbabilitySpec::parse(ProbabilitySpec::parse(s).str()), ProbabilitySpec::parse(s));
  }
}

// Resolved integers agree with a direct long-double recomputation.
TEST(Resolve, MatchesIndependentRecomputation) {
  const auto up = [](long double x) {
    const long double r = std::round(x);
    return static_cast<std::int64_t>(std::abs(x - r) <= 1e-9L * std::max(1.0L, std::abs(x))
                                         ? r
                                         : std::ceil(x));
  };
  for (int n = 4; n <= 28; ++n) {
    for (double a : {0.7, 0.75, 0.8, 0.9}) {
      ExperimentConfig c;
      c.n_values = {n};
      c.threshold = ThresholdSpec::parse("power:" + std::to_string(a));
      c.threshold.value = a;
      c.variant = Variant::kBoot1;
      c.t = RelaxationSpec{RelaxationSpec::Kind::kEps2Na, 0.05};
      const long double na = std::pow(static_cast<long double>(n), static_cast<long double>(a));
      const std::int64_t r = up(na);
      const std::int64_t t = up(0.05L * na);
      if (r - t < 1) continue;
      const ResolvedParams p = resolve(c, n);
      EXPECT_EQ(p.r, r) << n << " " << a;
      EXPECT_EQ(p.t, t) << n << " " << a;
    }
  }
  for (int n = 4; n <= 16; n += 2) {
    ExperimentConfig c;
    c.n_values = {n};
    c.k = 2;
    c.threshold = ThresholdSpec::parse("majority");
    const std::int64_t big_n = n + n * (n - 1) / 2;
    EXPECT_EQ(resolve(c, n).degree, static_cast<std::uint64_t>(big_n));
    EXPECT_EQ(resolve(c, n).r, (big_n + 1) / 2);
  }
}

TEST(Presets, Lemma29Resolves) {
  const ExperimentConfig c = parse_config(split_args("--preset lemma29"));
  const ResolvedParams r = resolve(c, 12);
  EXPECT_EQ(r.r, 8);  // ceil(12^0.8) = ceil(7.30)
  EXPECT_EQ(r.t, 1);  // ceil(0.05 * 7.30)
  EXPECT_TRUE(c.stabilization);
  const ExperimentConfig t3 = parse_config(split_args("--preset theorem3 --trials 5000"));
  EXPECT_EQ(t3.trials, 5000u);
  EXPECT_EQ(t3.k, 2);
  EXPECT_EQ(t3.n_values, (std::vector<int>{8, 10, 12}));
}

TEST(Emit, SweepRowsHaveEmptyBracket) {
  const ExperimentConfig c = parse_config(split_args("--n 6 --threshold const:2 --p 0.3 --trials 500"));
  const RunRecord rec = run_experiment(c);
  const auto lines = lines_of(to_csv(rec));
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0], kCsvHeader);
  const auto f = fields_of(lines[1]);
  ASSERT_EQ(f.size(), 16u);
  EXPECT_EQ(f[0], "custom");
  EXPECT_EQ(f[1], "6");
  EXPECT_EQ(f[3], "boot");
  EXPECT_EQ(f[4], "2");
  EXPECT_EQ(f[6], "0.3");
  EXPECT_EQ(f[7], "500");
  EXPECT_EQ(f[12], "");
  EXPECT_EQ(f[13], "");
  EXPECT_EQ(f[14], "1");
  EXPECT_EQ(f[15], policy_string(c));
}

TEST(Emit, PcRunsAddSummaryRow) {
  const ExperimentConfig c =
      parse_config(split_args("--n 2 --threshold const:2 --pc --trials 2000 --tolerance 0.1"));
  const RunRecord rec = run_experiment(c);
  ASSERT_EQ(rec.runs.size(), 1u);
  ASSERT_TRUE(rec.runs[0].pc.has_value());
  const auto lines = lines_of(to_csv(rec));
  EXPECT_EQ(lines.size(), 1 + rec.runs[0].points.size() + 1);
  const auto last = fields_of(lines.back());
  EXPECT_EQ(last[6], "");
  EXPECT_EQ(last[12], format_double(rec.runs[0].pc->lo));
  EXPECT_EQ(last[13], format_double(rec.runs[0].pc->hi));
}

TEST(Emit, TrivialSweepIsExact) {
  const ExperimentConfig c =
      parse_config(split_args("--n 7 --threshold const:3 --p sweep:0:1:2 --trials 300"));
  const RunRecord rec = run_experiment(c);
  ASSERT_EQ(rec.runs[0].points.size(), 2u);
  EXPECT_EQ(rec.runs[0].points[0].estimate.p_hat, 0.0);
  EXPECT_EQ(rec.runs[0].points[1].estimate.p_hat, 1.0);
}

TEST(FormatDouble, TenSignificantDigits) {
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(1.0 / 3), "0.3333333333");
  EXPECT_EQ(format_double(0.0), "0");
  EXPECT_EQ(format_double(1e-12), "1e-12");
}

TEST(Json, RecordRoundTrip) {
  const ExperimentConfig c = parse_config(
      split_args("--n 6,8 --threshold const:2 --variant boot1:1 --p sweep:0.1:0.4:3 "
                 "--trials 400 --stabilization --seed 99"));
  const RunRecord rec = run_experiment(c);
  const RunRecord back = record_from_json(to_json(rec));
  EXPECT_EQ(back, rec);
  EXPECT_EQ(to_json(back), to_json(rec));
  EXPECT_EQ(config_from_json(config_to_json(c)), c);
}

TEST(Json, RerunFromConfigEchoIsByteIdentical) {
  const ExperimentConfig c = parse_config(
      split_args("--preset theorem3 --n 6 --trials 2000 --tolerance 0.05 --seed 5"));
  RunRecord first = run_experiment(c);
  const RunRecord parsed = record_from_json(to_json(first));
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  RunRecord serial = run_experiment(parsed.config);
  omp_set_num_threads(4);
  RunRecord threaded = run_experiment(parsed.config);
  omp_set_num_threads(saved);
  first.wall_time_seconds = serial.wall_time_seconds = threaded.wall_time_seconds = 0;
  EXPECT_EQ(to_json(serial), to_json(first));
  EXPECT_EQ(to_json(threaded), to_json(first));
  EXPECT_EQ(to_csv(serial), to_csv(first));
}

TEST(References, Theorem1Values) {
  ExperimentConfig c;
  apply_preset(c, "theorem1");
  c.trials = 1000;
  c.n_values = {12};
  c.p = ProbabilitySpec::parse("0.6");
  const RunRecord rec = run_experiment(c);
  ASSERT_FALSE(rec.runs[0].references.empty());
  EXPECT_EQ(rec.runs[0].references[0].first, "n^(a-1)");
  EXPECT_NEAR(rec.runs[0].references[0].second, 0.6084, 1e-4);
}

}  // namespace
}  // namespace hcboot
