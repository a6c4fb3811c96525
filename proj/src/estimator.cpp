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

#include "hcboot/estimator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include <boost/math/distributions/normal.hpp>

#include "hcboot/rng.hpp"

namespace hcboot {

namespace {

constexpr std::size_t kParallelSampleWords = 1024;

std::uint64_t sample_word(const CounterRng& rng, std::uint64_t word,
                          std::uint64_t threshold, std::uint64_t lanes) {
  std::uint64_t less = 0;
  std::uint64_t undecided = lanes;
  for (int j = 0; j < 64 && undecided != 0; ++j) {
    const std::uint64_t r = rng(word * 64 + static_cast<std::uint64_t>(j));
    if ((threshold >> (63 - j)) & 1u) {
      less |= undecided & ~r;
      undecided &= r;
    } else {
      undecided &= ~r;
    }
  }
  return less;
}

void check_plan(const TrialPlan& plan) {
  if (!(plan.p >= 0.0 && plan.p <= 1.0)) {
    throw std::invalid_argument("trial plan: p must lie in [0, 1]");
  }
  if (plan.trials < 1) throw std::invalid_argument("trial plan: trials must be >= 1");
}

PercProbEstimate make_estimate(std::uint64_t successes, std::uint64_t trials,
                               double confidence) {
  PercProbEstimate e;
  e.successes = successes;
  e.trials = trials;
  e.confidence = confidence;
  e.p_hat = static_cast<double>(successes) / static_cast<double>(trials);
  const Interval ci = wilson_interval(successes, trials, confidence);
  e.ci_low = std::min(ci.low, e.p_hat);
  e.ci_high = std::max(ci.high, e.p_hat);
  return e;
}

}  // namespace

std::uint64_t probability_to_fixed(double p) {
  if (!(p >= 0.0 && p < 1.0)) {
    throw std::invalid_argument("probability_to_fixed: p must lie in [0, 1)");
  }
  return static_cast<std::uint64_t>(std::ldexp(p, 64));
}

std::uint64_t vertex_uniform(std::uint64_t seed, std::uint64_t trial, Vertex v) {
  const CounterRng rng(seed, trial);
  const std::uint64_t word = v >> 6;
  const unsigned lane = v & 63;
  std::uint64_t u = 0;
  for (int j = 0; j < 64; ++j) {
    const std::uint64_t r = rng(word * 64 + static_cast<std::uint64_t>(j));
    u |= ((r >> lane) & 1u) << (63 - j);
  }
  return u;
}

VertexSet sample_initial(const CubeSpec& spec, double p, std::uint64_t seed,
                         std::uint64_t trial) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("sample_initial: p must lie in [0, 1]");
  }
  if (p == 1.0) return VertexSet::full(spec.n());
  VertexSet out(spec.n());
  if (p == 0.0) return out;
  const CounterRng rng(seed, trial);
  const std::uint64_t threshold = probability_to_fixed(p);
  const std::uint64_t lanes = out.word_mask();
  std::span<std::uint64_t> words = out.mutable_words();
  const std::size_t nw = words.size();
  if (nw >= kParallelSampleWords) {
#pragma omp parallel for schedule(static)
    for (std::size_t w = 0; w < nw; ++w) {
      words[w] = sample_word(rng, w, threshold, lanes);
    }
  } else {
    for (std::size_t w = 0; w < nw; ++w) {
      words[w] = sample_word(rng, w, threshold, lanes);
    }
  }
  return out;
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials,
                         double confidence) {
  if (trials == 0 || successes > trials) {
    throw std::invalid_argument("wilson_interval: need 0 <= successes <= trials, trials > 0");
  }
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw std::invalid_argument("wilson_interval: confidence must lie in (0, 1)");
  }
  const double z = boost::math::quantile(boost::math::normal(), 0.5 + confidence / 2.0);
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (phat + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
  Interval ci{std::max(0.0, center - half), std::min(1.0, center + half)};
  if (successes == 0) ci.low = 0.0;
  if (successes == trials) ci.high = 1.0;
  return ci;
}

PercProbEstimate percolation_probability(const TrialPlan& plan, double confidence) {
  check_plan(plan);
  const Engine engine(plan.spec);
  const auto trials = static_cast<std::int64_t>(plan.trials);
  std::uint64_t successes = 0;
#pragma omp parallel for schedule(dynamic, 16) reduction(+ : successes)
  for (std::int64_t i = 0; i < trials; ++i) {
    const VertexSet a0 =
        sample_initial(plan.spec, plan.p, plan.seed, static_cast<std::uint64_t>(i));
    if (engine.percolates(a0, plan.schedule)) ++successes;
  }
  return make_estimate(successes, plan.trials, confidence);
}

std::vector<std::uint64_t> percolating_sets_by_size(const CubeSpec& spec,
                                                    const ThresholdSchedule& schedule) {
  if (spec.n() > kMaxExactDimension) {
    throw std::invalid_argument("exact percolation probability requires 2^n <= 16, got n=" +
                                std::to_string(spec.n()));
  }
  const Engine engine(spec);
  const unsigned universe = static_cast<unsigned>(spec.num_vertices());
  std::vector<std::uint64_t> counts(universe + 1, 0);
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << universe); ++s) {
    if (engine.percolates(VertexSet::from_bits(spec.n(), s), schedule)) {
      ++counts[std::popcount(s)];
    }
  }
  return counts;
}

double exact_percolation_probability(const CubeSpec& spec,
                                     const ThresholdSchedule& schedule, double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("exact_percolation_probability: p must lie in [0, 1]");
  }
  const std::vector<std::uint64_t> counts = percolating_sets_by_size(spec, schedule);
  const std::size_t universe = counts.size() - 1;
  std::vector<double> terms;
  for (std::size_t s = 0; s <= universe; ++s) {
    if (counts[s] == 0) continue;
    terms.push_back(static_cast<double>(counts[s]) *
                    std::pow(p, static_cast<double>(s)) *
                    std::pow(1.0 - p, static_cast<double>(universe - s)));
  }
  std::sort(terms.begin(), terms.end());
  double total = 0;
  for (double t : terms) total += t;
  return total;
}

PcEstimate estimate_pc(const CubeSpec& spec, const ThresholdSchedule& schedule,
                       const PcSearchOptions& options) {
  if (options.trials_per_point < 1000) {
    throw std::invalid_argument("estimate_pc: trials_per_point must be >= 1000");
  }
  if (!(options.p_tolerance > 0.0 && options.p_tolerance < 1.0)) {
    throw std::invalid_argument("estimate_pc: p_tolerance must lie in (0, 1)");
  }
  if (options.widen_factor < 1) throw std::invalid_argument("estimate_pc: widen_factor must be >= 1");

  // Endpoints are settled analytically: A_0 = ∅ never grows once every
  // threshold is >= 1, and A_0 = V has already percolated.
  const Engine engine(spec);
  if (engine.percolates(VertexSet::empty(spec.n()), schedule)) {
    throw std::invalid_argument("estimate_pc: percolation probability at p=0 exceeds 1/2");
  }
  if (!engine.percolates(VertexSet::full(spec.n()), schedule)) {
    throw std::invalid_argument("estimate_pc: percolation probability at p=1 is below 1/2");
  }

  PcEstimate result;
  const double target = result.target;
  TrialPlan plan{spec, schedule, 0.5, options.trials_per_point, options.seed};
  while (result.hi - result.lo > options.p_tolerance) {
    plan.p = 0.5 * (result.lo + result.hi);
    plan.trials = options.trials_per_point;
    PercProbEstimate est = percolation_probability(plan, options.confidence);
    result.evaluations.push_back({plan.p, est});
    const auto ambiguous = [&](const PercProbEstimate& e) {
      return e.ci_low <= target && target <= e.ci_high;
    };
    if (ambiguous(est) && options.widen_factor > 1) {
      plan.trials = options.trials_per_point * options.widen_factor;
      est = percolation_probability(plan, options.confidence);
      result.evaluations.push_back({plan.p, est});
    }
    if (ambiguous(est)) {
      result.ci_limited = true;
      break;
    }
    if (est.p_hat > target) {
      result.hi = plan.p;
    } else {
      result.lo = plan.p;
    }
  }
  return result;
}

StabilizationProfile stabilization_profile(const TrialPlan& plan, double confidence) {
  check_plan(plan);
  const Engine engine(plan.spec);
  const auto trials = static_cast<std::int64_t>(plan.trials);
  std::vector<std::uint64_t> steps(plan.trials);
  RunOptions opts;
  opts.keep_final = false;
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t i = 0; i < trials; ++i) {
    const VertexSet a0 =
        sample_initial(plan.spec, plan.p, plan.seed, static_cast<std::uint64_t>(i));
    steps[static_cast<std::size_t>(i)] = engine.run(a0, plan.schedule, opts).fixpoint_step;
  }
  StabilizationProfile profile;
  std::uint64_t by1 = 0;
  std::uint64_t by2 = 0;
  for (std::uint64_t s : steps) {
    ++profile.fixpoint_histogram[s];
    if (s <= 1) ++by1;
    if (s <= 2) ++by2;
  }
  profile.stable_by_step1 = make_estimate(by1, plan.trials, confidence);
  profile.stable_by_step2 = make_estimate(by2, plan.trials, confidence);
  return profile;
}

}  // namespace hcboot
