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

#include "hcboot/bounds.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace hcboot {

namespace {

double sum_smallest_first(std::vector<double> terms) {
  std::sort(terms.begin(), terms.end());
  double total = 0;
  for (double x : terms) total += x;
  return total;
}

void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0, 1]");
}

// Weight of one initial set of the given cardinality out of `universe`.
std::vector<double> cardinality_weights(std::uint64_t universe, double p) {
  std::vector<double> w(universe + 1);
  for (std::uint64_t s = 0; s <= universe; ++s) {
    w[s] = std::pow(p, static_cast<double>(s)) *
           std::pow(1.0 - p, static_cast<double>(universe - s));
  }
  return w;
}

constexpr int kMaxEnumerationDimension = 4;

}  // namespace

double chernoff_bound(std::uint64_t n, double t) {
  if (n < 1) throw std::invalid_argument("chernoff_bound: n must be >= 1");
  if (!(t > 0)) throw std::invalid_argument("chernoff_bound: t must be > 0");
  return std::exp(-2.0 * t * t / static_cast<double>(n));
}

std::vector<double> binomial_pmf(std::uint64_t n, double p) {
  check_probability(p);
  std::vector<double> pmf(n + 1, 0.0);
  if (p == 0.0) {
    pmf[0] = 1.0;
    return pmf;
  }
  if (p == 1.0) {
    pmf[n] = 1.0;
    return pmf;
  }
  const double log_odds = std::log(p) - std::log1p(-p);
  const std::uint64_t mode =
      std::min<std::uint64_t>(n, static_cast<std::uint64_t>(std::floor((n + 1) * p)));
  std::vector<double> log_w(n + 1);
  log_w[mode] = 0.0;
  for (std::uint64_t j = mode + 1; j <= n; ++j) {
    log_w[j] = log_w[j - 1] + std::log(static_cast<double>(n - j + 1) / j) + log_odds;
  }
  for (std::uint64_t j = mode; j-- > 0;) {
    log_w[j] = log_w[j + 1] + std::log(static_cast<double>(j + 1) / (n - j)) - log_odds;
  }
  std::vector<double> w(n + 1);
  for (std::uint64_t j = 0; j <= n; ++j) w[j] = std::exp(log_w[j]);
  const double log_total = std::log(sum_smallest_first(w));
  for (std::uint64_t j = 0; j <= n; ++j) pmf[j] = std::exp(log_w[j] - log_total);
  return pmf;
}

double exact_binom_tail(std::uint64_t n, double p, std::uint64_t m) {
  if (m > n + 1) throw std::invalid_argument("exact_binom_tail: m must be <= n + 1");
  check_probability(p);
  if (m == 0) return 1.0;
  if (m == n + 1) return 0.0;
  const std::vector<double> pmf = binomial_pmf(n, p);
  return std::min(1.0, sum_smallest_first({pmf.begin() + static_cast<std::ptrdiff_t>(m),
                                           pmf.end()}));
}

double small_p_tail_bound(std::uint64_t n, double p, std::uint64_t m) {
  check_probability(p);
  const double nn = static_cast<double>(n);
  if (p * nn * nn >= 1.0) {
    throw std::domain_error("small_p_tail_bound: requires p n^2 < 1, got " +
                            std::to_string(p * nn * nn));
  }
  if (m < 1 || m > n) throw std::invalid_argument("small_p_tail_bound: m must lie in [1, n]");
  return 2.0 * std::pow(p, static_cast<double>(m) / 2.0);
}

double WeightedBinomialSpec::spread() const {
  double total = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double w = static_cast<double>(i + 1);
    total += w * w * static_cast<double>(d[i]);
  }
  return total;
}

double WeightedBinomialSpec::mean() const {
  double total = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    total += static_cast<double>(i + 1) * static_cast<double>(d[i]) * p;
  }
  return total;
}

std::uint64_t WeightedBinomialSpec::support_max() const {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < d.size(); ++i) total += (i + 1) * d[i];
  return total;
}

double weighted_binom_tail_bound(const WeightedBinomialSpec& spec, double t) {
  if (!(t > 0)) throw std::invalid_argument("weighted_binom_tail_bound: t must be > 0");
  const double spread = spec.spread();
  if (!(spread > 0)) throw std::invalid_argument("weighted_binom_tail_bound: D(k) must be > 0");
  return std::pow(2.0 * t, spec.k() - 1) * std::exp(-2.0 * t * t / spread);
}

double weighted_binom_tail_exact(const WeightedBinomialSpec& spec, double threshold) {
  check_probability(spec.p);
  const std::uint64_t top = spec.support_max();
  if (top > kMaxWeightedSupport) {
    throw std::invalid_argument("weighted_binom_tail_exact: support " + std::to_string(top) +
                                " exceeds cap " + std::to_string(kMaxWeightedSupport));
  }
  std::vector<double> dist(top + 1, 0.0);
  dist[0] = 1.0;
  std::uint64_t reach = 0;
  for (std::size_t i = 0; i < spec.d.size(); ++i) {
    if (spec.d[i] == 0) continue;
    const std::uint64_t weight = i + 1;
    const std::vector<double> pmf = binomial_pmf(spec.d[i], spec.p);
    std::vector<double> next(top + 1, 0.0);
    for (std::uint64_t y = 0; y <= reach; ++y) {
      if (dist[y] == 0.0) continue;
      for (std::uint64_t x = 0; x < pmf.size(); ++x) {
        next[y + weight * x] += dist[y] * pmf[x];
      }
    }
    reach += weight * spec.d[i];
    dist = std::move(next);
  }
  if (threshold <= 0) return 1.0;
  const double first = std::ceil(threshold);
  if (first > static_cast<double>(top)) return 0.0;
  const auto start = static_cast<std::ptrdiff_t>(first);
  return std::min(1.0, sum_smallest_first({dist.begin() + start, dist.end()}));
}

double normal_upper_tail(double z) {
  if (std::isinf(z)) return z > 0 ? 0.0 : 1.0;
  return 0.5 * std::erfc(z / std::sqrt(2.0));
}

bool is_increasing(int n, const SetPredicate& pred) {
  if (n < 1 || n > kMaxEnumerationDimension) {
    throw std::invalid_argument("is_increasing: n must lie in [1, 4]");
  }
  const unsigned vertices = 1u << n;
  const std::uint64_t configs = std::uint64_t{1} << vertices;
  std::vector<char> value(configs);
  for (std::uint64_t s = 0; s < configs; ++s) {
    value[s] = pred(VertexSet::from_bits(n, s)) ? 1 : 0;
  }
  for (std::uint64_t s = 0; s < configs; ++s) {
    if (!value[s]) continue;
    for (unsigned v = 0; v < vertices; ++v) {
      if (!value[s | (std::uint64_t{1} << v)]) return false;
    }
  }
  return true;
}

FkgReport fkg_exact_check(int n, double p, const SetPredicate& event_a,
                          const SetPredicate& event_b, MonotoneAudit audit) {
  if (n < 1 || n > kMaxEnumerationDimension) {
    throw std::invalid_argument("fkg_exact_check: n must lie in [1, 4]");
  }
  check_probability(p);
  if (audit == MonotoneAudit::kExhaustive || n <= 3) {
    if (!is_increasing(n, event_a)) {
      throw std::invalid_argument("fkg_exact_check: event A is not increasing");
    }
    if (!is_increasing(n, event_b)) {
      throw std::invalid_argument("fkg_exact_check: event B is not increasing");
    }
  }
  const unsigned vertices = 1u << n;
  const std::uint64_t configs = std::uint64_t{1} << vertices;
  const std::vector<double> weight = cardinality_weights(vertices, p);
  std::vector<double> a_terms, b_terms, ab_terms;
  for (std::uint64_t s = 0; s < configs; ++s) {
    const VertexSet set = VertexSet::from_bits(n, s);
    const double w = weight[std::popcount(s)];
    const bool a = event_a(set);
    const bool b = event_b(set);
    if (a) a_terms.push_back(w);
    if (b) b_terms.push_back(w);
    if (a && b) ab_terms.push_back(w);
  }
  FkgReport report;
  report.p_a = sum_smallest_first(std::move(a_terms));
  report.p_b = sum_smallest_first(std::move(b_terms));
  report.p_a_and_b = sum_smallest_first(std::move(ab_terms));
  report.p_a_times_p_b = report.p_a * report.p_b;
  report.holds = report.p_a_and_b >= report.p_a_times_p_b - 1e-12;
  return report;
}

IndependenceReport independence_check(const CubeSpec& spec,
                                      const ThresholdSchedule& schedule,
                                      std::uint64_t steps,
                                      std::span<const Vertex> vertices, double p) {
  if (spec.n() > kMaxEnumerationDimension) {
    throw std::invalid_argument("independence_check: requires 2^n <= 16");
  }
  check_probability(p);
  for (Vertex y : vertices) {
    if (!spec.contains(y)) throw std::invalid_argument("independence_check: vertex outside cube");
  }
  const Engine engine(spec);
  const unsigned universe = static_cast<unsigned>(spec.num_vertices());
  const std::uint64_t configs = std::uint64_t{1} << universe;
  const std::vector<double> weight = cardinality_weights(universe, p);

  std::vector<std::vector<double>> marginal_terms(vertices.size());
  std::vector<double> joint_terms;
  for (std::uint64_t s = 0; s < configs; ++s) {
    VertexSet a = VertexSet::from_bits(spec.n(), s);
    for (std::uint64_t i = 1; i <= steps; ++i) a = engine.step(a, schedule.at(i));
    const double w = weight[std::popcount(s)];
    bool all = true;
    for (std::size_t j = 0; j < vertices.size(); ++j) {
      if (a.contains(vertices[j])) {
        marginal_terms[j].push_back(w);
      } else {
        all = false;
      }
    }
    if (all) joint_terms.push_back(w);
  }

  IndependenceReport report;
  report.joint = sum_smallest_first(std::move(joint_terms));
  report.product = 1.0;
  for (auto& terms : marginal_terms) {
    report.marginals.push_back(sum_smallest_first(std::move(terms)));
    report.product *= report.marginals.back();
  }
  report.abs_difference = std::abs(report.joint - report.product);
  report.factorizes = report.abs_difference <= 1e-12;
  report.min_pairwise_distance = spec.n() + 1;
  for (std::size_t a = 0; a < vertices.size(); ++a) {
    for (std::size_t b = a + 1; b < vertices.size(); ++b) {
      report.min_pairwise_distance =
          std::min(report.min_pairwise_distance, hamming(vertices[a], vertices[b]));
    }
  }
  return report;
}

}  // namespace hcboot
