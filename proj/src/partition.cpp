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

#include "hcboot/partition.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace hcboot {

namespace {

std::string format_subset(std::uint64_t s) {
  std::string out;
  while (s != 0) {
    if (!out.empty()) out += ',';
    out += std::to_string(std::countr_zero(s) + 1);
    s &= s - 1;
  }
  return out;
}

// Lexicographic order on ascending element lists.
bool subset_less(std::uint64_t a, std::uint64_t b) {
  while (a != 0 && b != 0) {
    const int ea = std::countr_zero(a);
    const int eb = std::countr_zero(b);
    if (ea != eb) return ea < eb;
    a &= a - 1;
    b &= b - 1;
  }
  return a == 0 && b != 0;
}

bool factor_less(const std::vector<std::uint64_t>& a,
                 const std::vector<std::uint64_t>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                      subset_less);
}

void check_factorization_args(int n, int k, std::uint64_t cap) {
  if (k < 1 || n < 1 || n > 31 || k > n) {
    throw std::invalid_argument("baranyai: need 1 <= k <= n <= 31");
  }
  if (n % k != 0) {
    throw std::invalid_argument("baranyai: no 1-factorization exists since " +
                                std::to_string(k) + " does not divide " +
                                std::to_string(n));
  }
  if (binomial(n, k) > cap) {
    throw std::invalid_argument("baranyai: C(n,k) = " +
                                std::to_string(binomial(n, k)) +
                                " exceeds the size cap " + std::to_string(cap));
  }
}

// Dinic max flow on a small dense-ish network.
class MaxFlow {
 public:
  explicit MaxFlow(int nodes) : adj_(nodes), level_(nodes), iter_(nodes) {}

  int add_edge(int from, int to, std::int64_t cap) {
    adj_[from].push_back(static_cast<int>(edges_.size()));
    edges_.push_back({to, cap});
    adj_[to].push_back(static_cast<int>(edges_.size()));
    edges_.push_back({from, 0});
    return static_cast<int>(edges_.size()) - 2;
  }

  std::int64_t flow_on(int edge) const { return edges_[edge ^ 1].cap; }

  std::int64_t run(int s, int t) {
    std::int64_t total = 0;
    while (bfs(s, t)) {
      std::fill(iter_.begin(), iter_.end(), 0);
      while (std::int64_t f = dfs(s, t, std::numeric_limits<std::int64_t>::max())) {
        total += f;
      }
    }
    return total;
  }

 private:
  struct Edge {
    int to;
    std::int64_t cap;
  };

  bool bfs(int s, int t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<int> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int id : adj_[u]) {
        const Edge& e = edges_[id];
        if (e.cap > 0 && level_[e.to] < 0) {
          level_[e.to] = level_[u] + 1;
          q.push(e.to);
        }
      }
    }
    return level_[t] >= 0;
  }

  std::int64_t dfs(int u, int t, std::int64_t f) {
    if (u == t) return f;
    for (std::size_t& i = iter_[u]; i < adj_[u].size(); ++i) {
      const int id = adj_[u][i];
      Edge& e = edges_[id];
      if (e.cap > 0 && level_[e.to] == level_[u] + 1) {
        const std::int64_t d = dfs(e.to, t, std::min(f, e.cap));
        if (d > 0) {
          e.cap -= d;
          edges_[id ^ 1].cap += d;
          return d;
        }
      }
    }
    return 0;
  }

  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> level_;
  std::vector<std::size_t> iter_;
};

// Adds element `elem` to exactly one part of every slot. Returns false if the
// flow falls short of saturating every slot.
bool extend_by_element(int n, int k, int elem,
                       std::vector<std::vector<std::uint64_t>>& slots) {
  const int m = static_cast<int>(slots.size());
  std::unordered_map<std::uint64_t, int> type_index;
  std::vector<std::uint64_t> types;
  for (const auto& slot : slots) {
    for (std::uint64_t part : slot) {
      if (std::popcount(part) < k && type_index.emplace(part, types.size()).second) {
        types.push_back(part);
      }
    }
  }
  const int source = 0;
  const int sink = 1 + m + static_cast<int>(types.size());
  MaxFlow flow(sink + 1);
  // Per slot: (type, edge id) pairs.
  std::vector<std::vector<std::pair<int, int>>> slot_edges(m);
  for (int j = 0; j < m; ++j) {
    flow.add_edge(source, 1 + j, 1);
    std::unordered_map<int, int> multiplicity;
    for (std::uint64_t part : slots[j]) {
      if (std::popcount(part) < k) ++multiplicity[type_index.at(part)];
    }
    for (const auto& [type, mult] : multiplicity) {
      slot_edges[j].emplace_back(type, flow.add_edge(1 + j, 1 + m + type, mult));
    }
  }
  const int remaining = n - elem - 1;  // elements still to place after this one
  for (std::size_t s = 0; s < types.size(); ++s) {
    const int size = std::popcount(types[s]);
    flow.add_edge(1 + m + static_cast<int>(s), sink,
                  static_cast<std::int64_t>(binomial(remaining, k - size - 1)));
  }
  if (flow.run(source, sink) != m) return false;

  const std::uint64_t bit = std::uint64_t{1} << elem;
  for (int j = 0; j < m; ++j) {
    int chosen = -1;
    for (const auto& [type, edge] : slot_edges[j]) {
      if (flow.flow_on(edge) > 0) {
        chosen = type;
        break;
      }
    }
    if (chosen < 0) return false;
    const std::uint64_t target = types[chosen];
    auto it = std::find(slots[j].begin(), slots[j].end(), target);
    *it |= bit;
  }
  return true;
}

struct Backtracker {
  int n;
  int k;
  std::uint64_t full;
  std::vector<std::vector<int>> by_min;  // subset ids grouped by lowest element
  std::vector<std::uint64_t> subsets;
  std::vector<char> used;
  std::vector<std::vector<std::uint64_t>> factors;
  std::size_t target_factors;
  std::uint64_t nodes = 0;
  std::uint64_t limit;
  bool exhausted = false;

  bool search(std::uint64_t covered) {
    if (++nodes > limit) {
      exhausted = true;
      return false;
    }
    if (covered == full) {
      if (factors.size() == target_factors) return true;
      factors.emplace_back();
      if (search(0)) return true;
      factors.pop_back();
      return false;
    }
    const int e = std::countr_one(covered);
    for (int id : by_min[e]) {
      if (used[id] || (subsets[id] & covered) != 0) continue;
      used[id] = 1;
      factors.back().push_back(subsets[id]);
      if (search(covered | subsets[id])) return true;
      factors.back().pop_back();
      used[id] = 0;
      if (exhausted) return false;
      // Factors are unordered, so a fresh factor may take the lowest unused
      // subset through element 0 without loss of generality.
      if (covered == 0) return false;
    }
    return false;
  }
};

}  // namespace

PartitionCheck verify_partition(const Partition& p) {
  PartitionCheck check;
  std::unordered_set<Vertex> seen;
  for (const auto& block : p.blocks) {
    for (Vertex v : block) {
      if (!seen.insert(v).second) {
        check.ok = false;
        check.violation = "disjointness";
        check.witness = "vertex " + std::to_string(v) + " appears twice";
        return check;
      }
    }
  }
  std::unordered_set<Vertex> universe(p.universe.begin(), p.universe.end());
  if (seen != universe) {
    check.ok = false;
    check.violation = "coverage";
    check.witness = "blocks do not cover the universe exactly";
    return check;
  }
  for (const auto& block : p.blocks) {
    for (std::size_t a = 0; a < block.size(); ++a) {
      for (std::size_t b = a + 1; b < block.size(); ++b) {
        if (hamming(block[a], block[b]) < p.min_distance) {
          check.ok = false;
          check.violation = "distance";
          check.witness = std::to_string(block[a]) + " and " +
                          std::to_string(block[b]) + " at distance " +
                          std::to_string(hamming(block[a], block[b]));
          return check;
        }
      }
    }
  }
  return check;
}

Partition distance_partition(std::span<const Vertex> universe, int d) {
  if (d < 1) throw std::invalid_argument("distance_partition: d must be >= 1");
  Partition p;
  p.min_distance = d;
  p.universe.assign(universe.begin(), universe.end());
  std::sort(p.universe.begin(), p.universe.end());
  p.universe.erase(std::unique(p.universe.begin(), p.universe.end()),
                   p.universe.end());
  for (Vertex v : p.universe) {
    auto fits = [&](const std::vector<Vertex>& block) {
      return std::all_of(block.begin(), block.end(),
                         [&](Vertex y) { return hamming(v, y) >= d; });
    };
    auto it = std::find_if(p.blocks.begin(), p.blocks.end(), fits);
    if (it == p.blocks.end()) {
      p.blocks.push_back({v});
    } else {
      it->push_back(v);
    }
  }
  return p;
}

FactorizationCheck verify_factorization(const Factorization& f) {
  FactorizationCheck check;
  auto fail = [&](std::string violation, std::string witness) {
    check.ok = false;
    check.violation = std::move(violation);
    check.witness = std::move(witness);
    return check;
  };
  if (f.k < 1 || f.n < f.k || f.n > 31 || f.n % f.k != 0) {
    return fail("shape", "n=" + std::to_string(f.n) + " k=" + std::to_string(f.k));
  }
  const std::uint64_t full = (std::uint64_t{1} << f.n) - 1;
  const std::size_t per_factor = static_cast<std::size_t>(f.n / f.k);
  std::unordered_set<std::uint64_t> seen;
  for (std::size_t j = 0; j < f.factors.size(); ++j) {
    const auto& factor = f.factors[j];
    if (factor.size() != per_factor) {
      return fail("factor-size", "factor " + std::to_string(j) + " has " +
                                     std::to_string(factor.size()) + " subsets");
    }
    std::uint64_t covered = 0;
    for (std::uint64_t s : factor) {
      if (std::popcount(s) != f.k || (s & ~full) != 0) {
        return fail("subset-size", "{" + format_subset(s) + "} in factor " +
                                       std::to_string(j));
      }
      if ((covered & s) != 0) {
        return fail("disjointness", "{" + format_subset(s) + "} overlaps factor " +
                                        std::to_string(j));
      }
      covered |= s;
      if (!seen.insert(s).second) {
        return fail("multiplicity", "{" + format_subset(s) + "} appears more than once");
      }
    }
  }
  std::string missing;
  for_each_weight(f.n, f.k, [&](Vertex s) {
    if (missing.empty() && !seen.contains(s)) missing = format_subset(s);
  });
  if (!missing.empty()) {
    return fail("coverage", "missing subset {" + missing + "}");
  }
  if (seen.size() != binomial(f.n, f.k)) {
    return fail("coverage", "covered " + std::to_string(seen.size()) + " of " +
                                std::to_string(binomial(f.n, f.k)) + " subsets");
  }
  if (f.factors.size() != binomial(f.n - 1, f.k - 1)) {
    return fail("count", std::to_string(f.factors.size()) + " factors, expected " +
                             std::to_string(binomial(f.n - 1, f.k - 1)));
  }
  return check;
}

void canonicalize(Factorization& f) {
  for (auto& factor : f.factors) std::sort(factor.begin(), factor.end(), subset_less);
  std::sort(f.factors.begin(), f.factors.end(), factor_less);
}

Factorization baranyai(int n, int k) {
  check_factorization_args(n, k, kMaxFactorizationSubsets);
  const std::uint64_t m = binomial(n - 1, k - 1);
  std::vector<std::vector<std::uint64_t>> slots(
      m, std::vector<std::uint64_t>(static_cast<std::size_t>(n / k), 0));
  for (int elem = 0; elem < n; ++elem) {
    if (!extend_by_element(n, k, elem, slots)) {
      if (binomial(n, k) <= kMaxBacktrackSubsets) {
        if (auto fallback = baranyai_backtrack(n, k)) return *fallback;
      }
      throw std::logic_error("baranyai: flow step failed at element " +
                             std::to_string(elem + 1));
    }
  }
  Factorization f{n, k, std::move(slots)};
  canonicalize(f);
  return f;
}

std::optional<Factorization> baranyai_backtrack(int n, int k,
                                                std::uint64_t node_limit) {
  check_factorization_args(n, k, kMaxBacktrackSubsets);
  Backtracker bt;
  bt.n = n;
  bt.k = k;
  bt.full = (std::uint64_t{1} << n) - 1;
  bt.by_min.resize(n);
  for_each_weight(n, k, [&](Vertex s) {
    bt.by_min[std::countr_zero(s)].push_back(static_cast<int>(bt.subsets.size()));
    bt.subsets.push_back(s);
  });
  for (auto& ids : bt.by_min) {
    std::sort(ids.begin(), ids.end(), [&](int a, int b) {
      return subset_less(bt.subsets[a], bt.subsets[b]);
    });
  }
  bt.used.assign(bt.subsets.size(), 0);
  bt.target_factors = binomial(n - 1, k - 1);
  bt.limit = node_limit;
  bt.factors.emplace_back();
  if (!bt.search(0)) return std::nullopt;
  Factorization f{n, k, std::move(bt.factors)};
  canonicalize(f);
  return f;
}

std::string format_factorization(const Factorization& f) {
  Factorization sorted = f;
  canonicalize(sorted);
  std::string out;
  for (const auto& factor : sorted.factors) {
    for (std::size_t i = 0; i < factor.size(); ++i) {
      if (i > 0) out += '|';
      out += format_subset(factor[i]);
    }
    out += '\n';
  }
  return out;
}

Factorization parse_factorization(std::string_view text, int n, int k) {
  Factorization f{n, k, {}};
  std::istringstream lines{std::string(text)};
  std::string line;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    std::vector<std::uint64_t> factor;
    std::istringstream parts(line);
    std::string part;
    while (std::getline(parts, part, '|')) {
      std::uint64_t mask = 0;
      std::istringstream elems(part);
      std::string elem;
      while (std::getline(elems, elem, ',')) {
        int e = 0;
        try {
          e = std::stoi(elem);
        } catch (const std::exception&) {
          throw std::invalid_argument("parse_factorization: bad element '" + elem + "'");
        }
        if (e < 1 || e > n) {
          throw std::invalid_argument("parse_factorization: element out of range");
        }
        mask |= std::uint64_t{1} << (e - 1);
      }
      factor.push_back(mask);
    }
    f.factors.push_back(std::move(factor));
  }
  return f;
}

SpherePartition sphere_partition(int n, int k) {
  if (k < 1 || k > n || n > 31) {
    throw std::invalid_argument("sphere_partition: need 1 <= k <= n <= 31");
  }
  SpherePartition out;
  out.bound = static_cast<std::uint64_t>(k) * binomial(n, k - 1);
  if (n % k == 0) {
    const Factorization f = baranyai(n, k);
    out.via_factorization = true;
    out.partition.min_distance = 2 * k;
    out.partition.universe = sphere(n, 0, k);
    for (const auto& factor : f.factors) {
      std::vector<Vertex> block(factor.begin(), factor.end());
      std::sort(block.begin(), block.end());
      out.partition.blocks.push_back(std::move(block));
    }
  } else {
    if (binomial(n, k) > kMaxFactorizationSubsets) {
      throw std::invalid_argument("sphere_partition: sphere too large");
    }
    const std::vector<Vertex> universe = sphere(n, 0, k);
    out.partition = distance_partition(universe, 2 * k);
  }
  out.within_bound = out.partition.blocks.size() <= out.bound;
  return out;
}

}  // namespace hcboot
