// Copyright 2026 The EFX Lab Authors
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

#include "efx/oracle.h"

#include <algorithm>
#include <string>
#include <utility>

#include "efx/error.h"

namespace efx {

namespace {

// Streams of the instance generator, one per agent.
constexpr uint64_t kAgentStream = 0x1000;
constexpr uint64_t kGraphStream = 0x2000;
constexpr uint64_t kFamilyStream = 0x3000;

int64_t CheckEnumerable(std::span<const ValueTable> tables, int cap) {
  if (tables.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "at least one agent is required");
  }
  const int m = tables[0].m();
  for (const ValueTable& t : tables) {
    if (t.m() != m) {
      throw Error(ErrorKind::kMalformedValuation,
                  "agents disagree on the number of goods");
    }
  }
  if (m > cap) {
    throw Error(ErrorKind::kInstanceTooLarge,
                "EFX enumeration is capped at m=" + std::to_string(cap) +
                    "; got m=" + std::to_string(m));
  }
  int64_t count = 1;
  for (int g = 0; g < m; ++g) count *= static_cast<int64_t>(tables.size());
  return count;
}

// Decodes assignment `code` (base n, good 0 most significant).
std::vector<Bundle> Decode(int64_t code, int n, int m) {
  std::vector<uint32_t> bits(n, 0);
  for (int g = m - 1; g >= 0; --g) {
    bits[code % n] |= uint32_t{1} << g;
    code /= n;
  }
  std::vector<Bundle> bundles;
  bundles.reserve(n);
  for (uint32_t b : bits) bundles.emplace_back(b);
  return bundles;
}

bool AssignmentIsEfx(std::span<const ValueTable> tables, int64_t code) {
  const int n = static_cast<int>(tables.size());
  const std::vector<Bundle> bundles = Decode(code, n, tables[0].m());
  for (int i = 0; i < n; ++i) {
    const Rational& own = tables[i](bundles[i]);
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      for (GoodId g : bundles[j].Goods()) {
        if (own < tables[i](bundles[j].Without(g))) return false;
      }
    }
  }
  return true;
}

std::vector<Allocation> Collect(std::span<const ValueTable> tables,
                                const std::vector<char>& hit) {
  const int n = static_cast<int>(tables.size());
  const int m = tables[0].m();
  std::vector<Allocation> out;
  for (std::size_t code = 0; code < hit.size(); ++code) {
    if (hit[code]) {
      out.push_back(Allocation::FromAgentBundles(
          m, Decode(static_cast<int64_t>(code), n, m)));
    }
  }
  return out;
}

}  // namespace

std::vector<Allocation> EnumerateEfxSerial(std::span<const ValueTable> tables,
                                           int cap) {
  const int64_t count = CheckEnumerable(tables, cap);
  std::vector<char> hit(count, 0);
  for (int64_t code = 0; code < count; ++code) {
    hit[code] = AssignmentIsEfx(tables, code);
  }
  return Collect(tables, hit);
}

std::vector<Allocation> EnumerateEfx(std::span<const ValueTable> tables,
                                     int cap) {
  const int64_t count = CheckEnumerable(tables, cap);
  std::vector<char> hit(count, 0);
#pragma omp parallel for schedule(static)
  for (int64_t code = 0; code < count; ++code) {
    hit[code] = AssignmentIsEfx(tables, code);
  }
  return Collect(tables, hit);
}

std::vector<Allocation> EnumerateEfx(const Instance& instance, int cap) {
  instance.Validate();
  if (instance.m > cap) {
    throw Error(ErrorKind::kInstanceTooLarge,
                "EFX enumeration is capped at m=" + std::to_string(cap) +
                    "; got m=" + std::to_string(instance.m));
  }
  const auto tables = TabulateAgents(instance);
  return EnumerateEfx(std::span<const ValueTable>(tables), cap);
}

namespace {

class RainbowDfs {
 public:
  explicit RainbowDfs(const LayeredDigraph& graph)
      : graph_(graph), used_(graph.num_parts(), false) {
    out_.resize(graph.num_vertices());
    for (int index = 0; index < graph.num_vertices(); ++index) {
      const Vertex v = graph.VertexAt(index);
      for (int q = 0; q < graph.num_parts(); ++q) {
        if (q == v.part) continue;
        const int from = graph.InNeighbor(v, q);
        if (from >= 0) out_[graph.Index(Vertex{q, from})].push_back(index);
      }
    }
    for (auto& targets : out_) std::sort(targets.begin(), targets.end());
  }

  std::optional<RainbowCycle> Find() {
    for (root_ = 0; root_ < graph_.num_vertices(); ++root_) {
      path_ = {root_};
      used_.assign(graph_.num_parts(), false);
      used_[graph_.VertexAt(root_).part] = true;
      if (Extend()) {
        RainbowCycle cycle;
        for (int index : path_) cycle.vertices.push_back(graph_.VertexAt(index));
        return cycle;
      }
    }
    return std::nullopt;
  }

 private:
  bool Extend() {
    for (int next : out_[path_.back()]) {
      if (next == root_ && path_.size() >= 2) return true;
      if (next <= root_) continue;
      const int part = graph_.VertexAt(next).part;
      if (used_[part]) continue;
      used_[part] = true;
      path_.push_back(next);
      if (Extend()) return true;
      path_.pop_back();
      used_[part] = false;
    }
    return false;
  }

  const LayeredDigraph& graph_;
  std::vector<std::vector<int>> out_;
  std::vector<bool> used_;
  std::vector<int> path_;
  int root_ = 0;
};

}  // namespace

std::optional<RainbowCycle> BruteForceRainbowCycle(const LayeredDigraph& graph,
                                                   int cap) {
  if (graph.num_vertices() > cap) {
    throw Error(ErrorKind::kInstanceTooLarge,
                "rainbow search is capped at " + std::to_string(cap) +
                    " vertices; got " + std::to_string(graph.num_vertices()));
  }
  return RainbowDfs(graph).Find();
}

Rational RandomValue(CounterRng& rng, int64_t max_numerator,
                     int64_t denominator) {
  if (max_numerator < 0 || denominator < 1) {
    throw Error(ErrorKind::kInvalidArgument, "bad value range");
  }
  Rational out(static_cast<long>(rng.Between(0, max_numerator)),
               static_cast<unsigned long>(denominator));
  out.canonicalize();
  return out;
}

Valuation RandomMonotoneTable(CounterRng& rng, int m, int64_t max_numerator,
                              int64_t denominator) {
  const uint32_t size = uint32_t{1} << m;
  std::vector<Rational> values(size);
  values[0] = 0;
  for (uint32_t s = 1; s < size; ++s) {
    values[s] = RandomValue(rng, max_numerator, denominator);
    for (GoodId g : Bundle(s).Goods()) {
      const Rational& below = values[Bundle(s).Without(g).bits()];
      if (values[s] < below) values[s] = below;
    }
  }
  return Valuation::Table(m, std::move(values));
}

Valuation RandomParametric(CounterRng& rng, ValuationKind kind, int m,
                           int64_t max_numerator, int64_t denominator) {
  std::vector<Rational> per_good(m);
  for (Rational& x : per_good) {
    x = RandomValue(rng, max_numerator, denominator);
  }
  switch (kind) {
    case ValuationKind::kAdditive:
      return Valuation::Additive(std::move(per_good));
    case ValuationKind::kBudgetAdditive: {
      // Cap numerator uniform between 0 and the total's numerator.
      Rational total = 0;
      for (const Rational& x : per_good) total += x;
      const Rational scaled = total * denominator;
      const int64_t top = scaled.get_num().get_si();
      Rational cap = RandomValue(rng, top, denominator);
      return Valuation::BudgetAdditive(std::move(per_good), std::move(cap));
    }
    case ValuationKind::kUnitDemand:
      return Valuation::UnitDemand(std::move(per_good));
    case ValuationKind::kMultiplicative:
      for (Rational& x : per_good) x += 1;
      return Valuation::Multiplicative(std::move(per_good));
    case ValuationKind::kTable:
      break;
  }
  throw Error(ErrorKind::kInvalidArgument,
              "table is not a parametric valuation kind");
}

Instance RandomInstance(const GeneratorConfig& config) {
  if (config.m < 0 || config.m > kMaxGoods) {
    throw Error(ErrorKind::kInstanceTooLarge,
                "m must lie in [0, " + std::to_string(kMaxGoods) + "]");
  }
  Instance instance;
  instance.m = config.m;
  for (int i = 0; i < 2; ++i) {
    CounterRng rng(config.seed, kAgentStream + i);
    Valuation v = RandomMonotoneTable(rng, config.m, config.max_numerator,
                                      config.denominator);
    if (config.non_degenerate && !IsNonDegenerate(v, kMaxGoods)) {
      const std::array<Valuation, 1> one = {v};
      v = PerturbValuation(
          v, DefaultEpsilon(MinValueGap(std::span<const Valuation>(one),
                                        kMaxGoods),
                            config.m));
    }
    instance.agents[i] = std::move(v);
  }
  static constexpr ValuationKind kFamilies[] = {
      ValuationKind::kAdditive, ValuationKind::kBudgetAdditive,
      ValuationKind::kUnitDemand, ValuationKind::kMultiplicative};
  CounterRng family_rng(config.seed, kFamilyStream);
  const ValuationKind kind =
      config.agent3_kind.value_or(kFamilies[family_rng.Below(4)]);
  CounterRng rng(config.seed, kAgentStream + 2);
  instance.agents[2] = RandomParametric(rng, kind, config.m,
                                        config.max_numerator,
                                        config.denominator);
  return instance;
}

LayeredDigraph RandomLayeredGraph(const GeneratorConfig& config) {
  if (config.k < 2 || config.d < 1) {
    throw Error(ErrorKind::kInvalidArgument, "graphs need k >= 2 and d >= 1");
  }
  LayeredDigraph graph(config.graph_kind,
                       std::vector<int>(config.k, config.d));
  CounterRng rng(config.seed, kGraphStream);
  std::vector<int> perm(config.d);
  for (int p = 0; p < config.k; ++p) {
    for (int q = 0; q < config.k; ++q) {
      if (q == p) continue;
      if (config.graph_kind == GraphKind::kPermutation) {
        for (int o = 0; o < config.d; ++o) perm[o] = o;
        rng.Shuffle(perm);
      }
      for (int o = 0; o < config.d; ++o) {
        const int from = config.graph_kind == GraphKind::kPermutation
                             ? perm[o]
                             : static_cast<int>(rng.Below(config.d));
        graph.SetInNeighbor(Vertex{p, o}, q, from);
      }
    }
  }
  return graph;
}

}  // namespace efx
