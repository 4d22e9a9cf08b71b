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


// Brute-force ground truth for small instances and graphs, plus the seeded
// random generators that feed the property suites.

#ifndef EFX_ORACLE_H_
#define EFX_ORACLE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "efx/efx_core.h"
#include "efx/rainbow.h"
#include "efx/rng.h"
#include "efx/valuation.h"

namespace efx {

// All complete allocations of the m goods to tables.size() agents that are
// EFX, in lexicographic order of the good -> agent assignment (good 0 most
// significant). The n^m assignments are checked in parallel.
std::vector<Allocation> EnumerateEfx(std::span<const ValueTable> tables,
                                     int cap = EnumerationCaps{}.efx_enumeration);
std::vector<Allocation> EnumerateEfxSerial(
    std::span<const ValueTable> tables,
    int cap = EnumerationCaps{}.efx_enumeration);
std::vector<Allocation> EnumerateEfx(
    const Instance& instance, int cap = EnumerationCaps{}.efx_enumeration);

// Depth-first search over part-distinct paths. Each cycle is rooted at its
// lowest-indexed vertex, so the first cycle found is deterministic. Throws
// kInstanceTooLarge when the graph has more than `cap` vertices.
std::optional<RainbowCycle> BruteForceRainbowCycle(
    const LayeredDigraph& graph, int cap = EnumerationCaps{}.rainbow_vertices);

struct GeneratorConfig {
  uint64_t seed = 0;
  // Instance size.
  int m = 4;
  // Graph shape: k parts of d vertices each.
  int k = 3;
  int d = 2;
  GraphKind graph_kind = GraphKind::kLayered;
  // Family of agent 3; nullopt draws one of the four parametric families.
  std::optional<ValuationKind> agent3_kind;
  // Values are drawn as n / denominator with n uniform in [0, max_numerator].
  int64_t max_numerator = 1000;
  int64_t denominator = 1;
  // Perturb agents 1 and 2 after generation if the running maxima produced
  // ties.
  bool non_degenerate = false;
};

// Uniform draw n / denominator, n in [0, max_numerator].
Rational RandomValue(CounterRng& rng, int64_t max_numerator,
                     int64_t denominator);

// Random subset values made monotone by running maxima over the lattice,
// with v(empty) = 0.
Valuation RandomMonotoneTable(CounterRng& rng, int m, int64_t max_numerator,
                              int64_t denominator);

// Random valuation of a parametric kind. Multiplicative values are drawn
// from [1, 1 + max_numerator / denominator] so that the result is monotone.
Valuation RandomParametric(CounterRng& rng, ValuationKind kind, int m,
                           int64_t max_numerator, int64_t denominator);

// Agents 1 and 2 are random monotone tables, agent 3 comes from a parametric
// family. A pure function of the config.
Instance RandomInstance(const GeneratorConfig& config);

// Layered kind: every in-neighbour uniform. Permutation kind: an independent
// uniform bijection per ordered pair of parts. Always passes Validate().
LayeredDigraph RandomLayeredGraph(const GeneratorConfig& config);

}  // namespace efx

#endif  // EFX_ORACLE_H_
