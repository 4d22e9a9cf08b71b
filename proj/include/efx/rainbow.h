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

// k-partite digraphs in which every vertex has exactly one in-neighbour in
// each foreign part, and finders for rainbow cycles (directed cycles using
// each part at most once).

#ifndef EFX_RAINBOW_H_
#define EFX_RAINBOW_H_

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "efx/rational.h"

namespace efx {

struct Vertex {
  int part = 0;
  int offset = 0;

  friend auto operator<=>(const Vertex&, const Vertex&) = default;
};

enum class GraphKind { kLayered, kPermutation };

// Immutable after construction. Construction never validates; call
// Validate() before handing a graph to a finder.
class LayeredDigraph {
 public:
  static constexpr int kNoEdge = -1;

  LayeredDigraph() = default;
  // Every in-edge slot starts as kNoEdge.
  LayeredDigraph(GraphKind kind, std::vector<int> part_sizes);

  GraphKind kind() const { return kind_; }
  int num_parts() const { return static_cast<int>(part_sizes_.size()); }
  int part_size(int part) const { return part_sizes_[part]; }
  const std::vector<int>& part_sizes() const { return part_sizes_; }
  int max_part_size() const;
  int num_vertices() const { return static_cast<int>(first_.back()); }

  // Offset in `from_part` of v's in-neighbour, or kNoEdge.
  int InNeighbor(Vertex v, int from_part) const {
    return in_[Index(v) * num_parts() + from_part];
  }
  void SetInNeighbor(Vertex v, int from_part, int offset) {
    in_[Index(v) * num_parts() + from_part] = offset;
  }
  bool HasEdge(Vertex from, Vertex to) const {
    return from.part != to.part && InNeighbor(to, from.part) == from.offset;
  }

  // Flat index of a vertex, parts laid out in order.
  int Index(Vertex v) const { return first_[v.part] + v.offset; }
  Vertex VertexAt(int index) const;

  // Empty when all structural invariants hold; otherwise one message per
  // violation.
  std::vector<std::string> Validate() const;

  friend bool operator==(const LayeredDigraph&,
                         const LayeredDigraph&) = default;

 private:
  GraphKind kind_ = GraphKind::kLayered;
  std::vector<int> part_sizes_;
  std::vector<int> first_ = {0};
  std::vector<int> in_;
};

// Directed cycle, vertex i -> vertex i+1 -> ... -> vertex 0.
struct RainbowCycle {
  std::vector<Vertex> vertices;

  friend bool operator==(const RainbowCycle&, const RainbowCycle&) = default;
};

// Edges present, parts pairwise distinct, length >= 2.
bool IsRainbowCycle(const LayeredDigraph& graph, const RainbowCycle& cycle);

// Smallest k >= 1 with k (1 - 1/d)^(k-1) < 1, evaluated exactly.
int ThresholdK(int d);

// k (1 - 1/d)^(k-1) as an exact rational.
Rational UnionBound(int k, int d);

// Starting at the vertex chosen in `start_part`, repeatedly step to an
// in-neighbour inside the selection (smallest part first) until a vertex
// repeats; the loop is returned in edge order. `selection[i]` is the offset
// chosen in part i. Throws kDeadEnd if a visited vertex has no in-neighbour
// in the selection.
RainbowCycle ExtractCycle(const LayeredDigraph& graph,
                          std::span<const int> selection, int start_part = 0);

// True when every selected vertex has a selected in-neighbour.
bool SelectionClosed(const LayeredDigraph& graph,
                     std::span<const int> selection);

// Seeded uniform selection of one vertex per part for trial `trial`.
std::vector<int> SampleSelection(const LayeredDigraph& graph, uint64_t seed,
                                 uint64_t trial);

struct RandomizedOutcome {
  std::optional<RainbowCycle> cycle;
  // Index of the first successful trial, or the number of trials run.
  uint64_t trials_used = 0;
};

// Runs trials 0..max_trials-1 (in parallel chunks) and returns the cycle of
// the lowest-indexed successful trial, so the answer does not depend on the
// thread count.
RandomizedOutcome FindRainbowCycleRandomized(const LayeredDigraph& graph,
                                             uint64_t seed,
                                             uint64_t max_trials);
RandomizedOutcome FindRainbowCycleRandomizedSerial(const LayeredDigraph& graph,
                                                   uint64_t seed,
                                                   uint64_t max_trials);

// Number of successful trials among 0..trials-1.
uint64_t CountRandomizedSuccesses(const LayeredDigraph& graph, uint64_t seed,
                                  uint64_t trials);
uint64_t CountRandomizedSuccessesSerial(const LayeredDigraph& graph,
                                        uint64_t seed, uint64_t trials);

// Expected number of "selected but no selected in-neighbour" events given
// that parts 0..decided.size()-1 are fixed to the listed offsets and the
// rest are drawn uniformly. Throws kInvalidArgument for a malformed prefix.
Rational ConditionalExpectation(const LayeredDigraph& graph,
                                std::span<const int> decided);

struct DerandomizedResult {
  RainbowCycle cycle;
  std::vector<int> selection;
  // potentials[0] is the unconditional expectation, potentials[i] the value
  // after fixing part i-1.
  std::vector<Rational> potentials;
};

// Method of conditional expectations: fixes parts in order, each time to the
// smallest offset minimizing the conditional expectation. Requires
// k (1 - 1/d_max)^(k-1) < 1 (kThresholdNotMet otherwise).
DerandomizedResult FindRainbowCycleDerandomized(const LayeredDigraph& graph);

struct PermutationFinderOptions {
  // Close the cycle as soon as some stored path ends at an in-neighbour of
  // the root, instead of growing the table to its full height.
  bool early_exit = false;
};

struct PermutationStage {
  std::vector<int> chosen_parts;
  // Witness paths (root first) to the reachable vertices of the last chosen
  // part.
  std::vector<std::vector<Vertex>> paths;
};

struct PermutationResult {
  RainbowCycle cycle;
  std::vector<PermutationStage> stages;
  // Number of times the search had to descend into the sub-graph left
  // unreachable from the root.
  int descents = 0;
};

// Grows restricted-path tables from `root` through chosen parts V1, V2, ...
// Requires a valid permutation graph with k >= 2d - 1 (kPrecondition).
PermutationResult FindRainbowCycleFromRoot(
    const LayeredDigraph& graph, Vertex root,
    const PermutationFinderOptions& options = {});
RainbowCycle FindRainbowCyclePermutation(
    const LayeredDigraph& graph, Vertex root,
    const PermutationFinderOptions& options = {});

}  // namespace efx

#endif  // EFX_RAINBOW_H_
