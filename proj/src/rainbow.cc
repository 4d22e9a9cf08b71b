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

#include "efx/rainbow.h"

#include <algorithm>
#include <limits>
#include <map>
#include <utility>

#include "efx/error.h"
#include "efx/rng.h"

namespace efx {

LayeredDigraph::LayeredDigraph(GraphKind kind, std::vector<int> part_sizes)
    : kind_(kind), part_sizes_(std::move(part_sizes)) {
  for (int size : part_sizes_) {
    if (size < 0) {
      throw Error(ErrorKind::kInvalidArgument, "negative part size");
    }
    first_.push_back(first_.back() + size);
  }
  in_.assign(static_cast<std::size_t>(first_.back()) * part_sizes_.size(),
             kNoEdge);
}

int LayeredDigraph::max_part_size() const {
  int d = 0;
  for (int size : part_sizes_) d = std::max(d, size);
  return d;
}

Vertex LayeredDigraph::VertexAt(int index) const {
  const auto it = std::upper_bound(first_.begin(), first_.end(), index);
  const int part = static_cast<int>(it - first_.begin()) - 1;
  return Vertex{part, index - first_[part]};
}

namespace {

std::string Name(Vertex v) {
  return std::to_string(v.part) + ":" + std::to_string(v.offset);
}

}  // namespace

std::vector<std::string> LayeredDigraph::Validate() const {
  std::vector<std::string> problems;
  const int k = num_parts();
  if (k < 2) problems.push_back("graph needs at least 2 parts");
  for (int p = 0; p < k; ++p) {
    if (part_sizes_[p] < 1) {
      problems.push_back("part " + std::to_string(p) + " is empty");
    }
  }
  for (int p = 0; p < k; ++p) {
    for (int o = 0; o < part_sizes_[p]; ++o) {
      const Vertex v{p, o};
      for (int q = 0; q < k; ++q) {
        const int in = InNeighbor(v, q);
        if (q == p) {
          if (in != kNoEdge) {
            problems.push_back("vertex " + Name(v) +
                               " has an in-edge from its own part");
          }
          continue;
        }
        if (in == kNoEdge) {
          problems.push_back("vertex " + Name(v) + " has no in-edge from part " +
                             std::to_string(q));
        } else if (in < 0 || in >= part_sizes_[q]) {
          problems.push_back("vertex " + Name(v) + " names in-neighbour " +
                             std::to_string(in) + " outside part " +
                             std::to_string(q));
        }
      }
    }
  }
  if (kind_ == GraphKind::kPermutation && k > 0) {
    for (int p = 1; p < k; ++p) {
      if (part_sizes_[p] != part_sizes_[0]) {
        problems.push_back("permutation graph parts differ in size");
        break;
      }
    }
    for (int p = 0; p < k; ++p) {
      for (int q = 0; q < k; ++q) {
        if (p == q) continue;
        std::vector<int> hits(part_sizes_[q], 0);
        for (int o = 0; o < part_sizes_[p]; ++o) {
          const int in = InNeighbor(Vertex{p, o}, q);
          if (in >= 0 && in < part_sizes_[q]) ++hits[in];
        }
        for (int x = 0; x < part_sizes_[q]; ++x) {
          if (hits[x] != 1) {
            problems.push_back("vertex " + Name(Vertex{q, x}) + " has " +
                               std::to_string(hits[x]) +
                               " out-edges into part " + std::to_string(p));
          }
        }
      }
    }
  }
  return problems;
}

bool IsRainbowCycle(const LayeredDigraph& graph, const RainbowCycle& cycle) {
  const auto& vs = cycle.vertices;
  if (vs.size() < 2) return false;
  std::vector<bool> used(graph.num_parts(), false);
  for (const Vertex& v : vs) {
    if (v.part < 0 || v.part >= graph.num_parts() || v.offset < 0 ||
        v.offset >= graph.part_size(v.part) || used[v.part]) {
      return false;
    }
    used[v.part] = true;
  }
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (!graph.HasEdge(vs[i], vs[(i + 1) % vs.size()])) return false;
  }
  return true;
}

Rational UnionBound(int k, int d) {
  if (d < 1 || k < 1) {
    throw Error(ErrorKind::kInvalidArgument, "union bound needs k, d >= 1");
  }
  mpz_class num, den;
  mpz_ui_pow_ui(num.get_mpz_t(), static_cast<unsigned long>(d - 1),
                static_cast<unsigned long>(k - 1));
  mpz_ui_pow_ui(den.get_mpz_t(), static_cast<unsigned long>(d),
                static_cast<unsigned long>(k - 1));
  Rational out(num * k, den);
  out.canonicalize();
  return out;
}

int ThresholdK(int d) {
  if (d < 1) throw Error(ErrorKind::kInvalidArgument, "d must be positive");
  int k = 1;
  while (!(UnionBound(k, d) < 1)) ++k;
  return k;
}

namespace {

void CheckSelection(const LayeredDigraph& graph, std::span<const int> sel,
                    bool full) {
  if (sel.size() > static_cast<std::size_t>(graph.num_parts()) ||
      (full && sel.size() != static_cast<std::size_t>(graph.num_parts()))) {
    throw Error(ErrorKind::kInvalidArgument,
                "selection must pick one vertex per part, in part order");
  }
  for (std::size_t p = 0; p < sel.size(); ++p) {
    if (sel[p] < 0 || sel[p] >= graph.part_size(static_cast<int>(p))) {
      throw Error(ErrorKind::kInvalidArgument,
                  "selection offset out of range in part " +
                      std::to_string(p));
    }
  }
}

// Smallest part whose selected vertex is an in-neighbour of the selected
// vertex of `part`, or -1.
int SelectedInNeighborPart(const LayeredDigraph& graph,
                           std::span<const int> sel, int part) {
  const Vertex v{part, sel[part]};
  for (int q = 0; q < graph.num_parts(); ++q) {
    if (q != part && graph.InNeighbor(v, q) == sel[q]) return q;
  }
  return -1;
}

}  // namespace

bool SelectionClosed(const LayeredDigraph& graph,
                     std::span<const int> selection) {
  CheckSelection(graph, selection, true);
  for (int p = 0; p < graph.num_parts(); ++p) {
    if (SelectedInNeighborPart(graph, selection, p) < 0) return false;
  }
  return true;
}

RainbowCycle ExtractCycle(const LayeredDigraph& graph,
                          std::span<const int> selection, int start_part) {
  CheckSelection(graph, selection, true);
  if (start_part < 0 || start_part >= graph.num_parts()) {
    throw Error(ErrorKind::kInvalidArgument, "start part out of range");
  }
  std::vector<int> position(graph.num_parts(), -1);
  std::vector<int> walk;
  int part = start_part;
  while (position[part] < 0) {
    position[part] = static_cast<int>(walk.size());
    walk.push_back(part);
    const int next = SelectedInNeighborPart(graph, selection, part);
    if (next < 0) {
      throw Error(ErrorKind::kDeadEnd,
                  "selected vertex " + Name(Vertex{part, selection[part]}) +
                      " has no selected in-neighbour");
    }
    part = next;
  }
  // walk[position[part]..] is the loop, traversed against edge direction.
  RainbowCycle cycle;
  for (int i = static_cast<int>(walk.size()) - 1; i >= position[part]; --i) {
    cycle.vertices.push_back(Vertex{walk[i], selection[walk[i]]});
  }
  return cycle;
}

std::vector<int> SampleSelection(const LayeredDigraph& graph, uint64_t seed,
                                 uint64_t trial) {
  CounterRng rng(seed, trial);
  std::vector<int> sel(graph.num_parts());
  for (int p = 0; p < graph.num_parts(); ++p) {
    sel[p] = static_cast<int>(rng.Below(graph.part_size(p)));
  }
  return sel;
}

namespace {

void RequireValid(const LayeredDigraph& graph) {
  const auto problems = graph.Validate();
  if (!problems.empty()) {
    throw Error(ErrorKind::kInvalidArgument,
                "invalid layered digraph: " + problems.front());
  }
}

bool TrialSucceeds(const LayeredDigraph& graph, uint64_t seed,
                   uint64_t trial) {
  return SelectionClosed(graph, SampleSelection(graph, seed, trial));
}

constexpr uint64_t kTrialBlock = 4096;

}  // namespace

RandomizedOutcome FindRainbowCycleRandomizedSerial(const LayeredDigraph& graph,
                                                   uint64_t seed,
                                                   uint64_t max_trials) {
  RequireValid(graph);
  for (uint64_t t = 0; t < max_trials; ++t) {
    const std::vector<int> sel = SampleSelection(graph, seed, t);
    if (SelectionClosed(graph, sel)) {
      return RandomizedOutcome{ExtractCycle(graph, sel), t + 1};
    }
  }
  return RandomizedOutcome{std::nullopt, max_trials};
}

RandomizedOutcome FindRainbowCycleRandomized(const LayeredDigraph& graph,
                                             uint64_t seed,
                                             uint64_t max_trials) {
  RequireValid(graph);
  for (uint64_t begin = 0; begin < max_trials; begin += kTrialBlock) {
    const uint64_t end = std::min(max_trials, begin + kTrialBlock);
    uint64_t first = std::numeric_limits<uint64_t>::max();
#pragma omp parallel for schedule(static) reduction(min : first)
    for (uint64_t t = begin; t < end; ++t) {
      if (t < first && TrialSucceeds(graph, seed, t)) first = t;
    }
    if (first != std::numeric_limits<uint64_t>::max()) {
      return RandomizedOutcome{
          ExtractCycle(graph, SampleSelection(graph, seed, first)), first + 1};
    }
  }
  return RandomizedOutcome{std::nullopt, max_trials};
}

uint64_t CountRandomizedSuccessesSerial(const LayeredDigraph& graph,
                                        uint64_t seed, uint64_t trials) {
  RequireValid(graph);
  uint64_t hits = 0;
  for (uint64_t t = 0; t < trials; ++t) {
    if (TrialSucceeds(graph, seed, t)) ++hits;
  }
  return hits;
}

uint64_t CountRandomizedSuccesses(const LayeredDigraph& graph, uint64_t seed,
                                  uint64_t trials) {
  RequireValid(graph);
  uint64_t hits = 0;
#pragma omp parallel for schedule(static) reduction(+ : hits)
  for (uint64_t t = 0; t < trials; ++t) {
    if (TrialSucceeds(graph, seed, t)) ++hits;
  }
  return hits;
}

Rational ConditionalExpectation(const LayeredDigraph& graph,
                                std::span<const int> decided) {
  CheckSelection(graph, decided, false);
  const int k = graph.num_parts();
  const int t = static_cast<int>(decided.size());

  // miss[q] = 1 - 1/|V_q| for undecided q; exclusive products over the
  // undecided suffix via prefix/suffix sweeps (miss may be zero).
  std::vector<Rational> miss(k, Rational(1));
  for (int q = t; q < k; ++q) {
    miss[q] = Rational(graph.part_size(q) - 1, graph.part_size(q));
    miss[q].canonicalize();
  }
  std::vector<Rational> prefix(k + 1, Rational(1)), suffix(k + 1, Rational(1));
  for (int q = t; q < k; ++q) prefix[q + 1] = prefix[q] * miss[q];
  for (int q = k - 1; q >= t; --q) suffix[q] = suffix[q + 1] * miss[q];
  const Rational& all_undecided = prefix[k];

  auto hit_by_decided = [&](Vertex v) {
    for (int q = 0; q < t; ++q) {
      if (q != v.part && graph.InNeighbor(v, q) == decided[q]) return true;
    }
    return false;
  };

  Rational total = 0;
  for (int p = 0; p < t; ++p) {
    if (!hit_by_decided(Vertex{p, decided[p]})) total += all_undecided;
  }
  for (int p = t; p < k; ++p) {
    const Rational weight =
        prefix[p] * suffix[p + 1] / Rational(graph.part_size(p));
    for (int o = 0; o < graph.part_size(p); ++o) {
      if (!hit_by_decided(Vertex{p, o})) total += weight;
    }
  }
  total.canonicalize();
  return total;
}

DerandomizedResult FindRainbowCycleDerandomized(const LayeredDigraph& graph) {
  RequireValid(graph);
  const int k = graph.num_parts();
  const int d = graph.max_part_size();
  if (!(UnionBound(k, d) < 1)) {
    throw Error(ErrorKind::kThresholdNotMet,
                "k (1 - 1/d)^(k-1) = " + FormatRational(UnionBound(k, d)) +
                    " is not below 1 for k=" + std::to_string(k) +
                    ", d=" + std::to_string(d));
  }
  DerandomizedResult result;
  result.potentials.push_back(ConditionalExpectation(graph, result.selection));
  for (int p = 0; p < k; ++p) {
    result.selection.push_back(0);
    Rational best;
    int best_offset = -1;
    for (int o = 0; o < graph.part_size(p); ++o) {
      result.selection.back() = o;
      Rational value = ConditionalExpectation(graph, result.selection);
      if (best_offset < 0 || value < best) {
        best = std::move(value);
        best_offset = o;
      }
    }
    result.selection.back() = best_offset;
    result.potentials.push_back(std::move(best));
  }
  if (sgn(result.potentials.back()) != 0) {
    throw Error(ErrorKind::kInternalInvariant,
                "conditional expectations ended at a nonzero count");
  }
  result.cycle = ExtractCycle(graph, result.selection);
  return result;
}

namespace {

using PathTable = std::map<int, std::vector<Vertex>>;  // offset -> path

class PermutationSearch {
 public:
  PermutationSearch(const LayeredDigraph& graph,
                    const PermutationFinderOptions& options)
      : graph_(graph), options_(options), k_(graph.num_parts()) {
    out_.assign(static_cast<std::size_t>(graph.num_vertices()) * k_,
                LayeredDigraph::kNoEdge);
    for (int p = 0; p < k_; ++p) {
      for (int o = 0; o < graph.part_size(p); ++o) {
        for (int q = 0; q < k_; ++q) {
          if (q == p) continue;
          const int from = graph.InNeighbor(Vertex{p, o}, q);
          out_[graph.Index(Vertex{q, from}) * k_ + p] = o;
        }
      }
    }
  }

  PermutationResult Run(Vertex root) {
    const int d = graph_.part_size(0);
    PermutationResult result;
    std::vector<int> chosen = {root.part};
    std::vector<bool> is_chosen(k_, false);
    is_chosen[root.part] = true;
    PathTable paths = {{root.offset, {root}}};
    result.stages.push_back(Snapshot(chosen, paths));

    for (int i = 1;; ++i) {
      if (options_.early_exit) {
        for (const auto& [offset, path] : paths) {
          const Vertex end = path.back();
          if (end.part != root.part && graph_.HasEdge(end, root)) {
            result.cycle.vertices = path;
            return result;
          }
        }
      }
      if (i == d) {
        result.cycle.vertices = CloseAtFullHeight(root, chosen, paths);
        return result;
      }

      std::vector<int> open;
      for (int q = 0; q < k_; ++q) {
        if (!is_chosen[q]) open.push_back(q);
      }
      if (open.size() < 2) {
        throw Error(ErrorKind::kStructuralContradiction,
                    "ran out of unchosen parts");
      }
      const int last = chosen.back();
      auto step_into = [&](const PathTable& from, int from_part, int to_part) {
        PathTable reached;
        for (const auto& [offset, path] : from) {
          const int target = Out(Vertex{from_part, offset}, to_part);
          std::vector<Vertex> extended = path;
          extended.push_back(Vertex{to_part, target});
          reached.emplace(target, std::move(extended));
        }
        return reached;
      };

      int next_w = -1;
      int next_u = -1;
      PathTable next_paths;
      if (static_cast<int>(paths.size()) >= i + 1) {
        next_u = open[0];
        next_w = open[1];
        next_paths = step_into(paths, last, next_u);
      } else {
        for (int u : open) {
          const PathTable u_reached = step_into(paths, last, u);
          for (int w : open) {
            if (w == u) continue;
            const PathTable w_reached = step_into(paths, last, w);
            PathTable extra;
            for (const auto& [offset, path] : w_reached) {
              const int target = Out(Vertex{w, offset}, u);
              if (u_reached.count(target) || extra.count(target)) continue;
              std::vector<Vertex> extended = path;
              extended.push_back(Vertex{u, target});
              extra.emplace(target, std::move(extended));
            }
            if (!extra.empty()) {
              next_u = u;
              next_w = w;
              next_paths = u_reached;
              next_paths.merge(extra);
              break;
            }
          }
          if (next_u >= 0) break;
        }
      }

      if (next_u < 0) {
        // Every open part splits into i reachable vertices and d - i
        // unreachable ones, and the unreachable halves only talk to each
        // other: they form a smaller permutation graph with enough parts to
        // hold a rainbow cycle.
        result.cycle = Descend(open, paths, last, d - i);
        ++result.descents;
        return result;
      }
      chosen.push_back(next_w);
      chosen.push_back(next_u);
      is_chosen[next_w] = is_chosen[next_u] = true;
      paths = std::move(next_paths);
      result.stages.push_back(Snapshot(chosen, paths));
    }
  }

  // Descents taken inside recursive sub-searches.
  int nested_descents() const { return nested_descents_; }

 private:
  int Out(Vertex v, int part) const {
    return out_[graph_.Index(v) * k_ + part];
  }

  static PermutationStage Snapshot(const std::vector<int>& chosen,
                                   const PathTable& paths) {
    PermutationStage stage;
    stage.chosen_parts = chosen;
    for (const auto& [offset, path] : paths) stage.paths.push_back(path);
    return stage;
  }

  std::vector<Vertex> CloseAtFullHeight(Vertex root,
                                        const std::vector<int>& chosen,
                                        const PathTable& paths) const {
    if (chosen.size() == 1) {
      // d = 1: any other part closes a 2-cycle.
      const int other = root.part == 0 ? 1 : 0;
      return {root, Vertex{other, Out(root, other)}};
    }
    const int last = chosen.back();
    const int closer = graph_.InNeighbor(root, last);
    const auto it = paths.find(closer);
    if (it == paths.end()) {
      throw Error(ErrorKind::kStructuralContradiction,
                  "root's in-neighbour in the last chosen part is unreachable");
    }
    return it->second;
  }

  RainbowCycle Descend(const std::vector<int>& open, const PathTable& paths,
                       int last, int sub_d) {
    // Reachable (primed) offsets per open part.
    std::vector<std::vector<int>> rest(open.size());
    std::vector<std::vector<int>> local(open.size());
    for (std::size_t j = 0; j < open.size(); ++j) {
      std::vector<bool> reached(graph_.part_size(open[j]), false);
      for (const auto& [offset, path] : paths) {
        reached[Out(Vertex{last, offset}, open[j])] = true;
      }
      local[j].assign(graph_.part_size(open[j]), -1);
      for (int o = 0; o < graph_.part_size(open[j]); ++o) {
        if (!reached[o]) {
          local[j][o] = static_cast<int>(rest[j].size());
          rest[j].push_back(o);
        }
      }
      if (static_cast<int>(rest[j].size()) != sub_d) {
        throw Error(ErrorKind::kStructuralContradiction,
                    "unreachable remainder has the wrong size");
      }
    }
    LayeredDigraph sub(GraphKind::kPermutation,
                       std::vector<int>(open.size(), sub_d));
    for (std::size_t j = 0; j < open.size(); ++j) {
      for (int o = 0; o < sub_d; ++o) {
        for (std::size_t q = 0; q < open.size(); ++q) {
          if (q == j) continue;
          const int in =
              graph_.InNeighbor(Vertex{open[j], rest[j][o]}, open[q]);
          if (local[q][in] < 0) {
            throw Error(ErrorKind::kStructuralContradiction,
                        "unreachable remainder receives an edge from the "
                        "reachable side");
          }
          sub.SetInNeighbor(Vertex{static_cast<int>(j), o},
                            static_cast<int>(q), local[q][in]);
        }
      }
    }
    PermutationResult inner =
        FindRainbowCycleFromRoot(sub, Vertex{0, 0}, options_);
    nested_descents_ += inner.descents;
    RainbowCycle mapped;
    for (const Vertex& v : inner.cycle.vertices) {
      mapped.vertices.push_back(Vertex{open[v.part], rest[v.part][v.offset]});
    }
    return mapped;
  }

  const LayeredDigraph& graph_;
  PermutationFinderOptions options_;
  int k_;
  std::vector<int> out_;
  int nested_descents_ = 0;
};

}  // namespace

PermutationResult FindRainbowCycleFromRoot(
    const LayeredDigraph& graph, Vertex root,
    const PermutationFinderOptions& options) {
  if (graph.kind() != GraphKind::kPermutation) {
    throw Error(ErrorKind::kPrecondition,
                "the constructive finder needs a permutation graph");
  }
  RequireValid(graph);
  const int k = graph.num_parts();
  const int d = graph.part_size(0);
  if (k < 2 * d - 1) {
    throw Error(ErrorKind::kPrecondition,
                "need k >= 2d - 1; got k=" + std::to_string(k) +
                    ", d=" + std::to_string(d));
  }
  if (root.part < 0 || root.part >= k || root.offset < 0 ||
      root.offset >= d) {
    throw Error(ErrorKind::kInvalidArgument, "root vertex out of range");
  }
  PermutationSearch search(graph, options);
  PermutationResult result = search.Run(root);
  result.descents += search.nested_descents();
  if (!IsRainbowCycle(graph, result.cycle)) {
    throw Error(ErrorKind::kInternalInvariant,
                "permutation finder produced an invalid cycle");
  }
  return result;
}

RainbowCycle FindRainbowCyclePermutation(
    const LayeredDigraph& graph, Vertex root,
    const PermutationFinderOptions& options) {
  return FindRainbowCycleFromRoot(graph, root, options).cycle;
}

}  // namespace efx
