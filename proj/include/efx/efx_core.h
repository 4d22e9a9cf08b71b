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

#ifndef EFX_EFX_CORE_H_
#define EFX_EFX_CORE_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "efx/bundle.h"
#include "efx/valuation.h"

namespace efx {

// An ordered list of pairwise disjoint bundles covering all m goods.
class Partition {
 public:
  Partition() = default;
  // Throws kInvalidArgument unless the bundles are disjoint and cover [0, m).
  Partition(int m, std::vector<Bundle> bundles);
  // Like the constructor, but the bundles only need to cover a subset of
  // [0, m). Used when a procedure runs on part of the goods.
  static Partition OverGround(int m, std::vector<Bundle> bundles);

  // Union of all bundles.
  Bundle Ground() const;

  int m() const { return m_; }
  int size() const { return static_cast<int>(bundles_.size()); }
  Bundle operator[](int k) const { return bundles_[k]; }
  const std::vector<Bundle>& bundles() const { return bundles_; }

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  int m_ = 0;
  std::vector<Bundle> bundles_;
};

// A partition plus a bijection agent -> bundle index.
class Allocation {
 public:
  Allocation() = default;
  // Throws kInvalidArgument unless `bundle_of_agent` is a permutation of
  // [0, partition.size()).
  Allocation(Partition partition, std::vector<int> bundle_of_agent);
  // Agent i receives partition bundle i.
  static Allocation Identity(Partition partition);
  // Agent i receives bundles[i]; the bundles must form a partition of [0, m).
  static Allocation FromAgentBundles(int m, std::vector<Bundle> bundles);

  const Partition& partition() const { return partition_; }
  int num_agents() const { return static_cast<int>(bundle_of_agent_.size()); }
  int bundle_index(int agent) const { return bundle_of_agent_[agent]; }
  Bundle BundleOf(int agent) const {
    return partition_[bundle_of_agent_[agent]];
  }
  // Canonical form: the bundle of every agent, in agent order.
  std::vector<Bundle> AgentBundles() const;

 private:
  Partition partition_;
  std::vector<int> bundle_of_agent_;
};

// Agent `envier` values `envied`'s bundle minus `good` strictly above its own.
struct EnvyWitness {
  int envier = 0;
  int envied = 0;
  GoodId good = 0;

  friend bool operator==(const EnvyWitness&, const EnvyWitness&) = default;
};

// v(X_k) >= v(X_j \ g) for every bundle j and every good g in it.
bool EfxFeasible(const Partition& partition, const ValueTable& v, int k);

// True when every bundle is EFX-feasible under v.
bool IsEfxPartition(const Partition& partition, const ValueTable& v);

// Lexicographically smallest (envier, envied, good) strong-envy witness.
std::optional<EnvyWitness> StrongEnvyWitness(std::span<const ValueTable> tables,
                                             const Allocation& allocation);
std::optional<EnvyWitness> StrongEnvyWitness(const Instance& instance,
                                             const Allocation& allocation);

bool IsEfx(std::span<const ValueTable> tables, const Allocation& allocation);
bool IsEfx(const Instance& instance, const Allocation& allocation);

// Tabulates the three agents of an instance.
std::array<ValueTable, kNumAgents> TabulateAgents(const Instance& instance);

struct PrOptions {
  // 0 selects the default bound 3^m * m.
  int64_t max_iterations = 0;
};

// One reallocation of the PR algorithm.
struct PrStep {
  int receiver = 0;
  int donor = 0;
  GoodId good = 0;
  Rational min_value_after;
};

struct PrResult {
  Partition partition;
  std::vector<PrStep> steps;
};

// Single-valuation improvement procedure: while some bundle is not
// EFX-feasible, the lowest-valued bundle takes the good g from the donor j
// maximizing v(X_j \ g) (ties: smallest j, then smallest g). Each step must
// strictly raise the ascending list of bundle values in lexicographic order;
// a step that does not is reported as kDegenerate, and exceeding the
// iteration cap as kInternalInvariant.
PrResult RunPr(const Partition& start, const ValueTable& v,
               const PrOptions& options = {});
Partition PrAlgorithm(const Partition& start, const ValueTable& v,
                      const PrOptions& options = {});

// min over bundles of v.
Rational MinBundleValue(const Partition& partition, const ValueTable& v);

}  // namespace efx

#endif  // EFX_EFX_CORE_H_
