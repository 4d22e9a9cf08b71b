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

#include "efx/efx_core.h"

#include <algorithm>
#include <string>
#include <utility>

#include "efx/error.h"

namespace efx {

Partition::Partition(int m, std::vector<Bundle> bundles)
    : Partition(OverGround(m, std::move(bundles))) {
  if (Ground() != Bundle::Full(m)) {
    throw Error(ErrorKind::kInvalidArgument,
                "partition does not cover exactly goods 0..m-1");
  }
}

Partition Partition::OverGround(int m, std::vector<Bundle> bundles) {
  if (m < 0 || m > kMaxGoods) {
    throw Error(ErrorKind::kInvalidArgument, "good count out of range");
  }
  Bundle seen;
  for (Bundle b : bundles) {
    if (b.Intersects(seen)) {
      throw Error(ErrorKind::kInvalidArgument, "partition bundles overlap");
    }
    seen = seen.Union(b);
  }
  if (!seen.IsSubsetOf(Bundle::Full(m))) {
    throw Error(ErrorKind::kInvalidArgument,
                "partition references goods outside [0, m)");
  }
  Partition p;
  p.m_ = m;
  p.bundles_ = std::move(bundles);
  return p;
}

Bundle Partition::Ground() const {
  Bundle all;
  for (Bundle b : bundles_) all = all.Union(b);
  return all;
}

Allocation::Allocation(Partition partition, std::vector<int> bundle_of_agent)
    : partition_(std::move(partition)),
      bundle_of_agent_(std::move(bundle_of_agent)) {
  std::vector<int> sorted = bundle_of_agent_;
  std::sort(sorted.begin(), sorted.end());
  bool bijective = static_cast<int>(sorted.size()) == partition_.size();
  for (int i = 0; bijective && i < static_cast<int>(sorted.size()); ++i) {
    bijective = sorted[i] == i;
  }
  if (!bijective) {
    throw Error(ErrorKind::kInvalidArgument,
                "allocation must assign each bundle to exactly one agent");
  }
}

Allocation Allocation::Identity(Partition partition) {
  std::vector<int> ids(partition.size());
  for (int i = 0; i < partition.size(); ++i) ids[i] = i;
  return Allocation(std::move(partition), std::move(ids));
}

Allocation Allocation::FromAgentBundles(int m, std::vector<Bundle> bundles) {
  return Identity(Partition(m, std::move(bundles)));
}

std::vector<Bundle> Allocation::AgentBundles() const {
  std::vector<Bundle> out;
  out.reserve(bundle_of_agent_.size());
  for (int agent = 0; agent < num_agents(); ++agent) {
    out.push_back(BundleOf(agent));
  }
  return out;
}

bool EfxFeasible(const Partition& partition, const ValueTable& v, int k) {
  const Rational& own = v(partition[k]);
  for (Bundle other : partition.bundles()) {
    for (GoodId g : other.Goods()) {
      if (own < v(other.Without(g))) return false;
    }
  }
  return true;
}

bool IsEfxPartition(const Partition& partition, const ValueTable& v) {
  for (int k = 0; k < partition.size(); ++k) {
    if (!EfxFeasible(partition, v, k)) return false;
  }
  return true;
}

std::optional<EnvyWitness> StrongEnvyWitness(std::span<const ValueTable> tables,
                                             const Allocation& allocation) {
  const int n = allocation.num_agents();
  if (static_cast<int>(tables.size()) != n) {
    throw Error(ErrorKind::kInvalidArgument,
                "one valuation per agent is required");
  }
  for (int i = 0; i < n; ++i) {
    const Rational& own = tables[i](allocation.BundleOf(i));
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const Bundle theirs = allocation.BundleOf(j);
      for (GoodId g : theirs.Goods()) {
        if (own < tables[i](theirs.Without(g))) {
          return EnvyWitness{.envier = i, .envied = j, .good = g};
        }
      }
    }
  }
  return std::nullopt;
}

std::array<ValueTable, kNumAgents> TabulateAgents(const Instance& instance) {
  instance.Validate();
  std::array<ValueTable, kNumAgents> tables;
  for (int i = 0; i < kNumAgents; ++i) {
    tables[i] = instance.agents[i].Tabulate();
  }
  return tables;
}

std::optional<EnvyWitness> StrongEnvyWitness(const Instance& instance,
                                             const Allocation& allocation) {
  const auto tables = TabulateAgents(instance);
  return StrongEnvyWitness(std::span<const ValueTable>(tables), allocation);
}

bool IsEfx(std::span<const ValueTable> tables, const Allocation& allocation) {
  return !StrongEnvyWitness(tables, allocation).has_value();
}

bool IsEfx(const Instance& instance, const Allocation& allocation) {
  return !StrongEnvyWitness(instance, allocation).has_value();
}

Rational MinBundleValue(const Partition& partition, const ValueTable& v) {
  Rational best = v(partition[0]);
  for (Bundle b : partition.bundles()) {
    if (v(b) < best) best = v(b);
  }
  return best;
}

namespace {

std::vector<Rational> SortedValues(const std::vector<Bundle>& bundles,
                                   const ValueTable& v) {
  std::vector<Rational> out;
  out.reserve(bundles.size());
  for (Bundle b : bundles) out.push_back(v(b));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

PrResult RunPr(const Partition& start, const ValueTable& v,
               const PrOptions& options) {
  const int n = start.size();
  if (n != 2 && n != 3) {
    throw Error(ErrorKind::kInvalidArgument,
                "PR runs on 2- or 3-bundle partitions, got " +
                    std::to_string(n));
  }
  if (start.m() != v.m()) {
    throw Error(ErrorKind::kInvalidArgument,
                "partition and valuation disagree on m");
  }
  int64_t cap = options.max_iterations;
  if (cap <= 0) {
    cap = std::max<int64_t>(1, start.m());
    for (int i = 0; i < start.m(); ++i) cap *= 3;
  }

  std::vector<Bundle> bundles = start.bundles();
  PrResult result;
  for (int64_t iteration = 0;; ++iteration) {
    Partition current = Partition::OverGround(start.m(), bundles);
    if (IsEfxPartition(current, v)) {
      result.partition = std::move(current);
      return result;
    }
    if (iteration >= cap) {
      throw Error(ErrorKind::kInternalInvariant,
                  "PR exceeded its iteration cap of " + std::to_string(cap));
    }
    int receiver = 0;
    for (int k = 1; k < n; ++k) {
      if (v(bundles[k]) < v(bundles[receiver])) receiver = k;
    }
    const Rational before = v(bundles[receiver]);
    const std::vector<Rational> profile_before = SortedValues(bundles, v);

    int donor = -1;
    GoodId good = -1;
    const Rational* best = nullptr;
    for (int j = 0; j < n; ++j) {
      if (j == receiver) continue;
      for (GoodId g : bundles[j].Goods()) {
        const Rational& remainder = v(bundles[j].Without(g));
        if (best == nullptr || remainder > *best) {
          best = &remainder;
          donor = j;
          good = g;
        }
      }
    }
    if (best == nullptr || !(*best > before)) {
      throw Error(ErrorKind::kInternalInvariant,
                  "PR found a non-EFX partition without a strong-envy move");
    }
    bundles[donor] = bundles[donor].Without(good);
    bundles[receiver] = bundles[receiver].With(good);

    // The minimum rises, or stays put while one fewer bundle attains it
    // (several empty bundles share a value even for non-degenerate v).
    const std::vector<Rational> profile_after = SortedValues(bundles, v);
    if (!(profile_after > profile_before)) {
      throw Error(ErrorKind::kDegenerate,
                  "PR step did not improve the sorted bundle values; "
                  "valuation is degenerate");
    }
    Rational after = profile_after.front();
    result.steps.push_back(PrStep{.receiver = receiver,
                                  .donor = donor,
                                  .good = good,
                                  .min_value_after = std::move(after)});
  }
}

Partition PrAlgorithm(const Partition& start, const ValueTable& v,
                      const PrOptions& options) {
  return RunPr(start, v, options).partition;
}

}  // namespace efx
