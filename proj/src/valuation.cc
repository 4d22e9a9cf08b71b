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

#include "efx/valuation.h"

#include <algorithm>
#include <string>
#include <utility>

#include "efx/error.h"

namespace efx {
namespace {

void CheckGoodCount(int m) {
  if (m < 0 || m > kMaxGoods) {
    throw Error(ErrorKind::kMalformedValuation,
                "good count " + std::to_string(m) + " outside [0, " +
                    std::to_string(kMaxGoods) + "]");
  }
}

void CheckNonNegative(const Rational& x, std::string_view what) {
  if (sgn(x) < 0) {
    throw Error(ErrorKind::kMalformedValuation,
                std::string(what) + " is negative: " + FormatRational(x));
  }
}

void CheckCap(int m, int cap, std::string_view checker) {
  if (m > cap) {
    throw Error(ErrorKind::kInstanceTooLarge,
                std::string(checker) + ": m=" + std::to_string(m) +
                    " exceeds enumeration cap " + std::to_string(cap));
  }
}

}  // namespace

std::string_view ValuationKindName(ValuationKind kind) {
  switch (kind) {
    case ValuationKind::kTable:
      return "table";
    case ValuationKind::kAdditive:
      return "additive";
    case ValuationKind::kBudgetAdditive:
      return "budget_additive";
    case ValuationKind::kUnitDemand:
      return "unit_demand";
    case ValuationKind::kMultiplicative:
      return "multiplicative";
  }
  return "unknown";
}

ValuationKind ParseValuationKind(std::string_view name) {
  for (ValuationKind kind :
       {ValuationKind::kTable, ValuationKind::kAdditive,
        ValuationKind::kBudgetAdditive, ValuationKind::kUnitDemand,
        ValuationKind::kMultiplicative}) {
    if (ValuationKindName(kind) == name) return kind;
  }
  throw Error(ErrorKind::kParse,
              "unknown valuation kind '" + std::string(name) + "'");
}

EnumerationCaps EnumerationCaps::WithMaxGoods(int max_m) {
  EnumerationCaps caps;
  caps.monotone = caps.non_degenerate = caps.mms_feasible =
      caps.nice_cancelable = caps.efx_enumeration = max_m;
  return caps;
}

ValueTable::ValueTable(int m, std::vector<Rational> values)
    : m_(m), values_(std::move(values)) {
  CheckGoodCount(m);
  if (values_.size() != (std::size_t{1} << m)) {
    throw Error(ErrorKind::kMalformedValuation,
                "value table size does not match 2^m");
  }
}

Valuation Valuation::Additive(std::vector<Rational> per_good) {
  Valuation v;
  v.kind_ = ValuationKind::kAdditive;
  v.m_ = static_cast<int>(per_good.size());
  CheckGoodCount(v.m_);
  for (const Rational& x : per_good) CheckNonNegative(x, "good value");
  v.per_good_ = std::move(per_good);
  return v;
}

Valuation Valuation::BudgetAdditive(std::vector<Rational> per_good,
                                    Rational cap) {
  Valuation v = Additive(std::move(per_good));
  CheckNonNegative(cap, "budget cap");
  v.kind_ = ValuationKind::kBudgetAdditive;
  v.cap_ = std::move(cap);
  return v;
}

Valuation Valuation::UnitDemand(std::vector<Rational> per_good) {
  Valuation v = Additive(std::move(per_good));
  v.kind_ = ValuationKind::kUnitDemand;
  return v;
}

Valuation Valuation::Multiplicative(std::vector<Rational> per_good) {
  Valuation v = Additive(std::move(per_good));
  v.kind_ = ValuationKind::kMultiplicative;
  return v;
}

Valuation Valuation::Table(int m,
                           std::vector<std::optional<Rational>> entries) {
  CheckGoodCount(m);
  if (entries.size() != (std::size_t{1} << m)) {
    throw Error(ErrorKind::kMalformedValuation,
                "table needs 2^m = " + std::to_string(std::size_t{1} << m) +
                    " slots, got " + std::to_string(entries.size()));
  }
  for (const auto& e : entries) {
    if (e) CheckNonNegative(*e, "table entry");
  }
  Valuation v;
  v.kind_ = ValuationKind::kTable;
  v.m_ = m;
  v.table_ = std::move(entries);
  return v;
}

Valuation Valuation::Table(int m, std::vector<Rational> entries) {
  std::vector<std::optional<Rational>> wrapped(entries.begin(), entries.end());
  return Table(m, std::move(wrapped));
}

Valuation Valuation::FromTable(const ValueTable& table) {
  return Table(table.m(), table.values());
}

Rational Valuation::Value(Bundle s) const {
  if (!s.IsSubsetOf(Bundle::Full(m_))) {
    throw Error(ErrorKind::kInvalidArgument,
                "bundle references goods outside [0, m)");
  }
  switch (kind_) {
    case ValuationKind::kTable: {
      const auto& entry = table_[s.bits()];
      if (!entry) {
        throw Error(ErrorKind::kMalformedValuation,
                    "table has no entry for subset " +
                        std::to_string(s.bits()));
      }
      return *entry;
    }
    case ValuationKind::kAdditive:
    case ValuationKind::kBudgetAdditive: {
      Rational sum = 0;
      for (GoodId g : s.Goods()) sum += per_good_[g];
      if (kind_ == ValuationKind::kBudgetAdditive && sum > cap_) return cap_;
      return sum;
    }
    case ValuationKind::kUnitDemand: {
      Rational best = 0;
      for (GoodId g : s.Goods()) best = std::max(best, per_good_[g]);
      return best;
    }
    case ValuationKind::kMultiplicative: {
      Rational product = 1;
      for (GoodId g : s.Goods()) product *= per_good_[g];
      return product;
    }
  }
  throw Error(ErrorKind::kMalformedValuation, "unknown valuation kind");
}

ValueTable Valuation::Tabulate() const {
  const uint32_t n = uint32_t{1} << m_;
  std::vector<Rational> values(n);
  for (uint32_t s = 0; s < n; ++s) values[s] = Value(Bundle(s));
  return ValueTable(m_, std::move(values));
}

void Instance::Validate() const {
  CheckGoodCount(m);
  for (int i = 0; i < kNumAgents; ++i) {
    if (agents[i].m() != m) {
      throw Error(ErrorKind::kMalformedValuation,
                  "agent " + std::to_string(i + 1) + " has " +
                      std::to_string(agents[i].m()) + " goods, instance has " +
                      std::to_string(m));
    }
  }
}

bool IsMonotone(const ValueTable& table) {
  const uint32_t n = uint32_t{1} << table.m();
  for (uint32_t s = 0; s < n; ++s) {
    for (GoodId g = 0; g < table.m(); ++g) {
      const Bundle bundle(s);
      if (bundle.Contains(g)) continue;
      if (table(bundle.With(g)) < table(bundle)) return false;
    }
  }
  return true;
}

bool IsMonotone(const Valuation& v, int cap) {
  switch (v.kind()) {
    case ValuationKind::kAdditive:
    case ValuationKind::kBudgetAdditive:
    case ValuationKind::kUnitDemand:
      return true;  // nonnegative parameters are enforced at construction
    case ValuationKind::kMultiplicative:
      if (std::all_of(v.per_good().begin(), v.per_good().end(),
                      [](const Rational& x) { return x >= 1; })) {
        return true;
      }
      break;
    case ValuationKind::kTable:
      break;
  }
  CheckCap(v.m(), cap, "is_monotone");
  return IsMonotone(v.Tabulate());
}

bool IsNonDegenerate(const ValueTable& table) {
  std::vector<Rational> sorted = table.values();
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

bool IsNonDegenerate(const Valuation& v, int cap) {
  CheckCap(v.m(), cap, "is_non_degenerate");
  return IsNonDegenerate(v.Tabulate());
}

namespace {

// For a fixed S: does the best "min side" over all 2-splits stay at or below
// the worst "max side"? Each unordered split is seen twice; harmless.
bool SplitConditionHolds(const ValueTable& table, uint32_t s) {
  const Rational* best_min = nullptr;
  const Rational* worst_max = nullptr;
  uint32_t sub = s;
  while (true) {
    const Rational& a = table(Bundle(sub));
    const Rational& b = table(Bundle(s & ~sub));
    const Rational& lo = a < b ? a : b;
    const Rational& hi = a < b ? b : a;
    if (best_min == nullptr || lo > *best_min) best_min = &lo;
    if (worst_max == nullptr || hi < *worst_max) worst_max = &hi;
    if (sub == 0) break;
    sub = (sub - 1) & s;
  }
  return *worst_max >= *best_min;
}

}  // namespace

bool IsMmsFeasibleSerial(const ValueTable& table) {
  const uint32_t n = uint32_t{1} << table.m();
  for (uint32_t s = 0; s < n; ++s) {
    if (!SplitConditionHolds(table, s)) return false;
  }
  return true;
}

bool IsMmsFeasible(const ValueTable& table) {
  const long long n = 1LL << table.m();
  bool feasible = true;
#pragma omp parallel for schedule(dynamic, 64) reduction(&& : feasible)
  for (long long s = 0; s < n; ++s) {
    if (feasible && !SplitConditionHolds(table, static_cast<uint32_t>(s))) {
      feasible = false;
    }
  }
  return feasible;
}

bool IsMmsFeasible(const Valuation& v, int cap) {
  CheckCap(v.m(), cap, "is_mms_feasible");
  return IsMmsFeasible(v.Tabulate());
}

bool IsNiceCancelable(const ValueTable& table) {
  const int m = table.m();
  const uint32_t n = uint32_t{1} << m;
  std::vector<uint32_t> order;
  order.reserve(n / 2);
  for (GoodId g = 0; g < m; ++g) {
    const uint32_t bit = uint32_t{1} << g;
    order.clear();
    for (uint32_t s = 0; s < n; ++s) {
      if ((s & bit) == 0) order.push_back(s);
    }
    std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
      return table(Bundle(a | bit)) < table(Bundle(b | bit));
    });
    // Sweep groups of equal v(S+g); every S must beat the largest v(T)
    // among strictly smaller groups.
    const Rational* lower_max = nullptr;
    std::size_t i = 0;
    while (i < order.size()) {
      std::size_t j = i;
      const Rational& key = table(Bundle(order[i] | bit));
      while (j < order.size() && table(Bundle(order[j] | bit)) == key) ++j;
      const Rational* group_max = nullptr;
      for (std::size_t t = i; t < j; ++t) {
        const Rational& vs = table(Bundle(order[t]));
        if (lower_max != nullptr && !(vs > *lower_max)) return false;
        if (group_max == nullptr || vs > *group_max) group_max = &vs;
      }
      if (lower_max == nullptr || *group_max > *lower_max) {
        lower_max = group_max;
      }
      i = j;
    }
  }
  return true;
}

bool IsNiceCancelable(const Valuation& v, int cap) {
  CheckCap(v.m(), cap, "is_nice_cancelable");
  return IsNiceCancelable(v.Tabulate());
}

bool IsKnownMmsFeasibleFamily(const Valuation& v) {
  return v.kind() != ValuationKind::kTable;
}

std::optional<Rational> MinValueGap(std::span<const Valuation> valuations,
                                    int cap) {
  std::optional<Rational> gap;
  for (const Valuation& v : valuations) {
    CheckCap(v.m(), cap, "min_value_gap");
    std::vector<Rational> sorted = v.Tabulate().values();
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 1; i < sorted.size(); ++i) {
      if (sorted[i] == sorted[i - 1]) continue;
      Rational diff = sorted[i] - sorted[i - 1];
      if (!gap || diff < *gap) gap = std::move(diff);
    }
  }
  return gap;
}

std::optional<Rational> MinValueGap(const Instance& instance, int cap) {
  return MinValueGap(std::span<const Valuation>(instance.agents), cap);
}

Rational DefaultEpsilon(const std::optional<Rational>& gap, int m) {
  if (!gap) return Rational(1);
  Rational eps = *gap / PowerOfTwo(m + 2);
  eps.canonicalize();
  return eps;
}

Valuation PerturbValuation(const Valuation& v, const Rational& eps) {
  ValueTable base = v.Tabulate();
  std::vector<Rational> values = base.values();
  for (uint32_t s = 0; s < values.size(); ++s) {
    // sum over goods g in S of 2^(g+1) is exactly 2 * bitmask(S).
    values[s] += eps * Rational(2 * static_cast<unsigned long>(s));
    values[s].canonicalize();
  }
  return Valuation::Table(v.m(), std::move(values));
}

Instance PerturbInstance(const Instance& instance, const Rational& eps,
                         int cap) {
  instance.Validate();
  if (sgn(eps) <= 0) {
    throw Error(ErrorKind::kInvalidEpsilon,
                "epsilon must be positive, got " + FormatRational(eps));
  }
  const std::optional<Rational> gap = MinValueGap(instance, cap);
  if (gap && !(eps * PowerOfTwo(instance.m + 1) < *gap)) {
    throw Error(ErrorKind::kInvalidEpsilon,
                "epsilon * 2^(m+1) must be below the value gap " +
                    FormatRational(*gap) + ", got epsilon " +
                    FormatRational(eps));
  }
  Instance out;
  out.m = instance.m;
  for (int i = 0; i < kNumAgents; ++i) {
    out.agents[i] = PerturbValuation(instance.agents[i], eps);
  }
  return out;
}

}  // namespace efx
