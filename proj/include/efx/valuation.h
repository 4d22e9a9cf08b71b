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

// Exact-rational valuation functions over m indivisible goods, the class
// checkers used to qualify them for the solver, and the perturbation that
// turns any instance into a non-degenerate one.

#ifndef EFX_VALUATION_H_
#define EFX_VALUATION_H_

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "efx/bundle.h"
#include "efx/rational.h"

namespace efx {

enum class ValuationKind {
  kTable,
  kAdditive,
  kBudgetAdditive,
  kUnitDemand,
  kMultiplicative,
};

std::string_view ValuationKindName(ValuationKind kind);
// Throws kParse on an unknown name.
ValuationKind ParseValuationKind(std::string_view name);

// Limits on the exhaustive checkers. Every checker refuses (kInstanceTooLarge)
// rather than sampling when m exceeds its cap.
struct EnumerationCaps {
  int monotone = 20;
  int non_degenerate = 20;
  int mms_feasible = 12;
  int nice_cancelable = 12;
  int efx_enumeration = 8;
  int rainbow_vertices = 40;

  // Every m-cap replaced by `max_m`; the rainbow cap is left alone.
  static EnumerationCaps WithMaxGoods(int max_m);
};

// Dense materialization of a valuation: one value per subset, indexed by the
// subset's bitmask.
class ValueTable {
 public:
  ValueTable() = default;
  ValueTable(int m, std::vector<Rational> values);

  int m() const { return m_; }
  const Rational& operator()(Bundle s) const { return values_[s.bits()]; }
  const std::vector<Rational>& values() const { return values_; }

 private:
  int m_ = 0;
  std::vector<Rational> values_;
};

// A monotone set function over goods 0..m-1. Parametric kinds store one
// value per good; table kind stores one entry per subset (entries may be
// missing, in which case Value() on that subset reports kMalformedValuation).
class Valuation {
 public:
  Valuation() = default;

  static Valuation Additive(std::vector<Rational> per_good);
  static Valuation BudgetAdditive(std::vector<Rational> per_good,
                                  Rational cap);
  static Valuation UnitDemand(std::vector<Rational> per_good);
  // The empty bundle is worth the empty product, 1.
  static Valuation Multiplicative(std::vector<Rational> per_good);
  static Valuation Table(int m, std::vector<std::optional<Rational>> entries);
  static Valuation Table(int m, std::vector<Rational> entries);
  static Valuation FromTable(const ValueTable& table);

  ValuationKind kind() const { return kind_; }
  int m() const { return m_; }
  const std::vector<Rational>& per_good() const { return per_good_; }
  const Rational& cap() const { return cap_; }
  const std::vector<std::optional<Rational>>& table() const { return table_; }

  Rational Value(Bundle s) const;

  // Materializes all 2^m values. Callers that issue many queries against the
  // same valuation tabulate once and keep the table for the call.
  ValueTable Tabulate() const;

  friend bool operator==(const Valuation&, const Valuation&) = default;

 private:
  ValuationKind kind_ = ValuationKind::kAdditive;
  int m_ = 0;
  std::vector<Rational> per_good_;
  Rational cap_;
  std::vector<std::optional<Rational>> table_;
};

inline constexpr int kNumAgents = 3;

struct Instance {
  int m = 0;
  std::array<Valuation, kNumAgents> agents;

  // Throws kMalformedValuation if an agent disagrees on m.
  void Validate() const;

  friend bool operator==(const Instance&, const Instance&) = default;
};

bool IsMonotone(const Valuation& v, int cap = EnumerationCaps{}.monotone);
bool IsMonotone(const ValueTable& table);

bool IsNonDegenerate(const Valuation& v,
                     int cap = EnumerationCaps{}.non_degenerate);
bool IsNonDegenerate(const ValueTable& table);

// For every S and every pair of 2-partitions (A, B) of S,
// max(v(B1), v(B2)) >= min(v(A1), v(A2)). Equivalently, per S, the smallest
// "max side" over all splits is at least the largest "min side". Subsets are
// checked in parallel.
bool IsMmsFeasible(const Valuation& v, int cap = EnumerationCaps{}.mms_feasible);
bool IsMmsFeasible(const ValueTable& table);
// Single-threaded reference for IsMmsFeasible.
bool IsMmsFeasibleSerial(const ValueTable& table);

// No S, T and g outside both with v(S+g) > v(T+g) but v(S) <= v(T).
bool IsNiceCancelable(const Valuation& v,
                      int cap = EnumerationCaps{}.nice_cancelable);
bool IsNiceCancelable(const ValueTable& table);

// True for the parametric kinds known to be nice-cancelable, hence
// MMS-feasible, without enumeration.
bool IsKnownMmsFeasibleFamily(const Valuation& v);

// Smallest nonzero |v_i(S) - v_i(T)| over the given valuations. nullopt when
// every valuation is constant over all subsets.
std::optional<Rational> MinValueGap(std::span<const Valuation> valuations,
                                    int cap = EnumerationCaps{}.non_degenerate);
std::optional<Rational> MinValueGap(const Instance& instance,
                                    int cap = EnumerationCaps{}.non_degenerate);

// gap / 2^(m+2), or 1 when there is no gap to respect.
Rational DefaultEpsilon(const std::optional<Rational>& gap, int m);

// v'(S) = v(S) + eps * sum_{g_j in S} 2^j with goods numbered j = 1..m, i.e.
// good index g contributes eps * 2^(g+1). No precondition check.
Valuation PerturbValuation(const Valuation& v, const Rational& eps);

// Perturbs every agent. Requires eps > 0 and eps * 2^(m+1) < MinValueGap;
// otherwise throws kInvalidEpsilon.
Instance PerturbInstance(const Instance& instance, const Rational& eps,
                         int cap = EnumerationCaps{}.non_degenerate);

}  // namespace efx

#endif  // EFX_VALUATION_H_
