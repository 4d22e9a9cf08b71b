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

#include "efx/efx_three.h"

#include <algorithm>
#include <string>
#include <utility>

#include "efx/error.h"

namespace efx {
namespace {

constexpr int kAgent1 = 0;
constexpr int kAgent2 = 1;
constexpr int kAgent3 = 2;

[[noreturn]] void Invariant(const std::string& what) {
  throw Error(ErrorKind::kInternalInvariant, what);
}

std::string DescribeBundle(Bundle b) {
  std::string out = "{";
  for (GoodId g : b.Goods()) {
    if (out.size() > 1) out += ",";
    out += std::to_string(g);
  }
  return out + "}";
}

// Index of the most valued bundle; ties go to the smaller index.
int Favourite(const std::vector<Bundle>& bundles, const ValueTable& v) {
  int best = 0;
  for (int k = 1; k < static_cast<int>(bundles.size()); ++k) {
    if (v(bundles[k]) > v(bundles[best])) best = k;
  }
  return best;
}

// Good h in `bundle` maximizing v(bundle \ h); ties go to the smallest index.
GoodId MostValuedRemoval(Bundle bundle, const ValueTable& v) {
  GoodId best = -1;
  for (GoodId h : bundle.Goods()) {
    if (best < 0 || v(bundle.Without(h)) > v(bundle.Without(best))) best = h;
  }
  return best;
}

bool StronglyEnvies(const ValueTable& v, Bundle own, Bundle other) {
  for (GoodId g : other.Goods()) {
    if (v(own) < v(other.Without(g))) return true;
  }
  return false;
}

// Agent 2 picks its favourite of three bundles as X3; the other two become
// X1, X2 ordered by agent 1's value.
Partition AgentTwoPicks(int m, const std::vector<Bundle>& bundles,
                        const AgentTables& tables) {
  const int pick = Favourite(bundles, tables[kAgent2]);
  std::vector<Bundle> rest;
  for (int k = 0; k < 3; ++k) {
    if (k != pick) rest.push_back(bundles[k]);
  }
  if (tables[kAgent1](rest[1]) < tables[kAgent1](rest[0])) {
    std::swap(rest[0], rest[1]);
  }
  return Partition(m, {rest[0], rest[1], bundles[pick]});
}

// Orders X1, X2 by agent 1's value, leaving X3 in place.
Partition OrderForAgentOne(int m, Bundle a, Bundle b, Bundle x3,
                           const AgentTables& tables) {
  if (tables[kAgent1](b) < tables[kAgent1](a)) std::swap(a, b);
  return Partition(m, {a, b, x3});
}

void CheckInvariants(const Partition& p, const AgentTables& tables) {
  if (!EfxFeasible(p, tables[kAgent1], 0) ||
      !EfxFeasible(p, tables[kAgent1], 1)) {
    Invariant("INV-1 broken: X1 or X2 not EFX-feasible for agent 1");
  }
  if (!EfxFeasible(p, tables[kAgent2], 2) &&
      !EfxFeasible(p, tables[kAgent3], 2)) {
    Invariant("INV-2 broken: X3 not EFX-feasible for agents 2 or 3");
  }
  // Equal values only when X1 and X2 are the same (empty) set.
  if (tables[kAgent1](p[1]) < tables[kAgent1](p[0]) ||
      (p[0] != p[1] && tables[kAgent1](p[0]) == tables[kAgent1](p[1]))) {
    Invariant("X1, X2 not strictly ordered by agent 1");
  }
}

// Three bundles that are EFX-feasible for agent 1 in the order given, run
// through PR when needed, then handed to agent 2 to pick from.
Partition RepairForAgentOne(int m, const std::vector<Bundle>& bundles,
                            const AgentTables& tables) {
  Partition pr = PrAlgorithm(Partition(m, bundles), tables[kAgent1]);
  return AgentTwoPicks(m, pr.bundles(), tables);
}

}  // namespace

std::string_view SolverCaseName(SolverCase c) {
  switch (c) {
    case SolverCase::kInit:
      return "init";
    case SolverCase::kAssemble:
      return "assemble";
    case SolverCase::kCaseA:
      return "A";
    case SolverCase::kCaseBNone:
      return "B-none";
    case SolverCase::kCaseBBoth:
      return "B-both";
    case SolverCase::kCaseBOne:
      return "B-one";
  }
  return "unknown";
}

Bundle MinImprovingSubset(const ValueTable& v, Bundle base,
                          const Rational& threshold) {
  if (!(v(base) > threshold)) {
    throw Error(ErrorKind::kPrecondition,
                "min_improving_subset: v(base) must exceed the threshold");
  }
  Bundle current = base;
  bool changed = true;
  while (changed) {
    changed = false;
    for (GoodId g : current.Goods()) {
      if (v(current.Without(g)) > threshold) {
        current = current.Without(g);
        changed = true;
      }
    }
  }
  return current;
}

SolverState InitializeState(const AgentTables& tables) {
  const int m = tables[kAgent1].m();
  for (int agent : {kAgent1, kAgent2}) {
    if (!IsNonDegenerate(tables[agent])) {
      throw Error(ErrorKind::kDegenerate,
                  "agent " + std::to_string(agent + 1) +
                      " is degenerate; perturb before solving");
    }
  }
  const Partition start(m, {Bundle::Full(m), Bundle(), Bundle()});
  SolverState state;
  state.partition = RepairForAgentOne(m, start.bundles(), tables);
  CheckInvariants(state.partition, tables);
  state.potential = tables[kAgent1](state.partition[0]);
  state.trace.push_back(TraceRecord{.iteration = 0,
                                    .label = SolverCase::kInit,
                                    .phi = state.potential});
  return state;
}

std::optional<Allocation> AssembleIfPossible(const SolverState& state,
                                             const AgentTables& tables) {
  const Partition& p = state.partition;
  // The agent who finds X3 EFX-feasible plays agent 2's role here.
  int keeper = kAgent2;
  int other = kAgent3;
  if (!EfxFeasible(p, tables[kAgent2], 2)) {
    if (!EfxFeasible(p, tables[kAgent3], 2)) {
      Invariant("assemble: X3 EFX-feasible for neither agent 2 nor agent 3");
    }
    std::swap(keeper, other);
  }

  std::vector<int> bundle_of(kNumAgents, -1);
  auto feasible_low = [&](int agent) -> int {
    for (int k : {0, 1}) {
      if (EfxFeasible(p, tables[agent], k)) return k;
    }
    return -1;
  };

  if (int k = feasible_low(other); k >= 0) {
    bundle_of[other] = k;
    bundle_of[keeper] = 2;
    bundle_of[kAgent1] = 1 - k;
  } else if (int k_keeper = feasible_low(keeper); k_keeper >= 0) {
    const int pick = Favourite(p.bundles(), tables[other]);
    bundle_of[other] = pick;
    if (pick == 2) {
      bundle_of[keeper] = k_keeper;
      bundle_of[kAgent1] = 1 - k_keeper;
    } else {
      bundle_of[keeper] = 2;
      bundle_of[kAgent1] = 1 - pick;
    }
  } else {
    return std::nullopt;
  }

  Allocation allocation(p, std::move(bundle_of));
  if (!IsEfx(std::span<const ValueTable>(tables), allocation)) {
    Invariant("assemble produced an allocation that is not EFX");
  }
  return allocation;
}

SolverState ImprovementStep(const SolverState& state,
                            const AgentTables& tables) {
  const Partition& p = state.partition;
  const int m = p.m();
  const ValueTable& v1 = tables[kAgent1];
  const Bundle x1 = p[0], x2 = p[1], x3 = p[2];
  if (!(v1(x1) < v1(x2))) Invariant("step: expected v1(X1) < v1(X2)");

  for (int agent : {kAgent2, kAgent3}) {
    if (EfxFeasible(p, tables[agent], 0) || EfxFeasible(p, tables[agent], 1)) {
      throw Error(ErrorKind::kPrecondition,
                  "improvement_step called although an EFX allocation can be "
                  "assembled");
    }
  }
  if (x3.empty()) Invariant("step: X3 is empty");

  std::array<GoodId, kNumAgents> removal = {-1, -1, -1};
  for (int agent : {kAgent2, kAgent3}) {
    const ValueTable& v = tables[agent];
    removal[agent] = MostValuedRemoval(x3, v);
    const Rational& rest = v(x3.Without(removal[agent]));
    if (!(rest > v(x1) && rest > v(x2))) {
      Invariant("X3 minus its best good does not beat X1 and X2 for agent " +
                std::to_string(agent + 1));
    }
  }

  SolverState next;
  next.iteration = state.iteration + 1;
  next.trace = state.trace;
  SolverCase label;

  // Case A: some agent i still prefers X3 \ g_i to X1 + g_i. Agent 2 first.
  int case_a_agent = -1;
  for (int agent : {kAgent2, kAgent3}) {
    const ValueTable& v = tables[agent];
    const GoodId g = removal[agent];
    if (v(x3.Without(g)) >= v(x1.With(g))) {
      case_a_agent = agent;
      break;
    }
  }

  if (case_a_agent >= 0) {
    label = SolverCase::kCaseA;
    const GoodId g = removal[case_a_agent];
    const Bundle grown = x1.With(g);
    const Bundle new1 = MinImprovingSubset(v1, grown, v1(x1));
    const Bundle new3 = x3.Without(g).Union(grown.Minus(new1));
    const Partition shifted(m, {new1, x2, new3});

    for (GoodId h : x2.Goods()) {
      if (!(v1(new1) > v1(x2.Without(h)))) Invariant("Case A: X'1 lost EFX-feasibility");
    }
    for (GoodId h : new1.Goods()) {
      if (!(v1(x2) > v1(new1.Without(h)))) Invariant("Case A: X'2 lost EFX-feasibility");
    }
    if (!EfxFeasible(shifted, tables[case_a_agent], 2)) {
      Invariant("Case A: X'3 not EFX-feasible for the triggering agent");
    }

    if (EfxFeasible(shifted, v1, 0) && EfxFeasible(shifted, v1, 1)) {
      next.partition = OrderForAgentOne(m, new1, x2, new3, tables);
    } else {
      next.partition = RepairForAgentOne(m, shifted.bundles(), tables);
    }
  } else {
    // Case B: agent 2 splits X1 + X3 with PR, agent 3 chooses first.
    const GoodId g2 = removal[kAgent2];
    const Partition split = PrAlgorithm(
        Partition::OverGround(m, {x1.With(g2), x3.Without(g2)}),
        tables[kAgent2]);
    const ValueTable& v3 = tables[kAgent3];
    int pick = v3(split[1]) > v3(split[0]) ? 1 : 0;
    const Bundle y3 = split[pick];
    const Bundle y2 = split[1 - pick];

    if (!(v3(y3) > v3(x2))) {
      const GoodId g3 = removal[kAgent3];
      throw Error(
          ErrorKind::kNotMmsFeasible,
          "agent 3's favourite of the 2-partition " + DescribeBundle(y2) +
              " | " + DescribeBundle(y3) + " is not worth more than X2 = " +
              DescribeBundle(x2) + ", although both parts of " +
              DescribeBundle(x1.With(g3)) + " | " +
              DescribeBundle(x3.Without(g3)) + " are; v3 is not MMS-feasible");
    }
    const Partition candidate(m, {x2, y2, y3});
    if (!EfxFeasible(candidate, tables[kAgent2], 1) ||
        !EfxFeasible(candidate, v3, 2)) {
      Invariant("Case B: Y2 or Y3 not EFX-feasible for its holder");
    }

    const bool envies_y2 = StronglyEnvies(v1, x2, y2);
    const bool envies_y3 = StronglyEnvies(v1, x2, y3);
    if (!envies_y2 && !envies_y3) {
      label = SolverCase::kCaseBNone;
      next.partition = p;
      next.final_allocation = Allocation(candidate, {0, 1, 2});
      next.potential = state.potential;
      next.trace.push_back(TraceRecord{.iteration = next.iteration,
                                       .label = label,
                                       .phi = next.potential});
      return next;
    }
    if (envies_y2 && envies_y3) {
      label = SolverCase::kCaseBBoth;
      next.partition = RepairForAgentOne(m, candidate.bundles(), tables);
    } else {
      label = SolverCase::kCaseBOne;
      const Bundle envied = envies_y2 ? y2 : y3;
      const Bundle kept = envies_y2 ? y3 : y2;
      const int holder = envies_y2 ? kAgent3 : kAgent2;
      const Bundle shrunk = MinImprovingSubset(v1, envied, v1(x2));
      const Partition reshaped(m,
                               {x2, shrunk, kept.Union(envied.Minus(shrunk))});
      if (!EfxFeasible(reshaped, tables[holder], 2)) {
        Invariant("Case B: enlarged bundle lost EFX-feasibility for agent " +
                  std::to_string(holder + 1));
      }
      if (EfxFeasible(reshaped, v1, 0) && EfxFeasible(reshaped, v1, 1)) {
        next.partition =
            OrderForAgentOne(m, reshaped[0], reshaped[1], reshaped[2], tables);
      } else {
        next.partition = RepairForAgentOne(m, reshaped.bundles(), tables);
      }
    }
  }

  CheckInvariants(next.partition, tables);
  next.potential = v1(next.partition[0]);
  if (!(next.potential > state.potential)) {
    Invariant("potential did not strictly increase");
  }
  next.trace.push_back(TraceRecord{
      .iteration = next.iteration, .label = label, .phi = next.potential});
  return next;
}

SolveResult SolveThreeAgentEfx(const Instance& instance,
                               const SolverOptions& options) {
  instance.Validate();
  const int m = instance.m;
  const EnumerationCaps& caps = options.caps;
  if (m > caps.non_degenerate || m > caps.monotone) {
    throw Error(ErrorKind::kInstanceTooLarge,
                "solver needs enumerable valuations; m=" + std::to_string(m));
  }
  for (int agent = 0; agent < kNumAgents; ++agent) {
    if (!IsMonotone(instance.agents[agent], caps.monotone)) {
      throw Error(ErrorKind::kPrecondition,
                  "agent " + std::to_string(agent + 1) + " is not monotone");
    }
  }
  const Valuation& third = instance.agents[kAgent3];
  if (m <= caps.mms_feasible && !IsMmsFeasible(third, caps.mms_feasible)) {
    throw Error(ErrorKind::kPrecondition, "agent 3 is not MMS-feasible");
  }

  SolveResult result;
  AgentTables original = TabulateAgents(instance);
  AgentTables working = original;
  // Agent 3 is never perturbed: perturbing can break MMS-feasibility, and
  // the argument does not need agent 3 to be non-degenerate.
  for (int agent : {kAgent1, kAgent2}) {
    if (IsNonDegenerate(original[agent])) continue;
    const Valuation& v = instance.agents[agent];
    const auto gap = MinValueGap(std::span<const Valuation>(&v, 1));
    working[agent] =
        PerturbValuation(v, DefaultEpsilon(gap, m)).Tabulate();
    result.perturbed[agent] = true;
  }

  int64_t cap = options.max_iterations;
  if (cap <= 0) {
    cap = 1;
    for (int i = 0; i < m; ++i) cap *= 4;
  }

  SolverState state = InitializeState(working);
  for (int64_t outer = 0;; ++outer) {
    if (outer > cap) {
      throw Error(ErrorKind::kInternalInvariant,
                  "solver exceeded its iteration cap of " +
                      std::to_string(cap));
    }
    if (auto assembled = AssembleIfPossible(state, working)) {
      state.trace.push_back(TraceRecord{.iteration = state.iteration + 1,
                                        .label = SolverCase::kAssemble,
                                        .phi = state.potential});
      result.allocation = std::move(*assembled);
      break;
    }
    state = ImprovementStep(state, working);
    if (state.final_allocation) {
      result.allocation = std::move(*state.final_allocation);
      break;
    }
  }
  result.trace = std::move(state.trace);

  if (!IsEfx(std::span<const ValueTable>(original), result.allocation)) {
    Invariant("solver output is not EFX under the original valuations");
  }
  return result;
}

SolveResult SolveWithRoleNormalization(const Instance& instance,
                                       const SolverOptions& options) {
  instance.Validate();
  const int cap = options.caps.mms_feasible;
  int chosen = -1;
  for (int agent : {kAgent3, kAgent1, kAgent2}) {
    const Valuation& v = instance.agents[agent];
    if (IsKnownMmsFeasibleFamily(v) ||
        (instance.m <= cap && IsMmsFeasible(v, cap))) {
      chosen = agent;
      break;
    }
  }
  if (chosen < 0) {
    if (instance.m <= cap) {
      throw Error(ErrorKind::kNotMmsFeasible,
                  "no agent has an MMS-feasible valuation");
    }
    chosen = kAgent3;  // unverifiable; the Case-B check still guards it
  }

  std::array<int, kNumAgents> order;
  int slot = 0;
  for (int agent = 0; agent < kNumAgents; ++agent) {
    if (agent != chosen) order[slot++] = agent;
  }
  order[kAgent3] = chosen;

  Instance permuted;
  permuted.m = instance.m;
  for (int i = 0; i < kNumAgents; ++i) {
    permuted.agents[i] = instance.agents[order[i]];
  }
  SolveResult inner = SolveThreeAgentEfx(permuted, options);

  std::vector<Bundle> bundles(kNumAgents);
  SolveResult result;
  for (int i = 0; i < kNumAgents; ++i) {
    bundles[order[i]] = inner.allocation.BundleOf(i);
    result.perturbed[order[i]] = inner.perturbed[i];
  }
  result.allocation = Allocation::FromAgentBundles(instance.m, bundles);
  result.trace = std::move(inner.trace);
  result.agent_order = order;
  return result;
}

}  // namespace efx
