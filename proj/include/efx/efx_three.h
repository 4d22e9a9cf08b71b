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

// Three-agent EFX solver. Agents 1 and 2 (indices 0, 1) may hold any
// monotone valuation; agent 3 (index 2) must be MMS-feasible.
//
// The solver walks through partitions (X1, X2, X3) that keep two invariants:
//   INV-1  X1 and X2 are EFX-feasible for agent 1;
//   INV-2  X3 is EFX-feasible for agent 2 or agent 3;
// and raises phi = min(v1(X1), v1(X2)) strictly at every step until some
// assignment of the three bundles is EFX.

#ifndef EFX_EFX_THREE_H_
#define EFX_EFX_THREE_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "efx/efx_core.h"
#include "efx/valuation.h"

namespace efx {

using AgentTables = std::array<ValueTable, kNumAgents>;

enum class SolverCase {
  kInit,
  kAssemble,
  kCaseA,
  kCaseBNone,
  kCaseBBoth,
  kCaseBOne,
};

// "init", "assemble", "A", "B-none", "B-both", "B-one".
std::string_view SolverCaseName(SolverCase c);

struct TraceRecord {
  int64_t iteration = 0;
  SolverCase label = SolverCase::kInit;
  Rational phi;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct SolverState {
  // Bundles X1, X2, X3, always relabeled so that v1(X1) < v1(X2).
  Partition partition;
  int64_t iteration = 0;
  Rational potential;
  std::vector<TraceRecord> trace;
  // Set when a Case-B step lands directly on an EFX allocation.
  std::optional<Allocation> final_allocation;
};

// Inclusion-minimal R within `base` with v(R) > threshold, found by greedy
// removal in ascending good order, repeated until no removal applies.
// Requires v(base) > threshold (kPrecondition otherwise).
Bundle MinImprovingSubset(const ValueTable& v, Bundle base,
                          const Rational& threshold);

// Agent 1 runs PR from the all-in-X1 partition, agent 2 names its favourite
// bundle X3. Agents 1 and 2 must be non-degenerate (kDegenerate otherwise).
SolverState InitializeState(const AgentTables& tables);

// Tries to read an EFX allocation off the current partition. Returns nullopt
// exactly when neither agent 2 nor agent 3 finds X1 or X2 EFX-feasible.
std::optional<Allocation> AssembleIfPossible(const SolverState& state,
                                             const AgentTables& tables);

// One reallocation (Case A or one of the Case-B branches). The returned state
// satisfies both invariants and has strictly larger potential, or carries a
// final allocation (Case B, no strong envy from agent 1).
SolverState ImprovementStep(const SolverState& state,
                            const AgentTables& tables);

struct SolverOptions {
  // 0 selects the default outer-iteration cap 4^m.
  int64_t max_iterations = 0;
  EnumerationCaps caps;
};

struct SolveResult {
  Allocation allocation;
  std::vector<TraceRecord> trace;
  // Which agents were run on perturbed valuations.
  std::array<bool, kNumAgents> perturbed = {false, false, false};
  // position i of the solver's agent order holds this input agent.
  std::array<int, kNumAgents> agent_order = {0, 1, 2};
};

// Returns an allocation that is EFX under the given valuations. Degenerate
// agents 1 and 2 are perturbed internally; agent 3 is used as given.
// Throws kPrecondition when agents are not monotone or agent 3 is checkably
// not MMS-feasible, kNotMmsFeasible if the Case-B guarantee breaks, and
// kInternalInvariant when the iteration cap is exceeded.
SolveResult SolveThreeAgentEfx(const Instance& instance,
                               const SolverOptions& options = {});

// Moves an MMS-feasible agent into the third slot (preferring the agent
// already there), solves, and reports the allocation in input agent order.
SolveResult SolveWithRoleNormalization(const Instance& instance,
                                       const SolverOptions& options = {});

}  // namespace efx

#endif  // EFX_EFX_THREE_H_
