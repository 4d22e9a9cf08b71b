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


// JSON encodings of instances, allocations, graphs, cycles and solver traces.
// Rationals travel as strings ("n" or "p/q"); JSON integers are accepted on
// input, floats are rejected. Every parser reports malformed input as kParse.

#ifndef EFX_JSON_IO_H_
#define EFX_JSON_IO_H_

#include <string_view>
#include <vector>

#include "json.hpp"

#include "efx/efx_core.h"
#include "efx/efx_three.h"
#include "efx/rainbow.h"
#include "efx/valuation.h"

namespace efx {

using Json = nlohmann::ordered_json;

// Parses text, mapping syntax errors to kParse.
Json ParseJson(std::string_view text);

Json RationalToJson(const Rational& x);
Rational RationalFromJson(const Json& j);

Json ValuationToJson(const Valuation& v);
Valuation ValuationFromJson(const Json& j, int m);

Json InstanceToJson(const Instance& instance);
Instance InstanceFromJson(const Json& j);

// {"bundles": [[goods of agent 1], ...]}; goods are 0-based.
Json AllocationToJson(const Allocation& allocation);
Allocation AllocationFromJson(const Json& j, int m);

Json WitnessToJson(const EnvyWitness& witness);

Json GraphToJson(const LayeredDigraph& graph);
LayeredDigraph GraphFromJson(const Json& j);

// {"cycle": [[part, offset], ...]}.
Json CycleToJson(const RainbowCycle& cycle);
RainbowCycle CycleFromJson(const Json& j);

// {"iter": n, "case": "...", "phi": "p/q"}.
Json TraceRecordToJson(const TraceRecord& record);

}  // namespace efx

#endif  // EFX_JSON_IO_H_
