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

#include "efx/json_io.h"

#include <limits>
#include <optional>
#include <string>
#include <utility>

#include "efx/error.h"

namespace efx {

namespace {

[[noreturn]] void Fail(const std::string& detail) {
  throw Error(ErrorKind::kParse, detail);
}

const Json& Field(const Json& j, const char* key) {
  if (!j.is_object()) Fail(std::string("expected an object holding \"") + key + "\"");
  const auto it = j.find(key);
  if (it == j.end()) Fail(std::string("missing field \"") + key + "\"");
  return *it;
}

int IntFrom(const Json& j, const std::string& what) {
  if (!j.is_number_integer()) Fail(what + " must be an integer");
  const int64_t x = j.get<int64_t>();
  if (x < std::numeric_limits<int>::min() ||
      x > std::numeric_limits<int>::max()) {
    Fail(what + " is out of range");
  }
  return static_cast<int>(x);
}

int IntFromString(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(text, &used);
  } catch (const std::exception&) {
    Fail(what + " is not an integer: \"" + text + "\"");
  }
  if (used != text.size() || text.empty() || text[0] == '+' ||
      text[0] == ' ') {
    Fail(what + " is not an integer: \"" + text + "\"");
  }
  return value;
}

std::vector<Rational> RationalList(const Json& j) {
  if (!j.is_array()) Fail("\"values\" must be an array");
  std::vector<Rational> out;
  for (const Json& x : j) out.push_back(RationalFromJson(x));
  return out;
}

}  // namespace

Json ParseJson(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    Fail(std::string("invalid JSON: ") + e.what());
  }
}

Json RationalToJson(const Rational& x) { return FormatRational(x); }

Rational RationalFromJson(const Json& j) {
  if (j.is_string()) return ParseRational(j.get<std::string>());
  if (j.is_number_integer()) {
    return ParseRational(j.dump());
  }
  Fail("rationals must be \"n\" or \"p/q\" strings or integers, got " +
       j.dump());
}

Json ValuationToJson(const Valuation& v) {
  Json j;
  j["kind"] = std::string(ValuationKindName(v.kind()));
  if (v.kind() == ValuationKind::kTable) {
    Json table = Json::object();
    for (std::size_t s = 0; s < v.table().size(); ++s) {
      if (v.table()[s].has_value()) {
        table[std::to_string(s)] = RationalToJson(*v.table()[s]);
      }
    }
    j["table"] = std::move(table);
    return j;
  }
  Json values = Json::array();
  for (const Rational& x : v.per_good()) values.push_back(RationalToJson(x));
  j["values"] = std::move(values);
  if (v.kind() == ValuationKind::kBudgetAdditive) {
    j["cap"] = RationalToJson(v.cap());
  }
  return j;
}

Valuation ValuationFromJson(const Json& j, int m) {
  const Json& kind_field = Field(j, "kind");
  if (!kind_field.is_string()) Fail("\"kind\" must be a string");
  const ValuationKind kind = ParseValuationKind(kind_field.get<std::string>());
  if (kind == ValuationKind::kTable) {
    const Json& table = Field(j, "table");
    if (!table.is_object()) Fail("\"table\" must be an object");
    if (m < 0 || m > kMaxGoods) Fail("m out of range");
    std::vector<std::optional<Rational>> entries(std::size_t{1} << m);
    for (const auto& [key, value] : table.items()) {
      const int mask = IntFromString(key, "table key");
      if (mask < 0 || static_cast<std::size_t>(mask) >= entries.size()) {
        Fail("table key " + key + " is not a subset of " + std::to_string(m) +
             " goods");
      }
      entries[mask] = RationalFromJson(value);
    }
    return Valuation::Table(m, std::move(entries));
  }
  std::vector<Rational> values = RationalList(Field(j, "values"));
  if (static_cast<int>(values.size()) != m) {
    throw Error(ErrorKind::kMalformedValuation,
                "expected " + std::to_string(m) + " per-good values, got " +
                    std::to_string(values.size()));
  }
  switch (kind) {
    case ValuationKind::kAdditive:
      return Valuation::Additive(std::move(values));
    case ValuationKind::kBudgetAdditive:
      return Valuation::BudgetAdditive(std::move(values),
                                       RationalFromJson(Field(j, "cap")));
    case ValuationKind::kUnitDemand:
      return Valuation::UnitDemand(std::move(values));
    case ValuationKind::kMultiplicative:
      return Valuation::Multiplicative(std::move(values));
    case ValuationKind::kTable:
      break;
  }
  Fail("unreachable valuation kind");
}

Json InstanceToJson(const Instance& instance) {
  Json j;
  j["m"] = instance.m;
  Json agents = Json::array();
  for (const Valuation& v : instance.agents) {
    agents.push_back(ValuationToJson(v));
  }
  j["agents"] = std::move(agents);
  return j;
}

Instance InstanceFromJson(const Json& j) {
  Instance instance;
  instance.m = IntFrom(Field(j, "m"), "\"m\"");
  if (instance.m < 0 || instance.m > kMaxGoods) {
    throw Error(ErrorKind::kInstanceTooLarge,
                "m must lie in [0, " + std::to_string(kMaxGoods) + "]");
  }
  const Json& agents = Field(j, "agents");
  if (!agents.is_array() || agents.size() != kNumAgents) {
    Fail("\"agents\" must list exactly 3 valuations");
  }
  for (int i = 0; i < kNumAgents; ++i) {
    instance.agents[i] = ValuationFromJson(agents[i], instance.m);
  }
  instance.Validate();
  return instance;
}

Json AllocationToJson(const Allocation& allocation) {
  Json bundles = Json::array();
  for (Bundle b : allocation.AgentBundles()) bundles.push_back(b.Goods());
  Json j;
  j["bundles"] = std::move(bundles);
  return j;
}

Allocation AllocationFromJson(const Json& j, int m) {
  const Json& bundles = Field(j, "bundles");
  if (!bundles.is_array()) Fail("\"bundles\" must be an array");
  std::vector<Bundle> out;
  for (const Json& goods : bundles) {
    if (!goods.is_array()) Fail("each bundle must be an array of goods");
    Bundle b;
    for (const Json& g : goods) {
      const int good = IntFrom(g, "good");
      if (good < 0 || good >= m) {
        Fail("good " + std::to_string(good) + " is outside [0, " +
             std::to_string(m) + ")");
      }
      if (b.Contains(good)) Fail("good listed twice in one bundle");
      b = b.With(good);
    }
    out.push_back(b);
  }
  return Allocation::FromAgentBundles(m, std::move(out));
}

Json WitnessToJson(const EnvyWitness& witness) {
  Json j;
  j["envier"] = witness.envier;
  j["envied"] = witness.envied;
  j["good"] = witness.good;
  return j;
}

Json GraphToJson(const LayeredDigraph& graph) {
  Json j;
  j["kind"] =
      graph.kind() == GraphKind::kPermutation ? "permutation" : "layered";
  j["parts"] = graph.part_sizes();
  Json edges = Json::object();
  for (int p = 0; p < graph.num_parts(); ++p) {
    for (int o = 0; o < graph.part_size(p); ++o) {
      Json in = Json::object();
      for (int q = 0; q < graph.num_parts(); ++q) {
        const int from = graph.InNeighbor(Vertex{p, o}, q);
        if (q != p && from != LayeredDigraph::kNoEdge) {
          in[std::to_string(q)] = from;
        }
      }
      edges[std::to_string(p) + ":" + std::to_string(o)] = std::move(in);
    }
  }
  j["in_edges"] = std::move(edges);
  return j;
}

LayeredDigraph GraphFromJson(const Json& j) {
  const Json& kind_field = Field(j, "kind");
  if (!kind_field.is_string()) Fail("\"kind\" must be a string");
  const std::string kind_name = kind_field.get<std::string>();
  GraphKind kind;
  if (kind_name == "layered") {
    kind = GraphKind::kLayered;
  } else if (kind_name == "permutation") {
    kind = GraphKind::kPermutation;
  } else {
    Fail("unknown graph kind \"" + kind_name + "\"");
  }
  const Json& parts = Field(j, "parts");
  if (!parts.is_array()) Fail("\"parts\" must be an array");
  std::vector<int> sizes;
  for (const Json& size : parts) {
    sizes.push_back(IntFrom(size, "part size"));
    if (sizes.back() < 0) Fail("part sizes must be nonnegative");
  }
  LayeredDigraph graph(kind, sizes);
  const Json& edges = Field(j, "in_edges");
  if (!edges.is_object()) Fail("\"in_edges\" must be an object");
  for (const auto& [key, in] : edges.items()) {
    const std::size_t colon = key.find(':');
    if (colon == std::string::npos) Fail("vertex key must be \"part:offset\"");
    const Vertex v{IntFromString(key.substr(0, colon), "part"),
                   IntFromString(key.substr(colon + 1), "offset")};
    if (v.part < 0 || v.part >= graph.num_parts() || v.offset < 0 ||
        v.offset >= graph.part_size(v.part)) {
      Fail("vertex " + key + " does not exist");
    }
    if (!in.is_object()) Fail("in-edges of " + key + " must be an object");
    for (const auto& [part_key, offset] : in.items()) {
      const int q = IntFromString(part_key, "foreign part");
      if (q < 0 || q >= graph.num_parts()) {
        Fail("vertex " + key + " names unknown part " + part_key);
      }
      graph.SetInNeighbor(v, q, IntFrom(offset, "in-neighbour offset"));
    }
  }
  return graph;
}

Json CycleToJson(const RainbowCycle& cycle) {
  Json vertices = Json::array();
  for (const Vertex& v : cycle.vertices) {
    vertices.push_back(Json::array({v.part, v.offset}));
  }
  Json j;
  j["cycle"] = std::move(vertices);
  return j;
}

RainbowCycle CycleFromJson(const Json& j) {
  const Json& vertices = Field(j, "cycle");
  if (!vertices.is_array()) Fail("\"cycle\" must be an array");
  RainbowCycle cycle;
  for (const Json& v : vertices) {
    if (!v.is_array() || v.size() != 2) Fail("cycle entries are [part, offset]");
    cycle.vertices.push_back(
        Vertex{IntFrom(v[0], "part"), IntFrom(v[1], "offset")});
  }
  return cycle;
}

Json TraceRecordToJson(const TraceRecord& record) {
  Json j;
  j["iter"] = record.iteration;
  j["case"] = std::string(SolverCaseName(record.label));
  j["phi"] = RationalToJson(record.phi);
  return j;
}

}  // namespace efx
