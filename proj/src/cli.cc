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

#include "efx/cli.h"

#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "efx/error.h"
#include "efx/json_io.h"
#include "efx/oracle.h"
#include "efx/rainbow.h"
#include "efx/valuation.h"

namespace efx {

namespace {

constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

// Input problems that are the caller's fault rather than the instance's.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string ReadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

EnumerationCaps CapsFromEnvironment() {
  const char* raw = std::getenv("EFX_LAB_MAX_M");
  if (raw == nullptr || *raw == '\0') return EnumerationCaps{};
  char* end = nullptr;
  const long max_m = std::strtol(raw, &end, 10);
  if (*end != '\0' || max_m < 0 || max_m > kMaxGoods) {
    throw UsageError("EFX_LAB_MAX_M must be an integer in [0, " +
                     std::to_string(kMaxGoods) + "]");
  }
  return EnumerationCaps::WithMaxGoods(static_cast<int>(max_m));
}

Vertex ParseVertex(const std::string& text) {
  const std::size_t colon = text.find(':');
  try {
    if (colon != std::string::npos) {
      std::size_t a = 0, b = 0;
      const std::string part = text.substr(0, colon);
      const std::string offset = text.substr(colon + 1);
      Vertex v{std::stoi(part, &a), std::stoi(offset, &b)};
      if (a == part.size() && b == offset.size()) return v;
    }
  } catch (const std::exception&) {
  }
  throw UsageError("--root must look like part:offset, got " + text);
}

Json ErrorJson(const Error& e) {
  Json inner;
  inner["kind"] = std::string(ErrorKindName(e.kind()));
  inner["detail"] = e.what();
  Json j;
  j["error"] = std::move(inner);
  return j;
}

Json CycleOrNotFound(const std::optional<RainbowCycle>& cycle) {
  if (cycle.has_value()) return CycleToJson(*cycle);
  Json j;
  j["found"] = false;
  return j;
}

struct Args {
  std::string input;
  std::string allocation;
  std::string graph;
  std::string trace;
  std::string config;
  std::string check_class;
  std::string epsilon;
  std::string method = "derandomized";
  std::string root = "0:0";
  std::string kind = "layered";
  std::string agent3;
  int agent = 3;
  int m = 4;
  int k = 3;
  int d = 2;
  uint64_t seed = 0;
  uint64_t trials = 10000;
  int64_t max_numerator = 1000;
  int64_t denominator = 1;
  bool non_degenerate = false;
  bool early_exit = false;
};

Json Solve(const Args& args, const EnumerationCaps& caps) {
  const Instance instance = InstanceFromJson(ParseJson(ReadFile(args.input)));
  SolverOptions options;
  options.caps = caps;
  const SolveResult result = SolveWithRoleNormalization(instance, options);
  if (!args.trace.empty()) {
    std::ofstream trace(args.trace);
    if (!trace) throw UsageError("cannot write " + args.trace);
    for (const TraceRecord& record : result.trace) {
      trace << TraceRecordToJson(record).dump() << "\n";
    }
  }
  Json j = AllocationToJson(result.allocation);
  j["efx"] = IsEfx(instance, result.allocation);
  return j;
}

Json Verify(const Args& args) {
  const Instance instance = InstanceFromJson(ParseJson(ReadFile(args.input)));
  const Allocation allocation =
      AllocationFromJson(ParseJson(ReadFile(args.allocation)), instance.m);
  if (allocation.num_agents() != kNumAgents) {
    throw Error(ErrorKind::kParse, "an allocation needs exactly 3 bundles");
  }
  Json j;
  const auto witness = StrongEnvyWitness(instance, allocation);
  j["efx"] = !witness.has_value();
  if (witness.has_value()) j["witness"] = WitnessToJson(*witness);
  return j;
}

Json Check(const Args& args, const EnumerationCaps& caps) {
  const Instance instance = InstanceFromJson(ParseJson(ReadFile(args.input)));
  if (args.agent < 1 || args.agent > kNumAgents) {
    throw UsageError("--agent must be 1, 2 or 3");
  }
  const Valuation& v = instance.agents[args.agent - 1];
  bool result = false;
  if (args.check_class == "mms") {
    result = IsMmsFeasible(v, caps.mms_feasible);
  } else if (args.check_class == "nice") {
    result = IsNiceCancelable(v, caps.nice_cancelable);
  } else if (args.check_class == "monotone") {
    result = IsMonotone(v, caps.monotone);
  } else {
    result = IsNonDegenerate(v, caps.non_degenerate);
  }
  Json j;
  j["result"] = result;
  return j;
}

Json Perturb(const Args& args, const EnumerationCaps& caps) {
  const Instance instance = InstanceFromJson(ParseJson(ReadFile(args.input)));
  const Rational eps =
      args.epsilon.empty()
          ? DefaultEpsilon(MinValueGap(instance, caps.non_degenerate),
                           instance.m)
          : ParseRational(args.epsilon);
  return InstanceToJson(PerturbInstance(instance, eps, caps.non_degenerate));
}

GeneratorConfig ConfigFrom(const Args& args) {
  GeneratorConfig config;
  config.seed = args.seed;
  config.m = args.m;
  config.k = args.k;
  config.d = args.d;
  config.graph_kind =
      args.kind == "permutation" ? GraphKind::kPermutation : GraphKind::kLayered;
  if (!args.agent3.empty()) {
    config.agent3_kind = ParseValuationKind(args.agent3);
    if (*config.agent3_kind == ValuationKind::kTable) {
      throw UsageError("--agent3 must name a parametric family");
    }
  }
  config.max_numerator = args.max_numerator;
  config.denominator = args.denominator;
  config.non_degenerate = args.non_degenerate;
  if (args.config.empty()) return config;

  // Keys present in the config file override the flags.
  const Json j = ParseJson(ReadFile(args.config));
  if (!j.is_object()) throw Error(ErrorKind::kParse, "config must be an object");
  auto int_field = [&](const char* key, auto& target) {
    if (!j.contains(key)) return;
    if (!j[key].is_number_integer()) {
      throw Error(ErrorKind::kParse,
                  std::string("config field ") + key + " must be an integer");
    }
    target = j[key].get<std::remove_reference_t<decltype(target)>>();
  };
  int_field("seed", config.seed);
  int_field("m", config.m);
  int_field("k", config.k);
  int_field("d", config.d);
  int_field("max_numerator", config.max_numerator);
  int_field("denominator", config.denominator);
  if (j.contains("non_degenerate")) {
    if (!j["non_degenerate"].is_boolean()) {
      throw Error(ErrorKind::kParse, "non_degenerate must be a boolean");
    }
    config.non_degenerate = j["non_degenerate"].get<bool>();
  }
  if (j.contains("agent3")) {
    if (!j["agent3"].is_string()) {
      throw Error(ErrorKind::kParse, "agent3 must be a string");
    }
    config.agent3_kind = ParseValuationKind(j["agent3"].get<std::string>());
  }
  if (j.contains("kind")) {
    const std::string kind = j["kind"].is_string() ? j["kind"].get<std::string>() : "";
    if (kind != "layered" && kind != "permutation") {
      throw Error(ErrorKind::kParse, "kind must be layered or permutation");
    }
    config.graph_kind =
        kind == "permutation" ? GraphKind::kPermutation : GraphKind::kLayered;
  }
  return config;
}

Json RainbowFind(const Args& args) {
  const LayeredDigraph graph = GraphFromJson(ParseJson(ReadFile(args.graph)));
  if (args.method == "random") {
    return CycleOrNotFound(
        FindRainbowCycleRandomized(graph, args.seed, args.trials).cycle);
  }
  if (args.method == "derandomized") {
    return CycleToJson(FindRainbowCycleDerandomized(graph).cycle);
  }
  PermutationFinderOptions options;
  options.early_exit = args.early_exit;
  return CycleToJson(
      FindRainbowCyclePermutation(graph, ParseVertex(args.root), options));
}

Json OracleEfx(const Args& args, const EnumerationCaps& caps) {
  const Instance instance = InstanceFromJson(ParseJson(ReadFile(args.input)));
  Json list = Json::array();
  for (const Allocation& a : EnumerateEfx(instance, caps.efx_enumeration)) {
    list.push_back(AllocationToJson(a));
  }
  Json j;
  j["count"] = list.size();
  j["allocations"] = std::move(list);
  return j;
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Exact EFX allocations and rainbow-cycle finders",
               "efx_lab"};
  app.require_subcommand(1);
  Args args;

  auto* solve = app.add_subcommand("solve", "Compute an EFX allocation");
  solve->add_option("-i,--input", args.input, "Instance JSON")->required();
  solve->add_option("--trace", args.trace, "Write the solver trace (JSON lines)");
  solve->add_option("--seed", args.seed, "Accepted for uniformity; unused");

  auto* verify = app.add_subcommand("verify", "Check an allocation for EFX");
  verify->add_option("-i,--input", args.input, "Instance JSON")->required();
  verify->add_option("-a,--allocation", args.allocation, "Allocation JSON")
      ->required();

  auto* check = app.add_subcommand("check", "Test one agent's valuation class");
  check->add_option("-i,--input", args.input, "Instance JSON")->required();
  check->add_option("--class", args.check_class, "Valuation class")
      ->required()
      ->check(CLI::IsMember({"mms", "nice", "monotone", "nondegenerate"}));
  check->add_option("--agent", args.agent, "Agent number, 1 to 3")
      ->capture_default_str();

  auto* perturb = app.add_subcommand("perturb", "Make an instance non-degenerate");
  perturb->add_option("-i,--input", args.input, "Instance JSON")->required();
  perturb->add_option("--epsilon", args.epsilon, "Perturbation size p/q");

  auto* gen_instance = app.add_subcommand("gen-instance", "Random instance");
  auto* gen_graph = app.add_subcommand("gen-graph", "Random layered digraph");
  for (auto* gen : {gen_instance, gen_graph}) {
    gen->add_option("--seed", args.seed, "Generator seed")->capture_default_str();
    gen->add_option("--config", args.config, "Generator config JSON");
  }
  gen_instance->add_option("-m", args.m, "Number of goods")->capture_default_str();
  gen_instance->add_option("--agent3", args.agent3, "Family of agent 3");
  gen_instance->add_option("--max-numerator", args.max_numerator,
                           "Values are n/denominator with n <= this")
      ->capture_default_str();
  gen_instance->add_option("--denominator", args.denominator, "Value denominator")
      ->capture_default_str();
  gen_instance->add_flag("--non-degenerate", args.non_degenerate,
                         "Perturb agents 1 and 2 if they have ties");
  gen_graph->add_option("-k", args.k, "Number of parts")->capture_default_str();
  gen_graph->add_option("-d", args.d, "Vertices per part")->capture_default_str();
  gen_graph->add_option("--kind", args.kind, "layered or permutation")
      ->check(CLI::IsMember({"layered", "permutation"}))
      ->capture_default_str();

  auto* find = app.add_subcommand("rainbow-find", "Find a rainbow cycle");
  find->add_option("-g,--graph", args.graph, "Graph JSON")->required();
  find->add_option("--method", args.method, "random, derandomized or permutation")
      ->check(CLI::IsMember({"random", "derandomized", "permutation"}))
      ->capture_default_str();
  find->add_option("--seed", args.seed, "Seed for the random method")
      ->capture_default_str();
  find->add_option("--trials", args.trials, "Trial budget for the random method")
      ->capture_default_str();
  find->add_option("--root", args.root, "Root vertex part:offset")
      ->capture_default_str();
  find->add_flag("--early-exit", args.early_exit,
                 "Close the permutation cycle as soon as possible");

  auto* threshold =
      app.add_subcommand("rainbow-threshold", "Smallest k forcing a cycle");
  threshold->add_option("-d", args.d, "Vertices per part")->required();

  auto* oracle_efx = app.add_subcommand("oracle-efx", "List all EFX allocations");
  oracle_efx->add_option("-i,--input", args.input, "Instance JSON")->required();

  auto* oracle_rainbow =
      app.add_subcommand("oracle-rainbow", "Exhaustive rainbow-cycle search");
  oracle_rainbow->add_option("-g,--graph", args.graph, "Graph JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    const EnumerationCaps caps = CapsFromEnvironment();
    Json result;
    if (*solve) {
      result = Solve(args, caps);
    } else if (*verify) {
      result = Verify(args);
    } else if (*check) {
      result = Check(args, caps);
    } else if (*perturb) {
      result = Perturb(args, caps);
    } else if (*gen_instance) {
      result = InstanceToJson(RandomInstance(ConfigFrom(args)));
    } else if (*gen_graph) {
      result = GraphToJson(RandomLayeredGraph(ConfigFrom(args)));
    } else if (*find) {
      result = RainbowFind(args);
    } else if (*threshold) {
      result["k"] = ThresholdK(args.d);
    } else if (*oracle_efx) {
      result = OracleEfx(args, caps);
    } else {
      const LayeredDigraph graph =
          GraphFromJson(ParseJson(ReadFile(args.graph)));
      result = CycleOrNotFound(
          BruteForceRainbowCycle(graph, caps.rainbow_vertices));
    }
    out << result.dump() << "\n";
    return 0;
  } catch (const UsageError& e) {
    err << "efx_lab: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    out << ErrorJson(e).dump() << "\n";
    err << "efx_lab: " << ErrorKindName(e.kind()) << ": " << e.what() << "\n";
    return e.kind() == ErrorKind::kParse ? kExitUsage : kExitDomain;
  }
}

}  // namespace efx
