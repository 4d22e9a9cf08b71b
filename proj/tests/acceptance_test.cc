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


// Acceptance run: one line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "efx/efx_core.h"
#include "efx/efx_three.h"
#include "efx/error.h"
#include "efx/oracle.h"
#include "efx/rainbow.h"
#include "efx/rng.h"
#include "efx/valuation.h"

namespace efx {
namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

std::string Format(const char* pattern, auto... args) {
  char buffer[512];
  std::snprintf(buffer, sizeof(buffer), pattern, args...);
  return buffer;
}

Verdict MmsNotNiceRegression() {
  const Valuation v =
      Valuation::Table(3, std::vector<Rational>{0, 1, 2, 10, 3, 4, 5, 13});
  const bool mms = IsMmsFeasible(v);
  const bool nice = IsNiceCancelable(v);
  return {mms && !nice, Format("mms_feasible=%d nice_cancelable=%d", mms, nice)};
}

Verdict NiceImpliesMms() {
  int nice = 0;
  int failures = 0;
  for (int kind = 1; kind <= 4; ++kind) {
    CounterRng rng(2, kind);
    for (int i = 0; i < 300; ++i) {
      const int m = 1 + i % 4;
      const Valuation v = RandomParametric(
          rng, static_cast<ValuationKind>(kind), m, 12, 1 + i % 3);
      if (!IsNiceCancelable(v)) continue;
      ++nice;
      if (!IsMmsFeasible(v)) ++failures;
    }
  }
  return {failures == 0,
          Format("%d of 1200 nice-cancelable, %d not MMS-feasible", nice,
                 failures)};
}

bool PhiStrictlyIncreases(const std::vector<TraceRecord>& trace) {
  // The closing record repeats the potential of the last partition.
  for (std::size_t i = 1; i + 1 < trace.size(); ++i) {
    if (!(trace[i].phi > trace[i - 1].phi)) return false;
  }
  return trace.size() >= 2 && trace.back().phi == trace[trace.size() - 2].phi;
}

Verdict ThreeAgentExistence() {
  int efx = 0;
  int monotone_phi = 0;
  int steps = 0;
  std::string error;
  for (int i = 0; i < 500; ++i) {
    GeneratorConfig config;
    config.seed = 3000 + i;
    config.m = 1 + i % 7;
    config.max_numerator = i % 2 == 0 ? 8 : 100000;
    config.non_degenerate = i % 4 == 1;
    const Instance instance = RandomInstance(config);
    try {
      const SolveResult r = SolveThreeAgentEfx(instance);
      if (IsEfx(instance, r.allocation)) ++efx;
      if (PhiStrictlyIncreases(r.trace)) ++monotone_phi;
      steps += static_cast<int>(r.trace.size()) - 2;
    } catch (const Error& e) {
      if (error.empty()) error = Format(" first error seed %d: %s", i, e.what());
    }
  }
  return {efx == 500 && monotone_phi == 500,
          Format("EFX %d/500, strict phi %d/500, %d improvement steps", efx,
                 monotone_phi, steps) +
              error};
}

Verdict OracleAgreement() {
  int agree = 0;
  for (int i = 0; i < 200; ++i) {
    GeneratorConfig config;
    config.seed = 5000 + i;
    config.m = 1 + i % 5;
    config.max_numerator = i % 2 == 0 ? 6 : 1000;
    const Instance instance = RandomInstance(config);
    const auto all = EnumerateEfx(instance);
    const auto target = SolveThreeAgentEfx(instance).allocation.AgentBundles();
    if (!all.empty() &&
        std::any_of(all.begin(), all.end(), [&](const Allocation& a) {
          return a.AgentBundles() == target;
        })) {
      ++agree;
    }
  }
  return {agree == 200, Format("%d/200 solver outputs found in the oracle list",
                               agree)};
}

Verdict PerturbationPreservesEfx() {
  int instances = 0;
  int failures = 0;
  int allocations_checked = 0;
  for (uint64_t seed = 7000; instances < 200; ++seed) {
    GeneratorConfig config;
    config.seed = seed;
    config.m = 1 + instances % 6;
    config.max_numerator = 4;
    const Instance original = RandomInstance(config);
    bool degenerate = false;
    for (const Valuation& v : original.agents) {
      degenerate = degenerate || !IsNonDegenerate(v);
    }
    if (!degenerate) continue;
    ++instances;
    const Rational eps =
        DefaultEpsilon(MinValueGap(original), original.m);
    const Instance perturbed = PerturbInstance(original, eps);
    bool ok = true;
    for (int a = 0; a < kNumAgents; ++a) {
      const ValueTable before = original.agents[a].Tabulate();
      const ValueTable after = perturbed.agents[a].Tabulate();
      ok = ok && IsNonDegenerate(after);
      const uint32_t size = uint32_t{1} << original.m;
      for (uint32_t s = 0; s < size && ok; ++s) {
        for (uint32_t t = 0; t < size && ok; ++t) {
          if (before(Bundle(s)) < before(Bundle(t)) &&
              !(after(Bundle(s)) < after(Bundle(t)))) {
            ok = false;
          }
        }
      }
    }
    if (original.m <= 5) {
      for (const Allocation& a : EnumerateEfx(perturbed)) {
        ++allocations_checked;
        ok = ok && IsEfx(original, a);
      }
    }
    if (!ok) ++failures;
  }
  return {failures == 0,
          Format("200 degenerate instances, %d failures, %d perturbed EFX "
                 "allocations re-verified",
                 failures, allocations_checked)};
}

Verdict ThresholdBoundaries() {
  int mismatches = 0;
  for (int d = 1; d <= 50; ++d) {
    int k = 1;
    while (true) {
      mpz_class lhs, rhs;
      mpz_ui_pow_ui(lhs.get_mpz_t(), d - 1, k - 1);
      mpz_ui_pow_ui(rhs.get_mpz_t(), d, k - 1);
      if (lhs * k < rhs) break;
      ++k;
    }
    if (ThresholdK(d) != k) ++mismatches;
  }
  const bool spots = ThresholdK(1) == 2 && ThresholdK(2) == 3 &&
                     ThresholdK(3) == 5;
  return {mismatches == 0 && spots,
          Format("d=1..50: %d mismatches; k(1)=%d k(2)=%d k(3)=%d", mismatches,
                 ThresholdK(1), ThresholdK(2), ThresholdK(3))};
}

Verdict DerandomizedFinder() {
  int found = 0;
  int potential_ok = 0;
  for (int i = 0; i < 1000; ++i) {
    GeneratorConfig config;
    config.seed = 9000 + i;
    config.d = 1 + i % 5;
    config.k = ThresholdK(config.d);
    const LayeredDigraph g = RandomLayeredGraph(config);
    const DerandomizedResult r = FindRainbowCycleDerandomized(g);
    if (IsRainbowCycle(g, r.cycle)) ++found;
    bool ok = true;
    for (std::size_t s = 0; s < r.potentials.size(); ++s) {
      ok = ok && r.potentials[s] < 1 &&
           (s == 0 || r.potentials[s] <= r.potentials[s - 1]);
    }
    if (ok) ++potential_ok;
  }
  return {found == 1000 && potential_ok == 1000,
          Format("verified cycles %d/1000, potential non-increasing and < 1 "
                 "in %d/1000",
                 found, potential_ok)};
}

Verdict RandomizedCalibration() {
  const int d = 3;
  const int k = ThresholdK(d);
  uint64_t hits = 0;
  for (int graph = 0; graph < 10; ++graph) {
    GeneratorConfig config;
    config.seed = 11000 + graph;
    config.k = k;
    config.d = d;
    hits += CountRandomizedSuccesses(RandomLayeredGraph(config), graph, 1000);
  }
  const double rate = static_cast<double>(hits) / 10000.0;
  const double bound = 1.0 - UnionBound(k, d).get_d() - 0.03;
  return {rate >= bound,
          Format("k=%d: success rate %.4f over 10000 trials, bound %.4f", k,
                 rate, bound)};
}

Verdict PermutationFinder() {
  int runs = 0;
  int verified = 0;
  int contradictions = 0;
  int other_errors = 0;
  int brute_disagreements = 0;
  int descents = 0;
  for (int d = 1; d <= 6; ++d) {
    const int k = std::max(2, 2 * d - 1);
    for (int i = 0; i < 1000; ++i) {
      GeneratorConfig config;
      config.seed = 13000 + 1000 * d + i;
      config.k = k;
      config.d = d;
      config.graph_kind = GraphKind::kPermutation;
      const LayeredDigraph g = RandomLayeredGraph(config);
      for (int index = 0; index < g.num_vertices(); ++index) {
        ++runs;
        try {
          const PermutationResult r =
              FindRainbowCycleFromRoot(g, g.VertexAt(index));
          if (IsRainbowCycle(g, r.cycle)) ++verified;
          descents += r.descents;
        } catch (const Error& e) {
          if (e.kind() == ErrorKind::kStructuralContradiction) {
            ++contradictions;
          } else {
            ++other_errors;
          }
        }
      }
      if (d <= 3 && !BruteForceRainbowCycle(g).has_value()) {
        ++brute_disagreements;
      }
    }
  }
  return {verified == runs && contradictions == 0 && other_errors == 0 &&
              brute_disagreements == 0,
          Format("%d/%d roots verified, %d structural contradictions, %d other "
                 "errors, %d brute-force disagreements, %d descents",
                 verified, runs, contradictions, other_errors,
                 brute_disagreements, descents)};
}

Verdict PrAlgorithmProgress() {
  CounterRng rng(17, 0);
  int efx = 0;
  int non_decreasing = 0;
  int strict_or_efx = 0;
  int fewer_goods_than_bundles = 0;
  std::string example;
  for (int i = 0; i < 300; ++i) {
    const int n = 2 + i % 2;
    const int m = 1 + static_cast<int>(rng.Below(6));
    Valuation v = RandomMonotoneTable(rng, m, 1000000, 1);
    const std::array<Valuation, 1> one = {v};
    v = PerturbValuation(v, DefaultEpsilon(MinValueGap(one), m));
    const ValueTable t = v.Tabulate();
    std::vector<Bundle> bundles(n);
    for (int g = 0; g < m; ++g) {
      const int b = static_cast<int>(rng.Below(n));
      bundles[b] = bundles[b].With(g);
    }
    const Partition start(m, bundles);
    const Partition out = PrAlgorithm(start, t);
    const Rational before = MinBundleValue(start, t);
    const Rational after = MinBundleValue(out, t);
    if (IsEfxPartition(out, t)) ++efx;
    if (after >= before) ++non_decreasing;
    if (after > before || IsEfxPartition(start, t)) {
      ++strict_or_efx;
    } else {
      if (m < n) ++fewer_goods_than_bundles;
      if (!example.empty()) continue;
      example = Format("; e.g. m=%d n=%d, start", m, n);
      for (Bundle b : bundles) example += Format(" %#x", b.bits());
      example += " keeps min 0";
    }
  }
  return {efx == 300 && non_decreasing == 300 && strict_or_efx == 300,
          Format("EFX %d/300, min non-decreasing %d/300, strict-unless-EFX "
                 "%d/300 (%d misses have m < n)",
                 efx, non_decreasing, strict_or_efx,
                 fewer_goods_than_bundles) +
              example};
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<Verdict()> run;
};

}  // namespace
}  // namespace efx

int main() {
  using efx::Criterion;
  const std::vector<Criterion> criteria = {
      {1, "MMS-feasible, not nice-cancelable", 1, efx::MmsNotNiceRegression},
      {2, "nice-cancelable implies MMS-feasible", 60, efx::NiceImpliesMms},
      {3, "3-agent EFX existence", 600, efx::ThreeAgentExistence},
      {4, "oracle agreement", 300, efx::OracleAgreement},
      {5, "perturbation preserves EFX", 600, efx::PerturbationPreservesEfx},
      {6, "rainbow threshold", 1, efx::ThresholdBoundaries},
      {7, "derandomized finder", 120, efx::DerandomizedFinder},
      {8, "randomized calibration", 120, efx::RandomizedCalibration},
      {9, "permutation finder", 300, efx::PermutationFinder},
      {10, "PR algorithm", 600, efx::PrAlgorithmProgress},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    efx::Verdict verdict;
    try {
      verdict = c.run();
    } catch (const std::exception& e) {
      verdict = {false, std::string("unexpected error: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start)
                               .count();
    if (seconds > c.limit_seconds) {
      verdict.pass = false;
      verdict.detail += efx::Format("; over the %.0f s limit", c.limit_seconds);
    }
    if (!verdict.pass) ++failed;
    std::printf("criterion %2d %s: %s (%s, %.2f s)\n", c.id,
                verdict.pass ? "PASS" : "FAIL", c.name, verdict.detail.c_str(),
                seconds);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n",
              static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
