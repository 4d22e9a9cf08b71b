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

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "gtest/gtest.h"

#include "efx/error.h"
#include "efx/oracle.h"
#include "efx/rainbow.h"
#include "efx/rng.h"

namespace efx {
namespace {

LayeredDigraph RandomGraph(uint64_t seed, int k, int d, GraphKind kind) {
  GeneratorConfig config;
  config.seed = seed;
  config.k = k;
  config.d = d;
  config.graph_kind = kind;
  return RandomLayeredGraph(config);
}

// k (d-1)^(k-1) < d^(k-1) in integers.
int ThresholdByIntegers(int d) {
  for (unsigned long k = 1;; ++k) {
    mpz_class lhs, rhs;
    mpz_ui_pow_ui(lhs.get_mpz_t(), d - 1, k - 1);
    mpz_ui_pow_ui(rhs.get_mpz_t(), d, k - 1);
    if (lhs * k < rhs) return static_cast<int>(k);
  }
}

// Expected number of selected vertices with no selected in-neighbour,
// averaged over every completion of the prefix.
Rational ExpectationByEnumeration(const LayeredDigraph& g,
                                  std::vector<int> prefix) {
  const int k = g.num_parts();
  const int t = static_cast<int>(prefix.size());
  std::vector<int> sel = prefix;
  sel.resize(k, 0);
  Rational total = 0;
  int64_t count = 0;
  while (true) {
    int bad = 0;
    for (int p = 0; p < k; ++p) {
      bool hit = false;
      for (int q = 0; q < k; ++q) {
        if (q != p && g.InNeighbor(Vertex{p, sel[p]}, q) == sel[q]) hit = true;
      }
      if (!hit) ++bad;
    }
    total += bad;
    ++count;
    int p = k - 1;
    while (p >= t && ++sel[p] == g.part_size(p)) sel[p--] = 0;
    if (p < t) break;
  }
  return total / count;
}

TEST(ThresholdTest, SpotValues) {
  EXPECT_EQ(ThresholdK(1), 2);
  EXPECT_EQ(ThresholdK(2), 3);
  EXPECT_EQ(ThresholdK(3), 5);
  EXPECT_EQ(UnionBound(5, 3), Rational(80, 81));
}

TEST(ThresholdTest, MatchesIntegerEvaluation) {
  for (int d = 1; d <= 50; ++d) {
    const int k = ThresholdK(d);
    EXPECT_EQ(k, ThresholdByIntegers(d)) << d;
    EXPECT_LT(UnionBound(k, d), 1);
    if (k > 1) EXPECT_GE(UnionBound(k - 1, d), 1);
  }
}

TEST(ValidateTest, AcceptsGeneratedGraphs) {
  for (auto kind : {GraphKind::kLayered, GraphKind::kPermutation}) {
    for (uint64_t seed = 0; seed < 20; ++seed) {
      EXPECT_TRUE(RandomGraph(seed, 4, 3, kind).Validate().empty());
    }
  }
}

TEST(ValidateTest, ReportsViolations) {
  LayeredDigraph g(GraphKind::kLayered, {1});
  EXPECT_FALSE(g.Validate().empty());

  LayeredDigraph missing(GraphKind::kLayered, {1, 1});
  missing.SetInNeighbor(Vertex{0, 0}, 1, 0);
  EXPECT_EQ(missing.Validate().size(), 1u);

  LayeredDigraph out_of_range = RandomGraph(0, 3, 2, GraphKind::kLayered);
  out_of_range.SetInNeighbor(Vertex{0, 0}, 1, 2);
  EXPECT_FALSE(out_of_range.Validate().empty());

  // Two vertices of part 0 with the same in-neighbour in part 1.
  LayeredDigraph clash = RandomGraph(0, 2, 2, GraphKind::kPermutation);
  clash.SetInNeighbor(Vertex{0, 0}, 1, 0);
  clash.SetInNeighbor(Vertex{0, 1}, 1, 0);
  EXPECT_FALSE(clash.Validate().empty());
}

TEST(IsRainbowCycleTest, ChecksEdgesAndParts) {
  LayeredDigraph g(GraphKind::kLayered, {1, 1});
  g.SetInNeighbor(Vertex{0, 0}, 1, 0);
  g.SetInNeighbor(Vertex{1, 0}, 0, 0);
  EXPECT_TRUE(IsRainbowCycle(g, RainbowCycle{{Vertex{0, 0}, Vertex{1, 0}}}));
  EXPECT_FALSE(IsRainbowCycle(g, RainbowCycle{{Vertex{0, 0}}}));
  EXPECT_FALSE(IsRainbowCycle(
      g, RainbowCycle{{Vertex{0, 0}, Vertex{1, 0}, Vertex{0, 0}}}));
}

TEST(ExtractCycleTest, TwoCycle) {
  LayeredDigraph g(GraphKind::kLayered, {1, 1});
  g.SetInNeighbor(Vertex{0, 0}, 1, 0);
  g.SetInNeighbor(Vertex{1, 0}, 0, 0);
  const std::vector<int> sel = {0, 0};
  EXPECT_TRUE(SelectionClosed(g, sel));
  const RainbowCycle c = ExtractCycle(g, sel);
  EXPECT_TRUE(IsRainbowCycle(g, c));
  EXPECT_EQ(c.vertices.size(), 2u);
}

TEST(ExtractCycleTest, DiscardsPathPrefix) {
  // Parts 1 -> 2 -> 3 -> 1 form a cycle on offset 0; part 0's selected
  // vertex hangs off it.
  LayeredDigraph g(GraphKind::kLayered, {2, 2, 2, 2});
  for (int p = 0; p < 4; ++p) {
    for (int o = 0; o < 2; ++o) {
      for (int q = 0; q < 4; ++q) {
        if (q != p) g.SetInNeighbor(Vertex{p, o}, q, 1);
      }
    }
  }
  g.SetInNeighbor(Vertex{0, 0}, 1, 0);
  g.SetInNeighbor(Vertex{2, 0}, 1, 0);
  g.SetInNeighbor(Vertex{3, 0}, 2, 0);
  g.SetInNeighbor(Vertex{1, 0}, 3, 0);
  ASSERT_TRUE(g.Validate().empty());
  const std::vector<int> sel = {0, 0, 0, 0};
  const RainbowCycle c = ExtractCycle(g, sel);
  EXPECT_TRUE(IsRainbowCycle(g, c));
  EXPECT_EQ(c.vertices.size(), 3u);
  for (const Vertex& v : c.vertices) EXPECT_NE(v.part, 0);
}

TEST(ExtractCycleTest, DeadEnd) {
  LayeredDigraph g(GraphKind::kLayered, {2, 2});
  g.SetInNeighbor(Vertex{0, 0}, 1, 1);
  g.SetInNeighbor(Vertex{0, 1}, 1, 1);
  g.SetInNeighbor(Vertex{1, 0}, 0, 1);
  g.SetInNeighbor(Vertex{1, 1}, 0, 1);
  try {
    ExtractCycle(g, std::vector<int>{0, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDeadEnd);
  }
}

TEST(ExtractCycleTest, RotationInvariantOnSingleCycle) {
  for (uint64_t seed = 0; seed < 200; ++seed) {
    const LayeredDigraph g = RandomGraph(seed, 5, 3, GraphKind::kLayered);
    const std::vector<int> sel = SampleSelection(g, seed, 0);
    if (!SelectionClosed(g, sel)) continue;
    const RainbowCycle a = ExtractCycle(g, sel, 0);
    EXPECT_TRUE(IsRainbowCycle(g, a));
    // Starting on the cycle reproduces it up to rotation.
    const RainbowCycle b = ExtractCycle(g, sel, a.vertices[0].part);
    EXPECT_EQ(std::set<Vertex>(a.vertices.begin(), a.vertices.end()),
              std::set<Vertex>(b.vertices.begin(), b.vertices.end()));
  }
}

TEST(ConditionalExpectationTest, MatchesEnumeration) {
  for (uint64_t seed = 0; seed < 30; ++seed) {
    CounterRng rng(seed, 5);
    std::vector<int> sizes(3 + rng.Below(2));
    for (int& s : sizes) s = 1 + static_cast<int>(rng.Below(3));
    LayeredDigraph g(GraphKind::kLayered, sizes);
    for (int p = 0; p < g.num_parts(); ++p) {
      for (int o = 0; o < g.part_size(p); ++o) {
        for (int q = 0; q < g.num_parts(); ++q) {
          if (q != p) {
            g.SetInNeighbor(Vertex{p, o}, q,
                            static_cast<int>(rng.Below(g.part_size(q))));
          }
        }
      }
    }
    std::vector<int> prefix;
    for (int p = 0; p <= g.num_parts(); ++p) {
      EXPECT_EQ(ConditionalExpectation(g, prefix),
                ExpectationByEnumeration(g, prefix));
      if (p < g.num_parts()) {
        prefix.push_back(static_cast<int>(rng.Below(g.part_size(p))));
      }
    }
  }
}

TEST(ConditionalExpectationTest, ClosedFormAndMonteCarlo) {
  const LayeredDigraph g = RandomGraph(3, 5, 3, GraphKind::kLayered);
  // k * (1/d) * d * (1 - 1/d)^(k-1) with all parts of size d.
  EXPECT_EQ(ConditionalExpectation(g, {}), UnionBound(5, 3));

  const int trials = 20000;
  double sum = 0, sum_sq = 0;
  for (int t = 0; t < trials; ++t) {
    const std::vector<int> sel = SampleSelection(g, 99, t);
    int bad = 0;
    for (int p = 0; p < 5; ++p) {
      bool hit = false;
      for (int q = 0; q < 5; ++q) {
        if (q != p && g.InNeighbor(Vertex{p, sel[p]}, q) == sel[q]) hit = true;
      }
      bad += hit ? 0 : 1;
    }
    sum += bad;
    sum_sq += bad * bad;
  }
  const double mean = sum / trials;
  const double se = std::sqrt((sum_sq / trials - mean * mean) / trials);
  EXPECT_NEAR(mean, UnionBound(5, 3).get_d(), 3 * se);
}

TEST(ConditionalExpectationTest, RejectsBadPrefix) {
  const LayeredDigraph g = RandomGraph(0, 3, 2, GraphKind::kLayered);
  EXPECT_THROW(ConditionalExpectation(g, std::vector<int>{5}), Error);
  EXPECT_THROW(ConditionalExpectation(g, std::vector<int>{0, 0, 0, 0}), Error);
}

TEST(DerandomizedTest, PotentialsFallAndCycleIsValid) {
  for (int d = 1; d <= 4; ++d) {
    const int k = ThresholdK(d);
    for (uint64_t seed = 0; seed < 50; ++seed) {
      const LayeredDigraph g = RandomGraph(seed, k, d, GraphKind::kLayered);
      const DerandomizedResult r = FindRainbowCycleDerandomized(g);
      EXPECT_TRUE(IsRainbowCycle(g, r.cycle));
      ASSERT_EQ(r.potentials.size(), static_cast<std::size_t>(k + 1));
      for (std::size_t i = 0; i < r.potentials.size(); ++i) {
        EXPECT_LT(r.potentials[i], 1);
        if (i > 0) EXPECT_LE(r.potentials[i], r.potentials[i - 1]);
      }
      EXPECT_TRUE(BruteForceRainbowCycle(g).has_value());
    }
  }
}

TEST(DerandomizedTest, ThresholdNotMet) {
  const LayeredDigraph g = RandomGraph(0, 4, 3, GraphKind::kLayered);
  try {
    FindRainbowCycleDerandomized(g);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kThresholdNotMet);
  }
}

TEST(RandomizedTest, ParallelMatchesSerial) {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const LayeredDigraph g = RandomGraph(seed, 5, 3, GraphKind::kLayered);
    const RandomizedOutcome a = FindRainbowCycleRandomized(g, seed, 5000);
    const RandomizedOutcome b = FindRainbowCycleRandomizedSerial(g, seed, 5000);
    EXPECT_EQ(a.cycle, b.cycle);
    EXPECT_EQ(a.trials_used, b.trials_used);
    if (a.cycle) EXPECT_TRUE(IsRainbowCycle(g, *a.cycle));
    EXPECT_EQ(CountRandomizedSuccesses(g, seed, 3000),
              CountRandomizedSuccessesSerial(g, seed, 3000));
  }
}

TEST(RandomizedTest, SeedsReplay) {
  const LayeredDigraph g = RandomGraph(1, 5, 3, GraphKind::kLayered);
  EXPECT_EQ(SampleSelection(g, 4, 17), SampleSelection(g, 4, 17));
  EXPECT_NE(SampleSelection(g, 4, 17), SampleSelection(g, 5, 17));
}

TEST(RandomizedTest, ZeroTrialsFindsNothing) {
  const LayeredDigraph g = RandomGraph(1, 5, 3, GraphKind::kLayered);
  EXPECT_FALSE(FindRainbowCycleRandomized(g, 0, 0).cycle.has_value());
}

// Paths are part-distinct, follow edges, start at the root, and all but the
// last vertex sit in the first 2i-2 chosen parts.
void ExpectValidStages(const LayeredDigraph& g, Vertex root,
                       const PermutationResult& r) {
  for (std::size_t s = 0; s < r.stages.size(); ++s) {
    const PermutationStage& stage = r.stages[s];
    const int i = static_cast<int>(s) + 1;
    ASSERT_EQ(stage.chosen_parts.size(), static_cast<std::size_t>(2 * i - 1));
    EXPECT_GE(stage.paths.size(), static_cast<std::size_t>(i));
    std::set<int> allowed(stage.chosen_parts.begin(),
                          stage.chosen_parts.end() - 1);
    std::set<Vertex> ends;
    for (const auto& path : stage.paths) {
      ASSERT_FALSE(path.empty());
      EXPECT_EQ(path.front(), root);
      EXPECT_EQ(path.back().part, stage.chosen_parts.back());
      ends.insert(path.back());
      std::set<int> parts;
      for (std::size_t j = 0; j < path.size(); ++j) {
        EXPECT_TRUE(parts.insert(path[j].part).second);
        if (j + 1 < path.size()) {
          EXPECT_TRUE(allowed.count(path[j].part));
          EXPECT_TRUE(g.HasEdge(path[j], path[j + 1]));
        }
      }
    }
    EXPECT_EQ(ends.size(), stage.paths.size());
  }
}

class PermutationFinderTest : public ::testing::TestWithParam<int> {};

TEST_P(PermutationFinderTest, EveryRootYieldsCycle) {
  const int d = GetParam();
  const int k = 2 * d - 1 < 2 ? 2 : 2 * d - 1;
  for (uint64_t seed = 0; seed < 40; ++seed) {
    const LayeredDigraph g = RandomGraph(seed, k, d, GraphKind::kPermutation);
    for (int index = 0; index < g.num_vertices(); ++index) {
      const Vertex root = g.VertexAt(index);
      const PermutationResult r = FindRainbowCycleFromRoot(g, root);
      EXPECT_TRUE(IsRainbowCycle(g, r.cycle));
      if (r.descents == 0) {
        EXPECT_TRUE(std::find(r.cycle.vertices.begin(), r.cycle.vertices.end(),
                              root) != r.cycle.vertices.end());
      }
      ExpectValidStages(g, root, r);
      PermutationFinderOptions early;
      early.early_exit = true;
      EXPECT_TRUE(IsRainbowCycle(g, FindRainbowCyclePermutation(g, root, early)));
    }
  }
}

INSTANTIATE_TEST_SUITE_P(PartSizes, PermutationFinderTest,
                         ::testing::Range(1, 6));

TEST(PermutationFinderTest, DescentIsExercised) {
  // With d = 2 and k = 3 the search often finds each open part split into
  // one reachable and one unreachable vertex with no edge between the halves.
  int descents = 0;
  for (uint64_t seed = 0; seed < 300; ++seed) {
    const LayeredDigraph g = RandomGraph(seed, 3, 2, GraphKind::kPermutation);
    const PermutationResult r = FindRainbowCycleFromRoot(g, Vertex{0, 0});
    EXPECT_TRUE(IsRainbowCycle(g, r.cycle));
    EXPECT_TRUE(BruteForceRainbowCycle(g).has_value());
    descents += r.descents;
  }
  EXPECT_GT(descents, 0);
}

TEST(PermutationFinderTest, Preconditions) {
  const LayeredDigraph g = RandomGraph(0, 4, 3, GraphKind::kPermutation);
  try {
    FindRainbowCyclePermutation(g, Vertex{0, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kPrecondition);
  }
  const LayeredDigraph layered = RandomGraph(0, 3, 2, GraphKind::kLayered);
  EXPECT_THROW(FindRainbowCyclePermutation(layered, Vertex{0, 0}), Error);
}

TEST(PermutationFinderTest, DegreeOneGivesTwoCycle) {
  const LayeredDigraph g = RandomGraph(0, 2, 1, GraphKind::kPermutation);
  const RainbowCycle c = FindRainbowCyclePermutation(g, Vertex{1, 0});
  EXPECT_EQ(c.vertices.size(), 2u);
  EXPECT_EQ(c.vertices[0], (Vertex{1, 0}));
  EXPECT_TRUE(IsRainbowCycle(g, c));
}

}  // namespace
}  // namespace efx
