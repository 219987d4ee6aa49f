//
// Copyright 2026 The flexacc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "flexacc/transport.h"

#include <cmath>
#include <limits>

#include "flexacc/audit.h"
#include "flexacc/rng.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace flexacc {
namespace {

using testing::D1;

DiscreteDistribution RandomDist(RngStream& rng, int max_atoms) {
  const int atoms = 1 + static_cast<int>(rng.UniformInt(max_atoms));
  std::vector<std::pair<GroundPoint, int64_t>> w;
  for (int i = 0; i < atoms; ++i) {
    w.emplace_back(GroundPoint(static_cast<double>(rng.UniformInt(8))),
                   1 + rng.UniformInt(4));
  }
  return *DiscreteDistribution::FromWeights(w);
}

TEST(DistributionTest, FromMassesValidates) {
  EXPECT_FALSE(DiscreteDistribution::FromMasses({{GroundPoint(0), 0.5}}).ok());
  EXPECT_FALSE(DiscreteDistribution::FromMasses(
                   {{GroundPoint(0), 1.5}, {GroundPoint(1), -0.5}})
                   .ok());
  auto d = DiscreteDistribution::FromMasses(
      {{GroundPoint(0), 0.25}, {GroundPoint(0), 0.75}, {GroundPoint(1), 0}});
  ASSERT_TRUE(d.ok());
  EXPECT_EQ(d->size(), 1);
}

TEST(TvDistanceTest, Examples) {
  auto p = D1({{0, 0.5}, {1, 0.5}});
  EXPECT_DOUBLE_EQ(TvDistance(p, p), 0);
  EXPECT_DOUBLE_EQ(TvDistance(D1({{0, 1}}), D1({{1, 1}})), 1);
  EXPECT_DOUBLE_EQ(TvDistance(p, D1({{0, 1}})), 0.5);
}

TEST(WinfTest, Examples) {
  auto p = D1({{0, 0.5}, {1, 0.5}});
  EXPECT_DOUBLE_EQ(Winf(p, p), 0);
  EXPECT_DOUBLE_EQ(Winf(p, D1({{0, 0.5}, {2, 0.5}})), 1);
  EXPECT_DOUBLE_EQ(Winf(D1({{0, 1}}), D1({{7, 1}})), 7);
}

TEST(WinfLossyTest, Examples) {
  auto p = D1({{0, 0.5}, {1, 0.5}});
  auto q = D1({{0, 1}});
  EXPECT_DOUBLE_EQ(*WinfLossy(p, D1({{9, 1}}), 1), 0);
  EXPECT_DOUBLE_EQ(*WinfLossy(p, q, 0.5), 0);
  EXPECT_DOUBLE_EQ(*WinfLossy(p, q, 0.25), 1);
  EXPECT_FALSE(WinfLossy(p, q, 1.5).ok());
  EXPECT_FALSE(WinfLossy(p, q, -0.1).ok());
}

TEST(WinfLossyTest, WitnessExamples) {
  auto p = D1({{0, 0.5}, {1, 0.5}});
  auto w = WinfLossyWitness(p, p, 0);
  ASSERT_TRUE(w.ok());
  EXPECT_DOUBLE_EQ(w->beta, 0);
  EXPECT_DOUBLE_EQ(w->coupling.MaxCellDistance(), 0);

  auto q = D1({{0, 1}});
  auto w2 = WinfLossyWitness(p, q, 0.5);
  ASSERT_TRUE(w2.ok());
  EXPECT_DOUBLE_EQ(w2->beta, 0);
  EXPECT_LE(MarginalDeviation(w2->coupling, p, q), 0.5 + 1e-12);

  auto w3 = WinfLossyWitness(D1({{0, 1}}), D1({{7, 1}}), 0);
  ASSERT_TRUE(w3.ok());
  EXPECT_DOUBLE_EQ(w3->beta, 7);
  EXPECT_EQ(w3->coupling.cells.size(), 1u);
}

TEST(WinfLossyTest, WitnessIsFeasibleAndAttainsBeta) {
  RngStream rng(11);
  for (int i = 0; i < 200; ++i) {
    auto p = RandomDist(rng, 4);
    auto q = RandomDist(rng, 4);
    const double gamma = rng.UniformInt(9) / 8.0;
    auto w = WinfLossyWitness(p, q, gamma);
    ASSERT_TRUE(w.ok());
    EXPECT_DOUBLE_EQ(w->beta, *WinfLossy(p, q, gamma));
    EXPECT_LE(MarginalDeviation(w->coupling, p, q), gamma + 1e-9);
    EXPECT_LE(w->coupling.MaxCellDistance(), w->beta + 1e-12);
    EXPECT_NEAR(w->coupling.TotalMass(), 1, 1e-9);
  }
}

TEST(WinfLossyTest, MatchesLinearProgram) {
  RngStream rng(5);
  for (int i = 0; i < 100; ++i) {
    auto p = RandomDist(rng, 4);
    auto q = RandomDist(rng, 4);
    const double gamma = rng.UniformInt(9) / 8.0;
    EXPECT_DOUBLE_EQ(*WinfLossy(p, q, gamma), *BruteWinfLossy(p, q, gamma));
  }
}

TEST(WinfLossyTest, NonIncreasingInGamma) {
  RngStream rng(9);
  for (int i = 0; i < 100; ++i) {
    auto p = RandomDist(rng, 5);
    auto q = RandomDist(rng, 5);
    double prev = std::numeric_limits<double>::infinity();
    for (int g = 0; g <= 10; ++g) {
      const double v = *WinfLossy(p, q, g / 10.0);
      EXPECT_LE(v, prev);
      prev = v;
    }
    EXPECT_DOUBLE_EQ(*WinfLossy(p, q, 0), Winf(p, q));
  }
}

TEST(MaxTransportableMassTest, Examples) {
  auto p = D1({{0, 0.5}, {1, 0.5}});
  auto q = D1({{0, 1}});
  EXPECT_DOUBLE_EQ(MaxTransportableMass(p, q, 0), 0.5);
  EXPECT_DOUBLE_EQ(MaxTransportableMass(p, q, 1), 1);
}

TEST(BipartiteMaxFlowTest, RespectsThreshold) {
  std::vector<std::pair<GroundPoint, int64_t>> left = {{GroundPoint(0), 3},
                                                       {GroundPoint(5), 2}};
  std::vector<std::pair<GroundPoint, int64_t>> right = {{GroundPoint(1), 4}};
  std::vector<PairFlow> flows;
  EXPECT_EQ(BipartiteMaxFlow(left, right, 1, &flows), 3);
  EXPECT_EQ(BipartiteMaxFlow(left, right, 4, nullptr), 4);
  int64_t total = 0;
  for (const auto& f : flows) total += f.amount;
  EXPECT_EQ(total, 3);
}

TEST(WAvgLossyTest, Examples) {
  auto p = D1({{0, 0.5}, {1, 0.5}});
  EXPECT_DOUBLE_EQ(*WAvgLossy(p, p, 0), 0);
  EXPECT_DOUBLE_EQ(*WAvgLossy(D1({{0, 1}}), D1({{4, 1}}), 0.5), 2.0);
  EXPECT_DOUBLE_EQ(*WAvgLossy(p, D1({{0, 1}}), 0), 0.5);
}

TEST(WAvgLossyTest, MatchesLinearProgram) {
  RngStream rng(21);
  for (int i = 0; i < 100; ++i) {
    auto p = RandomDist(rng, 4);
    auto q = RandomDist(rng, 4);
    const double theta = rng.UniformInt(9) / 8.0;
    EXPECT_NEAR(*WAvgLossy(p, q, theta), *BruteWAvgLossy(p, q, theta), 1e-9);
  }
}

}  // namespace
}  // namespace flexacc
