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

#include "flexacc/distortion.h"

#include <cmath>
#include <limits>

#include "flexacc/rng.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace flexacc {
namespace {

using testing::H1;

constexpr double kInf = std::numeric_limits<double>::infinity();

Histogram RandomHist(RngStream& rng, int max_size, int bars = 6) {
  std::vector<int64_t> counts(bars, 0);
  const int n = 1 + static_cast<int>(rng.UniformInt(max_size));
  for (int i = 0; i < n; ++i) ++counts[rng.UniformInt(bars)];
  return Histogram::FromBars(counts, bars);
}

// A random sub-histogram of x.
Histogram RandomSub(RngStream& rng, const Histogram& x) {
  Histogram y = x;
  for (const auto& g : x.Support()) {
    y.Set(g, rng.UniformInt(x.Count(g) + 1));
  }
  return y;
}

TEST(DropTest, Examples) {
  Histogram x = H1({{0, 3}, {1, 1}});
  EXPECT_DOUBLE_EQ(*Drop(x, x), 0);
  EXPECT_DOUBLE_EQ(*Drop(x, H1({{0, 2}, {1, 1}})), 0.25);
  EXPECT_EQ(*Drop(H1({{0, 1}}), H1({{0, 1}, {1, 1}})), kInf);
  EXPECT_FALSE(Drop(Histogram(MetricSpace::Line(5)), x).ok());
}

TEST(MoveTest, Examples) {
  Histogram x = H1({{0, 1}, {1, 1}});
  EXPECT_DOUBLE_EQ(Move(x, x), 0);
  EXPECT_DOUBLE_EQ(Move(x, H1({{0, 1}, {2, 1}})), 1);
  EXPECT_EQ(Move(x, H1({{0, 1}})), kInf);
}

TEST(DrmvTest, Examples) {
  Histogram x = H1({{0, 1}, {1, 1}});
  EXPECT_DOUBLE_EQ(Drmv(x, x, 1)->value, 0);
  auto r = Drmv(H1({{0, 1}, {100, 1}}, 101), H1({{1, 1}}, 101), 1);
  ASSERT_TRUE(r.ok());
  EXPECT_DOUBLE_EQ(r->value, 1.5);
  EXPECT_TRUE(r->exact);
  EXPECT_EQ(r->witness, H1({{0, 1}}, 101));
  EXPECT_EQ(Drmv(H1({{0, 1}}), x, 1)->value, kInf);
}

TEST(DrmvTest, CallerWitnessIsEvaluated) {
  Histogram x = H1({{0, 1}, {100, 1}}, 101);
  DrmvOptions opts;
  opts.witness = H1({{100, 1}}, 101);
  auto r = Drmv(x, H1({{1, 1}}, 101), 1, opts);
  ASSERT_TRUE(r.ok());
  EXPECT_DOUBLE_EQ(r->value, 0.5 + 99);
  EXPECT_FALSE(r->exact);
}

TEST(DrmvTest, BottleneckMatchesEnumeration) {
  RngStream rng(3);
  for (int i = 0; i < 200; ++i) {
    Histogram x = RandomHist(rng, 10);
    Histogram y = RandomSub(rng, RandomHist(rng, 10));
    if (y.empty()) continue;
    const double eta = 0.1 * (1 + rng.UniformInt(10));
    auto exact = Drmv(x, y, eta);
    DrmvOptions opts;
    opts.enumeration_bound = 0;
    auto fast = Drmv(x, y, eta, opts);
    ASSERT_TRUE(exact.ok());
    ASSERT_TRUE(fast.ok());
    EXPECT_TRUE(exact->exact);
    if (std::isinf(exact->value)) {
      EXPECT_TRUE(std::isinf(fast->value));
    } else {
      EXPECT_NEAR(exact->value, fast->value, 1e-12);
    }
  }
}

TEST(QuasiMetricTest, DropLaws) {
  RngStream rng(4);
  for (int i = 0; i < 200; ++i) {
    Histogram x = RandomHist(rng, 12);
    Histogram y = RandomSub(rng, x);
    if (y.empty()) continue;
    Histogram z = RandomSub(rng, y);
    EXPECT_DOUBLE_EQ(*Drop(x, x), 0);
    EXPECT_GE(*Drop(x, y), 0);
    EXPECT_LE(*Drop(x, z), *Drop(x, y) + *Drop(y, z) + 1e-12);
    if (!(x == y)) EXPECT_EQ(*Drop(y, x), kInf);
  }
}

TEST(QuasiMetricTest, MoveLaws) {
  RngStream rng(5);
  for (int i = 0; i < 200; ++i) {
    Histogram x = RandomHist(rng, 8);
    std::vector<int64_t> by(6, 0), bz(6, 0);
    for (int k = 0; k < x.size(); ++k) {
      ++by[rng.UniformInt(6)];
      ++bz[rng.UniformInt(6)];
    }
    Histogram y = Histogram::FromBars(by, 6);
    Histogram z = Histogram::FromBars(bz, 6);
    EXPECT_DOUBLE_EQ(Move(x, x), 0);
    EXPECT_DOUBLE_EQ(Move(x, y), Move(y, x));
    EXPECT_LE(Move(x, z), Move(x, y) + Move(y, z) + 1e-12);
  }
}

TEST(QuasiMetricTest, DrmvLaws) {
  RngStream rng(6);
  for (int i = 0; i < 200; ++i) {
    Histogram x = RandomHist(rng, 8);
    Histogram y = RandomSub(rng, RandomHist(rng, 8));
    if (y.empty()) continue;
    const double eta = 0.5;
    const double d = Drmv(x, y, eta)->value;
    EXPECT_DOUBLE_EQ(Drmv(x, x, eta)->value, 0);
    EXPECT_LE(d, *Drop(x, y));
    if (x.size() == y.size()) EXPECT_LE(d, eta * Move(x, y) + 1e-12);
    if (std::isfinite(d)) {
      EXPECT_NEAR(d, static_cast<double>(x.size() - y.size()) / x.size() +
                         eta * Move(Drmv(x, y, eta)->witness, y),
                  1e-12);
    }
  }
}

TEST(DhatTest, Examples) {
  Histogram x = H1({{0, 2}, {1, 2}});
  EXPECT_DOUBLE_EQ(*Dhat(DistortionKind::Drop(), x, {{x, 1.0}}), 0);
  std::vector<std::pair<Histogram, double>> d = {{x, 0.2}};
  for (double g : {0.0, 1.0}) {
    Histogram y = x;
    y.Add(GroundPoint(g), -1);
    d.emplace_back(y, 0.4);
  }
  EXPECT_DOUBLE_EQ(*Dhat(DistortionKind::Drop(), x, d), 0.25);
  d.emplace_back(H1({{0, 2}, {1, 2}, {2, 1}}), 0.0);
  EXPECT_DOUBLE_EQ(*Dhat(DistortionKind::Drop(), x, d), 0.25);
  d.back().second = 0.1;
  EXPECT_EQ(*Dhat(DistortionKind::Drop(), x, d), kInf);
}

TEST(DropMoveSwitchTest, Identity) {
  Histogram x = H1({{0, 2}, {3, 1}});
  auto r = DropMoveSwitch(x, x, x);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->rounded, x);
  EXPECT_EQ(*FractionalDrop(x, r->s), Rational(0));
}

TEST(DropMoveSwitchTest, Example) {
  Histogram x = H1({{0, 2}});
  auto r = DropMoveSwitch(x, H1({{1, 2}}), H1({{1, 1}}));
  ASSERT_TRUE(r.ok());
  EXPECT_DOUBLE_EQ(r->alpha1, 1);
  EXPECT_EQ(r->alpha2, Rational(1, 2));
  ASSERT_EQ(r->s.size(), 1u);
  EXPECT_EQ(r->s.begin()->first, GroundPoint(0));
  EXPECT_EQ(r->s.begin()->second, Rational(1));
  EXPECT_EQ(*FractionalDrop(x, r->s), Rational(1, 2));
  EXPECT_DOUBLE_EQ(FractionalMove(r->s, H1({{1, 1}})), 1);
}

TEST(DropMoveSwitchTest, GuaranteesOnRandomInstances) {
  RngStream rng(8);
  int checked = 0;
  while (checked < 200) {
    Histogram x = RandomHist(rng, 8);
    std::vector<int64_t> bz(6, 0);
    for (int k = 0; k < x.size(); ++k) ++bz[rng.UniformInt(6)];
    Histogram z = Histogram::FromBars(bz, 6);
    Histogram y = RandomSub(rng, z);
    if (y.empty()) continue;
    auto r = DropMoveSwitch(x, z, y);
    ASSERT_TRUE(r.ok());
    ++checked;
    EXPECT_DOUBLE_EQ(r->alpha1, Move(x, z));
    EXPECT_DOUBLE_EQ(boost::rational_cast<double>(r->alpha2), *Drop(z, y));
    EXPECT_EQ(*FractionalDrop(x, r->s), r->alpha2);
    EXPECT_LE(FractionalMove(r->s, y), r->alpha1 + 1e-12);
    if (r->alpha2 == Rational(0)) {
      EXPECT_EQ(FractionalSize(r->s), Rational(x.size()));
    }
  }
}

TEST(DropMoveSwitchTest, RejectsMismatchedSizes) {
  EXPECT_FALSE(
      DropMoveSwitch(H1({{0, 2}}), H1({{1, 3}}), H1({{1, 1}})).ok());
}

TEST(LargestRemainderRoundTest, PreservesTotal) {
  FractionalHistogram s = {{GroundPoint(0), Rational(3, 2)},
                           {GroundPoint(1), Rational(3, 2)},
                           {GroundPoint(2), Rational(1)}};
  Histogram r = LargestRemainderRound(s, MetricSpace::Line(3));
  EXPECT_EQ(r.size(), 4);
  EXPECT_EQ(r.Count(GroundPoint(0)), 2);
  EXPECT_EQ(r.Count(GroundPoint(1)), 1);
}

}  // namespace
}  // namespace flexacc
