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

#include "flexacc/mechanisms.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "flexacc/distortion.h"
#include "flexacc/rng.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace flexacc {
namespace {

using testing::H1;

Histogram RandomBars(RngStream& rng, int bars, int max_count) {
  std::vector<int64_t> c(bars);
  for (auto& v : c) v = rng.UniformInt(max_count + 1);
  if (std::all_of(c.begin(), c.end(), [](int64_t v) { return v == 0; })) {
    c[0] = 1;
  }
  return Histogram::FromBars(c, bars);
}

TEST(NoiseSpecTest, Validates) {
  EXPECT_TRUE(NoiseSpec::Create(2, 1).ok());
  EXPECT_FALSE(NoiseSpec::Create(0, 1).ok());
  EXPECT_FALSE(NoiseSpec::Create(2, 0).ok());
}

TEST(TrlapCdfTest, Examples) {
  const NoiseSpec spec{2, 1};
  EXPECT_DOUBLE_EQ(TrlapCdf(spec, -2), 0);
  EXPECT_DOUBLE_EQ(TrlapCdf(spec, 0), 1);
  EXPECT_NEAR(TrlapCdf(spec, -1), 0.5, 1e-15);
  EXPECT_NEAR(TrlapCdf(spec, -0.5), 0.811229665600927282, 1e-14);
  const NoiseSpec wide{95.2888927726855, 0.25};
  EXPECT_NEAR(TrlapCdf(wide, -wide.q / 2), 0.5, 1e-14);
}

TEST(TrlapSampleTest, SupportMeanAndSpread) {
  const NoiseSpec spec{2, 1};
  RngStream rng(1);
  constexpr int kN = 200000;
  double sum = 0;
  for (int i = 0; i < kN; ++i) {
    const double z = TrlapSample(spec, rng);
    ASSERT_GE(z, -2);
    ASSERT_LE(z, 0);
    sum += z;
  }
  // Mean -1, standard deviation 0.504053448943681.
  EXPECT_NEAR(sum / kN, -1, 3 * 0.504053448943681 / std::sqrt(kN));
}

TEST(TrlapSampleTest, ConcentratesAtMidpoint) {
  const NoiseSpec spec{10, 50};
  RngStream rng(2);
  std::vector<double> z(20001);
  for (double& v : z) v = TrlapSample(spec, rng);
  std::nth_element(z.begin(), z.begin() + z.size() / 2, z.end());
  EXPECT_NEAR(z[z.size() / 2], -5, 0.01);
}

TEST(TrlapOutputPmfTest, Examples) {
  const NoiseSpec spec{2, 1};
  EXPECT_EQ(TrlapOutputPmf(0, spec), std::vector<double>{1.0});
  auto p1 = TrlapOutputPmf(1, spec);
  ASSERT_EQ(p1.size(), 2u);
  EXPECT_NEAR(p1[0], 0.811229665600927282, 1e-14);
  EXPECT_NEAR(p1[1], 0.188770334399072718, 1e-14);
  auto p3 = TrlapOutputPmf(3, spec);
  const std::vector<double> want3 = {0.0, 0.188770334399072727,
                                     0.622459331201854565,
                                     0.188770334399072718};
  for (int j = 0; j < 4; ++j) EXPECT_NEAR(p3[j], want3[j], 1e-14);
  auto p5 = TrlapOutputPmf(5, NoiseSpec{3.7, 0.5});
  const std::vector<double> want5 = {0.0,
                                     0.03455322671980076,
                                     0.23554860200124644,
                                     0.36291502112448215,
                                     0.27366843163182386,
                                     0.09331471852264679};
  double total = 0;
  for (int j = 0; j < 6; ++j) {
    EXPECT_NEAR(p5[j], want5[j], 1e-14);
    total += p5[j];
  }
  EXPECT_NEAR(total, 1, 1e-12);
}

TEST(RoundHalfAwayTest, Ties) {
  EXPECT_EQ(RoundHalfAway(2.5), 3);
  EXPECT_EQ(RoundHalfAway(-2.5), -3);
  EXPECT_EQ(RoundHalfAway(0.49), 0);
}

TEST(EmptinessProbsTest, BoundariesAndSymmetry) {
  for (int q : {2, 3, 4, 9, 40}) {
    const double eps = 0.5;
    auto p = EmptinessProbs(q, eps, ParetoDelta(q, eps));
    ASSERT_TRUE(p.ok());
    EXPECT_DOUBLE_EQ((*p)[0], 0);
    EXPECT_NEAR((*p)[q], 1, 1e-12);
    if (q % 2 == 0) EXPECT_NEAR((*p)[q / 2], 0.5, 1e-12);
  }
}

TEST(EmptinessProbsTest, ConstraintFamilyAtQ4) {
  const int q = 4;
  const double delta = 0.1;
  // epsilon solving delta (e^{2 eps} - 1) / (e^eps - 1) = 1/2, i.e.
  // e^eps = 1/(2 delta) - 1.
  const double eps = std::log(1 / (2 * delta) - 1);
  auto p = EmptinessProbs(q, eps, delta);
  ASSERT_TRUE(p.ok());
  const double e = std::exp(eps);
  for (int k = 0; k < q; ++k) {
    const double a = (*p)[k], b = (*p)[k + 1];
    EXPECT_LE(a, b * e + delta + 1e-12);
    EXPECT_LE(b, a * e + delta + 1e-12);
    EXPECT_LE(1 - a, (1 - b) * e + delta + 1e-12);
    EXPECT_LE(1 - b, (1 - a) * e + delta + 1e-12);
  }
}

TEST(EmptinessProbsTest, RejectsInconsistentParameters) {
  EXPECT_FALSE(EmptinessProbs(4, 1, 0.3).ok());
  EXPECT_TRUE(EmptinessProbs(4, 1, 0.3, false).ok());
  EXPECT_FALSE(EmptinessProbs(0, 1, 0.3, false).ok());
}

TEST(MechTrlapTest, PerBarBounds) {
  RngStream rng(3);
  for (int i = 0; i < 500; ++i) {
    Histogram x = RandomBars(rng, 6, 8);
    const double tau = 0.05 * rng.UniformInt(20);
    const double q = tau * x.size();
    auto y = MechTrlap(x, tau, 0.5 + rng.Uniform01(), rng);
    ASSERT_TRUE(y.ok());
    for (const auto& g : y->Support()) EXPECT_GT(x.Count(g), 0);
    for (const auto& g : x.Support()) {
      EXPECT_LE(y->Count(g), x.Count(g));
      EXPECT_GE(y->Count(g),
                std::max<int64_t>(0, x.Count(g) -
                                         static_cast<int64_t>(std::floor(q + 0.5))));
    }
    EXPECT_LE(x.size() - y->size(), TrlapMaxDrop(x, tau));
  }
}

TEST(MechTrlapTest, EmptyingFrequencyMatchesCdf) {
  // |x| = 4 and tau = 1/2 give q = 2; the bar at 0 has height 1.
  Histogram x = H1({{0, 1}, {5, 3}}, 10);
  RngStream rng(4);
  constexpr int kN = 100000;
  int empty = 0;
  for (int i = 0; i < kN; ++i) {
    auto y = MechTrlap(x, 0.5, 1, rng);
    if (y->Count(GroundPoint(0)) == 0) ++empty;
  }
  const double p = 0.811229665600927282;
  EXPECT_NEAR(static_cast<double>(empty) / kN, p,
              4 * std::sqrt(p * (1 - p) / kN));
}

TEST(MechTrlapTest, ZeroTauIsIdentityAndErrors) {
  RngStream rng(5);
  Histogram x = H1({{1, 4}, {2, 1}});
  EXPECT_EQ(*MechTrlap(x, 0, 1, rng), x);
  EXPECT_FALSE(MechTrlap(Histogram(MetricSpace::Line(5)), 0.1, 1, rng).ok());
  EXPECT_FALSE(MechTrlap(x, 1, 1, rng).ok());
  EXPECT_FALSE(MechTrlap(x, -0.1, 1, rng).ok());
}

TEST(MechTrlapTest, DeterministicPerSeed) {
  Histogram x = H1({{1, 40}, {2, 10}, {7, 3}});
  RngStream a(99), b(99);
  EXPECT_EQ(*MechTrlap(x, 0.2, 1, a), *MechTrlap(x, 0.2, 1, b));
}

TEST(BucketSpecTest, ExamplesAndCenters) {
  auto s = BucketSpec::Create(10, 100, 1);
  ASSERT_TRUE(s.ok());
  EXPECT_EQ(s->per_axis(), 10);
  EXPECT_DOUBLE_EQ(s->t(), 10);
  EXPECT_EQ(*s->CenterOf(GroundPoint(3)), GroundPoint(5));
  EXPECT_EQ(*s->CenterOf(GroundPoint(97)), GroundPoint(95));
  EXPECT_FALSE(s->CenterOf(GroundPoint(100)).ok());
  auto s3 = BucketSpec::Create(2 * 5 / std::sqrt(3.0), 100, 3);
  ASSERT_TRUE(s3.ok());
  EXPECT_EQ(s3->per_axis(), 18);
  EXPECT_EQ(s3->Centers().size(), 18u * 18u * 18u);
  // B/w within rounding of an integer keeps that integer.
  EXPECT_EQ(BucketSpec::Create(0.1, 0.3, 1)->per_axis(), 3);
  EXPECT_FALSE(BucketSpec::Create(0, 100, 1).ok());
}

TEST(MechBucketTest, Example) {
  auto s = BucketSpec::Create(10, 100, 1);
  auto y = MechBucket(H1({{3, 2}, {97, 1}}), *s);
  ASSERT_TRUE(y.ok());
  EXPECT_EQ(*y, H1({{5, 2}, {95, 1}}));
  EXPECT_EQ(*MechBucket(*y, *s), *y);
}

TEST(MechBucketTest, DhistBoundInHigherDimensions) {
  RngStream rng(6);
  for (int d = 1; d <= 3; ++d) {
    auto s = BucketSpec::Create(2 * 3 / std::sqrt(d), 20, d);
    for (int i = 0; i < 50; ++i) {
      std::vector<std::pair<GroundPoint, int64_t>> pts;
      for (int k = 0; k < 5; ++k) {
        std::vector<double> c(d);
        for (double& v : c) v = 20 * rng.Uniform01();
        pts.emplace_back(GroundPoint(c), 1 + rng.UniformInt(3));
      }
      Histogram x = *Histogram::Create(MetricSpace(d, 20), pts);
      auto y = MechBucket(x, *s);
      ASSERT_TRUE(y.ok());
      EXPECT_LE(*Dhist(x, *y), s->w() / 2 * std::sqrt(d) + 1e-9);
    }
  }
}

TEST(MechParamsTest, Example) {
  auto p = MechParams::Create(0.05, 5, 1, 100);
  ASSERT_TRUE(p.ok());
  EXPECT_DOUBLE_EQ(p->w(), 10);
  EXPECT_DOUBLE_EQ(p->t(), 10);
  EXPECT_DOUBLE_EQ(p->tau(), 0.005);
  EXPECT_FALSE(MechParams::Create(1, 5, 1, 100).ok());
  EXPECT_FALSE(MechParams::Create(0.05, 0, 1, 100).ok());
  EXPECT_FALSE(MechParams::Create(0.05, 5, 0, 100).ok());
}

TEST(MechParamsTest, HigherDimensionalTau) {
  // tau = alpha (2 beta / (B sqrt(d)))^d when B/w is an integer.
  auto p = MechParams::Create(0.2, 5 * std::sqrt(2.0), 1, 100, 2);
  ASSERT_TRUE(p.ok());
  EXPECT_NEAR(p->tau(), 0.2 * std::pow(2 * 5 * std::sqrt(2.0) /
                                           (100 * std::sqrt(2.0)),
                                       2),
              1e-15);
}

TEST(MechBucketHistTest, SupportAndDropBound) {
  RngStream rng(7);
  auto p = MechParams::Create(0.05, 5, 1, 100);
  for (int i = 0; i < 300; ++i) {
    Histogram x = RandomBars(rng, 100, 30);
    auto bucketed = MechBucket(x, p->buckets());
    auto y = MechBucketHist(x, *p, rng);
    ASSERT_TRUE(y.ok());
    for (const auto& g : y->Support()) {
      EXPECT_LE(y->Count(g), bucketed->Count(g));
    }
    EXPECT_LE(*Drop(*bucketed, *y),
              p->tau() * p->t() + p->t() / (2.0 * x.size()) + 1e-12);
  }
}

TEST(MechHbsTest, ZeroAlphaReleasesBucketedStatistic) {
  RngStream rng(8);
  auto p = MechParams::Create(0, 5, 1, 100);
  Histogram x = H1({{12, 3}, {58, 1}, {73, 2}});
  auto v = MechHbs(StatisticKind::Max(), x, *p, rng);
  ASSERT_TRUE(v.ok());
  ASSERT_TRUE(v->has_value());
  EXPECT_DOUBLE_EQ(std::get<double>(**v), 75);
  EXPECT_LE(std::abs(std::get<double>(**v) - 73), 5);
}

TEST(MechHbsTest, SingletonWithoutDrops) {
  RngStream rng(9);
  auto p = MechParams::Create(0.04, 5, 1, 100);
  // q = tau |x| = 0.004: floor(q + 1/2) = 0, so nothing can be dropped.
  Histogram x = H1({{5, 1}});
  for (int i = 0; i < 20; ++i) {
    auto v = MechHbs(StatisticKind::Max(), x, *p, rng);
    ASSERT_TRUE(v.ok() && v->has_value());
    EXPECT_DOUBLE_EQ(std::get<double>(**v), 5);
  }
}

TEST(StatisticOfReleaseTest, UndefinedReleases) {
  EXPECT_FALSE(StatisticOfRelease(StatisticKind::Max(),
                                  Histogram(MetricSpace::Line(10)))
                   ->has_value());
  EXPECT_FALSE(
      StatisticOfRelease(StatisticKind::MaxK(5), H1({{1, 2}}))->has_value());
  EXPECT_DOUBLE_EQ(std::get<double>(**StatisticOfRelease(
                       StatisticKind::MaxK(2), H1({{1, 2}, {4, 1}}))),
                   1);
}

}  // namespace
}  // namespace flexacc
