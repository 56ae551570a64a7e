/* Copyright (C) 2026 The gqf-dmt Authors.
 * This program is Licensed under the Apache License, Version 2.0
 * (the "License"); you may not use this file except in compliance
 * with the License. You may obtain a copy of the License at
 *   http://www.apache.org/licenses/LICENSE-2.0
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License. See accompanying LICENSE file.
 */
#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "gqf/outage.hpp"

namespace {

using gqf::ChannelRealization;
using gqf::Event;
using gqf::SchemeConfig;

TEST(OutageIndicator, ZeroSourceRatesNeverOutage) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n;
  const auto cfg = SchemeConfig::with_rates(10.0, 0.5, 0.0, 0.0, 0.5);
  for (int k = 0; k < 200; ++k) {
    const ChannelRealization h{{n(rng), n(rng)}, {n(rng), n(rng)}, {n(rng), n(rng)}, {n(rng), n(rng)},
                               {n(rng), n(rng)}};
    const auto f = gqf::outage_indicator(h, cfg);
    EXPECT_FALSE(f[Event::r1]);
    EXPECT_FALSE(f[Event::r2]);
    EXPECT_FALSE(f[Event::r12]);
  }
}

TEST(OutageIndicator, DeadChannelOutagesEverything) {
  const auto f = gqf::outage_indicator(ChannelRealization{}, SchemeConfig::with_rates(10.0, 0.5, 0.1, 0.1, 0.1));
  for (bool b : f.flag) EXPECT_TRUE(b);
  EXPECT_TRUE(f.o_union());
}

// Straight-line evaluation with h1D = h2D = 1, P = 10 and no relay links: the
// relay term is log2(1 + 0) = 0 whatever sigma_Q^2 is.
TEST(OutageIndicator, DirectLinksOnlyAgainstHandEvaluation) {
  const ChannelRealization h{{1, 0}, {1, 0}, {0, 0}, {0, 0}, {0, 0}};
  const auto cfg = SchemeConfig::with_rates(10.0, 0.5, 2.0, 2.0, 0.5);
  const double i1 = 0.5 * std::log2(11.0) + 0.5 * std::log2(11.0);   // 3.459
  const double i1u = 0.5 * std::log2(11.0) + 0.5 * std::log2(11.0);  // relay carries nothing
  const double i12 = 0.5 * std::log2(21.0) + 0.5 * std::log2(21.0);  // 4.392
  const auto f = gqf::outage_indicator(h, cfg);
  EXPECT_EQ(f[Event::r1], 2.0 > i1);
  EXPECT_EQ(f[Event::r2], 2.0 > i1);
  EXPECT_EQ(f[Event::r1u], 2.5 > i1u);
  EXPECT_EQ(f[Event::r2u], 2.5 > i1u);
  EXPECT_EQ(f[Event::r12], 4.0 > i12);
  EXPECT_EQ(f[Event::r12u], 4.5 > i12);
  EXPECT_FALSE(f[Event::r1]);
  EXPECT_TRUE(f[Event::r12u]);
}

TEST(OutageIndicator, StrictInequalityAtTheBoundary) {
  const ChannelRealization h{{1, 0}, {0, 0}, {0, 0}, {0, 0}, {0, 0}};
  const auto cfg = SchemeConfig::with_rates(0.0, 0.5, 1.0, 0.0, 0.5);  // i_r1 == 1 exactly
  EXPECT_EQ(gqf::instantaneous_rates(h, cfg).i_r1, 1.0);
  EXPECT_FALSE(gqf::outage_indicator(h, cfg)[Event::r1]);
}

TEST(OutageIndicator, RaisingARateNeverClearsAFlag) {
  const gqf::FadingParams p;
  for (int i = 0; i < 3000; ++i) {
    const auto h = gqf::sample_channel(0, i, p, 8);
    const auto lo = gqf::outage_indicator(h, SchemeConfig::with_rates(12.0, 0.5, 1.0, 1.5, 1.0));
    const auto hi = gqf::outage_indicator(h, SchemeConfig::with_rates(12.0, 0.5, 1.4, 1.5, 1.0));
    for (std::size_t k = 0; k < 6; ++k) EXPECT_LE(lo.flag[k], hi.flag[k]);
  }
}

TEST(Wilson, KnownValues) {
  EXPECT_EQ(gqf::wilson_halfwidth(0, 0), 0.0);
  // p = 1/2, n = 100: z / (1 + z^2/n) * sqrt(1/400 + z^2/40000)
  const double z = 1.959963984540054;
  EXPECT_NEAR(gqf::wilson_halfwidth(50, 100), z / (1 + z * z / 100) * std::sqrt(0.0025 + z * z / 40000), 1e-15);
  EXPECT_GT(gqf::wilson_halfwidth(0, 1000), 0.0);  // nonzero even with no events, unlike Wald
}

// Naive sequential reference: loop over indices, evaluate every inequality inline.
gqf::OutageCounts reference_counts(const SchemeConfig& cfg, std::uint64_t n, std::uint64_t seed) {
  gqf::OutageCounts c;
  const auto t = cfg.targets();
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto v = gqf::instantaneous_rates(gqf::sample_channel(0, i, gqf::FadingParams{}, seed), cfg);
    const bool f[6] = {t.r1 > v.i_r1, t.r1 + t.r_u > v.i_r1u, t.r2 > v.i_r2,
                       t.r2 + t.r_u > v.i_r2u, t.r1 + t.r2 > v.i_r12, t.r1 + t.r2 + t.r_u > v.i_r12u};
    bool any = false;
    for (int k = 0; k < 6; ++k) {
      c.event[k] += f[k];
      any |= f[k];
    }
    c.any += any;
  }
  return c;
}

TEST(EstimateOutage, MatchesNaiveLoop) {
  const auto cfg = SchemeConfig::with_gains(10.0, 0.5, 0.5, 0.5);
  const auto est = gqf::estimate_outage(cfg, gqf::FadingParams{}, 100000, 1);
  EXPECT_EQ(est.counts, reference_counts(cfg, 100000, 1));
  EXPECT_EQ(est.samples, 100000u);
  EXPECT_DOUBLE_EQ(est.snr_db, 10.0);
  EXPECT_EQ(est.p_union(), static_cast<double>(est.counts.any) / 100000.0);
}

TEST(EstimateOutage, WorkerCountDoesNotChangeCounts) {
  const auto cfg = SchemeConfig::with_gains(15.0, 0.5, 0.5, 0.5);
  const auto one = gqf::estimate_outage(cfg, gqf::FadingParams{}, 30001, 42, 1);
  for (unsigned w : {2u, 3u, 7u, 16u}) EXPECT_EQ(gqf::estimate_outage(cfg, gqf::FadingParams{}, 30001, 42, w).counts, one.counts);
  // more workers than samples
  EXPECT_EQ(gqf::estimate_outage(cfg, gqf::FadingParams{}, 3, 42, 8).counts,
            gqf::estimate_outage(cfg, gqf::FadingParams{}, 3, 42, 1).counts);
}

TEST(EstimateOutage, CountsAreAdditiveOverIndexRanges) {
  const auto cfg = SchemeConfig::with_gains(10.0, 0.5, 0.5, 0.5);
  auto a = gqf::count_outages(cfg, gqf::FadingParams{}, 0, 4000, 3);
  a += gqf::count_outages(cfg, gqf::FadingParams{}, 4000, 10000, 3);
  EXPECT_EQ(a, gqf::count_outages(cfg, gqf::FadingParams{}, 0, 10000, 3));
}

TEST(EstimateOutage, UnionDominance) {
  for (double db : {5.0, 10.0, 20.0}) {
    const auto e = gqf::estimate_outage(SchemeConfig::with_gains(db, 0.5, 0.7, 0.5), gqf::FadingParams{}, 20000, 9);
    std::uint64_t sum = 0, mx = 0;
    for (auto c : e.counts.event) {
      sum += c;
      mx = std::max(mx, c);
    }
    EXPECT_LE(e.counts.any, sum);
    EXPECT_GE(e.counts.any, mx);
  }
}

TEST(EstimateOutage, SourceSymmetryWithinConfidence) {
  const auto e = gqf::estimate_outage(SchemeConfig::with_gains(10.0, 0.5, 0.5, 0.5), gqf::FadingParams{}, 200000, 5);
  for (auto [a, b] : {std::pair{Event::r1, Event::r2}, std::pair{Event::r1u, Event::r2u}}) {
    const double hw = std::hypot(e.ci_halfwidth(a), e.ci_halfwidth(b));
    EXPECT_LE(std::abs(e.p_hat(a) - e.p_hat(b)), 2.0 * hw);
  }
}

TEST(EstimateOutage, NoSourceRateTinyQuantizerRateHighSnr) {
  const auto e = gqf::estimate_outage(SchemeConfig::with_rates(60.0, 0.5, 0.0, 0.0, 1e-3), gqf::FadingParams{}, 20000, 2);
  EXPECT_EQ(e.counts.event[gqf::index_of(Event::r1)], 0u);
  EXPECT_EQ(e.counts.event[gqf::index_of(Event::r2)], 0u);
  EXPECT_EQ(e.counts.event[gqf::index_of(Event::r12)], 0u);
  EXPECT_LT(e.p_union(), 1e-3);
}

TEST(EstimateOutage, Errors) {
  const auto cfg = SchemeConfig::with_gains(10.0, 0.5, 0.5, 0.5);
  EXPECT_THROW(gqf::estimate_outage(cfg, gqf::FadingParams{}, 0, 1), std::invalid_argument);
  EXPECT_THROW(gqf::estimate_outage(SchemeConfig::with_gains(10.0, 0.5, 0.5, 0.0), gqf::FadingParams{}, 10, 1),
               std::invalid_argument);
  gqf::FadingParams bad;
  bad.variance[0] = -1;
  EXPECT_THROW(gqf::estimate_outage(cfg, bad, 10, 1), std::invalid_argument);
}

TEST(SweepOutage, SinglePointEqualsEstimate) {
  const auto cfg = SchemeConfig::with_gains(0.0, 0.5, 0.5, 0.5);
  const std::vector<double> grid{12.5};
  const auto s = gqf::sweep_outage(cfg, grid, gqf::FadingParams{}, 5000, 4);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].counts, gqf::estimate_outage(cfg.at_snr_db(12.5), gqf::FadingParams{}, 5000, 4).counts);
  EXPECT_EQ(s[0].snr_db, 12.5);
}

TEST(SweepOutage, ModeEquivalenceAtOnePoint) {
  const double db = 20.0, l = std::log2(100.0);
  const std::vector<double> grid{10.0, db, 30.0};
  const auto gains = gqf::sweep_outage(SchemeConfig::with_gains(0.0, 0.5, 0.5, 0.5), grid, gqf::FadingParams{}, 20000, 6);
  const auto absolute =
      gqf::estimate_outage(SchemeConfig::with_rates(db, 0.5, 0.25 * l, 0.25 * l, 0.5 * l), gqf::FadingParams{}, 20000, 6);
  EXPECT_EQ(gains[1].counts, absolute.counts);
}

TEST(SweepOutage, UnionOutageFallsWithSnr) {
  const std::vector<double> grid{10.0, 20.0, 30.0};
  const auto s = gqf::sweep_outage(SchemeConfig::with_gains(0.0, 0.5, 0.5, 0.5), grid, gqf::FadingParams{}, 100000, 1);
  for (std::size_t i = 1; i < s.size(); ++i) {
    EXPECT_LE(s[i].p_union(), s[i - 1].p_union() + 2.0 * (s[i].ci_halfwidth() + s[i - 1].ci_halfwidth()));
  }
}

TEST(SweepOutage, GridValidation) {
  const auto cfg = SchemeConfig::with_gains(0.0, 0.5, 0.5, 0.5);
  EXPECT_THROW(gqf::sweep_outage(cfg, std::vector<double>{}, gqf::FadingParams{}, 10, 1), std::invalid_argument);
  EXPECT_THROW(gqf::sweep_outage(cfg, std::vector<double>{10, 10}, gqf::FadingParams{}, 10, 1), std::invalid_argument);
  EXPECT_THROW(gqf::sweep_outage(cfg, std::vector<double>{20, 10}, gqf::FadingParams{}, 10, 1), std::invalid_argument);
}

gqf::OutageEstimate synthetic(double db, double p, std::uint64_t n = 1000000000000ull) {
  gqf::OutageEstimate e;
  e.snr_db = db;
  e.samples = n;
  e.counts.any = static_cast<std::uint64_t>(std::llround(p * static_cast<double>(n)));
  return e;
}

TEST(FitSlope, ExactPowerLaw) {
  std::vector<gqf::OutageEstimate> v;
  // p = SNR^-2 at 0, 5, 10, 15 dB; counts are exact powers of ten times n
  for (double db : {0.0, 10.0, 20.0}) v.push_back(synthetic(db, std::pow(10.0, -2.0 * db / 10.0)));
  EXPECT_NEAR(gqf::fit_diversity_slope(v), 2.0, 1e-9);
}

TEST(FitSlope, ConstantProbability) {
  std::vector<gqf::OutageEstimate> v{synthetic(0, 0.1), synthetic(10, 0.1), synthetic(20, 0.1)};
  EXPECT_NEAR(gqf::fit_diversity_slope(v), 0.0, 1e-12);
}

TEST(FitSlope, CountFloorExcludesPoints) {
  std::vector<gqf::OutageEstimate> v{synthetic(0, 0.1, 100000), synthetic(10, 0.01, 100000),
                                     synthetic(20, 0.00049, 100000)};
  // the third point has 49 < 50 outages and is dropped; slope from the first two is 1
  EXPECT_NEAR(gqf::fit_diversity_slope(v), 1.0, 1e-12);
  v.pop_back();
  v.pop_back();
  try {
    gqf::fit_diversity_slope(v);
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("insufficient resolution"), std::string::npos);
  }
}

}  // namespace
