#include "edgewatch/sketch.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <unordered_map>

#include "edgewatch/error.hpp"

namespace edgewatch {
namespace {

TEST(LayoutForGuarantee, SizesFollowEpsAndNu) {
  const auto a = layout_for_guarantee(0.01, 0.003, 1);
  EXPECT_EQ(a.rows(), 6u);  // ceil(ln 200) = ceil(5.298)
  EXPECT_EQ(a.buckets(), 907u);  // ceil(906.09)
  EXPECT_EQ(a.seeds().size(), 6u);

  const auto b = layout_for_guarantee(0.5, std::numbers::e, 1);
  EXPECT_EQ(b.rows(), 2u);
  EXPECT_EQ(b.buckets(), 1u);

  EXPECT_EQ(layout_for_guarantee(0.2, std::numbers::e / 1024, 1).buckets(), 1024u);
}

TEST(LayoutForGuarantee, RejectsOutOfRange) {
  EXPECT_THROW(layout_for_guarantee(0.0, 0.01, 1), ParameterError);
  EXPECT_THROW(layout_for_guarantee(1.0, 0.01, 1), ParameterError);
  EXPECT_THROW(layout_for_guarantee(0.1, 0.0, 1), ParameterError);
  EXPECT_THROW(layout_for_guarantee(0.1, -1.0, 1), ParameterError);
  EXPECT_THROW(layout_for_guarantee(std::nan(""), 0.1, 1), ParameterError);
}

TEST(SketchLayout, RejectsBadGeometry) {
  EXPECT_THROW(SketchLayout(0, 8, 1), ParameterError);
  EXPECT_THROW(SketchLayout(2, 0, 1), ParameterError);
  EXPECT_THROW(SketchLayout(2, 8, std::vector<std::uint64_t>{1}), ParameterError);
}

TEST(SketchLayout, SharedLayoutGivesIdenticalCoordinates) {
  const SketchLayout layout(4, 1000, 99);
  Cms a(layout), s(layout);
  ScoreCms c(layout);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const auto key = rng();
    const auto coords = a.layout().coordinates(key);
    EXPECT_EQ(coords, s.layout().coordinates(key));
    EXPECT_EQ(coords, c.layout().coordinates(key));
    for (std::size_t r = 0; r < coords.size(); ++r) {
      EXPECT_GE(coords[r], r * 1000);
      EXPECT_LT(coords[r], (r + 1) * 1000);
    }
  }
}

TEST(SketchLayout, DeterministicInSeed) {
  const SketchLayout a(3, 4096, 7), b(3, 4096, 7), c(3, 4096, 8);
  EXPECT_TRUE(a == b);
  EXPECT_FALSE(a == c);
  int differing = 0;
  for (std::uint64_t k = 0; k < 100; ++k) {
    EXPECT_EQ(a.coordinates(k), b.coordinates(k));
    differing += a.coordinates(k) != c.coordinates(k);
  }
  EXPECT_GT(differing, 90);
}

TEST(Cms, IncrementThenQuery) {
  Cms cms(SketchLayout(2, 1024, 1));
  EXPECT_EQ(cms.query(42), 0.0);
  cms.increment(42);
  EXPECT_EQ(cms.query(42), 1.0);
  for (int i = 0; i < 9; ++i) cms.increment(42);
  EXPECT_EQ(cms.query(42), 10.0);
}

TEST(Cms, SingleBucketAccumulatesEverything) {
  Cms cms(SketchLayout(2, 1, 1));
  cms.increment(1);
  cms.increment(2);
  EXPECT_EQ(cms.query(1), 2.0);
  EXPECT_EQ(cms.query(12345), 2.0);
}

TEST(Cms, DistinctKeysInWideSketchAreExact) {
  Cms cms(SketchLayout(2, std::size_t{1} << 20, 3));
  std::mt19937_64 rng(11);
  std::unordered_map<std::uint64_t, double> exact;
  for (int i = 0; i < 1000; ++i) {
    const auto k = rng();
    cms.increment(k);
    exact[k] += 1;
  }
  for (const auto& [k, v] : exact) EXPECT_EQ(cms.query(k), v) << k;
}

TEST(Cms, NeverUnderestimates) {
  // Narrow sketches force collisions; the row minimum must still cover the
  // exact count of every key.
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    std::mt19937_64 rng(trial);
    Cms cms(SketchLayout(1 + trial % 4, 1 + trial * 3, trial));
    std::unordered_map<std::uint64_t, double> exact;
    std::uniform_int_distribution<std::uint64_t> key(0, 200);
    std::uniform_real_distribution<double> weight(0.1, 3.0);
    for (int i = 0; i < 2000; ++i) {
      const auto k = key(rng);
      const double w = weight(rng);
      cms.increment(k, w);
      exact[k] += w;
    }
    for (const auto& [k, v] : exact) EXPECT_GE(cms.query(k), v * (1 - 1e-12));
  }
}

TEST(Cms, RejectsNonPositiveWeight) {
  Cms cms(SketchLayout(2, 16, 1));
  EXPECT_THROW(cms.increment(1, 0.0), ParameterError);
  EXPECT_THROW(cms.increment(1, -1.0), ParameterError);
  EXPECT_THROW(cms.increment(1, INFINITY), ParameterError);
}

TEST(Cms, ScaleMultipliesEveryCounter) {
  Cms cms(SketchLayout(2, 4, 1));
  for (double& v : cms.table()) v = 2.0;
  cms.scale(0.5);
  for (double v : cms.table()) EXPECT_EQ(v, 1.0);
  for (double& v : cms.table()) v = 2.0;
  cms.scale(0.5);
  cms.scale(0.5);
  for (double v : cms.table()) EXPECT_EQ(v, 0.5);
}

TEST(Cms, ScaleIsLinearInQueries) {
  std::mt19937_64 rng(21);
  Cms cms(SketchLayout(3, 64, 2));
  for (int i = 0; i < 500; ++i) cms.increment(rng() % 300, 1.0 + (rng() % 7));
  std::vector<double> before;
  for (std::uint64_t k = 0; k < 300; ++k) before.push_back(cms.query(k));
  for (const double f : {0.5, 0.3, 0.999, 1e-3}) {
    cms.scale(f);
    for (std::uint64_t k = 0; k < 300; ++k) {
      const double expect = before[k] * f;
      EXPECT_NEAR(cms.query(k), expect, 1e-12 * std::max(1.0, expect));
      before[k] = cms.query(k);
    }
  }
}

TEST(Cms, ScaleRejectsFactorsOutsideOpenUnitInterval) {
  Cms cms(SketchLayout(1, 4, 1));
  EXPECT_THROW(cms.scale(0.0), ParameterError);
  EXPECT_THROW(cms.scale(1.0), ParameterError);
  EXPECT_THROW(cms.scale(1.5), ParameterError);
  EXPECT_THROW(cms.scale(-0.5), ParameterError);
}

TEST(Cms, ClearZeroesAndIsIdempotent) {
  Cms cms(SketchLayout(2, 32, 1));
  for (std::uint64_t k = 0; k < 50; ++k) cms.increment(k, 2.5);
  cms.clear();
  for (std::uint64_t k = 0; k < 50; ++k) EXPECT_EQ(cms.query(k), 0.0);
  cms.clear();
  for (double v : cms.table()) EXPECT_EQ(v, 0.0);
  cms.increment(7);
  EXPECT_EQ(cms.query(7), 1.0);
}

TEST(ScoreCms, WriteOverridesInsteadOfAccumulating) {
  ScoreCms c(SketchLayout(2, 1024, 1));
  EXPECT_EQ(c.read(5), 0.0);
  c.write(5, 5.0);
  c.write(5, 2.0);
  EXPECT_EQ(c.read(5), 2.0);
}

TEST(ScoreCms, CollidingWritesNeverExceedTheFirstValue) {
  ScoreCms c(SketchLayout(2, 1, 1));
  c.write(1, 9.0);
  c.write(2, 1.0);
  EXPECT_EQ(c.read(1), 1.0);
  EXPECT_LE(c.read(1), 9.0);
}

TEST(ScoreCms, ReadIsMinimumOverRows) {
  const SketchLayout layout(3, 16, 4);
  ScoreCms c(layout);
  const auto coords = layout.coordinates(77);
  c.write(77, 10.0);
  c.table()[coords[1]] = 3.0;
  EXPECT_EQ(c.read(77), 3.0);
  EXPECT_THROW(c.write(77, -1.0), ParameterError);
}

TEST(EdgeKey, IsDirected) {
  EXPECT_NE(edge_key(1, 2), edge_key(2, 1));
  EXPECT_EQ(edge_key(1, 2), (std::uint64_t{1} << 32) | 2u);
  EXPECT_EQ(node_key(9), 9u);
}

}  // namespace
}  // namespace edgewatch
