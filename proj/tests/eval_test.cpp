#include "edgewatch/eval.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "edgewatch/error.hpp"
#include "edgewatch/synth.hpp"

namespace edgewatch {
namespace {

// Oracle: fraction of positive-negative pairs ordered correctly, ties 1/2.
double pairwise_auc(const std::vector<double>& s,
                    const std::vector<std::uint8_t>& y) {
  double wins = 0, pairs = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!y[i]) continue;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (y[j]) continue;
      pairs += 1;
      wins += s[i] > s[j] ? 1.0 : s[i] == s[j] ? 0.5 : 0.0;
    }
  }
  return wins / pairs;
}

TEST(RocAuc, Examples) {
  EXPECT_EQ(roc_auc(std::vector<double>{0.9, 0.1},
                    std::vector<std::uint8_t>{1, 0}),
            1.0);
  EXPECT_EQ(roc_auc(std::vector<double>{3, 3, 3, 3},
                    std::vector<std::uint8_t>{1, 0, 1, 0}),
            0.5);
  EXPECT_EQ(roc_auc(std::vector<double>{0.8, 0.6, 0.4, 0.2},
                    std::vector<std::uint8_t>{1, 0, 1, 0}),
            0.75);
}

TEST(RocAuc, Errors) {
  EXPECT_THROW(roc_auc(std::vector<double>{1, 2},
                       std::vector<std::uint8_t>{1}),
               EvaluationError);
  EXPECT_THROW(roc_auc(std::vector<double>{1, 2},
                       std::vector<std::uint8_t>{1, 1}),
               EvaluationError);
  EXPECT_THROW(roc_auc(std::vector<double>{}, std::vector<std::uint8_t>{}),
               EvaluationError);
}

TEST(RocAuc, MatchesPairwiseOracleWithTies) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng() % 300;
    std::vector<double> s(n);
    std::vector<std::uint8_t> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = static_cast<double>(rng() % (1 + trial));  // heavy ties early
      y[i] = rng() % 3 == 0;
    }
    y[0] = 1;
    y[1] = 0;
    EXPECT_NEAR(roc_auc(s, y), pairwise_auc(s, y), 1e-12);
  }
}

TEST(RocAuc, InvariantUnderIncreasingTransformAndComplementaryUnderNegation) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  std::vector<double> s(1000), t(1000), neg(1000);
  std::vector<std::uint8_t> y(1000);
  for (std::size_t i = 0; i < s.size(); ++i) {
    y[i] = rng() % 4 == 0;
    s[i] = g(rng) + y[i];
    t[i] = std::exp(3 * s[i]) + 7;
    neg[i] = -s[i];
  }
  EXPECT_NEAR(roc_auc(s, y), roc_auc(t, y), 1e-12);
  EXPECT_NEAR(roc_auc(s, y) + roc_auc(neg, y), 1.0, 1e-12);
}

TEST(Median, OddAndEven) {
  EXPECT_EQ(median({3, 1, 2}), 2.0);
  EXPECT_EQ(median({4, 1, 3, 2}), 2.5);
  EXPECT_THROW(median({}), EvaluationError);
}

LabeledStream small_labelled_stream() {
  SynthSpec spec;
  spec.nodes = 40;
  spec.ticks = 30;
  spec.pairs = 60;
  spec.background_rate = 2;
  spec.bursts = {{1, 2, 20, 1, 10}, {3, 4, 25, 1, 10}};
  spec.seed = 5;
  return generate(spec);
}

TEST(RunTrials, SingleTrialReportsItsOwnAuc) {
  const auto s = small_labelled_stream();
  DetectorConfig cfg;
  const auto r = run_trials(s, cfg, 1, 3);
  ASSERT_EQ(r.per_trial_auc.size(), 1u);
  EXPECT_EQ(r.auc, r.per_trial_auc[0]);
  EXPECT_EQ(r.trials, 1u);
  const auto scored = score_stream(s.edges, cfg, 3);
  EXPECT_EQ(r.auc, roc_auc(scored.scores, *s.labels));
}

TEST(RunTrials, MedianOfSeededTrialsIsReproducible) {
  const auto s = small_labelled_stream();
  DetectorConfig cfg;
  cfg.variant = Variant::midas_f;
  cfg.buckets = 16;  // force collisions so seeds matter
  const auto a = run_trials(s, cfg, 7, 11);
  const auto b = run_trials(s, cfg, 7, 11, 3);
  EXPECT_EQ(a.per_trial_auc, b.per_trial_auc);
  EXPECT_EQ(a.auc, median(a.per_trial_auc));
  for (std::size_t i = 0; i < 7; ++i) {
    const auto one = score_stream(s.edges, cfg, 11 + i);
    EXPECT_EQ(a.per_trial_auc[i], roc_auc(one.scores, *s.labels));
  }
  EXPECT_THROW(run_trials(s, cfg, 0, 1), ParameterError);
  LabeledStream unlabeled = s;
  unlabeled.labels.reset();
  EXPECT_THROW(run_trials(unlabeled, cfg, 1, 1), EvaluationError);
}

TEST(Sweep, OneReportPerValueOthersFixed) {
  const auto s = small_labelled_stream();
  DetectorConfig cfg;
  cfg.variant = Variant::midas_r;
  const std::vector<double> alphas{0.2, 0.5, 0.8};
  const auto rows = sweep(s, cfg, SweepParameter::alpha, alphas, 1, 4);
  ASSERT_EQ(rows.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    auto c = cfg;
    c.alpha = alphas[i];
    EXPECT_EQ(rows[i].value, alphas[i]);
    EXPECT_EQ(rows[i].report.auc, run_trials(s, c, 1, 4).auc);
  }
  EXPECT_THROW(sweep(s, cfg, SweepParameter::alpha, std::vector<double>{}, 1, 1),
               ParameterError);
  EXPECT_THROW(sweep(s, cfg, SweepParameter::buckets, std::vector<double>{2.5},
                     1, 1),
               ParameterError);
  EXPECT_THROW(sweep(s, cfg, SweepParameter::alpha, std::vector<double>{1.0}, 1,
                     1),
               ParameterError);
}

TEST(AggregateByTick, PerTickMaximumThenNormalize) {
  const std::vector<double> scores{1, 5, 2};
  const std::vector<std::uint64_t> ticks{1, 1, 2};
  auto series = aggregate_by_tick(scores, ticks);
  EXPECT_EQ(series, (std::vector<TickValue>{{1, 5}, {2, 2}}));
  normalize_min_max(series);
  EXPECT_EQ(series, (std::vector<TickValue>{{1, 1}, {2, 0}}));

  auto single = aggregate_by_tick(std::vector<double>{3, 3},
                                  std::vector<std::uint64_t>{4, 4});
  normalize_min_max(single);
  EXPECT_EQ(single, (std::vector<TickValue>{{4, 1}}));

  EXPECT_THROW(aggregate_by_tick(scores, std::vector<std::uint64_t>{1, 2}),
               ParameterError);
}

TEST(AggregateByTick, NormalizationKeepsArgmax) {
  std::mt19937_64 rng(9);
  std::vector<double> scores(2000);
  std::vector<std::uint64_t> ticks(2000);
  for (std::size_t i = 0; i < scores.size(); ++i) {
    scores[i] = double(rng() % 100000) / 7.0;
    ticks[i] = 1 + i / 37;
  }
  auto series = aggregate_by_tick(scores, ticks);
  const auto by_value = [](const TickValue& a, const TickValue& b) {
    return a.value < b.value;
  };
  const auto before =
      std::max_element(series.begin(), series.end(), by_value)->tick;
  normalize_min_max(series);
  EXPECT_EQ(std::max_element(series.begin(), series.end(), by_value)->tick,
            before);
  for (const auto& p : series) {
    EXPECT_GE(p.value, 0.0);
    EXPECT_LE(p.value, 1.0);
  }
}

TEST(BenchScaling, OnePointPerPrefix) {
  const auto s = stationary_stream(50, 100, 1.0, 3, 200);
  DetectorConfig cfg;
  const std::vector<std::size_t> prefixes{1000, 2000, 4000};
  const auto pts = bench_scaling(s.edges, cfg, 1, prefixes);
  ASSERT_EQ(pts.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(pts[i].edges, prefixes[i]);
    EXPECT_GE(pts[i].seconds, 0.0);
  }
  EXPECT_THROW(bench_scaling(s.edges, cfg, 1,
                             std::vector<std::size_t>{s.edges.size() + 1}),
               ParameterError);
  EXPECT_THROW(bench_scaling(s.edges, cfg, 1, std::vector<std::size_t>{20, 10}),
               ParameterError);
}

TEST(FitLine, RecoversExactLine) {
  const std::vector<double> x{1, 2, 3, 4}, y{3, 5, 7, 9};
  const auto fit = fit_line(x, y);
  EXPECT_NEAR(fit.slope, 2.0, 1e-12);
  EXPECT_NEAR(fit.intercept, 1.0, 1e-12);
  EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
  EXPECT_NEAR(fit.slope_stderr, 0.0, 1e-9);
  EXPECT_THROW(fit_line(std::vector<double>{1, 1}, std::vector<double>{1, 2}),
               ParameterError);
}

}  // namespace
}  // namespace edgewatch
