#include "edgewatch/edgewatch.h"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

namespace {

struct DetectorDeleter {
  void operator()(ew_detector* d) const { ew_detector_destroy(d); }
};
struct StreamDeleter {
  void operator()(ew_stream* s) const { ew_stream_destroy(s); }
};
using DetectorPtr = std::unique_ptr<ew_detector, DetectorDeleter>;
using StreamPtr = std::unique_ptr<ew_stream, StreamDeleter>;

DetectorPtr make_detector(const ew_config& cfg, std::uint64_t seed = 0) {
  ew_detector* d = nullptr;
  EXPECT_EQ(ew_detector_create(&cfg, seed, &d), EW_OK) << ew_last_error();
  return DetectorPtr(d);
}

TEST(CApi, DefaultsAndVersion) {
  ew_config cfg;
  ew_config_default(&cfg);
  EXPECT_EQ(cfg.variant, EW_VARIANT_MIDAS);
  EXPECT_EQ(cfg.rows, 2u);
  EXPECT_EQ(cfg.buckets, 1024u);
  EXPECT_EQ(cfg.alpha, 0.5);
  EXPECT_EQ(cfg.theta, 1000.0);
  EXPECT_EQ(cfg.use_guarantee, 0);
  EXPECT_STRNE(ew_version(), "");
  EXPECT_STREQ(ew_status_name(EW_ERR_ORDERING), "ordering error");
}

TEST(CApi, ProcessesTheWorkedExample) {
  ew_config cfg;
  ew_config_default(&cfg);
  auto d = make_detector(cfg);
  const ew_edge e1{0, 1, 1}, e2{0, 1, 2};
  double score = -1;
  ASSERT_EQ(ew_detector_process(d.get(), &e1, &score), EW_OK);
  EXPECT_EQ(score, 0.0);
  for (int i = 0; i < 9; ++i) ew_detector_process(d.get(), &e2, &score);
  // a = 9, s = 10, t = 2
  EXPECT_NEAR(score, 16.0 * 4.0 / 10.0, 1e-12);
  EXPECT_EQ(ew_detector_tick(d.get()), 2u);
}

TEST(CApi, OrderingErrorsCarryIndexAndMessage) {
  ew_config cfg;
  ew_config_default(&cfg);
  auto d = make_detector(cfg);
  const std::vector<ew_edge> edges{{0, 1, 3}, {0, 1, 4}, {0, 1, 2}};
  std::vector<double> scores(edges.size());
  std::size_t failed = 99;
  EXPECT_EQ(ew_detector_process_batch(d.get(), edges.data(), edges.size(),
                                      scores.data(), &failed),
            EW_ERR_ORDERING);
  EXPECT_EQ(failed, 2u);
  EXPECT_NE(std::string(ew_last_error()).find("tick"), std::string::npos);
}

TEST(CApi, InvalidArgumentsAreReportedNotThrown) {
  ew_config cfg;
  ew_config_default(&cfg);
  cfg.buckets = 0;
  ew_detector* d = nullptr;
  EXPECT_EQ(ew_detector_create(&cfg, 0, &d), EW_ERR_PARAMETER);
  EXPECT_EQ(d, nullptr);
  EXPECT_EQ(ew_detector_create(nullptr, 0, &d), EW_ERR_PARAMETER);

  ew_config_default(&cfg);
  cfg.variant = EW_VARIANT_MIDAS_R;
  auto r = make_detector(cfg);
  const ew_edge e{0, 1, 1};
  double s, x;
  int flag;
  EXPECT_EQ(ew_detector_decide(r.get(), &e, &s, &x, &flag), EW_ERR_UNSUPPORTED);

  double q;
  EXPECT_EQ(ew_chi2_quantile_1dof(1.0, &q), EW_ERR_PARAMETER);
  EXPECT_EQ(ew_roc_auc(nullptr, nullptr, 0, &q), EW_ERR_EVALUATION);
}

TEST(CApi, DecideUsesGuaranteeThreshold) {
  ew_config cfg;
  ew_config_default(&cfg);
  cfg.use_guarantee = 1;
  ASSERT_EQ(ew_layout_for_guarantee(cfg.eps, cfg.nu, &cfg.rows, &cfg.buckets),
            EW_OK);
  EXPECT_EQ(cfg.rows, 6u);
  EXPECT_EQ(cfg.buckets, 907u);
  auto d = make_detector(cfg);
  double s, x;
  int flag = -1;
  const ew_edge e{0, 1, 1};
  ASSERT_EQ(ew_detector_decide(d.get(), &e, &s, &x, &flag), EW_OK);
  EXPECT_EQ(flag, 0);
  double thr;
  ew_chi2_quantile_1dof(1 - cfg.eps / 2, &thr);
  EXPECT_NEAR(thr, 7.879439, 1e-6);
}

TEST(CApi, SyntheticStreamRoundTripAndEvaluation) {
  const ew_burst burst{1, 2, 30, 1, 10};
  const ew_synth_spec spec{60, 40, 1.0, 100, &burst, 1, 7};
  ew_stream* raw = nullptr;
  ASSERT_EQ(ew_synth_generate(&spec, &raw), EW_OK) << ew_last_error();
  StreamPtr s(raw);
  ASSERT_TRUE(ew_stream_has_labels(s.get()));
  const auto n = ew_stream_edge_count(s.get());
  ASSERT_GT(n, 0u);

  const auto dir = std::filesystem::temp_directory_path() / "edgewatch_capi";
  std::filesystem::create_directories(dir);
  const auto ep = (dir / "e.csv").string(), lp = (dir / "l.csv").string();
  ASSERT_EQ(ew_stream_save(s.get(), ep.c_str(), lp.c_str()), EW_OK);
  ew_stream* back = nullptr;
  ASSERT_EQ(ew_stream_load(ep.c_str(), EW_DELIM_COMMA, 1, &back), EW_OK);
  StreamPtr loaded(back);
  ASSERT_EQ(ew_stream_load_labels(loaded.get(), lp.c_str()), EW_OK);
  ASSERT_EQ(ew_stream_edge_count(loaded.get()), n);
  for (std::size_t i = 0; i < n; ++i) {
    EXPECT_EQ(ew_stream_edges(loaded.get())[i].tick,
              ew_stream_edges(s.get())[i].tick);
    EXPECT_EQ(ew_stream_labels(loaded.get())[i], ew_stream_labels(s.get())[i]);
  }

  ew_config cfg;
  ew_config_default(&cfg);
  std::vector<double> scores(n);
  ASSERT_EQ(ew_score_stream(s.get(), &cfg, 3, scores.data(), nullptr), EW_OK);
  double auc = 0;
  ASSERT_EQ(ew_roc_auc(scores.data(), ew_stream_labels(s.get()), n, &auc),
            EW_OK);
  ew_report rep{};
  double per[3];
  ASSERT_EQ(ew_run_trials(s.get(), &cfg, 3, 3, 1, &rep, per), EW_OK);
  EXPECT_EQ(rep.trials, 3u);
  EXPECT_EQ(per[0], auc);

  std::vector<ew_tick_value> series(n);
  std::vector<std::uint64_t> ticks(n);
  for (std::size_t i = 0; i < n; ++i)
    ticks[i] = ew_stream_edges(s.get())[i].tick;
  std::size_t count = 0;
  ASSERT_EQ(ew_aggregate_by_tick(scores.data(), ticks.data(), n, 1,
                                 series.data(), &count),
            EW_OK);
  EXPECT_EQ(count, ticks.back() - ticks.front() + 1);

  const ew_stream* unl = nullptr;
  ew_stream* plain = nullptr;
  ASSERT_EQ(ew_stream_load(ep.c_str(), EW_DELIM_COMMA, 1, &plain), EW_OK);
  unl = plain;
  EXPECT_EQ(ew_run_trials(unl, &cfg, 1, 0, 1, &rep, nullptr),
            EW_ERR_EVALUATION);
  ew_stream_destroy(plain);
  std::filesystem::remove_all(dir);
}

TEST(CApi, MissingFileIsIoError) {
  ew_stream* s = nullptr;
  EXPECT_EQ(ew_stream_load("/nonexistent/x.csv", EW_DELIM_COMMA, 1, &s),
            EW_ERR_IO);
  EXPECT_EQ(s, nullptr);
}

TEST(CApi, FitLine) {
  const double x[] = {1, 2, 3}, y[] = {2, 4, 6};
  double m, b, r2;
  ASSERT_EQ(ew_fit_line(x, y, 3, &m, &b, &r2), EW_OK);
  EXPECT_NEAR(m, 2, 1e-12);
  EXPECT_NEAR(b, 0, 1e-12);
  EXPECT_NEAR(r2, 1, 1e-12);
}

}  // namespace
