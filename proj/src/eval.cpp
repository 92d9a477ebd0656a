#include "edgewatch/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <numeric>
#include <string>

#include "edgewatch/error.hpp"

namespace edgewatch {

double roc_auc(std::span<const double> scores,
               std::span<const std::uint8_t> labels) {
  if (scores.size() != labels.size())
    throw EvaluationError("score count " + std::to_string(scores.size()) +
                          " differs from label count " +
                          std::to_string(labels.size()));
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] < scores[b];
  });

  // Sum of (1-based) midranks of the positives.
  double positive_rank_sum = 0;
  std::size_t positives = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i + 1;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]]) {
        positive_rank_sum += midrank;
        ++positives;
      }
    }
    i = j;
  }
  const std::size_t negatives = n - positives;
  if (positives == 0 || negatives == 0)
    throw EvaluationError("ROC-AUC needs both positive and negative labels");
  const double p = static_cast<double>(positives);
  const double u = positive_rank_sum - p * (p + 1.0) / 2.0;
  return u / (p * static_cast<double>(negatives));
}

double median(std::vector<double> values) {
  if (values.empty()) throw EvaluationError("median of an empty sequence");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  if (values.size() % 2 == 1) return values[mid];
  const double upper = values[mid];
  const double lower = *std::max_element(values.begin(), values.begin() + mid);
  return 0.5 * (lower + upper);
}

ScoredStream score_stream(std::span<const Edge> edges,
                          const DetectorConfig& config, std::uint64_t seed) {
  ScoredStream out;
  out.scores.resize(edges.size());
  Detector detector(config, seed);
  const auto start = std::chrono::steady_clock::now();
  detector.process(edges, out.scores);
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              start)
                    .count();
  return out;
}

EvalReport run_trials(const LabeledStream& stream, const DetectorConfig& config,
                      std::size_t trials, std::uint64_t seed,
                      std::size_t threads) {
  if (trials == 0) throw ParameterError("trials must be >= 1");
  if (!stream.labels) throw EvaluationError("stream carries no labels");
  if (stream.labels->size() != stream.edges.size())
    throw EvaluationError("label count differs from edge count");
  config.validate();

  EvalReport report;
  report.trials = trials;
  report.per_trial_auc.resize(trials);
  report.per_trial_seconds.resize(trials);
  const auto run_one = [&](std::size_t i) {
    const auto scored = score_stream(stream.edges, config, seed + i);
    report.per_trial_auc[i] = roc_auc(scored.scores, *stream.labels);
    report.per_trial_seconds[i] = scored.seconds;
  };

  threads = std::clamp<std::size_t>(threads, 1, trials);
  if (threads == 1) {
    for (std::size_t i = 0; i < trials; ++i) run_one(i);
  } else {
    // Strided assignment; each worker owns distinct slots of the report.
    std::vector<std::future<void>> workers;
    for (std::size_t w = 0; w < threads; ++w)
      workers.push_back(std::async(std::launch::async, [&, w] {
        for (std::size_t i = w; i < trials; i += threads) run_one(i);
      }));
    for (auto& f : workers) f.get();
  }

  report.auc = median(report.per_trial_auc);
  report.runtime_seconds = median(report.per_trial_seconds);
  report.edges_per_second =
      report.runtime_seconds > 0
          ? static_cast<double>(stream.edges.size()) / report.runtime_seconds
          : 0.0;
  return report;
}

std::string_view to_string(SweepParameter p) noexcept {
  switch (p) {
    case SweepParameter::alpha: return "alpha";
    case SweepParameter::theta: return "theta";
    case SweepParameter::buckets: return "buckets";
  }
  return "?";
}

std::optional<SweepParameter> parse_sweep_parameter(
    std::string_view name) noexcept {
  if (name == "alpha") return SweepParameter::alpha;
  if (name == "theta") return SweepParameter::theta;
  if (name == "buckets") return SweepParameter::buckets;
  return std::nullopt;
}

std::vector<SweepRow> sweep(const LabeledStream& stream,
                            const DetectorConfig& base, SweepParameter parameter,
                            std::span<const double> values, std::size_t trials,
                            std::uint64_t seed, std::size_t threads) {
  if (values.empty()) throw ParameterError("sweep needs at least one value");
  std::vector<SweepRow> rows;
  rows.reserve(values.size());
  for (const double v : values) {
    DetectorConfig cfg = base;
    switch (parameter) {
      case SweepParameter::alpha: cfg.alpha = v; break;
      case SweepParameter::theta: cfg.theta = v; break;
      case SweepParameter::buckets:
        if (!(v >= 1.0) || v != std::floor(v))
          throw ParameterError("bucket counts must be positive integers");
        cfg.buckets = static_cast<std::size_t>(v);
        break;
    }
    rows.push_back({v, run_trials(stream, cfg, trials, seed, threads)});
  }
  return rows;
}

std::vector<TickValue> aggregate_by_tick(std::span<const double> scores,
                                         std::span<const std::uint64_t> ticks) {
  if (scores.size() != ticks.size())
    throw ParameterError("scores and ticks must be aligned");
  std::vector<TickValue> out;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!out.empty() && ticks[i] < out.back().tick)
      throw OrderingError("ticks must be non-decreasing", i);
    if (out.empty() || ticks[i] != out.back().tick)
      out.push_back({ticks[i], scores[i]});
    else
      out.back().value = std::max(out.back().value, scores[i]);
  }
  return out;
}

void normalize_min_max(std::vector<TickValue>& series) noexcept {
  if (series.empty()) return;
  const auto [lo, hi] = std::minmax_element(
      series.begin(), series.end(),
      [](const TickValue& a, const TickValue& b) { return a.value < b.value; });
  const double min = lo->value;
  const double range = hi->value - min;
  for (auto& p : series) p.value = range > 0 ? (p.value - min) / range : 1.0;
}

std::vector<ScalingPoint> bench_scaling(std::span<const Edge> edges,
                                        const DetectorConfig& config,
                                        std::uint64_t seed,
                                        std::span<const std::size_t> prefixes) {
  for (std::size_t i = 0; i < prefixes.size(); ++i) {
    if (prefixes[i] > edges.size())
      throw ParameterError("prefix " + std::to_string(prefixes[i]) +
                           " exceeds stream length " +
                           std::to_string(edges.size()));
    if (i > 0 && prefixes[i] < prefixes[i - 1])
      throw ParameterError("prefixes must be ascending");
  }
  std::vector<ScalingPoint> out;
  out.reserve(prefixes.size());
  for (const std::size_t n : prefixes)
    out.push_back({n, score_stream(edges.first(n), config, seed).seconds});
  return out;
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw ParameterError("line fit needs two or more aligned points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0) throw ParameterError("line fit needs distinct x values");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  const double sse = std::max(0.0, syy - fit.slope * sxy);
  fit.r_squared = syy > 0 ? 1.0 - sse / syy : 1.0;
  fit.slope_stderr = x.size() > 2 ? std::sqrt(sse / (n - 2.0) / sxx) : 0.0;
  return fit;
}

}  // namespace edgewatch
