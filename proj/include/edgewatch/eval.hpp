#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <optional>
#include <vector>

#include "edgewatch/detector.hpp"
#include "edgewatch/stream_io.hpp"

namespace edgewatch {

// Rank-based ROC-AUC (Mann-Whitney U with midranks for ties). Throws
// EvaluationError on length mismatch or when only one class is present.
double roc_auc(std::span<const double> scores,
               std::span<const std::uint8_t> labels);

double median(std::vector<double> values);

struct ScoredStream {
  std::vector<double> scores;
  double seconds = 0;  // scoring loop only
};

ScoredStream score_stream(std::span<const Edge> edges,
                          const DetectorConfig& config, std::uint64_t seed);

struct EvalReport {
  double auc = 0;  // median of per_trial_auc
  std::size_t trials = 0;
  std::vector<double> per_trial_auc;
  std::vector<double> per_trial_seconds;
  double runtime_seconds = 0;  // median, excluding I/O
  double edges_per_second = 0;
};

// Trial i uses seed + i. `threads` > 1 runs trials concurrently on
// independent detectors (timings then share the machine).
EvalReport run_trials(const LabeledStream& stream, const DetectorConfig& config,
                      std::size_t trials, std::uint64_t seed,
                      std::size_t threads = 1);

enum class SweepParameter { alpha, theta, buckets };
std::string_view to_string(SweepParameter p) noexcept;
std::optional<SweepParameter> parse_sweep_parameter(std::string_view name) noexcept;

struct SweepRow {
  double value = 0;
  EvalReport report;
};

std::vector<SweepRow> sweep(const LabeledStream& stream,
                            const DetectorConfig& base, SweepParameter parameter,
                            std::span<const double> values, std::size_t trials,
                            std::uint64_t seed, std::size_t threads = 1);

struct TickValue {
  std::uint64_t tick = 0;
  double value = 0;
  friend bool operator==(const TickValue&, const TickValue&) = default;
};

// Per-tick maximum of `scores`; `ticks` must be aligned and non-decreasing.
std::vector<TickValue> aggregate_by_tick(std::span<const double> scores,
                                         std::span<const std::uint64_t> ticks);
// Min-max scales the values into [0, 1]. A zero range maps everything to 1.
void normalize_min_max(std::vector<TickValue>& series) noexcept;

struct ScalingPoint {
  std::size_t edges = 0;
  double seconds = 0;
};

// Times a fresh detector over each prefix. Prefixes must be ascending and
// no longer than the stream.
std::vector<ScalingPoint> bench_scaling(std::span<const Edge> edges,
                                        const DetectorConfig& config,
                                        std::uint64_t seed,
                                        std::span<const std::size_t> prefixes);

struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
  double slope_stderr = 0;
};

// Ordinary least squares of y on x; needs at least two distinct x values.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace edgewatch
