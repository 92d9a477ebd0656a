#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "edgewatch/scoring.hpp"
#include "edgewatch/sketch.hpp"

namespace edgewatch {

struct Edge {
  std::uint32_t source = 0;
  std::uint32_t destination = 0;
  std::uint64_t tick = 1;

  friend bool operator==(const Edge&, const Edge&) = default;
};

enum class Variant { midas, midas_r, midas_f };
enum class Combine { max, sum };

std::string_view to_string(Variant v) noexcept;
std::string_view to_string(Combine c) noexcept;
// Accepts "midas", "midas-r"/"midas_r", "midas-f"/"midas_f".
std::optional<Variant> parse_variant(std::string_view name) noexcept;
std::optional<Combine> parse_combine(std::string_view name) noexcept;

// Defaults: 2 rows, 1024 buckets, alpha 0.5, theta 1000, max-combine.
struct DetectorConfig {
  Variant variant = Variant::midas;
  std::size_t rows = 2;
  std::size_t buckets = 1024;
  double alpha = 0.5;   // midas_r, midas_f
  double theta = 1000;  // midas_f
  Combine combine = Combine::max;
  std::optional<GuaranteeParams> guarantee;  // midas only

  // Throws ParameterError.
  void validate() const;
};

// Current count, running total and (midas_f only) cached score for one key
// family. All sketches in a group share one layout.
struct SketchGroup {
  explicit SketchGroup(const SketchLayout& layout, bool with_score);

  Cms current;
  Cms total;
  std::optional<ScoreCms> score;
};

// Layouts a detector built from (config, seed) uses, edge group first, then
// source and destination groups for midas_r / midas_f. Allocates no tables.
std::vector<SketchLayout> detector_layouts(const DetectorConfig& config,
                                           std::uint64_t seed);

// Folds the live-tick counts into the totals cell by cell, closing tick `t`:
// where the cached score is below theta the current count is added,
// otherwise (t > 1) the total grows by its own per-tick mean total / (t - 1).
// Throws StructuralError unless the three sketches share a layout.
void conditional_merge(Cms& total, const Cms& current, const ScoreCms& score,
                       double theta, std::uint64_t t);

struct Decision {
  double score = 0;      // plain anomaly score of the edge
  double statistic = 0;  // overestimate-adjusted statistic
  bool anomalous = false;
};

// Streaming edge scorer. Feed edges in non-decreasing tick order; each call
// returns the edge's anomaly score. Memory is fixed at construction.
class Detector {
 public:
  Detector(const DetectorConfig& config, std::uint64_t seed);

  double process(const Edge& edge);
  // Scores `edges` into `out` (same length).
  void process(std::span<const Edge> edges, std::span<double> out);

  // Plain-midas decision with the false-positive guarantee. Throws
  // UnsupportedVariantError for other variants and ParameterError when the
  // config carries no guarantee.
  Decision decide(const Edge& edge);

  // Closes the live tick and makes `new_tick` current. Requires
  // new_tick > tick(). A gap of several ticks is a single transition.
  void advance_to(std::uint64_t new_tick);

  const DetectorConfig& config() const noexcept { return config_; }
  std::uint64_t tick() const noexcept { return tick_; }
  // Total weight in the current-count sketch of each group (decayed for
  // midas_r / midas_f).
  double tick_mass() const noexcept { return tick_mass_; }
  std::size_t edges_seen() const noexcept { return edges_seen_; }

  // edge group first, then source and destination groups when present.
  std::span<const SketchGroup> groups() const noexcept { return groups_; }

 private:
  void check_order(const Edge& edge);
  void record_edge(const Edge& edge);

  DetectorConfig config_;
  std::vector<SketchGroup> groups_;
  std::uint64_t tick_ = 1;
  double tick_mass_ = 0;
  std::size_t edges_seen_ = 0;
  // Per-group hashed coordinates of the edge being processed.
  std::vector<std::size_t> coords_;
};

}  // namespace edgewatch
