#include "edgewatch/detector.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "edgewatch/error.hpp"

namespace edgewatch {
namespace {

constexpr std::size_t kEdgeGroup = 0;
constexpr std::size_t kSourceGroup = 1;
constexpr std::size_t kDestinationGroup = 2;

std::uint64_t group_seed(std::uint64_t seed, std::size_t group) noexcept {
  // splitmix64 step so neighbouring detector seeds give unrelated layouts.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (group + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::size_t group_count(Variant v) noexcept {
  return v == Variant::midas ? 1 : 3;
}

}  // namespace

std::string_view to_string(Variant v) noexcept {
  switch (v) {
    case Variant::midas: return "midas";
    case Variant::midas_r: return "midas-r";
    case Variant::midas_f: return "midas-f";
  }
  return "?";
}

std::string_view to_string(Combine c) noexcept {
  return c == Combine::max ? "max" : "sum";
}

std::optional<Variant> parse_variant(std::string_view name) noexcept {
  if (name == "midas") return Variant::midas;
  if (name == "midas-r" || name == "midas_r") return Variant::midas_r;
  if (name == "midas-f" || name == "midas_f") return Variant::midas_f;
  return std::nullopt;
}

std::optional<Combine> parse_combine(std::string_view name) noexcept {
  if (name == "max") return Combine::max;
  if (name == "sum") return Combine::sum;
  return std::nullopt;
}

void DetectorConfig::validate() const {
  if (rows == 0) throw ParameterError("rows must be >= 1");
  if (buckets == 0) throw ParameterError("buckets must be >= 1");
  if (variant != Variant::midas && !(alpha > 0.0 && alpha < 1.0))
    throw ParameterError("alpha must lie strictly inside (0, 1), got " +
                         std::to_string(alpha));
  if (variant == Variant::midas_f && !(theta >= 0.0))
    throw ParameterError("theta must be >= 0");
  if (guarantee && variant != Variant::midas)
    throw ParameterError("the false-positive guarantee applies to midas only");
}

SketchGroup::SketchGroup(const SketchLayout& layout, bool with_score)
    : current(layout), total(layout) {
  if (with_score) score.emplace(layout);
}

void conditional_merge(Cms& total, const Cms& current, const ScoreCms& score,
                       double theta, std::uint64_t t) {
  if (!(total.layout() == current.layout()) ||
      !(total.layout() == score.layout()))
    throw StructuralError("conditional merge needs sketches with one layout");
  const auto s = total.table();
  const auto a = current.table();
  const auto c = score.table();
  // s is up to date through tick t - 1 when the expected-count branch fires.
  const double mean_share = t > 1 ? 1.0 / static_cast<double>(t - 1) : 0.0;
  for (std::size_t i = 0; i < s.size(); ++i)
    s[i] += c[i] < theta ? a[i] : s[i] * mean_share;
}

std::vector<SketchLayout> detector_layouts(const DetectorConfig& config,
                                           std::uint64_t seed) {
  config.validate();
  std::vector<SketchLayout> out;
  for (std::size_t g = 0; g < group_count(config.variant); ++g)
    out.emplace_back(config.rows, config.buckets, group_seed(seed, g));
  return out;
}

Detector::Detector(const DetectorConfig& config, std::uint64_t seed)
    : config_(config) {
  config_.validate();
  const auto layouts = detector_layouts(config_, seed);
  groups_.reserve(layouts.size());
  for (const auto& layout : layouts)
    groups_.emplace_back(layout, config_.variant == Variant::midas_f);
  coords_.resize(layouts.size() * config_.rows);
}

void Detector::check_order(const Edge& edge) {
  if (edge.tick == 0)
    throw ParameterError("edge " + std::to_string(edges_seen_) +
                         " has tick 0; ticks start at 1");
  if (edge.tick < tick_)
    throw OrderingError("edge " + std::to_string(edges_seen_) + " has tick " +
                            std::to_string(edge.tick) +
                            " after tick " + std::to_string(tick_),
                        edges_seen_);
  if (edge.tick > tick_) advance_to(edge.tick);
}

void Detector::advance_to(std::uint64_t new_tick) {
  if (new_tick <= tick_)
    throw OrderingError("tick transition must move forward", edges_seen_);
  switch (config_.variant) {
    case Variant::midas:
      groups_[kEdgeGroup].current.clear();
      tick_mass_ = 0;
      break;
    case Variant::midas_r:
      for (auto& g : groups_) g.current.scale(config_.alpha);
      tick_mass_ *= config_.alpha;
      break;
    case Variant::midas_f:
      for (auto& g : groups_)
        conditional_merge(g.total, g.current, *g.score, config_.theta, tick_);
      for (auto& g : groups_) g.current.scale(config_.alpha);
      tick_mass_ *= config_.alpha;
      break;
  }
  tick_ = new_tick;
}

void Detector::record_edge(const Edge& edge) {
  const std::size_t rows = config_.rows;
  const std::span<std::size_t> all(coords_);
  groups_[kEdgeGroup].current.layout().coordinates(
      edge_key(edge.source, edge.destination), all.subspan(0, rows));
  if (groups_.size() > 1) {
    groups_[kSourceGroup].current.layout().coordinates(
        node_key(edge.source), all.subspan(rows, rows));
    groups_[kDestinationGroup].current.layout().coordinates(
        node_key(edge.destination), all.subspan(2 * rows, rows));
  }
  tick_mass_ += 1.0;
  ++edges_seen_;
}

double Detector::process(const Edge& edge) {
  check_order(edge);
  record_edge(edge);
  const std::size_t rows = config_.rows;
  const std::span<const std::size_t> all(coords_);

  double scores[3] = {0, 0, 0};
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    auto& grp = groups_[g];
    const auto at = all.subspan(g * rows, rows);
    grp.current.increment_at(at);
    if (config_.variant == Variant::midas_f) {
      const double sc = midasf_score(grp.current.query_at(at),
                                     grp.total.query_at(at), tick_);
      grp.score->write_at(at, sc);
      scores[g] = sc;
    } else {
      grp.total.increment_at(at);
      scores[g] = midas_score(grp.current.query_at(at), grp.total.query_at(at),
                              tick_);
    }
  }
  if (groups_.size() == 1) return scores[0];
  if (config_.combine == Combine::sum) return scores[0] + scores[1] + scores[2];
  return std::max({scores[0], scores[1], scores[2]});
}

void Detector::process(std::span<const Edge> edges, std::span<double> out) {
  if (out.size() != edges.size())
    throw ParameterError("score buffer length differs from edge count");
  for (std::size_t i = 0; i < edges.size(); ++i) out[i] = process(edges[i]);
}

Decision Detector::decide(const Edge& edge) {
  if (config_.variant != Variant::midas)
    throw UnsupportedVariantError(
        "binary decisions are defined for midas only, not " +
        std::string(to_string(config_.variant)));
  if (!config_.guarantee)
    throw ParameterError("detector was configured without guarantee params");
  Decision d;
  d.score = process(edge);
  const auto at = std::span<const std::size_t>(coords_).subspan(0, config_.rows);
  const auto& grp = groups_[kEdgeGroup];
  d.statistic = adjusted_statistic(grp.current.query_at(at),
                                   grp.total.query_at(at), tick_,
                                   config_.guarantee->nu(), tick_mass_);
  d.anomalous = edgewatch::decide(d.statistic, *config_.guarantee);
  return d;
}

}  // namespace edgewatch
