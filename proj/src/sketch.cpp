#include "edgewatch/sketch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "edgewatch/error.hpp"

namespace edgewatch {
namespace {

// murmur3 finalizer
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  x *= 0xc4ceb9fe1a85ec53ULL;
  x ^= x >> 33;
  return x;
}

std::vector<std::uint64_t> draw_seeds(std::size_t rows, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> seeds(rows);
  for (auto& s : seeds) s = rng();
  return seeds;
}

void check_geometry(std::size_t rows, std::size_t buckets) {
  if (rows == 0) throw ParameterError("sketch rows must be >= 1");
  if (buckets == 0) throw ParameterError("sketch buckets must be >= 1");
  if (rows > std::numeric_limits<std::size_t>::max() / buckets)
    throw ParameterError("sketch geometry overflows");
}

}  // namespace

SketchLayout::SketchLayout(std::size_t rows, std::size_t buckets,
                           std::uint64_t seed)
    : rows_(rows), buckets_(buckets) {
  check_geometry(rows, buckets);
  seeds_ = draw_seeds(rows, seed);
}

SketchLayout::SketchLayout(std::size_t rows, std::size_t buckets,
                           std::vector<std::uint64_t> seeds)
    : rows_(rows), buckets_(buckets), seeds_(std::move(seeds)) {
  check_geometry(rows, buckets);
  if (seeds_.size() != rows)
    throw ParameterError("layout needs exactly one seed per row");
}

std::size_t SketchLayout::bucket(std::size_t row,
                                 std::uint64_t key) const noexcept {
  const std::uint64_t h = mix64(key ^ seeds_[row]);
  // Lemire's multiply-high range reduction.
  return static_cast<std::size_t>(
      (static_cast<unsigned __int128>(h) * buckets_) >> 64);
}

void SketchLayout::coordinates(std::uint64_t key,
                               std::span<std::size_t> out) const noexcept {
  for (std::size_t r = 0; r < rows_; ++r) out[r] = r * buckets_ + bucket(r, key);
}

std::vector<std::size_t> SketchLayout::coordinates(std::uint64_t key) const {
  std::vector<std::size_t> out(rows_);
  coordinates(key, out);
  return out;
}

SketchLayout layout_for_guarantee(double eps, double nu, std::uint64_t seed) {
  if (!(eps > 0.0 && eps < 1.0))
    throw ParameterError("eps must lie in (0, 1), got " + std::to_string(eps));
  if (!(nu > 0.0) || !std::isfinite(nu))
    throw ParameterError("nu must be positive, got " + std::to_string(nu));
  const double rows = std::ceil(std::log(2.0 / eps));
  const double buckets = std::ceil(std::numbers::e / nu);
  if (buckets > 1e12) throw ParameterError("nu too small: sketch would not fit");
  return SketchLayout(static_cast<std::size_t>(rows),
                      static_cast<std::size_t>(buckets), seed);
}

Cms::Cms(SketchLayout layout)
    : layout_(std::move(layout)), table_(layout_.cells(), 0.0) {}

void Cms::increment(std::uint64_t key, double weight) {
  if (!(weight > 0.0) || !std::isfinite(weight))
    throw ParameterError("increment weight must be positive and finite");
  for (std::size_t r = 0; r < layout_.rows(); ++r)
    table_[r * layout_.buckets() + layout_.bucket(r, key)] += weight;
}

double Cms::query(std::uint64_t key) const noexcept {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < layout_.rows(); ++r)
    best = std::min(best, table_[r * layout_.buckets() + layout_.bucket(r, key)]);
  return best;
}

void Cms::increment_at(std::span<const std::size_t> coords,
                       double weight) noexcept {
  for (const std::size_t c : coords) table_[c] += weight;
}

double Cms::query_at(std::span<const std::size_t> coords) const noexcept {
  double best = table_[coords[0]];
  for (const std::size_t c : coords.subspan(1)) best = std::min(best, table_[c]);
  return best;
}

void Cms::scale(double factor) {
  if (!(factor > 0.0 && factor < 1.0))
    throw ParameterError("scale factor must lie in (0, 1), got " +
                         std::to_string(factor));
  for (double& v : table_) v *= factor;
}

void Cms::clear() noexcept { std::fill(table_.begin(), table_.end(), 0.0); }

ScoreCms::ScoreCms(SketchLayout layout)
    : layout_(std::move(layout)), table_(layout_.cells(), 0.0) {}

void ScoreCms::write(std::uint64_t key, double value) {
  if (!(value >= 0.0)) throw ParameterError("score value must be >= 0");
  for (std::size_t r = 0; r < layout_.rows(); ++r)
    table_[r * layout_.buckets() + layout_.bucket(r, key)] = value;
}

double ScoreCms::read(std::uint64_t key) const noexcept {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < layout_.rows(); ++r)
    best = std::min(best, table_[r * layout_.buckets() + layout_.bucket(r, key)]);
  return best;
}

void ScoreCms::write_at(std::span<const std::size_t> coords,
                        double value) noexcept {
  for (const std::size_t c : coords) table_[c] = value;
}

double ScoreCms::read_at(std::span<const std::size_t> coords) const noexcept {
  double best = table_[coords[0]];
  for (const std::size_t c : coords.subspan(1)) best = std::min(best, table_[c]);
  return best;
}

void ScoreCms::clear() noexcept { std::fill(table_.begin(), table_.end(), 0.0); }

}  // namespace edgewatch
