#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace edgewatch {

// Geometry and hash seeds of a count-min sketch. Sketches built from equal
// layouts place every key at identical cell coordinates, which is what
// makes bucket-wise merging between them meaningful.
class SketchLayout {
 public:
  // Seeds are drawn deterministically from `seed`.
  SketchLayout(std::size_t rows, std::size_t buckets, std::uint64_t seed);
  SketchLayout(std::size_t rows, std::size_t buckets,
               std::vector<std::uint64_t> seeds);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t buckets() const noexcept { return buckets_; }
  std::size_t cells() const noexcept { return rows_ * buckets_; }
  std::span<const std::uint64_t> seeds() const noexcept { return seeds_; }

  // Bucket of `key` in `row`, in [0, buckets).
  std::size_t bucket(std::size_t row, std::uint64_t key) const noexcept;

  // Flat cell index (row * buckets + bucket) for every row. `out` must hold
  // rows() entries.
  void coordinates(std::uint64_t key, std::span<std::size_t> out) const noexcept;
  std::vector<std::size_t> coordinates(std::uint64_t key) const;

  friend bool operator==(const SketchLayout&, const SketchLayout&) = default;

 private:
  std::size_t rows_;
  std::size_t buckets_;
  std::vector<std::uint64_t> seeds_;
};

// rows = ceil(ln(2/eps)), buckets = ceil(e/nu). Requires 0 < eps < 1, nu > 0.
SketchLayout layout_for_guarantee(double eps, double nu, std::uint64_t seed);

// High word = source, low word = destination; (u,v) and (v,u) differ.
constexpr std::uint64_t edge_key(std::uint32_t source,
                                 std::uint32_t destination) noexcept {
  return (std::uint64_t{source} << 32) | destination;
}

constexpr std::uint64_t node_key(std::uint32_t node) noexcept { return node; }

// Count-min sketch over real-valued, non-negative counters.
class Cms {
 public:
  explicit Cms(SketchLayout layout);

  const SketchLayout& layout() const noexcept { return layout_; }

  void increment(std::uint64_t key, double weight = 1.0);
  // Minimum over the key's cells; never below the true accumulated weight.
  double query(std::uint64_t key) const noexcept;

  // Pre-hashed variants; `coords` comes from layout().coordinates().
  void increment_at(std::span<const std::size_t> coords, double weight = 1.0) noexcept;
  double query_at(std::span<const std::size_t> coords) const noexcept;

  // Multiplies every counter; factor must lie in (0, 1).
  void scale(double factor);
  void clear() noexcept;

  std::span<double> table() noexcept { return table_; }
  std::span<const double> table() const noexcept { return table_; }

 private:
  SketchLayout layout_;
  std::vector<double> table_;
};

// Count-min-shaped cache whose writes replace cell values instead of adding
// to them. Reads return the minimum over the key's cells.
class ScoreCms {
 public:
  explicit ScoreCms(SketchLayout layout);

  const SketchLayout& layout() const noexcept { return layout_; }

  // Writes `value` into the key's cell in every row. value must be >= 0.
  void write(std::uint64_t key, double value);
  double read(std::uint64_t key) const noexcept;

  void write_at(std::span<const std::size_t> coords, double value) noexcept;
  double read_at(std::span<const std::size_t> coords) const noexcept;

  void clear() noexcept;

  std::span<const double> table() const noexcept { return table_; }
  std::span<double> table() noexcept { return table_; }

 private:
  SketchLayout layout_;
  std::vector<double> table_;
};

}  // namespace edgewatch
