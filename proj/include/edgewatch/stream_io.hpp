#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "edgewatch/detector.hpp"

namespace edgewatch {

enum class Delimiter { comma, space };

// An edge stream with dense node ids and, optionally, one 0/1 label per edge.
struct LabeledStream {
  std::vector<Edge> edges;
  std::optional<std::vector<std::uint8_t>> labels;
  std::size_t node_count = 0;

  std::size_t edge_count() const noexcept { return edges.size(); }
  // {first tick, last tick}; {0, 0} when empty.
  std::pair<std::uint64_t, std::uint64_t> tick_range() const noexcept;
  std::vector<std::uint64_t> ticks() const;

  // Throws OrderingError (0-based index) or ParameterError.
  void validate() const;

  friend bool operator==(const LabeledStream&, const LabeledStream&) = default;
};

// Reads "source<d>destination<d>tick" lines. Node ids are interned to dense
// ids in first-seen order; ticks are divided by `tick_divisor` and must be
// >= 1 afterwards. Blank lines are skipped. Throws ParseError /
// OrderingError carrying the 1-based line number.
LabeledStream read_edges(std::istream& in, Delimiter delimiter = Delimiter::comma,
                         std::uint64_t tick_divisor = 1);
LabeledStream load_edges(const std::string& path,
                         Delimiter delimiter = Delimiter::comma,
                         std::uint64_t tick_divisor = 1);

// One 0 or 1 per line.
std::vector<std::uint8_t> read_labels(std::istream& in);
std::vector<std::uint8_t> load_labels(const std::string& path);

// Attaches labels, checking the length against the edge count.
void attach_labels(LabeledStream& stream, std::vector<std::uint8_t> labels);

void write_edges(std::ostream& out, std::span<const Edge> edges,
                 Delimiter delimiter = Delimiter::comma);
void write_labels(std::ostream& out, std::span<const std::uint8_t> labels);
void save_stream(const LabeledStream& stream, const std::string& edges_path,
                 const std::string& labels_path);

// One score per line with 9 significant digits; when `flags` is non-empty
// each line is "score,flag".
void write_scores(std::ostream& out, std::span<const double> scores,
                  std::span<const std::uint8_t> flags = {});

}  // namespace edgewatch
