#include "edgewatch/stream_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <limits>
#include <string_view>
#include <unordered_map>

#include "edgewatch/error.hpp"

namespace edgewatch {
namespace {

bool is_blank(char c) noexcept {
  return c == ' ' || c == '\t' || c == '\r';
}

std::string_view trim(std::string_view s) noexcept {
  while (!s.empty() && is_blank(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_blank(s.back())) s.remove_suffix(1);
  return s;
}

// Splits into exactly three fields or returns false.
bool split3(std::string_view line, Delimiter d, std::string_view (&out)[3]) {
  std::size_t n = 0;
  if (d == Delimiter::comma) {
    while (true) {
      const auto pos = line.find(',');
      if (n == 3) return false;
      out[n++] = trim(line.substr(0, pos));
      if (pos == std::string_view::npos) break;
      line.remove_prefix(pos + 1);
    }
  } else {
    line = trim(line);
    while (!line.empty()) {
      if (n == 3) return false;
      std::size_t end = 0;
      while (end < line.size() && !is_blank(line[end])) ++end;
      out[n++] = line.substr(0, end);
      line = trim(line.substr(end));
    }
  }
  return n == 3;
}

bool parse_u64(std::string_view s, std::uint64_t& value) noexcept {
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

}  // namespace

std::pair<std::uint64_t, std::uint64_t> LabeledStream::tick_range()
    const noexcept {
  if (edges.empty()) return {0, 0};
  return {edges.front().tick, edges.back().tick};
}

std::vector<std::uint64_t> LabeledStream::ticks() const {
  std::vector<std::uint64_t> out;
  out.reserve(edges.size());
  for (const auto& e : edges) out.push_back(e.tick);
  return out;
}

void LabeledStream::validate() const {
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (edges[i].tick == 0)
      throw ParameterError("edge " + std::to_string(i) + " has tick 0");
    if (i > 0 && edges[i].tick < edges[i - 1].tick)
      throw OrderingError("edge " + std::to_string(i) + " goes back in time",
                          i);
    if (edges[i].source >= node_count || edges[i].destination >= node_count)
      throw ParameterError("edge " + std::to_string(i) +
                           " references a node id outside the dense range");
  }
  if (labels && labels->size() != edges.size())
    throw ParameterError("label count " + std::to_string(labels->size()) +
                         " differs from edge count " +
                         std::to_string(edges.size()));
}

LabeledStream read_edges(std::istream& in, Delimiter delimiter,
                         std::uint64_t tick_divisor) {
  if (tick_divisor == 0) throw ParameterError("tick divisor must be >= 1");
  LabeledStream stream;
  std::unordered_map<std::uint64_t, std::uint32_t> ids;
  const auto intern = [&](std::uint64_t raw) {
    const auto [it, fresh] =
        ids.try_emplace(raw, static_cast<std::uint32_t>(ids.size()));
    return it->second;
  };

  std::string line;
  std::size_t lineno = 0;
  std::uint64_t last_tick = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::string_view fields[3];
    std::uint64_t src = 0, dst = 0, raw_tick = 0;
    if (!split3(line, delimiter, fields) || !parse_u64(fields[0], src) ||
        !parse_u64(fields[1], dst) || !parse_u64(fields[2], raw_tick))
      throw ParseError("expected 'source" +
                           std::string(delimiter == Delimiter::comma ? "," : " ") +
                           "destination" +
                           std::string(delimiter == Delimiter::comma ? "," : " ") +
                           "tick' with non-negative integers, got '" + line + "'",
                       lineno);
    const std::uint64_t tick = raw_tick / tick_divisor;
    if (tick == 0) throw ParseError("tick must be >= 1", lineno);
    if (tick < last_tick)
      throw OrderingError("tick " + std::to_string(tick) + " at line " +
                              std::to_string(lineno) + " precedes tick " +
                              std::to_string(last_tick),
                          lineno);
    if (ids.size() >= std::numeric_limits<std::uint32_t>::max() - 1)
      throw ParseError("too many distinct nodes", lineno);
    last_tick = tick;
    const std::uint32_t u = intern(src);
    const std::uint32_t v = intern(dst);
    stream.edges.push_back({u, v, tick});
  }
  stream.node_count = ids.size();
  return stream;
}

LabeledStream load_edges(const std::string& path, Delimiter delimiter,
                         std::uint64_t tick_divisor) {
  auto in = open_in(path);
  return read_edges(in, delimiter, tick_divisor);
}

std::vector<std::uint8_t> read_labels(std::istream& in) {
  std::vector<std::uint8_t> labels;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tok = trim(line);
    if (tok.empty()) continue;
    if (tok == "0")
      labels.push_back(0);
    else if (tok == "1")
      labels.push_back(1);
    else
      throw ParseError("label must be 0 or 1, got '" + std::string(tok) + "'",
                       lineno);
  }
  return labels;
}

std::vector<std::uint8_t> load_labels(const std::string& path) {
  auto in = open_in(path);
  return read_labels(in);
}

void attach_labels(LabeledStream& stream, std::vector<std::uint8_t> labels) {
  if (labels.size() != stream.edges.size())
    throw ParameterError("label count " + std::to_string(labels.size()) +
                         " differs from edge count " +
                         std::to_string(stream.edges.size()));
  stream.labels = std::move(labels);
}

void write_edges(std::ostream& out, std::span<const Edge> edges,
                 Delimiter delimiter) {
  const char d = delimiter == Delimiter::comma ? ',' : ' ';
  for (const auto& e : edges)
    out << e.source << d << e.destination << d << e.tick << '\n';
}

void write_labels(std::ostream& out, std::span<const std::uint8_t> labels) {
  for (const auto l : labels) out << (l ? '1' : '0') << '\n';
}

void save_stream(const LabeledStream& stream, const std::string& edges_path,
                 const std::string& labels_path) {
  auto out = open_out(edges_path);
  write_edges(out, stream.edges);
  if (!out) throw IoError("failed writing '" + edges_path + "'");
  if (!labels_path.empty()) {
    auto lab = open_out(labels_path);
    write_labels(lab, stream.labels ? std::span<const std::uint8_t>(*stream.labels)
                                    : std::span<const std::uint8_t>());
    if (!lab) throw IoError("failed writing '" + labels_path + "'");
  }
}

void write_scores(std::ostream& out, std::span<const double> scores,
                  std::span<const std::uint8_t> flags) {
  if (!flags.empty() && flags.size() != scores.size())
    throw ParameterError("flag count differs from score count");
  char buf[64];
  for (std::size_t i = 0; i < scores.size(); ++i) {
    int n = std::snprintf(buf, sizeof buf, "%.9g", scores[i]);
    out.write(buf, n);
    if (!flags.empty()) out << ',' << (flags[i] ? '1' : '0');
    out << '\n';
  }
}

}  // namespace edgewatch
