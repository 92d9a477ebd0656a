#include "edgewatch/synth.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <string>
#include <unordered_map>

#include "edgewatch/error.hpp"

namespace edgewatch {
namespace {

using Pair = std::pair<std::uint32_t, std::uint32_t>;

}  // namespace

void SynthSpec::validate() const {
  if (nodes < 2) throw ParameterError("synthetic streams need >= 2 nodes");
  if (nodes > std::numeric_limits<std::uint32_t>::max())
    throw ParameterError("too many nodes");
  if (ticks < 1) throw ParameterError("synthetic streams need >= 1 tick");
  if (!(background_rate > 0.0) || !std::isfinite(background_rate))
    throw ParameterError("background rate must be positive");
  if (pairs > nodes * (nodes - 1))
    throw ParameterError("more active pairs requested than ordered pairs exist");
  std::map<Pair, std::vector<const Burst*>> by_pair;
  for (const auto& b : bursts) {
    if (!(b.beta > 1.0)) throw ParameterError("burst beta must exceed 1");
    if (b.duration < 1) throw ParameterError("burst duration must be >= 1");
    if (b.start < 1 || b.start + b.duration - 1 > ticks)
      throw ParameterError("burst window must lie within [1, ticks]");
    if (b.source >= nodes || b.destination >= nodes)
      throw ParameterError("burst node out of range");
    if (b.source == b.destination)
      throw ParameterError("burst pair must join two distinct nodes");
    by_pair[{b.source, b.destination}].push_back(&b);
  }
  for (auto& [pair, list] : by_pair) {
    std::sort(list.begin(), list.end(),
              [](const Burst* a, const Burst* b) { return a->start < b->start; });
    for (std::size_t i = 1; i < list.size(); ++i)
      if (list[i]->start < list[i - 1]->start + list[i - 1]->duration)
        throw ParameterError("bursts on the same pair must not overlap");
  }
}

LabeledStream generate(const SynthSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);

  // Active pair set: random background pairs, then burst pairs.
  std::vector<Pair> pairs;
  std::set<Pair> seen;
  std::uniform_int_distribution<std::uint32_t> pick(
      0, static_cast<std::uint32_t>(spec.nodes - 1));
  while (pairs.size() < spec.pairs) {
    const Pair p{pick(rng), pick(rng)};
    if (p.first != p.second && seen.insert(p).second) pairs.push_back(p);
  }
  for (const auto& b : spec.bursts) {
    const Pair p{b.source, b.destination};
    if (seen.insert(p).second) pairs.push_back(p);
  }
  std::map<Pair, std::size_t> index;
  for (std::size_t i = 0; i < pairs.size(); ++i) index[pairs[i]] = i;

  // counts[pair * ticks + (tick - 1)]
  const std::size_t t_count = spec.ticks;
  std::vector<std::uint32_t> counts(pairs.size() * t_count);
  std::vector<std::uint8_t> burst_cell(counts.size(), 0);
  std::poisson_distribution<std::uint32_t> poisson(spec.background_rate);
  for (std::size_t t = 0; t < t_count; ++t)
    for (std::size_t p = 0; p < pairs.size(); ++p)
      counts[p * t_count + t] = poisson(rng);

  std::vector<const Burst*> ordered;
  for (const auto& b : spec.bursts) ordered.push_back(&b);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const Burst* a, const Burst* b) { return a->start < b->start; });
  for (const Burst* b : ordered) {
    const std::size_t row = index.at({b->source, b->destination}) * t_count;
    const std::size_t first = b->start - 1;
    const std::size_t len = b->duration;
    std::uint64_t in_window = 0, previous = 0;
    for (std::size_t t = first; t < first + len; ++t) in_window += counts[row + t];
    for (std::size_t t = first >= len ? first - len : 0; t < first; ++t)
      previous += counts[row + t];
    const auto target = std::max<std::uint64_t>(
        {static_cast<std::uint64_t>(
             std::llround(b->beta * spec.background_rate * double(len))),
         static_cast<std::uint64_t>(std::floor(b->beta * double(previous))) + 1,
         in_window + 1});
    const std::uint64_t extra = target - in_window;
    for (std::size_t k = 0; k < len; ++k) {
      counts[row + first + k] +=
          static_cast<std::uint32_t>(extra / len + (k < extra % len ? 1 : 0));
      burst_cell[row + first + k] = 1;
    }
  }

  LabeledStream out;
  out.labels.emplace();
  std::unordered_map<std::uint32_t, std::uint32_t> dense;
  const auto intern = [&](std::uint32_t raw) {
    return dense.try_emplace(raw, static_cast<std::uint32_t>(dense.size()))
        .first->second;
  };
  std::vector<std::pair<std::size_t, std::uint8_t>> tick_edges;
  for (std::size_t t = 0; t < t_count; ++t) {
    tick_edges.clear();
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      const std::size_t cell = p * t_count + t;
      for (std::uint32_t c = 0; c < counts[cell]; ++c)
        tick_edges.emplace_back(p, burst_cell[cell]);
    }
    std::shuffle(tick_edges.begin(), tick_edges.end(), rng);
    for (const auto& [p, label] : tick_edges) {
      const std::uint32_t u = intern(pairs[p].first);
      const std::uint32_t v = intern(pairs[p].second);
      out.edges.push_back({u, v, t + 1});
      out.labels->push_back(label);
    }
  }
  out.node_count = dense.size();
  return out;
}

LabeledStream stationary_stream(std::size_t nodes, std::uint64_t ticks,
                                double rate, std::uint64_t seed,
                                std::size_t pairs) {
  SynthSpec spec;
  spec.nodes = nodes;
  spec.ticks = ticks;
  spec.background_rate = rate;
  spec.pairs = pairs;
  spec.seed = seed;
  return generate(spec);
}

}  // namespace edgewatch
