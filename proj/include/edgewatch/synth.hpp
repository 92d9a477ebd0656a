#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "edgewatch/stream_io.hpp"

namespace edgewatch {

// A microcluster injected on one ordered node pair: over ticks
// [start, start + duration), the pair's count is inflated so that it exceeds
// beta times its count over the preceding window of the same length.
struct Burst {
  std::uint32_t source = 0;
  std::uint32_t destination = 1;
  std::uint64_t start = 1;
  std::uint64_t duration = 1;
  double beta = 10;
};

struct SynthSpec {
  std::size_t nodes = 100;
  std::uint64_t ticks = 50;
  double background_rate = 1.0;  // Poisson mean per (active pair, tick)
  std::size_t pairs = 200;       // active background pairs, drawn at random
  std::vector<Burst> bursts;
  std::uint64_t seed = 0;

  // Throws ParameterError.
  void validate() const;
};

// Background: every active pair emits Poisson(background_rate) copies per
// tick. Burst pairs join the active set. A burst window of length T on a
// pair whose background count over the window is B and over the preceding
// window is P receives max(round(beta * rate * T), floor(beta * P) + 1, B + 1)
// copies in total, spread evenly over the window. Every occurrence of a
// burst pair inside its window is labelled 1. Edges are shuffled within each
// tick and node ids are re-interned in first-seen order.
LabeledStream generate(const SynthSpec& spec);

// No bursts; all labels 0.
LabeledStream stationary_stream(std::size_t nodes, std::uint64_t ticks,
                                double rate, std::uint64_t seed,
                                std::size_t pairs);

}  // namespace edgewatch
