#include <algorithm>
#include <chrono>
#include <cstddef>
#include <exception>
#include <fstream>
#include <new>
#include <string>
#include <vector>

#include "edgewatch/edgewatch.h"
#include "edgewatch/detector.hpp"
#include "edgewatch/error.hpp"
#include "edgewatch/eval.hpp"
#include "edgewatch/scoring.hpp"
#include "edgewatch/sketch.hpp"
#include "edgewatch/stream_io.hpp"
#include "edgewatch/synth.hpp"

namespace ew = edgewatch;

// ew_edge and edgewatch::Edge are viewed through each other.
static_assert(sizeof(ew_edge) == sizeof(ew::Edge));
static_assert(offsetof(ew_edge, source) == offsetof(ew::Edge, source));
static_assert(offsetof(ew_edge, destination) == offsetof(ew::Edge, destination));
static_assert(offsetof(ew_edge, tick) == offsetof(ew::Edge, tick));

struct ew_detector {
  ew::Detector impl;
};

struct ew_stream {
  ew::LabeledStream impl;
};

namespace {

thread_local std::string last_error;

ew_status fail(ew_status status, const char* what) {
  last_error = what;
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <typename F>
ew_status guarded(F&& body) noexcept {
  try {
    body();
    return EW_OK;
  } catch (const ew::ParameterError& e) {
    return fail(EW_ERR_PARAMETER, e.what());
  } catch (const ew::ParseError& e) {
    return fail(EW_ERR_PARSE, e.what());
  } catch (const ew::OrderingError& e) {
    return fail(EW_ERR_ORDERING, e.what());
  } catch (const ew::StructuralError& e) {
    return fail(EW_ERR_STRUCTURAL, e.what());
  } catch (const ew::UnsupportedVariantError& e) {
    return fail(EW_ERR_UNSUPPORTED, e.what());
  } catch (const ew::EvaluationError& e) {
    return fail(EW_ERR_EVALUATION, e.what());
  } catch (const ew::IoError& e) {
    return fail(EW_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(EW_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(EW_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(EW_ERR_INTERNAL, "unknown error");
  }
}

void require(const void* p, const char* name) {
  if (p == nullptr) throw ew::ParameterError(std::string(name) + " is NULL");
}

ew::DetectorConfig to_config(const ew_config* c) {
  require(c, "config");
  ew::DetectorConfig cfg;
  switch (c->variant) {
    case EW_VARIANT_MIDAS: cfg.variant = ew::Variant::midas; break;
    case EW_VARIANT_MIDAS_R: cfg.variant = ew::Variant::midas_r; break;
    case EW_VARIANT_MIDAS_F: cfg.variant = ew::Variant::midas_f; break;
    default: throw ew::ParameterError("unknown variant");
  }
  switch (c->combine) {
    case EW_COMBINE_MAX: cfg.combine = ew::Combine::max; break;
    case EW_COMBINE_SUM: cfg.combine = ew::Combine::sum; break;
    default: throw ew::ParameterError("unknown combine mode");
  }
  cfg.rows = c->rows;
  cfg.buckets = c->buckets;
  cfg.alpha = c->alpha;
  cfg.theta = c->theta;
  if (c->use_guarantee) cfg.guarantee.emplace(c->eps, c->nu);
  cfg.validate();
  return cfg;
}

const ew::LabeledStream& stream_of(const ew_stream* s) {
  require(s, "stream");
  return s->impl;
}

ew_report to_report(const ew::EvalReport& r) {
  return {r.auc, r.trials, r.runtime_seconds, r.edges_per_second};
}

}  // namespace

extern "C" {

const char* ew_last_error(void) { return last_error.c_str(); }

const char* ew_status_name(ew_status status) {
  switch (status) {
    case EW_OK: return "ok";
    case EW_ERR_PARAMETER: return "parameter error";
    case EW_ERR_PARSE: return "parse error";
    case EW_ERR_ORDERING: return "ordering error";
    case EW_ERR_STRUCTURAL: return "structural error";
    case EW_ERR_UNSUPPORTED: return "unsupported variant";
    case EW_ERR_EVALUATION: return "evaluation error";
    case EW_ERR_IO: return "i/o error";
    case EW_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* ew_version(void) { return EDGEWATCH_VERSION; }

void ew_config_default(ew_config* config) {
  if (config == nullptr) return;
  const ew::DetectorConfig d;
  config->variant = EW_VARIANT_MIDAS;
  config->rows = static_cast<uint32_t>(d.rows);
  config->buckets = static_cast<uint32_t>(d.buckets);
  config->alpha = d.alpha;
  config->theta = d.theta;
  config->combine = EW_COMBINE_MAX;
  config->use_guarantee = 0;
  config->eps = 0.01;
  config->nu = 0.003;
}

ew_status ew_layout_for_guarantee(double eps, double nu, uint32_t* rows,
                                  uint32_t* buckets) {
  return guarded([&] {
    require(rows, "rows");
    require(buckets, "buckets");
    const auto layout = ew::layout_for_guarantee(eps, nu, 0);
    if (layout.buckets() > UINT32_MAX)
      throw ew::ParameterError("bucket count does not fit in 32 bits");
    *rows = static_cast<uint32_t>(layout.rows());
    *buckets = static_cast<uint32_t>(layout.buckets());
  });
}

ew_status ew_chi2_quantile_1dof(double p, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = ew::chi2_quantile_1dof(p);
  });
}

ew_status ew_detector_create(const ew_config* config, uint64_t seed,
                             ew_detector** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    *out = new ew_detector{ew::Detector(to_config(config), seed)};
  });
}

void ew_detector_destroy(ew_detector* detector) { delete detector; }

ew_status ew_detector_process(ew_detector* detector, const ew_edge* edge,
                              double* score) {
  return guarded([&] {
    require(detector, "detector");
    require(edge, "edge");
    require(score, "score");
    *score = detector->impl.process({edge->source, edge->destination, edge->tick});
  });
}

ew_status ew_detector_process_batch(ew_detector* detector, const ew_edge* edges,
                                    size_t count, double* scores,
                                    size_t* failed_index) {
  return guarded([&] {
    require(detector, "detector");
    if (count == 0) return;
    require(edges, "edges");
    require(scores, "scores");
    const auto* view = reinterpret_cast<const ew::Edge*>(edges);
    for (size_t i = 0; i < count; ++i) {
      try {
        scores[i] = detector->impl.process(view[i]);
      } catch (const ew::Error&) {
        if (failed_index) *failed_index = i;
        throw;
      }
    }
  });
}

ew_status ew_detector_decide(ew_detector* detector, const ew_edge* edge,
                             double* score, double* statistic, int* anomalous) {
  return guarded([&] {
    require(detector, "detector");
    require(edge, "edge");
    const auto d =
        detector->impl.decide({edge->source, edge->destination, edge->tick});
    if (score) *score = d.score;
    if (statistic) *statistic = d.statistic;
    if (anomalous) *anomalous = d.anomalous ? 1 : 0;
  });
}

uint64_t ew_detector_tick(const ew_detector* detector) {
  return detector ? detector->impl.tick() : 0;
}

ew_status ew_stream_load(const char* path, ew_delimiter delimiter,
                         uint64_t tick_divisor, ew_stream** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = nullptr;
    const auto d =
        delimiter == EW_DELIM_SPACE ? ew::Delimiter::space : ew::Delimiter::comma;
    *out = new ew_stream{ew::load_edges(path, d, tick_divisor)};
  });
}

ew_status ew_stream_load_labels(ew_stream* stream, const char* path) {
  return guarded([&] {
    require(stream, "stream");
    require(path, "path");
    ew::attach_labels(stream->impl, ew::load_labels(path));
  });
}

ew_status ew_stream_from_edges(const ew_edge* edges, size_t count,
                               const uint8_t* labels, ew_stream** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    if (count > 0) require(edges, "edges");
    ew::LabeledStream s;
    const auto* view = reinterpret_cast<const ew::Edge*>(edges);
    s.edges.assign(view, view + count);
    std::size_t nodes = 0;
    for (const auto& e : s.edges)
      nodes = std::max<std::size_t>({nodes, e.source + std::size_t{1},
                                     e.destination + std::size_t{1}});
    s.node_count = nodes;
    if (labels) s.labels.emplace(labels, labels + count);
    s.validate();
    *out = new ew_stream{std::move(s)};
  });
}

void ew_stream_destroy(ew_stream* stream) { delete stream; }

size_t ew_stream_edge_count(const ew_stream* stream) {
  return stream ? stream->impl.edges.size() : 0;
}

size_t ew_stream_node_count(const ew_stream* stream) {
  return stream ? stream->impl.node_count : 0;
}

int ew_stream_has_labels(const ew_stream* stream) {
  return stream && stream->impl.labels ? 1 : 0;
}

const ew_edge* ew_stream_edges(const ew_stream* stream) {
  if (!stream) return nullptr;
  return reinterpret_cast<const ew_edge*>(stream->impl.edges.data());
}

const uint8_t* ew_stream_labels(const ew_stream* stream) {
  if (!stream || !stream->impl.labels) return nullptr;
  return stream->impl.labels->data();
}

ew_status ew_stream_save(const ew_stream* stream, const char* edges_path,
                         const char* labels_path) {
  return guarded([&] {
    require(edges_path, "edges_path");
    ew::save_stream(stream_of(stream), edges_path,
                    labels_path ? labels_path : "");
  });
}

ew_status ew_write_scores(const char* path, const double* scores,
                          const uint8_t* flags, size_t count) {
  return guarded([&] {
    require(path, "path");
    if (count > 0) require(scores, "scores");
    std::ofstream out(path);
    if (!out) throw ew::IoError(std::string("cannot open '") + path + "'");
    ew::write_scores(out, {scores, count},
                     flags ? std::span<const uint8_t>(flags, count)
                           : std::span<const uint8_t>());
    out.flush();
    if (!out) throw ew::IoError(std::string("failed writing '") + path + "'");
  });
}

ew_status ew_synth_generate(const ew_synth_spec* spec, ew_stream** out) {
  return guarded([&] {
    require(spec, "spec");
    require(out, "out");
    *out = nullptr;
    ew::SynthSpec s;
    s.nodes = spec->nodes;
    s.ticks = spec->ticks;
    s.background_rate = spec->background_rate;
    s.pairs = spec->pairs;
    s.seed = spec->seed;
    if (spec->burst_count > 0) require(spec->bursts, "bursts");
    for (size_t i = 0; i < spec->burst_count; ++i) {
      const auto& b = spec->bursts[i];
      s.bursts.push_back({b.source, b.destination, b.start, b.duration, b.beta});
    }
    *out = new ew_stream{ew::generate(s)};
  });
}

ew_status ew_roc_auc(const double* scores, const uint8_t* labels, size_t count,
                     double* out) {
  return guarded([&] {
    require(out, "out");
    if (count > 0) {
      require(scores, "scores");
      require(labels, "labels");
    }
    *out = ew::roc_auc({scores, count}, {labels, count});
  });
}

ew_status ew_score_stream(const ew_stream* stream, const ew_config* config,
                          uint64_t seed, double* scores, double* seconds) {
  return guarded([&] {
    const auto& s = stream_of(stream);
    if (!s.edges.empty()) require(scores, "scores");
    ew::Detector detector(to_config(config), seed);
    const auto start = std::chrono::steady_clock::now();
    detector.process(s.edges, {scores, s.edges.size()});
    if (seconds)
      *seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                               start)
                     .count();
  });
}

ew_status ew_run_trials(const ew_stream* stream, const ew_config* config,
                        size_t trials, uint64_t seed, size_t threads,
                        ew_report* report, double* per_trial_auc) {
  return guarded([&] {
    require(report, "report");
    const auto r =
        ew::run_trials(stream_of(stream), to_config(config), trials, seed, threads);
    *report = to_report(r);
    if (per_trial_auc)
      std::copy(r.per_trial_auc.begin(), r.per_trial_auc.end(), per_trial_auc);
  });
}

ew_status ew_sweep(const ew_stream* stream, const ew_config* base,
                   ew_sweep_param parameter, const double* values,
                   size_t value_count, size_t trials, uint64_t seed,
                   size_t threads, ew_report* reports) {
  return guarded([&] {
    require(values, "values");
    require(reports, "reports");
    ew::SweepParameter p;
    switch (parameter) {
      case EW_SWEEP_ALPHA: p = ew::SweepParameter::alpha; break;
      case EW_SWEEP_THETA: p = ew::SweepParameter::theta; break;
      case EW_SWEEP_BUCKETS: p = ew::SweepParameter::buckets; break;
      default: throw ew::ParameterError("unknown sweep parameter");
    }
    const auto rows = ew::sweep(stream_of(stream), to_config(base), p,
                                {values, value_count}, trials, seed, threads);
    for (size_t i = 0; i < rows.size(); ++i) reports[i] = to_report(rows[i].report);
  });
}

ew_status ew_aggregate_by_tick(const double* scores, const uint64_t* ticks,
                               size_t count, int normalize, ew_tick_value* out,
                               size_t* out_count) {
  return guarded([&] {
    require(out_count, "out_count");
    if (count > 0) {
      require(scores, "scores");
      require(ticks, "ticks");
      require(out, "out");
    }
    auto series = ew::aggregate_by_tick({scores, count}, {ticks, count});
    if (normalize) ew::normalize_min_max(series);
    for (size_t i = 0; i < series.size(); ++i)
      out[i] = {series[i].tick, series[i].value};
    *out_count = series.size();
  });
}

ew_status ew_bench_scaling(const ew_stream* stream, const ew_config* config,
                           uint64_t seed, const size_t* prefixes,
                           size_t prefix_count, double* seconds) {
  return guarded([&] {
    if (prefix_count > 0) {
      require(prefixes, "prefixes");
      require(seconds, "seconds");
    }
    const auto points =
        ew::bench_scaling(stream_of(stream).edges, to_config(config), seed,
                          {prefixes, prefix_count});
    for (size_t i = 0; i < points.size(); ++i) seconds[i] = points[i].seconds;
  });
}

ew_status ew_fit_line(const double* x, const double* y, size_t count,
                      double* slope, double* intercept, double* r_squared) {
  return guarded([&] {
    require(x, "x");
    require(y, "y");
    const auto fit = ew::fit_line({x, count}, {y, count});
    if (slope) *slope = fit.slope;
    if (intercept) *intercept = fit.intercept;
    if (r_squared) *r_squared = fit.r_squared;
  });
}

}  // extern "C"
