/* C interface to the edgewatch streaming edge anomaly detector.
 *
 * Every function returns an ew_status. On failure the message of the most
 * recent error on the calling thread is available from ew_last_error().
 * Handles are opaque; each *_create / *_load has a matching *_destroy.
 */
#ifndef EDGEWATCH_EDGEWATCH_H
#define EDGEWATCH_EDGEWATCH_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(EDGEWATCH_BUILDING)
#    define EW_API __declspec(dllexport)
#  else
#    define EW_API __declspec(dllimport)
#  endif
#else
#  define EW_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ew_status {
  EW_OK = 0,
  EW_ERR_PARAMETER = 1,
  EW_ERR_PARSE = 2,
  EW_ERR_ORDERING = 3,
  EW_ERR_STRUCTURAL = 4,
  EW_ERR_UNSUPPORTED = 5,
  EW_ERR_EVALUATION = 6,
  EW_ERR_IO = 7,
  EW_ERR_INTERNAL = 8
} ew_status;

typedef enum ew_variant {
  EW_VARIANT_MIDAS = 0,
  EW_VARIANT_MIDAS_R = 1,
  EW_VARIANT_MIDAS_F = 2
} ew_variant;

typedef enum ew_combine { EW_COMBINE_MAX = 0, EW_COMBINE_SUM = 1 } ew_combine;

typedef enum ew_delimiter { EW_DELIM_COMMA = 0, EW_DELIM_SPACE = 1 } ew_delimiter;

typedef enum ew_sweep_param {
  EW_SWEEP_ALPHA = 0,
  EW_SWEEP_THETA = 1,
  EW_SWEEP_BUCKETS = 2
} ew_sweep_param;

typedef struct ew_config {
  ew_variant variant;
  uint32_t rows;
  uint32_t buckets;
  double alpha;
  double theta;
  ew_combine combine;
  /* Non-zero enables ew_detector_decide (midas only). */
  int use_guarantee;
  double eps;
  double nu;
} ew_config;

typedef struct ew_edge {
  uint32_t source;
  uint32_t destination;
  uint64_t tick;
} ew_edge;

typedef struct ew_burst {
  uint32_t source;
  uint32_t destination;
  uint64_t start;
  uint64_t duration;
  double beta;
} ew_burst;

typedef struct ew_synth_spec {
  size_t nodes;
  uint64_t ticks;
  double background_rate;
  size_t pairs;
  const ew_burst* bursts;
  size_t burst_count;
  uint64_t seed;
} ew_synth_spec;

typedef struct ew_report {
  double auc;
  size_t trials;
  double runtime_seconds;
  double edges_per_second;
} ew_report;

typedef struct ew_tick_value {
  uint64_t tick;
  double value;
} ew_tick_value;

typedef struct ew_detector ew_detector;
typedef struct ew_stream ew_stream;

EW_API const char* ew_last_error(void);
EW_API const char* ew_status_name(ew_status status);
EW_API const char* ew_version(void);

/* Fills the library defaults: midas, 2 rows, 1024 buckets, alpha 0.5,
 * theta 1000, max-combine, no guarantee (eps 0.01, nu 0.003). */
EW_API void ew_config_default(ew_config* config);

/* rows = ceil(ln(2/eps)), buckets = ceil(e/nu). */
EW_API ew_status ew_layout_for_guarantee(double eps, double nu, uint32_t* rows,
                                         uint32_t* buckets);
EW_API ew_status ew_chi2_quantile_1dof(double p, double* out);

/* ---- detector ---------------------------------------------------------- */

EW_API ew_status ew_detector_create(const ew_config* config, uint64_t seed,
                                    ew_detector** out);
EW_API void ew_detector_destroy(ew_detector* detector);
EW_API ew_status ew_detector_process(ew_detector* detector, const ew_edge* edge,
                                     double* score);
/* Scores `count` edges into `scores`. On an ordering error the index of the
 * offending edge is stored in *failed_index when it is non-NULL. */
EW_API ew_status ew_detector_process_batch(ew_detector* detector,
                                           const ew_edge* edges, size_t count,
                                           double* scores, size_t* failed_index);
EW_API ew_status ew_detector_decide(ew_detector* detector, const ew_edge* edge,
                                    double* score, double* statistic,
                                    int* anomalous);
EW_API uint64_t ew_detector_tick(const ew_detector* detector);

/* ---- streams ----------------------------------------------------------- */

EW_API ew_status ew_stream_load(const char* path, ew_delimiter delimiter,
                                uint64_t tick_divisor, ew_stream** out);
/* Reads a 0/1 label file and attaches it; the length must match. */
EW_API ew_status ew_stream_load_labels(ew_stream* stream, const char* path);
EW_API ew_status ew_stream_from_edges(const ew_edge* edges, size_t count,
                                      const uint8_t* labels, ew_stream** out);
EW_API void ew_stream_destroy(ew_stream* stream);
EW_API size_t ew_stream_edge_count(const ew_stream* stream);
EW_API size_t ew_stream_node_count(const ew_stream* stream);
EW_API int ew_stream_has_labels(const ew_stream* stream);
/* Borrowed views valid until the stream is destroyed. labels is NULL when
 * the stream is unlabelled. */
EW_API const ew_edge* ew_stream_edges(const ew_stream* stream);
EW_API const uint8_t* ew_stream_labels(const ew_stream* stream);
/* labels_path may be NULL to skip the label file. */
EW_API ew_status ew_stream_save(const ew_stream* stream, const char* edges_path,
                                const char* labels_path);

/* Writes one score per line, optionally followed by ",flag". */
EW_API ew_status ew_write_scores(const char* path, const double* scores,
                                 const uint8_t* flags, size_t count);

/* ---- synthetic data ---------------------------------------------------- */

EW_API ew_status ew_synth_generate(const ew_synth_spec* spec, ew_stream** out);

/* ---- evaluation -------------------------------------------------------- */

EW_API ew_status ew_roc_auc(const double* scores, const uint8_t* labels,
                            size_t count, double* out);
/* Scores the stream with a fresh detector; `seconds` (optional) receives the
 * scoring time excluding I/O. */
EW_API ew_status ew_score_stream(const ew_stream* stream, const ew_config* config,
                                 uint64_t seed, double* scores, double* seconds);
/* per_trial_auc (optional) must hold `trials` entries. */
EW_API ew_status ew_run_trials(const ew_stream* stream, const ew_config* config,
                               size_t trials, uint64_t seed, size_t threads,
                               ew_report* report, double* per_trial_auc);
/* reports must hold value_count entries. */
EW_API ew_status ew_sweep(const ew_stream* stream, const ew_config* base,
                          ew_sweep_param parameter, const double* values,
                          size_t value_count, size_t trials, uint64_t seed,
                          size_t threads, ew_report* reports);
/* Per-tick maxima. `out` must hold `count` entries; *out_count receives the
 * number of ticks. normalize != 0 applies min-max scaling to [0, 1]. */
EW_API ew_status ew_aggregate_by_tick(const double* scores, const uint64_t* ticks,
                                      size_t count, int normalize,
                                      ew_tick_value* out, size_t* out_count);
EW_API ew_status ew_bench_scaling(const ew_stream* stream, const ew_config* config,
                                  uint64_t seed, const size_t* prefixes,
                                  size_t prefix_count, double* seconds);
/* Least squares y = slope * x + intercept. */
EW_API ew_status ew_fit_line(const double* x, const double* y, size_t count,
                             double* slope, double* intercept, double* r_squared);

#ifdef __cplusplus
}
#endif

#endif /* EDGEWATCH_EDGEWATCH_H */
