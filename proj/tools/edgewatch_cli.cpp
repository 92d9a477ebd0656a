// edgewatch command-line front end. Talks to the library only through the
// C API in edgewatch.h.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage / parse / parameter error.

#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "edgewatch/edgewatch.h"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

// Carries an exit code out of a subcommand.
struct Failure {
  int code;
  std::string message;
};

int exit_code_for(ew_status s) {
  switch (s) {
    case EW_ERR_PARAMETER:
    case EW_ERR_PARSE:
    case EW_ERR_ORDERING:
    case EW_ERR_IO:
    case EW_ERR_UNSUPPORTED:
      return kExitUsage;
    default:
      return kExitRuntime;
  }
}

void check(ew_status s, const std::string& context) {
  if (s != EW_OK)
    throw Failure{exit_code_for(s), context + ": " + ew_last_error()};
}

// Runtime-class failure regardless of the status kind.
void check_runtime(ew_status s, const std::string& context) {
  if (s != EW_OK) throw Failure{kExitRuntime, context + ": " + ew_last_error()};
}

struct StreamDeleter {
  void operator()(ew_stream* s) const { ew_stream_destroy(s); }
};
using StreamPtr = std::unique_ptr<ew_stream, StreamDeleter>;

struct DetectorDeleter {
  void operator()(ew_detector* d) const { ew_detector_destroy(d); }
};
using DetectorPtr = std::unique_ptr<ew_detector, DetectorDeleter>;

// Flags shared by score / eval / bench.
struct DetectorFlags {
  std::string variant = "midas";
  std::optional<uint32_t> rows;
  std::optional<uint32_t> buckets;
  double alpha = 0.5;
  double theta = 1000;
  std::string combine = "max";
  std::optional<uint64_t> seed;
  std::string format = "comma";
  uint64_t tick_divisor = 1;

  void attach(CLI::App* app) {
    app->add_option("--variant", variant, "Detector variant")
        ->check(CLI::IsMember({"midas", "midas-r", "midas-f"}))
        ->capture_default_str();
    app->add_option("--rows", rows, "Hash functions per sketch (default 2)");
    app->add_option("--buckets", buckets, "Buckets per row (default 1024)");
    app->add_option("--alpha", alpha, "Temporal decay for midas-r / midas-f")
        ->capture_default_str();
    app->add_option("--theta", theta, "Merge filter threshold for midas-f")
        ->capture_default_str();
    app->add_option("--combine", combine, "Combine edge and node scores")
        ->check(CLI::IsMember({"max", "sum"}))
        ->capture_default_str();
    app->add_option("--seed", seed,
                    "Hash seed (falls back to EDGEWATCH_SEED, then 0)");
    app->add_option("--format", format, "Input field separator")
        ->check(CLI::IsMember({"comma", "space"}))
        ->capture_default_str();
    app->add_option("--tick-divisor", tick_divisor,
                    "Integer-divide raw timestamps into ticks")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  }

  ew_config config() const {
    ew_config c;
    ew_config_default(&c);
    c.variant = variant == "midas-r"   ? EW_VARIANT_MIDAS_R
                : variant == "midas-f" ? EW_VARIANT_MIDAS_F
                                       : EW_VARIANT_MIDAS;
    if (rows) c.rows = *rows;
    if (buckets) c.buckets = *buckets;
    c.alpha = alpha;
    c.theta = theta;
    c.combine = combine == "sum" ? EW_COMBINE_SUM : EW_COMBINE_MAX;
    return c;
  }

  uint64_t resolved_seed() const {
    if (seed) return *seed;
    if (const char* env = std::getenv("EDGEWATCH_SEED")) {
      char* end = nullptr;
      errno = 0;
      const unsigned long long v = std::strtoull(env, &end, 10);
      if (errno != 0 || end == env || *end != '\0')
        throw Failure{kExitUsage, std::string("EDGEWATCH_SEED is not an "
                                              "unsigned integer: ") + env};
      return v;
    }
    return 0;
  }

  ew_delimiter delimiter() const {
    return format == "space" ? EW_DELIM_SPACE : EW_DELIM_COMMA;
  }
};

StreamPtr load_stream(const std::string& path, const DetectorFlags& f) {
  ew_stream* s = nullptr;
  check(ew_stream_load(path.c_str(), f.delimiter(), f.tick_divisor, &s),
        "loading " + path);
  return StreamPtr(s);
}

std::string describe(const ew_config& c) {
  static const char* names[] = {"midas", "midas-r", "midas-f"};
  std::ostringstream os;
  os << "variant=" << names[c.variant] << " rows=" << c.rows
     << " buckets=" << c.buckets;
  if (c.variant != EW_VARIANT_MIDAS)
    os << " alpha=" << c.alpha
       << " combine=" << (c.combine == EW_COMBINE_SUM ? "sum" : "max");
  if (c.variant == EW_VARIANT_MIDAS_F) os << " theta=" << c.theta;
  return os.str();
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (tok.empty() || *end != '\0' || !std::isfinite(v))
      throw Failure{kExitUsage, "bad value '" + tok + "' in list"};
    out.push_back(v);
  }
  if (out.empty()) throw Failure{kExitUsage, "empty value list"};
  return out;
}

// ---- score ---------------------------------------------------------------

struct ScoreCommand {
  DetectorFlags det;
  std::string input;
  std::string output = "-";
  bool decide = false;
  double eps = 0.01;
  double nu = 0.003;

  void attach(CLI::App* app) {
    app->add_option("input", input, "Edge file (source,destination,tick)")
        ->required();
    det.attach(app);
    app->add_option("-o,--output", output, "Score file, '-' for stdout")
        ->capture_default_str();
    app->add_flag("--decide", decide,
                  "Also emit a 0/1 flag with the false-positive guarantee "
                  "(midas only)");
    app->add_option("--eps", eps, "False-positive budget for --decide")
        ->capture_default_str();
    app->add_option("--nu", nu, "Sketch error for --decide")
        ->capture_default_str();
  }

  int run() {
    ew_config cfg = det.config();
    if (decide) {
      if (cfg.variant != EW_VARIANT_MIDAS)
        throw Failure{kExitUsage, "--decide is only defined for --variant midas"};
      uint32_t rows = 0, buckets = 0;
      check(ew_layout_for_guarantee(eps, nu, &rows, &buckets), "--eps/--nu");
      // Guarantee-sized sketches unless the user pinned the geometry.
      if (!det.rows) cfg.rows = rows;
      if (!det.buckets) cfg.buckets = buckets;
      cfg.use_guarantee = 1;
      cfg.eps = eps;
      cfg.nu = nu;
    }
    const uint64_t seed = det.resolved_seed();
    const auto stream = load_stream(input, det);
    const size_t n = ew_stream_edge_count(stream.get());
    const ew_edge* edges = ew_stream_edges(stream.get());

    ew_detector* raw = nullptr;
    check(ew_detector_create(&cfg, seed, &raw), "configuring detector");
    DetectorPtr detector(raw);

    std::vector<double> scores(n);
    std::vector<uint8_t> flags;
    const auto start = std::chrono::steady_clock::now();
    if (decide) {
      flags.resize(n);
      for (size_t i = 0; i < n; ++i) {
        int flag = 0;
        check_runtime(ew_detector_decide(detector.get(), &edges[i], &scores[i],
                                         nullptr, &flag),
                      "edge " + std::to_string(i));
        flags[i] = static_cast<uint8_t>(flag);
      }
    } else {
      size_t bad = 0;
      check_runtime(ew_detector_process_batch(detector.get(), edges, n,
                                              scores.data(), &bad),
                    "scoring");
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();

    const uint8_t* flag_ptr = decide ? flags.data() : nullptr;
    if (output == "-") {
      for (size_t i = 0; i < n; ++i) {
        std::printf("%.9g", scores[i]);
        if (decide) std::printf(",%d", flags[i]);
        std::putchar('\n');
      }
    } else {
      check_runtime(ew_write_scores(output.c_str(), scores.data(), flag_ptr, n),
                    "writing scores");
    }

    std::fprintf(stderr, "%s seed=%llu\n", describe(cfg).c_str(),
                 static_cast<unsigned long long>(seed));
    std::fprintf(stderr, "edges=%zu seconds=%.6f edges_per_second=%.0f\n", n,
                 seconds, seconds > 0 ? double(n) / seconds : 0.0);
    if (decide) {
      size_t flagged = 0;
      for (auto f : flags) flagged += f;
      std::fprintf(stderr, "flagged=%zu (%.4f%%)\n", flagged,
                   n ? 100.0 * double(flagged) / double(n) : 0.0);
    }
    return 0;
  }
};

// ---- eval ----------------------------------------------------------------

struct EvalCommand {
  DetectorFlags det;
  std::string input;
  std::string labels;
  size_t trials = 21;
  size_t threads = 1;
  std::string sweep_param;
  std::string values;
  std::string csv_path;

  void attach(CLI::App* app) {
    app->add_option("input", input, "Edge file")->required();
    app->add_option("--labels", labels, "Ground-truth file, one 0/1 per edge")
        ->required();
    det.attach(app);
    app->add_option("--trials", trials, "Trials (seed, seed+1, ...); median reported")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--threads", threads, "Run trials concurrently")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    auto* sw = app->add_option("--sweep", sweep_param, "Parameter to sweep")
                   ->check(CLI::IsMember({"alpha", "theta", "buckets"}));
    app->add_option("--values", values, "Comma-separated sweep values")
        ->needs(sw);
    sw->needs(app->get_option("--values"));
    app->add_option("--csv", csv_path,
                    "Also write the delimited report to this file");
  }

  int run() {
    const ew_config cfg = det.config();
    const uint64_t seed = det.resolved_seed();
    const auto stream = load_stream(input, det);
    check(ew_stream_load_labels(stream.get(), labels.c_str()),
          "loading " + labels);

    std::ostringstream csv;
    csv << "parameter,auc,runtime_seconds\n";
    std::printf("%s trials=%zu seed=%llu edges=%zu\n", describe(cfg).c_str(),
                trials, static_cast<unsigned long long>(seed),
                ew_stream_edge_count(stream.get()));

    if (sweep_param.empty()) {
      ew_report report{};
      std::vector<double> per_trial(trials);
      check_runtime(ew_run_trials(stream.get(), &cfg, trials, seed, threads,
                                  &report, per_trial.data()),
                    "evaluation");
      std::printf("\n%-12s %10s %14s %16s\n", "", "ROC-AUC", "runtime_s",
                  "edges_per_s");
      std::printf("%-12s %10.4f %14.6f %16.0f\n", "median", report.auc,
                  report.runtime_seconds, report.edges_per_second);
      std::printf("per-trial AUC:");
      for (double a : per_trial) std::printf(" %.4f", a);
      std::printf("\n");
      csv << "default," << fmt6(report.auc) << ','
          << fmt6(report.runtime_seconds) << '\n';
    } else {
      const auto vals = parse_values(values);
      const ew_sweep_param p = sweep_param == "alpha"   ? EW_SWEEP_ALPHA
                               : sweep_param == "theta" ? EW_SWEEP_THETA
                                                        : EW_SWEEP_BUCKETS;
      std::vector<ew_report> reports(vals.size());
      check_runtime(ew_sweep(stream.get(), &cfg, p, vals.data(), vals.size(),
                             trials, seed, threads, reports.data()),
                    "sweep");
      std::printf("\n%-12s %10s %14s\n", sweep_param.c_str(), "ROC-AUC",
                  "runtime_s");
      size_t best = 0;
      for (size_t i = 0; i < vals.size(); ++i) {
        std::printf("%-12g %10.4f %14.6f\n", vals[i], reports[i].auc,
                    reports[i].runtime_seconds);
        if (reports[i].auc > reports[best].auc) best = i;
        csv << sweep_param << '=' << fmt6(vals[i]) << ',' << fmt6(reports[i].auc)
            << ',' << fmt6(reports[i].runtime_seconds) << '\n';
      }
      std::printf("best %s=%g (ROC-AUC %.4f)\n", sweep_param.c_str(), vals[best],
                  reports[best].auc);
    }

    std::printf("\n%s", csv.str().c_str());
    if (!csv_path.empty()) {
      std::ofstream out(csv_path);
      out << csv.str();
      if (!out) throw Failure{kExitRuntime, "cannot write " + csv_path};
    }
    return 0;
  }

  static std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
  }
};

// ---- synth ---------------------------------------------------------------

struct SynthCommand {
  size_t nodes = 100;
  uint64_t ticks = 50;
  double rate = 1.0;
  size_t pairs = 200;
  std::vector<std::string> bursts;
  std::optional<uint64_t> seed;
  std::string output;
  std::string labels;

  void attach(CLI::App* app) {
    app->add_option("--nodes", nodes, "Node count")->capture_default_str();
    app->add_option("--ticks", ticks, "Tick count")->capture_default_str();
    app->add_option("--rate", rate, "Poisson mean per active pair and tick")
        ->capture_default_str();
    app->add_option("--pairs", pairs, "Active background pairs")
        ->capture_default_str();
    app->add_option("--burst", bursts,
                    "Injected microcluster source:destination:start:duration:beta "
                    "(repeatable)");
    app->add_option("--seed", seed, "RNG seed (falls back to EDGEWATCH_SEED)");
    app->add_option("-o,--output", output, "Edge file to write")->required();
    app->add_option("--labels", labels, "Label file to write")->required();
  }

  static ew_burst parse_burst(const std::string& text) {
    ew_burst b{};
    unsigned long long src = 0, dst = 0, start = 0, duration = 0;
    double beta = 0;
    char tail = 0;
    if (std::sscanf(text.c_str(), "%llu:%llu:%llu:%llu:%lf%c", &src, &dst,
                    &start, &duration, &beta, &tail) != 5 ||
        src > UINT32_MAX || dst > UINT32_MAX)
      throw Failure{kExitUsage,
                    "--burst expects source:destination:start:duration:beta, got '" +
                        text + "'"};
    b.source = static_cast<uint32_t>(src);
    b.destination = static_cast<uint32_t>(dst);
    b.start = start;
    b.duration = duration;
    b.beta = beta;
    return b;
  }

  int run() {
    std::vector<ew_burst> parsed;
    for (const auto& b : bursts) parsed.push_back(parse_burst(b));
    DetectorFlags seed_source;
    seed_source.seed = seed;
    ew_synth_spec spec{};
    spec.nodes = nodes;
    spec.ticks = ticks;
    spec.background_rate = rate;
    spec.pairs = pairs;
    spec.bursts = parsed.data();
    spec.burst_count = parsed.size();
    spec.seed = seed_source.resolved_seed();
    ew_stream* raw = nullptr;
    check(ew_synth_generate(&spec, &raw), "synthesizing");
    const StreamPtr stream(raw);
    check_runtime(ew_stream_save(stream.get(), output.c_str(), labels.c_str()),
                  "writing");
    const uint8_t* lab = ew_stream_labels(stream.get());
    size_t positives = 0;
    for (size_t i = 0; i < ew_stream_edge_count(stream.get()); ++i)
      positives += lab[i];
    std::fprintf(stderr, "edges=%zu nodes=%zu anomalous=%zu\n",
                 ew_stream_edge_count(stream.get()),
                 ew_stream_node_count(stream.get()), positives);
    return 0;
  }
};

// ---- bench ---------------------------------------------------------------

struct BenchCommand {
  DetectorFlags det;
  std::string input;
  size_t synthetic = 0;
  std::string prefixes;

  void attach(CLI::App* app) {
    auto* in = app->add_option("input", input, "Edge file");
    auto* syn = app->add_option("--synthetic", synthetic,
                                "Benchmark on a generated stationary stream of "
                                "at least this many edges instead of a file");
    in->excludes(syn);
    det.attach(app);
    app->add_option("--prefixes", prefixes,
                    "Comma-separated prefix lengths (default 2^16..2^22, "
                    "capped at the stream length)");
  }

  int run() {
    const ew_config cfg = det.config();
    const uint64_t seed = det.resolved_seed();
    StreamPtr stream;
    if (!input.empty()) {
      stream = load_stream(input, det);
    } else if (synthetic > 0) {
      ew_synth_spec spec{};
      spec.nodes = 5000;
      spec.pairs = 20000;
      spec.background_rate = 1.0;
      spec.ticks = (synthetic + spec.pairs - 1) / spec.pairs + 1;
      spec.seed = seed;
      ew_stream* raw = nullptr;
      check(ew_synth_generate(&spec, &raw), "synthesizing");
      stream.reset(raw);
    } else {
      throw Failure{kExitUsage, "bench needs an input file or --synthetic N"};
    }
    const size_t n = ew_stream_edge_count(stream.get());

    std::vector<size_t> sizes;
    if (prefixes.empty()) {
      for (size_t p = size_t{1} << 16; p <= (size_t{1} << 22) && p <= n; p <<= 1)
        sizes.push_back(p);
      if (sizes.empty()) sizes.push_back(n);
    } else {
      for (double v : parse_values(prefixes)) {
        if (v < 1 || v != std::floor(v))
          throw Failure{kExitUsage, "prefixes must be positive integers"};
        sizes.push_back(static_cast<size_t>(v));
      }
    }

    std::vector<double> seconds(sizes.size());
    check(ew_bench_scaling(stream.get(), &cfg, seed, sizes.data(), sizes.size(),
                           seconds.data()),
          "benchmark");
    std::printf("%s\n", describe(cfg).c_str());
    std::printf("n_edges,seconds,edges_per_second\n");
    std::vector<double> xs;
    for (size_t i = 0; i < sizes.size(); ++i) {
      std::printf("%zu,%.6f,%.0f\n", sizes[i], seconds[i],
                  seconds[i] > 0 ? double(sizes[i]) / seconds[i] : 0.0);
      xs.push_back(double(sizes[i]));
    }
    if (sizes.size() >= 2) {
      double slope = 0, intercept = 0, r2 = 0;
      if (ew_fit_line(xs.data(), seconds.data(), xs.size(), &slope, &intercept,
                      &r2) == EW_OK)
        std::printf("# linear fit: seconds = %.3e * n + %.3e, R^2 = %.4f\n",
                    slope, intercept, r2);
    }
    return 0;
  }
};

// ---- aggregate -----------------------------------------------------------

struct AggregateCommand {
  std::string input;
  std::string scores_path;
  std::string mode = "max";
  bool raw = false;
  std::string format = "comma";
  uint64_t tick_divisor = 1;
  std::string output = "-";

  void attach(CLI::App* app) {
    app->add_option("input", input, "Edge file the scores belong to")->required();
    app->add_option("--scores", scores_path, "Score file from `score`")
        ->required();
    app->add_option("--mode", mode, "Per-tick aggregation")
        ->check(CLI::IsMember({"max"}))
        ->capture_default_str();
    app->add_flag("--raw", raw, "Skip min-max normalization");
    app->add_option("--format", format, "Input field separator")
        ->check(CLI::IsMember({"comma", "space"}))
        ->capture_default_str();
    app->add_option("--tick-divisor", tick_divisor, "Tick divisor used for scoring")
        ->check(CLI::PositiveNumber);
    app->add_option("-o,--output", output, "Output file, '-' for stdout")
        ->capture_default_str();
  }

  std::vector<double> read_scores() const {
    std::ifstream in(scores_path);
    if (!in) throw Failure{kExitUsage, "cannot open " + scores_path};
    std::vector<double> out;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      char* end = nullptr;
      const double v = std::strtod(line.c_str(), &end);
      if (end == line.c_str() || (*end != '\0' && *end != ',' && *end != '\r'))
        throw Failure{kExitUsage, scores_path + ":" + std::to_string(lineno) +
                                      ": not a score"};
      out.push_back(v);
    }
    return out;
  }

  int run() {
    DetectorFlags f;
    f.format = format;
    f.tick_divisor = tick_divisor;
    const auto stream = load_stream(input, f);
    const auto scores = read_scores();
    const size_t n = ew_stream_edge_count(stream.get());
    if (scores.size() != n)
      throw Failure{kExitUsage, "score count " + std::to_string(scores.size()) +
                                    " differs from edge count " +
                                    std::to_string(n)};
    std::vector<uint64_t> ticks(n);
    const ew_edge* edges = ew_stream_edges(stream.get());
    for (size_t i = 0; i < n; ++i) ticks[i] = edges[i].tick;
    std::vector<ew_tick_value> series(n);
    size_t count = 0;
    check_runtime(ew_aggregate_by_tick(scores.data(), ticks.data(), n, raw ? 0 : 1,
                                       series.data(), &count),
                  "aggregating");
    std::ostringstream os;
    os << "tick,value\n";
    char buf[64];
    for (size_t i = 0; i < count; ++i) {
      std::snprintf(buf, sizeof buf, "%llu,%.9g\n",
                    static_cast<unsigned long long>(series[i].tick),
                    series[i].value);
      os << buf;
    }
    if (output == "-") {
      std::fputs(os.str().c_str(), stdout);
    } else {
      std::ofstream out(output);
      out << os.str();
      if (!out) throw Failure{kExitRuntime, "cannot write " + output};
    }
    return 0;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"edgewatch: streaming microcluster anomaly detection on edge streams"};
  app.set_version_flag("--version", ew_version());
  app.require_subcommand(1);

  ScoreCommand score;
  score.attach(app.add_subcommand("score", "Score every edge of a stream"));
  EvalCommand eval;
  eval.attach(app.add_subcommand("eval", "ROC-AUC over trials, optionally sweeping a parameter"));
  SynthCommand synth;
  synth.attach(app.add_subcommand("synth", "Generate a labelled synthetic stream"));
  BenchCommand bench;
  bench.attach(app.add_subcommand("bench", "Time scoring over growing prefixes"));
  AggregateCommand aggregate;
  aggregate.attach(app.add_subcommand("aggregate", "Per-tick maximum score, normalized for plotting"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (app.got_subcommand("score")) return score.run();
    if (app.got_subcommand("eval")) return eval.run();
    if (app.got_subcommand("synth")) return synth.run();
    if (app.got_subcommand("bench")) return bench.run();
    if (app.got_subcommand("aggregate")) return aggregate.run();
  } catch (const Failure& f) {
    std::fprintf(stderr, "edgewatch: %s\n", f.message.c_str());
    return f.code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "edgewatch: %s\n", e.what());
    return kExitRuntime;
  }
  return kExitUsage;
}
