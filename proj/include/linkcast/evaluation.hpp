#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "linkcast/chunking.hpp"
#include "linkcast/forecaster.hpp"
#include "linkcast/sampling.hpp"
#include "linkcast/temporal_graph.hpp"

namespace linkcast {

struct ChunkMetrics {
  std::int64_t ordinal = 0;
  Timestamp t_start = 0;
  Timestamp t_end = 0;
  bool half_open = false;
  double t_mid = 0;
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;
  bool evaluable = false;
  double auc = 0;
  double ap = 0;
};

/// Per-chunk and aggregate metrics. Macro means run over evaluable chunks
/// (both classes present); micro values pool every instance. Aggregates with
/// nothing to aggregate are NaN and serialize as null.
struct MetricReport {
  std::vector<ChunkMetrics> per_chunk;  // chunks that produced instances
  double macro_auc = 0;
  double macro_ap = 0;
  double micro_auc = 0;
  double micro_ap = 0;
  std::size_t evaluable_chunks = 0;
  std::size_t skipped_chunks = 0;
  std::size_t empty_chunks = 0;

  nlohmann::ordered_json to_json() const;
  static MetricReport from_json(const nlohmann::json& j);
};

/// Rows `chunk_ordinal,t_mid,auc,ap,n_pos`; non-evaluable chunks leave the
/// metric cells empty.
void write_series_csv(std::ostream& out, const MetricReport& report);

struct EvalOptions {
  std::size_t max_sub_chunk = 0;  // 0 scores each logical chunk in one call
  unsigned threads = 1;           // metric computation only
};

struct EvaluationResult {
  MetricReport report;
  std::vector<std::vector<double>> scores;  // aligned with InstanceSet::chunks[i].instances
};

/// Runs the score -> metrics -> observe loop over the chunks in order. The
/// forecaster must already have seen `begin`; calls go through a
/// ProtocolGuard.
EvaluationResult evaluate(Forecaster& forecaster, const InstanceSet& instances, const EvalOptions& options = {});

/// Uniform permutation inside every equal-timestamp group; group order is kept.
/// Edge positions in `cuts` split a group into parts shuffled separately, so
/// edges never cross a split boundary.
TemporalGraph shuffle_within_snapshots(const TemporalGraph& g, std::uint64_t seed,
                                       std::span<const std::size_t> cuts = {});

struct LeakProbeConfig {
  double train_ratio = 0.7;
  double val_ratio = 0.15;
  BatchScheme batch;
  WindowScheme window;
  NegSamplerSpec sampler;
  std::uint64_t shuffle_seed = 0;  // seed handed to shuffle_within_snapshots
  EvalOptions eval;
};

struct SchemeProbe {
  MetricReport original;
  MetricReport shuffled;
  double delta_macro_auc = 0;      // shuffled - original
  double delta_macro_ap = 0;
  std::optional<double> relative_macro_auc;  // percent; empty if original is 0
  std::optional<double> relative_macro_ap;
};

struct LeakProbeReport {
  SchemeProbe batch;
  SchemeProbe window;
  std::uint64_t shuffle_seed = 0;
  std::uint64_t sampler_seed = 0;

  nlohmann::ordered_json to_json() const;
};

/// Evaluates a fresh forecaster from `factory` on the original graph and on an
/// intra-snapshot shuffle of it, under both schemes, with shared sampler seeds.
/// The shuffle respects the split boundaries.
LeakProbeReport leak_probe(const ForecasterFactory& factory, const TemporalGraph& g, const LeakProbeConfig& config);

struct DiffCell {
  std::string metric;
  double a = 0;
  double b = 0;
  std::optional<double> relative_pct;  // empty when b == 0
};

struct ReportDiff {
  std::vector<DiffCell> cells;
  double mean_abs_change = 0;
  double std_abs_change = 0;  // population

  nlohmann::ordered_json to_json() const;
};

/// 100 * (a - b) / b; empty when b is zero or either side is NaN.
std::optional<double> relative_change(double a, double b);
/// One decimal, round-half-even, with a sign and a trailing '%'.
std::string format_percent(double pct);

struct AbsChangeSummary {
  double mean = 0;
  double stddev = 0;  // population
};
AbsChangeSummary summarize_abs_changes(std::span<const double> changes);

/// Relative change of each aggregate of `a` against baseline `b`.
ReportDiff report_diff(const MetricReport& a, const MetricReport& b);

void write_diff_csv(std::ostream& out, const ReportDiff& diff);

}  // namespace linkcast
