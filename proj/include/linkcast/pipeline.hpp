#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "linkcast/chunking.hpp"
#include "linkcast/edgebank.hpp"
#include "linkcast/evaluation.hpp"
#include "linkcast/info_metrics.hpp"
#include "linkcast/sampling.hpp"
#include "linkcast/temporal_graph.hpp"

namespace linkcast {

/// Everything a command needs; embedded verbatim in every report.
struct RunConfig {
  std::filesystem::path input;
  std::string format_name = "csv";
  EdgeListFormat format;
  double train_ratio = 0.7;
  double val_ratio = 0.15;
  std::optional<std::size_t> batch_size;
  std::optional<std::int64_t> horizon;
  AnchorRule anchor = AnchorRule::RangeStart;
  NegSamplerSpec sampler;
  std::string forecaster = "edgebank";  // edgebank | recency | replay
  std::string edgebank_mode = "unlimited";
  double recency_decay = 1.0;
  std::filesystem::path scores;  // replay input: a score file, or a directory of scores_<scheme>.csv
  std::string scheme = "window";  // batch | window | both
  std::uint64_t seed = 0;
  std::size_t max_sub_chunk = 0;
  unsigned threads = 1;
  std::filesystem::path out = "out";

  nlohmann::ordered_json to_json() const;
};

/// Maps a format name (csv, tsv, ssv) plus header/column overrides.
EdgeListFormat make_format(const std::string& name, bool header, const std::vector<std::size_t>& columns,
                           std::int64_t resolution);

/// Tracks files written into an output directory and deletes them again if
/// the command fails before `commit`.
class OutputDir {
 public:
  explicit OutputDir(std::filesystem::path dir);
  ~OutputDir();
  OutputDir(const OutputDir&) = delete;
  OutputDir& operator=(const OutputDir&) = delete;

  std::filesystem::path file(const std::string& name);
  void write(const std::string& name, const std::string& content);
  void commit() { committed_ = true; }

 private:
  std::filesystem::path dir_;
  bool created_dir_ = false;
  bool committed_ = false;
  std::vector<std::filesystem::path> written_;
};

struct StatsResult {
  DatasetStats stats;
  std::vector<std::size_t> activity;
  std::int64_t bin_width = 1;
};

StatsResult run_stats(const RunConfig& config, std::optional<std::int64_t> bin_width = std::nullopt);

struct NmiResult {
  std::optional<NmiSweep> batch;
  std::optional<NmiSweep> window;
  std::optional<NmiReport> window_vs_batch;  // over the test range, when b and h are both given
};

NmiResult run_nmi(const RunConfig& config, const std::vector<std::int64_t>& batch_grid,
                  const std::vector<std::int64_t>& window_grid);

/// Chunk duration/size diagnostics plus the assignment export over the test range.
std::map<std::string, ChunkStats> run_chunks(const RunConfig& config);

struct PipelineResult {
  std::map<std::string, MetricReport> reports;  // keyed by scheme name
  std::optional<ReportDiff> diff;               // window relative to batch
};

PipelineResult run_pipeline(const RunConfig& config);

LeakProbeReport run_leak_test(const RunConfig& config);

/// Relative change of report `a` against baseline `b`; both files must embed
/// the same input fingerprint.
ReportDiff run_diff(const std::filesystem::path& a, const std::filesystem::path& b,
                    const std::optional<std::filesystem::path>& out_dir);

/// Forecaster named by the config; replay needs the instance fingerprint and scheme.
std::unique_ptr<Forecaster> make_forecaster(const RunConfig& config, const TemporalGraph& g,
                                            const std::string& scheme_name, const std::string& fingerprint);

}  // namespace linkcast
