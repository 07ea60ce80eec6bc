// linkcast: batch vs. time-window evaluation of dynamic link forecasters.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "linkcast/errors.hpp"
#include "linkcast/pipeline.hpp"

namespace {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kIngest = 2,
  kContract = 3,
  kNotEvaluable = 4,
};

unsigned default_threads() {
  if (const char* env = std::getenv("LINKCAST_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

struct Options {
  linkcast::RunConfig config;
  bool header = false;
  std::vector<std::size_t> columns;
  std::int64_t resolution = 1;
  std::string anchor = "range-start";
  std::string sampler = "historic";
  bool exclude_positives = false;
  std::size_t negatives_per_positive = 1;
  bool bipartite = false;
};

void add_common(CLI::App* cmd, Options& o, bool needs_sampler) {
  auto& c = o.config;
  cmd->add_option("--input", c.input, "Edge list file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--format", c.format_name, "Edge list format: csv | tsv | ssv")->capture_default_str();
  cmd->add_flag("--header", o.header, "Edge list has a header row");
  cmd->add_option("--columns", o.columns, "Column indices of src,dst,t")->delimiter(',')->expected(3);
  cmd->add_option("--resolution", o.resolution, "Smallest meaningful time unit")->capture_default_str();
  cmd->add_option("--train-ratio", c.train_ratio)->capture_default_str();
  cmd->add_option("--val-ratio", c.val_ratio)->capture_default_str();
  cmd->add_option("--batch-size", c.batch_size, "Batch size b");
  cmd->add_option("--horizon", c.horizon, "Window horizon h in native time units");
  cmd->add_option("--anchor", o.anchor, "Window anchor: zero | range-start")
      ->check(CLI::IsMember({"zero", "range-start"}))
      ->capture_default_str();
  cmd->add_option("--threads", c.threads, "Worker threads (default: $LINKCAST_THREADS or 1)");
  cmd->add_option("--out", c.out, "Output directory")->capture_default_str();
  if (!needs_sampler) return;
  cmd->add_option("--sampler", o.sampler, "Negative sampler")
      ->check(CLI::IsMember({"random", "historic", "inductive"}))
      ->capture_default_str();
  cmd->add_option("--seed", c.seed, "Root seed")->capture_default_str();
  cmd->add_option("--neg-per-pos", o.negatives_per_positive, "Negatives per positive")->capture_default_str();
  cmd->add_flag("--exclude-positives", o.exclude_positives, "Never draw a chunk's own positive pairs");
  cmd->add_flag("--bipartite", o.bipartite, "Draw sources and destinations from their observed roles");
  cmd->add_option("--forecaster", c.forecaster)
      ->check(CLI::IsMember({"edgebank", "recency", "replay"}))
      ->capture_default_str();
  cmd->add_option("--edgebank-mode", c.edgebank_mode,
                  "unlimited | window[:<p>|:repeat|=<duration>] | threshold:<k>|mean")
      ->capture_default_str();
  cmd->add_option("--decay", c.recency_decay, "Recency forecaster decay")->capture_default_str();
  cmd->add_option("--scores", c.scores, "Score file (or directory) for --forecaster replay");
  cmd->add_option("--scheme", c.scheme)->check(CLI::IsMember({"batch", "window", "both"}))->capture_default_str();
  cmd->add_option("--sub-chunk", c.max_sub_chunk, "Score chunks in pieces of at most this many instances");
}

void finalize(Options& o) {
  auto& c = o.config;
  c.format = linkcast::make_format(c.format_name, o.header, o.columns, o.resolution);
  c.anchor = linkcast::parse_anchor(o.anchor);
  c.sampler.kind = linkcast::parse_sampler(o.sampler);
  c.sampler.negatives_per_positive = o.negatives_per_positive;
  c.sampler.collision = o.exclude_positives ? linkcast::CollisionPolicy::ExcludePositives
                                            : linkcast::CollisionPolicy::AllowPositiveCollision;
  c.sampler.bipartite = o.bipartite;
  c.sampler.seed = c.seed;
}

void print_report(const std::string& name, const linkcast::MetricReport& r) {
  std::printf("%-7s macro AUC %.4f  macro AP %.4f  micro AUC %.4f  micro AP %.4f  (%zu chunks, %zu skipped, %zu empty)\n",
              name.c_str(), r.macro_auc, r.macro_ap, r.micro_auc, r.micro_ap, r.evaluable_chunks, r.skipped_chunks,
              r.empty_chunks);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Batch vs. time-window evaluation of dynamic link forecasters"};
  app.require_subcommand(1);
  Options o;
  o.config.threads = default_threads();

  auto* stats = app.add_subcommand("stats", "Dataset statistics and edge activity histogram");
  add_common(stats, o, false);
  std::optional<std::int64_t> bin_width;
  stats->add_option("--bin-width", bin_width, "Activity bin width (default: horizon, else span/50)");

  auto* nmi = app.add_subcommand("nmi", "Timestamp NMI sweep over batch sizes and/or horizons");
  add_common(nmi, o, false);
  std::vector<std::int64_t> batch_grid, window_grid;
  nmi->add_option("--batch-grid", batch_grid, "Batch sizes, comma separated")->delimiter(',');
  nmi->add_option("--window-grid", window_grid, "Horizons, comma separated")->delimiter(',');

  auto* chunks = app.add_subcommand("chunks", "Chunk duration/size diagnostics over the test range");
  add_common(chunks, o, false);
  chunks->add_option("--scheme", o.config.scheme)->check(CLI::IsMember({"batch", "window", "both"}));

  auto* pipeline = app.add_subcommand("pipeline", "Sample, score, evaluate and report");
  add_common(pipeline, o, true);

  auto* leak = app.add_subcommand("leak-test", "Intra-snapshot shuffle probe under both schemes");
  add_common(leak, o, true);

  auto* diff = app.add_subcommand("diff", "Relative change of report A against baseline B");
  std::string diff_a, diff_b;
  std::optional<std::string> diff_out;
  diff->add_option("a", diff_a, "Report JSON")->required()->check(CLI::ExistingFile);
  diff->add_option("b", diff_b, "Baseline report JSON")->required()->check(CLI::ExistingFile);
  diff->add_option("--out", diff_out, "Write diff.json/diff.csv here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (diff->parsed()) {
      const auto d = linkcast::run_diff(diff_a, diff_b,
                                        diff_out ? std::optional<std::filesystem::path>(*diff_out) : std::nullopt);
      std::cout << d.to_json().dump(2) << '\n';
      return kOk;
    }
    finalize(o);
    if (stats->parsed()) {
      const auto r = linkcast::run_stats(o.config, bin_width);
      std::printf("n=%zu m=%zu T=%lld distinct timestamps=%zu edges/timestamp=%.1f ± %.1f T/m=%.4f\n", r.stats.nodes,
                  r.stats.edges, static_cast<long long>(r.stats.duration), r.stats.distinct_timestamps,
                  r.stats.mean_edges_per_timestamp, r.stats.std_edges_per_timestamp, r.stats.temporal_density);
    } else if (nmi->parsed()) {
      const auto r = linkcast::run_nmi(o.config, batch_grid, window_grid);
      for (const auto* sweep : {r.batch ? &*r.batch : nullptr, r.window ? &*r.window : nullptr}) {
        if (!sweep) continue;
        for (const auto& p : sweep->points)
          std::printf("%s %lld  NMI %.4f\n", sweep->kind == linkcast::SweepKind::Batch ? "b" : "h",
                      static_cast<long long>(p.parameter), p.nmi.value);
      }
      if (r.window_vs_batch) std::printf("window vs batch (test range) NMI %.4f\n", r.window_vs_batch->value);
    } else if (chunks->parsed()) {
      for (const auto& [name, s] : linkcast::run_chunks(o.config))
        std::printf("%-7s %s mean %.1f ± %.1f (min %.0f, max %.0f, %zu chunks)\n", name.c_str(),
                    s.durations ? "duration" : "size", s.mean, s.stddev, s.min, s.max, s.values.size());
    } else if (pipeline->parsed()) {
      const auto r = linkcast::run_pipeline(o.config);
      for (const auto& [name, report] : r.reports) print_report(name, report);
      if (r.diff) {
        for (const auto& c : r.diff->cells)
          std::printf("window vs batch %-9s %s\n", c.metric.c_str(),
                      c.relative_pct ? linkcast::format_percent(*c.relative_pct).c_str() : "n/a");
      }
    } else if (leak->parsed()) {
      const auto r = linkcast::run_leak_test(o.config);
      print_report("batch", r.batch.original);
      print_report("batch*", r.batch.shuffled);
      print_report("window", r.window.original);
      print_report("window*", r.window.shuffled);
      std::printf("delta macro AUC: batch %+.6f  window %+.6f\n", r.batch.delta_macro_auc, r.window.delta_macro_auc);
    }
  } catch (const linkcast::IngestError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kIngest;
  } catch (const linkcast::ContractViolation& e) {
    std::fprintf(stderr, "contract violation: %s\n", e.what());
    return kContract;
  } catch (const linkcast::NotEvaluable& e) {
    std::fprintf(stderr, "not evaluable: %s\n", e.what());
    return kNotEvaluable;
  } catch (const linkcast::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kIngest;
  }
  return kOk;
}
