#include "linkcast/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <fstream>
#include <sstream>

#include "linkcast/errors.hpp"
#include "linkcast/instance_io.hpp"
#include "linkcast/svg_chart.hpp"

namespace linkcast {

namespace {

std::string dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

nlohmann::ordered_json envelope(const RunConfig& config, const std::string& input_fingerprint) {
  nlohmann::ordered_json j;
  j["config"] = config.to_json();
  j["input_fingerprint"] = input_fingerprint;
  return j;
}

struct Loaded {
  TemporalGraph graph;
  std::string fingerprint;
};

Loaded load(const RunConfig& config) {
  Loaded l{load_edge_list(config.input, config.format), file_fingerprint(config.input)};
  return l;
}

ChronologicalSplit split_with_warning(const TemporalGraph& g, const RunConfig& config) {
  auto split = chronological_split(g, config.train_ratio, config.val_ratio);
  if (split.boundary_shared) {
    std::fprintf(stderr, "warning: a timestamp straddles a split boundary (t_test=%lld)\n",
                 static_cast<long long>(split.t_test));
  }
  return split;
}

std::vector<std::pair<std::string, ChunkScheme>> schemes_of(const RunConfig& config) {
  std::vector<std::pair<std::string, ChunkScheme>> out;
  const bool batch = config.scheme == "batch" || config.scheme == "both";
  const bool window = config.scheme == "window" || config.scheme == "both";
  if (!batch && !window) throw ConfigError("unknown scheme '" + config.scheme + "' (expected batch|window|both)");
  if (batch) {
    if (!config.batch_size) throw ConfigError("the batch scheme needs --batch-size");
    out.emplace_back("batch", BatchScheme{*config.batch_size});
  }
  if (window) {
    if (!config.horizon) throw ConfigError("the window scheme needs --horizon");
    out.emplace_back("window", WindowScheme{*config.horizon, config.anchor});
  }
  return out;
}

nlohmann::ordered_json stats_json(const ChunkStats& s) {
  nlohmann::ordered_json j;
  j["quantity"] = s.durations ? "duration" : "size";
  j["chunks"] = s.values.size();
  j["mean"] = s.mean;
  j["std"] = s.stddev;
  j["min"] = s.min;
  j["max"] = s.max;
  j["histogram"] = {{"lo", s.histogram.lo}, {"width", s.histogram.width}, {"counts", s.histogram.counts}};
  return j;
}

nlohmann::ordered_json nmi_json(const NmiReport& r) {
  return {{"nmi", r.value}, {"h_x", r.h_x}, {"h_y", r.h_y}, {"mi", r.mi}, {"samples", r.samples}};
}

void write_stream(OutputDir& dir, const std::string& name, const std::function<void(std::ostream&)>& fn) {
  std::ofstream out(dir.file(name), std::ios::binary);
  if (!out) throw IngestError("cannot write " + dir.file(name).string());
  fn(out);
  if (!out) throw IngestError("write failed for " + name);
}

std::string svg_of(const LineChart& chart) {
  std::ostringstream out;
  render_svg(out, chart);
  return out.str();
}

}  // namespace

nlohmann::ordered_json RunConfig::to_json() const {
  nlohmann::ordered_json j;
  j["input"] = input.string();
  j["format"] = {{"name", format_name},
                 {"header", format.has_header},
                 {"columns", {format.src_column, format.dst_column, format.time_column}},
                 {"resolution", format.resolution}};
  j["train_ratio"] = train_ratio;
  j["val_ratio"] = val_ratio;
  j["batch_size"] = batch_size ? nlohmann::ordered_json(*batch_size) : nullptr;
  j["horizon"] = horizon ? nlohmann::ordered_json(*horizon) : nullptr;
  j["anchor"] = to_string(anchor);
  j["sampler"] = sampler.describe();
  j["forecaster"] = forecaster;
  if (forecaster == "edgebank") j["edgebank_mode"] = edgebank_mode;
  if (forecaster == "recency") j["recency_decay"] = recency_decay;
  if (forecaster == "replay") j["scores"] = scores.string();
  j["scheme"] = scheme;
  j["seed"] = seed;
  j["sampling_seed"] = purpose_seed(seed, kSamplingPurpose);
  j["shuffle_seed"] = purpose_seed(seed, kShufflePurpose);
  j["max_sub_chunk"] = max_sub_chunk;
  j["headline"] = "macro";
  return j;
}

EdgeListFormat make_format(const std::string& name, bool header, const std::vector<std::size_t>& columns,
                           std::int64_t resolution) {
  EdgeListFormat f;
  if (name == "csv") f.delimiter = ',';
  else if (name == "tsv") f.delimiter = '\t';
  else if (name == "ssv") f.delimiter = ' ';
  else throw ConfigError("unknown format '" + name + "' (expected csv|tsv|ssv)");
  f.has_header = header;
  if (!columns.empty()) {
    if (columns.size() != 3) throw ConfigError("--columns takes three indices: src,dst,t");
    f.src_column = columns[0];
    f.dst_column = columns[1];
    f.time_column = columns[2];
  }
  if (resolution < 1) throw ConfigError("resolution must be positive");
  f.resolution = resolution;
  return f;
}

OutputDir::OutputDir(std::filesystem::path dir) : dir_(std::move(dir)) {
  if (!std::filesystem::exists(dir_)) {
    std::filesystem::create_directories(dir_);
    created_dir_ = true;
  }
}

OutputDir::~OutputDir() {
  if (committed_) return;
  std::error_code ec;
  for (const auto& p : written_) std::filesystem::remove(p, ec);
  if (created_dir_ && std::filesystem::is_empty(dir_, ec)) std::filesystem::remove(dir_, ec);
}

std::filesystem::path OutputDir::file(const std::string& name) {
  auto p = dir_ / name;
  if (std::find(written_.begin(), written_.end(), p) == written_.end()) written_.push_back(p);
  return p;
}

void OutputDir::write(const std::string& name, const std::string& content) {
  std::ofstream out(file(name), std::ios::binary);
  out << content;
  if (!out) throw IngestError("cannot write " + (dir_ / name).string());
}

StatsResult run_stats(const RunConfig& config, std::optional<std::int64_t> bin_width) {
  const auto [g, fingerprint] = load(config);
  StatsResult r;
  r.stats = dataset_stats(g);
  r.bin_width = bin_width.value_or(config.horizon.value_or(std::max<std::int64_t>(1, (g.duration() + 49) / 50)));
  r.activity = activity_histogram(g, r.bin_width);

  OutputDir dir(config.out);
  auto j = envelope(config, fingerprint);
  j["stats"] = {{"nodes", r.stats.nodes},
                {"edges", r.stats.edges},
                {"duration", r.stats.duration},
                {"distinct_timestamps", r.stats.distinct_timestamps},
                {"mean_edges_per_timestamp", r.stats.mean_edges_per_timestamp},
                {"std_edges_per_timestamp", r.stats.std_edges_per_timestamp},
                {"temporal_density", r.stats.temporal_density}};
  j["activity_bin_width"] = r.bin_width;
  dir.write("stats.json", dump(j));
  dir.write("graph_meta.json", graph_metadata_json(g));
  write_stream(dir, "activity.csv", [&](std::ostream& out) {
    out << "bin_start,edges\n";
    for (std::size_t i = 0; i < r.activity.size(); ++i)
      out << g.t_min() + static_cast<std::int64_t>(i) * r.bin_width << ',' << r.activity[i] << '\n';
  });
  dir.commit();
  return r;
}

NmiResult run_nmi(const RunConfig& config, const std::vector<std::int64_t>& batch_grid,
                  const std::vector<std::int64_t>& window_grid) {
  if (batch_grid.empty() && window_grid.empty()) throw ConfigError("the NMI sweep needs a batch or window grid");
  const auto [g, fingerprint] = load(config);
  NmiResult r;
  if (!batch_grid.empty()) r.batch = nmi_sweep(g, SweepKind::Batch, batch_grid, config.anchor, config.threads);
  if (!window_grid.empty()) r.window = nmi_sweep(g, SweepKind::Window, window_grid, config.anchor, config.threads);
  if (config.batch_size && config.horizon) {
    const auto split = split_with_warning(g, config);
    r.window_vs_batch = window_batch_nmi(assign_windows(g, split.test(), *config.horizon, config.anchor),
                                         assign_batches(g, split.test(), *config.batch_size));
  }

  OutputDir dir(config.out);
  auto j = envelope(config, fingerprint);
  LineChart chart;
  chart.title = "Timestamp NMI";
  chart.y_label = "NMI";
  chart.log_x = true;
  chart.fixed_unit_y = true;
  const auto add = [&](const NmiSweep& sweep, const std::string& name, const std::string& color) {
    ChartSeries s{name, color, {}, {}};
    auto rows = nlohmann::ordered_json::array();
    for (const auto& p : sweep.points) {
      s.x.push_back(static_cast<double>(p.parameter));
      s.y.push_back(p.nmi.value);
      auto row = nmi_json(p.nmi);
      row["parameter"] = p.parameter;
      rows.push_back(row);
    }
    j[name] = {{"points", rows}, {"max_parameter", sweep.points[sweep.argmax].parameter},
               {"max_nmi", sweep.points[sweep.argmax].nmi.value}};
    write_stream(dir, "nmi_" + name + ".csv", [&](std::ostream& out) { write_sweep_csv(out, sweep); });
    chart.series.push_back(std::move(s));
  };
  if (r.batch) add(*r.batch, "batch", "#1f77b4");
  if (r.window) add(*r.window, "window", "#ff7f0e");
  chart.x_label = r.batch && r.window ? "batch size / horizon" : r.batch ? "batch size" : "horizon";
  if (r.window_vs_batch) j["window_vs_batch_test"] = nmi_json(*r.window_vs_batch);
  dir.write("nmi.json", dump(j));
  dir.write("nmi.svg", svg_of(chart));
  dir.commit();
  return r;
}

std::map<std::string, ChunkStats> run_chunks(const RunConfig& config) {
  const auto [g, fingerprint] = load(config);
  const auto split = split_with_warning(g, config);
  OutputDir dir(config.out);
  auto j = envelope(config, fingerprint);
  std::map<std::string, ChunkStats> out;
  std::map<std::string, ChunkAssignment> assignments;
  for (const auto& [name, scheme] : schemes_of(config)) {
    auto a = assign_chunks(g, split.test(), scheme);
    out[name] = chunk_stats(a);
    j[name] = stats_json(out[name]);
    j[name]["occupied_chunks"] = a.occupied_chunks();
    write_stream(dir, "assignment_" + name + ".csv", [&](std::ostream& o) { write_assignment_csv(o, g, a); });
    assignments.emplace(name, std::move(a));
  }
  if (assignments.count("batch") && assignments.count("window"))
    j["window_vs_batch_nmi"] = nmi_json(window_batch_nmi(assignments.at("window"), assignments.at("batch")));
  dir.write("chunks.json", dump(j));
  dir.commit();
  return out;
}

std::unique_ptr<Forecaster> make_forecaster(const RunConfig& config, const TemporalGraph& g,
                                            const std::string& scheme_name, const std::string& fingerprint) {
  if (config.forecaster == "edgebank") return std::make_unique<EdgeBank>(parse_edgebank_mode(config.edgebank_mode));
  if (config.forecaster == "recency") return std::make_unique<RecencyForecaster>(config.recency_decay);
  if (config.forecaster == "replay") {
    if (config.scores.empty()) throw ConfigError("the replay forecaster needs --scores");
    auto path = config.scores;
    if (std::filesystem::is_directory(path)) path /= "scores_" + scheme_name + ".csv";
    else if (config.scheme == "both") throw ConfigError("--scheme both with replay needs --scores <directory>");
    auto file = read_score_file(path, g, fingerprint);
    return std::make_unique<ReplayForecaster>(std::move(file.rows));
  }
  throw ConfigError("unknown forecaster '" + config.forecaster + "' (expected edgebank|recency|replay)");
}

PipelineResult run_pipeline(const RunConfig& config) {
  const auto [g, fingerprint] = load(config);
  const auto split = split_with_warning(g, config);
  const auto schemes = schemes_of(config);

  OutputDir dir(config.out);
  dir.write("graph_meta.json", graph_metadata_json(g));
  PipelineResult result;
  LineChart chart;
  chart.title = "Per-chunk AUC-ROC over time";
  chart.x_label = "time";
  chart.y_label = "AUC-ROC";
  chart.fixed_unit_y = true;
  for (const auto& [name, scheme] : schemes) {
    auto spec = config.sampler;
    spec.seed = config.seed;
    const auto assignment = assign_chunks(g, split.test(), scheme);
    const auto instances = generate_instances(g, split, assignment, spec, config.threads);
    const auto header = make_header(fingerprint, instances);
    write_stream(dir, "instances_" + name + ".csv",
                 [&](std::ostream& out) { write_instances(out, g, instances, header); });

    auto forecaster = make_forecaster(config, g, name, header.fingerprint());
    forecaster->begin(g.edges(split.history()));
    auto evaluation = evaluate(*forecaster, instances, {config.max_sub_chunk, config.threads});
    if (evaluation.report.evaluable_chunks == 0)
      throw NotEvaluable("no " + name + " chunk has both positive and negative instances");

    write_stream(dir, "scores_" + name + ".csv",
                 [&](std::ostream& out) { write_scores(out, g, instances, evaluation.scores, header); });
    auto j = envelope(config, fingerprint);
    j["scheme"] = describe(scheme);
    j["instance_fingerprint"] = header.fingerprint();
    j["forecaster"] = forecaster->describe();
    j["split"] = {{"train_end", split.train_end}, {"val_end", split.val_end}, {"edges", split.edge_count},
                  {"t_test", split.t_test}, {"boundary_shared", split.boundary_shared}};
    j["chunk_stats"] = stats_json(chunk_stats(assignment));
    nlohmann::ordered_json pools = nlohmann::ordered_json::array();
    for (const auto& ci : instances.chunks) {
      if (ci.positives > 0) pools.push_back({ci.chunk.ordinal, ci.pool_size, ci.fallbacks});
    }
    j["negative_pool"] = {{"columns", {"ordinal", "pool_size", "fallbacks"}}, {"rows", pools}};
    j["metrics"] = evaluation.report.to_json();
    dir.write("report_" + name + ".json", dump(j));
    write_stream(dir, "series_" + name + ".csv",
                 [&](std::ostream& out) { write_series_csv(out, evaluation.report); });

    ChartSeries s{name, name == "batch" ? "#1f77b4" : "#ff7f0e", {}, {}};
    for (const auto& c : evaluation.report.per_chunk) {
      s.x.push_back(c.t_mid);
      s.y.push_back(c.evaluable ? c.auc : std::nan(""));
    }
    chart.series.push_back(std::move(s));
    result.reports.emplace(name, std::move(evaluation.report));
  }
  dir.write("auc_over_time.svg", svg_of(chart));

  if (result.reports.size() == 2) {
    result.diff = report_diff(result.reports.at("window"), result.reports.at("batch"));
    auto j = envelope(config, fingerprint);
    j["a"] = "window";
    j["b"] = "batch";
    j["diff"] = result.diff->to_json();
    dir.write("diff.json", dump(j));
    write_stream(dir, "diff.csv", [&](std::ostream& out) { write_diff_csv(out, *result.diff); });
  }
  dir.commit();
  return result;
}

LeakProbeReport run_leak_test(const RunConfig& config) {
  const auto [g, fingerprint] = load(config);
  if (!config.batch_size || !config.horizon) throw ConfigError("the leak test needs --batch-size and --horizon");
  if (config.forecaster == "replay") throw ConfigError("the leak test needs a built-in forecaster");
  LeakProbeConfig probe;
  probe.train_ratio = config.train_ratio;
  probe.val_ratio = config.val_ratio;
  probe.batch = BatchScheme{*config.batch_size};
  probe.window = WindowScheme{*config.horizon, config.anchor};
  probe.sampler = config.sampler;
  probe.sampler.seed = config.seed;
  probe.shuffle_seed = config.seed;
  probe.eval = {config.max_sub_chunk, config.threads};
  const ForecasterFactory factory = [&] { return make_forecaster(config, g, "", ""); };
  auto report = leak_probe(factory, g, probe);

  OutputDir dir(config.out);
  auto j = envelope(config, fingerprint);
  j["probe"] = report.to_json();
  j["probe"]["shuffle_stream_seed"] = purpose_seed(config.seed, kShufflePurpose);
  j["probe"]["sampling_stream_seed"] = purpose_seed(config.seed, kSamplingPurpose);
  dir.write("leak_probe.json", dump(j));
  write_stream(dir, "leak_probe.csv", [&](std::ostream& out) {
    out << "scheme,order,macro_auc,macro_ap,micro_auc,micro_ap\n" << std::setprecision(17);
    const auto row = [&](const char* scheme, const char* order, const MetricReport& m) {
      out << scheme << ',' << order << ',' << m.macro_auc << ',' << m.macro_ap << ',' << m.micro_auc << ','
          << m.micro_ap << '\n';
    };
    row("batch", "original", report.batch.original);
    row("batch", "shuffled", report.batch.shuffled);
    row("window", "original", report.window.original);
    row("window", "shuffled", report.window.shuffled);
  });
  dir.commit();
  return report;
}

ReportDiff run_diff(const std::filesystem::path& a, const std::filesystem::path& b,
                    const std::optional<std::filesystem::path>& out_dir) {
  const auto read = [](const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw IngestError("cannot open " + p.string());
    try {
      return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw IngestError(p.string() + ": " + e.what());
    }
  };
  const auto ja = read(a);
  const auto jb = read(b);
  const auto fa = ja.value("input_fingerprint", std::string());
  const auto fb = jb.value("input_fingerprint", std::string());
  if (fa.empty() || fa != fb)
    throw ConfigError("reports were produced from different inputs (" + fa + " vs " + fb + "); refusing to diff");
  ReportDiff diff;
  try {
    diff = report_diff(MetricReport::from_json(ja.at("metrics")), MetricReport::from_json(jb.at("metrics")));
  } catch (const nlohmann::json::exception& e) {
    throw IngestError(std::string("malformed report: ") + e.what());
  }
  if (out_dir) {
    OutputDir dir(*out_dir);
    nlohmann::ordered_json j;
    j["input_fingerprint"] = fa;
    j["a"] = a.string();
    j["b"] = b.string();
    j["diff"] = diff.to_json();
    dir.write("diff.json", dump(j));
    write_stream(dir, "diff.csv", [&](std::ostream& out) { write_diff_csv(out, diff); });
    dir.commit();
  }
  return diff;
}

}  // namespace linkcast
