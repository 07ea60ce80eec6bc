#include "linkcast/evaluation.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "linkcast/errors.hpp"
#include "linkcast/metrics.hpp"
#include "linkcast/parallel.hpp"
#include "linkcast/rng.hpp"

namespace linkcast {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

nlohmann::ordered_json number_or_null(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

double number_or_nan(const nlohmann::json& j) { return j.is_null() ? kNaN : j.get<double>(); }

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return kNaN;
  double sum = 0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

}  // namespace

nlohmann::ordered_json MetricReport::to_json() const {
  nlohmann::ordered_json j;
  j["macro_auc"] = number_or_null(macro_auc);
  j["macro_ap"] = number_or_null(macro_ap);
  j["micro_auc"] = number_or_null(micro_auc);
  j["micro_ap"] = number_or_null(micro_ap);
  j["evaluable_chunks"] = evaluable_chunks;
  j["skipped_chunks"] = skipped_chunks;
  j["empty_chunks"] = empty_chunks;
  auto& rows = j["per_chunk"] = nlohmann::ordered_json::array();
  for (const auto& c : per_chunk) {
    nlohmann::ordered_json r;
    r["ordinal"] = c.ordinal;
    r["interval"] = {c.t_start, c.t_end};
    r["interval_kind"] = c.half_open ? "(start,end]" : "[start,end]";
    r["t_mid"] = c.t_mid;
    r["n_pos"] = c.n_pos;
    r["n_neg"] = c.n_neg;
    r["evaluable"] = c.evaluable;
    r["auc"] = c.evaluable ? number_or_null(c.auc) : nullptr;
    r["ap"] = c.evaluable ? number_or_null(c.ap) : nullptr;
    rows.push_back(std::move(r));
  }
  return j;
}

MetricReport MetricReport::from_json(const nlohmann::json& j) {
  MetricReport r;
  r.macro_auc = number_or_nan(j.at("macro_auc"));
  r.macro_ap = number_or_nan(j.at("macro_ap"));
  r.micro_auc = number_or_nan(j.at("micro_auc"));
  r.micro_ap = number_or_nan(j.at("micro_ap"));
  r.evaluable_chunks = j.at("evaluable_chunks").get<std::size_t>();
  r.skipped_chunks = j.at("skipped_chunks").get<std::size_t>();
  r.empty_chunks = j.at("empty_chunks").get<std::size_t>();
  for (const auto& row : j.at("per_chunk")) {
    ChunkMetrics c;
    c.ordinal = row.at("ordinal").get<std::int64_t>();
    c.t_start = row.at("interval").at(0).get<Timestamp>();
    c.t_end = row.at("interval").at(1).get<Timestamp>();
    c.half_open = row.at("interval_kind").get<std::string>() == "(start,end]";
    c.t_mid = row.at("t_mid").get<double>();
    c.n_pos = row.at("n_pos").get<std::size_t>();
    c.n_neg = row.at("n_neg").get<std::size_t>();
    c.evaluable = row.at("evaluable").get<bool>();
    c.auc = number_or_nan(row.at("auc"));
    c.ap = number_or_nan(row.at("ap"));
    r.per_chunk.push_back(c);
  }
  return r;
}

void write_series_csv(std::ostream& out, const MetricReport& report) {
  out << "chunk_ordinal,t_mid,auc,ap,n_pos\n" << std::setprecision(17);
  for (const auto& c : report.per_chunk) {
    out << c.ordinal << ',' << c.t_mid << ',';
    if (c.evaluable) out << c.auc << ',' << c.ap;
    else out << ',';
    out << ',' << c.n_pos << '\n';
  }
}

EvaluationResult evaluate(Forecaster& forecaster, const InstanceSet& instances, const EvalOptions& options) {
  GuardedForecaster guarded(forecaster, /*already_begun=*/true);
  EvaluationResult result;
  result.scores.resize(instances.chunks.size());

  std::vector<TemporalEdge> positives;
  for (std::size_t i = 0; i < instances.chunks.size(); ++i) {
    const auto& ci = instances.chunks[i];
    if (ci.instances.empty()) continue;
    const ChunkContext ctx{ci.chunk.ordinal, ci.chunk.start_time()};
    auto& scores = result.scores[i];
    scores.assign(ci.instances.size(), 0.0);
    const std::span<const EvalInstance> all(ci.instances);
    if (options.max_sub_chunk == 0) {
      guarded.score_chunk(ctx, all, scores);
    } else {
      Chunk whole = ci.chunk;
      whole.edges = {0, ci.instances.size()};
      for (const auto& piece : subdivide_chunk(whole, options.max_sub_chunk)) {
        guarded.score_chunk(ctx, all.subspan(piece.edges.begin, piece.edges.size()),
                            std::span<double>(scores).subspan(piece.edges.begin, piece.edges.size()));
      }
    }
    positives.clear();
    for (const auto& inst : ci.instances) {
      if (inst.label == Label::Positive) positives.push_back({inst.src, inst.dst, inst.t});
    }
    guarded.observe_chunk(ctx, positives);
  }
  guarded.end();

  // Metrics are pure per chunk; compute them after the ordered pass.
  std::vector<std::size_t> occupied;
  for (std::size_t i = 0; i < instances.chunks.size(); ++i) {
    if (instances.chunks[i].instances.empty()) ++result.report.empty_chunks;
    else occupied.push_back(i);
  }
  auto& rows = result.report.per_chunk;
  rows.resize(occupied.size());
  parallel_for(occupied.size(), options.threads, [&](std::size_t k) {
    const auto& ci = instances.chunks[occupied[k]];
    const auto& scores = result.scores[occupied[k]];
    std::vector<Label> labels;
    labels.reserve(ci.instances.size());
    for (const auto& inst : ci.instances) labels.push_back(inst.label);
    ChunkMetrics m;
    m.ordinal = ci.chunk.ordinal;
    m.t_start = ci.chunk.t_start;
    m.t_end = ci.chunk.t_end;
    m.half_open = ci.chunk.half_open;
    m.t_mid = ci.chunk.t_mid();
    for (auto l : labels) (l == Label::Positive ? m.n_pos : m.n_neg) += 1;
    m.evaluable = m.n_pos > 0 && m.n_neg > 0;
    m.auc = m.evaluable ? auc_roc(labels, scores) : kNaN;
    m.ap = m.evaluable ? average_precision(labels, scores) : kNaN;
    rows[k] = m;
  });

  std::vector<double> aucs, aps;
  std::vector<Label> all_labels;
  std::vector<double> all_scores;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k].evaluable) {
      aucs.push_back(rows[k].auc);
      aps.push_back(rows[k].ap);
    } else {
      ++result.report.skipped_chunks;
    }
    const auto& ci = instances.chunks[occupied[k]];
    for (const auto& inst : ci.instances) all_labels.push_back(inst.label);
    const auto& s = result.scores[occupied[k]];
    all_scores.insert(all_scores.end(), s.begin(), s.end());
  }
  auto& report = result.report;
  report.evaluable_chunks = aucs.size();
  report.macro_auc = mean_of(aucs);
  report.macro_ap = mean_of(aps);
  try {
    report.micro_auc = auc_roc(all_labels, all_scores);
  } catch (const NotEvaluable&) {
    report.micro_auc = kNaN;
  }
  try {
    report.micro_ap = average_precision(all_labels, all_scores);
  } catch (const NotEvaluable&) {
    report.micro_ap = kNaN;
  }
  return result;
}

TemporalGraph shuffle_within_snapshots(const TemporalGraph& g, std::uint64_t seed, std::span<const std::size_t> cuts) {
  std::vector<TemporalEdge> edges(g.edges().begin(), g.edges().end());
  Rng rng(purpose_seed(seed, kShufflePurpose));
  const std::span<TemporalEdge> all(edges);
  for (const auto& group : snapshot_groups(g)) {
    std::size_t from = group.range.begin;
    for (auto cut : cuts) {
      if (cut <= from || cut >= group.range.end) continue;
      rng.shuffle(all.subspan(from, cut - from));
      from = cut;
    }
    rng.shuffle(all.subspan(from, group.range.end - from));
  }
  return g.with_edges(std::move(edges));
}

namespace {

MetricReport run_scheme(const ForecasterFactory& factory, const TemporalGraph& g, const ChronologicalSplit& split,
                        const ChunkScheme& scheme, const LeakProbeConfig& config) {
  const auto assignment = assign_chunks(g, split.test(), scheme);
  const auto instances = generate_instances(g, split, assignment, config.sampler);
  auto forecaster = factory();
  forecaster->begin(g.edges(split.history()));
  return evaluate(*forecaster, instances, config.eval).report;
}

SchemeProbe compare(MetricReport original, MetricReport shuffled) {
  SchemeProbe p;
  p.delta_macro_auc = shuffled.macro_auc - original.macro_auc;
  p.delta_macro_ap = shuffled.macro_ap - original.macro_ap;
  p.relative_macro_auc = relative_change(shuffled.macro_auc, original.macro_auc);
  p.relative_macro_ap = relative_change(shuffled.macro_ap, original.macro_ap);
  p.original = std::move(original);
  p.shuffled = std::move(shuffled);
  return p;
}

nlohmann::ordered_json probe_json(const SchemeProbe& p) {
  nlohmann::ordered_json j;
  j["delta_macro_auc"] = number_or_null(p.delta_macro_auc);
  j["delta_macro_ap"] = number_or_null(p.delta_macro_ap);
  j["relative_macro_auc_pct"] = p.relative_macro_auc ? nlohmann::ordered_json(*p.relative_macro_auc) : nullptr;
  j["relative_macro_ap_pct"] = p.relative_macro_ap ? nlohmann::ordered_json(*p.relative_macro_ap) : nullptr;
  j["original"] = p.original.to_json();
  j["shuffled"] = p.shuffled.to_json();
  return j;
}

}  // namespace

nlohmann::ordered_json LeakProbeReport::to_json() const {
  nlohmann::ordered_json j;
  j["shuffle_seed"] = shuffle_seed;
  j["sampler_seed"] = sampler_seed;
  j["batch"] = probe_json(batch);
  j["window"] = probe_json(window);
  return j;
}

LeakProbeReport leak_probe(const ForecasterFactory& factory, const TemporalGraph& g, const LeakProbeConfig& config) {
  const auto split = chronological_split(g, config.train_ratio, config.val_ratio);
  const std::size_t cuts[] = {split.train_end, split.val_end};
  const auto shuffled = shuffle_within_snapshots(g, config.shuffle_seed, cuts);
  const auto split_shuffled = chronological_split(shuffled, config.train_ratio, config.val_ratio);

  LeakProbeReport report;
  report.shuffle_seed = config.shuffle_seed;
  report.sampler_seed = config.sampler.seed;
  report.batch = compare(run_scheme(factory, g, split, config.batch, config),
                         run_scheme(factory, shuffled, split_shuffled, config.batch, config));
  report.window = compare(run_scheme(factory, g, split, config.window, config),
                          run_scheme(factory, shuffled, split_shuffled, config.window, config));
  return report;
}

std::optional<double> relative_change(double a, double b) {
  if (b == 0 || std::isnan(a) || std::isnan(b)) return std::nullopt;
  return 100.0 * (a - b) / b;
}

std::string format_percent(double pct) {
  // nearbyint follows the default round-to-nearest-even mode.
  double r = std::nearbyint(pct * 10.0) / 10.0;
  if (r == 0) r = 0;  // drop negative zero
  std::ostringstream out;
  out << std::fixed << std::setprecision(1) << (r >= 0 ? "+" : "") << r << '%';
  return out.str();
}

AbsChangeSummary summarize_abs_changes(std::span<const double> changes) {
  AbsChangeSummary s;
  if (changes.empty()) return s;
  double sum = 0;
  for (double c : changes) sum += std::fabs(c);
  s.mean = sum / static_cast<double>(changes.size());
  double ss = 0;
  for (double c : changes) ss += (std::fabs(c) - s.mean) * (std::fabs(c) - s.mean);
  s.stddev = std::sqrt(ss / static_cast<double>(changes.size()));
  return s;
}

ReportDiff report_diff(const MetricReport& a, const MetricReport& b) {
  ReportDiff d;
  const std::pair<const char*, std::pair<double, double>> metrics[] = {
      {"macro_auc", {a.macro_auc, b.macro_auc}},
      {"macro_ap", {a.macro_ap, b.macro_ap}},
      {"micro_auc", {a.micro_auc, b.micro_auc}},
      {"micro_ap", {a.micro_ap, b.micro_ap}},
  };
  std::vector<double> changes;
  for (const auto& [name, values] : metrics) {
    DiffCell c{name, values.first, values.second, relative_change(values.first, values.second)};
    if (c.relative_pct) changes.push_back(*c.relative_pct);
    d.cells.push_back(c);
  }
  const auto summary = summarize_abs_changes(changes);
  d.mean_abs_change = summary.mean;
  d.std_abs_change = summary.stddev;
  return d;
}

nlohmann::ordered_json ReportDiff::to_json() const {
  nlohmann::ordered_json j;
  auto& rows = j["metrics"] = nlohmann::ordered_json::array();
  for (const auto& c : cells) {
    nlohmann::ordered_json r;
    r["metric"] = c.metric;
    r["a"] = number_or_null(c.a);
    r["b"] = number_or_null(c.b);
    r["relative_pct"] = c.relative_pct ? nlohmann::ordered_json(*c.relative_pct) : nullptr;
    r["display"] = c.relative_pct ? format_percent(*c.relative_pct) : "n/a";
    rows.push_back(std::move(r));
  }
  j["mean_abs_change_pct"] = mean_abs_change;
  j["std_abs_change_pct"] = std_abs_change;
  j["display"] = format_percent(mean_abs_change).substr(1) + "±" + format_percent(std_abs_change).substr(1);
  return j;
}

void write_diff_csv(std::ostream& out, const ReportDiff& diff) {
  out << "metric,a,b,relative_pct,display\n" << std::setprecision(17);
  for (const auto& c : diff.cells) {
    out << c.metric << ',' << c.a << ',' << c.b << ',';
    if (c.relative_pct) out << *c.relative_pct << ',' << format_percent(*c.relative_pct);
    else out << ",n/a";
    out << '\n';
  }
}

}  // namespace linkcast
