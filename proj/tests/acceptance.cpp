// Acceptance suite: one PASS/FAIL line per criterion. Exit status is nonzero
// if any gating criterion fails. Criterion 10 runs only when LINKCAST_ENRON
// names an edge list (src,dst,t in seconds; set LINKCAST_ENRON_HEADER=1 if it
// has a header row).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "linkcast/edgebank.hpp"
#include "linkcast/evaluation.hpp"
#include "linkcast/info_metrics.hpp"
#include "linkcast/metrics.hpp"
#include "linkcast/pipeline.hpp"
#include "oracles.hpp"

using namespace linkcast;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  double time_limit_s;  // 0: none
  bool gating;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome worked_example() {
  const std::vector<std::int64_t> x = {1, 2, 2, 4, 5, 5}, y = {1, 1, 2, 2, 3, 3}, z = {1, 2, 2, 3, 4, 4};
  // Derive the same sequences from the graph to exercise the chunkers too.
  const auto g = testing::six_edge_graph();
  const EdgeRange all{0, g.edge_count()};
  std::vector<std::int64_t> gx;
  for (auto e : g.edges()) gx.push_back(e.t);
  const auto gy = assign_batches(g, all, 2).compressed_labels();
  const auto gz = assign_windows(g, all, 1, AnchorRule::AbsoluteZero).compressed_labels();
  if (gx != x || gy != y || gz != z) return {false, "label sequences differ from the worked example"};
  const struct {
    const char* name;
    double got, want;
  } checks[] = {
      {"H(Y)", entropy(y), 1.099},
      {"I(X,Y)", mutual_information(x, y), 0.868},
      {"I(X,Z)", mutual_information(x, z), 1.330},
      {"NMI(X,Y)", nmi(x, y).value, 0.715},
      {"NMI(X,Z)", nmi(x, z).value, 1.0},
      {"NMI(Y,Z)", window_batch_nmi(assign_windows(g, all, 1, AnchorRule::AbsoluteZero), assign_batches(g, all, 2)).value,
       0.715},
  };
  std::string detail;
  bool ok = true;
  for (const auto& c : checks) {
    ok = ok && std::fabs(c.got - c.want) <= 1e-3;
    detail += fmt("%s=%.4f ", c.name, c.got);
  }
  return {ok, detail};
}

Outcome information_loss() {
  std::vector<TemporalEdge> edges;
  for (int t = 0; t < 10000; ++t) edges.push_back({static_cast<NodeId>(t % 97), static_cast<NodeId>((t * 31 + 1) % 97), t});
  const auto g = testing::make_graph(97, edges);
  std::vector<std::int64_t> grid;
  for (std::int64_t b = 1; b <= 1024; b *= 2) grid.push_back(b);
  const auto sweep = nmi_sweep(g, SweepKind::Batch, grid);
  const double hx = std::log(10000.0);
  bool ok = std::fabs(sweep.points[0].nmi.value - 1.0) <= 1e-12;
  double prev = 2, worst = 0;
  for (const auto& p : sweep.points) {
    ok = ok && p.nmi.value <= prev;
    prev = p.nmi.value;
    // Closed form with H(Y) from the batch sizes directly.
    const double b = static_cast<double>(p.parameter);
    const double full = std::floor(10000.0 / b), rest = 10000.0 - full * b;
    double hy = -full * (b / 10000.0) * std::log(b / 10000.0);
    if (rest > 0) hy -= (rest / 10000.0) * std::log(rest / 10000.0);
    worst = std::max(worst, std::fabs(p.nmi.value - 2 * hy / (hx + hy)));
  }
  ok = ok && worst <= 1e-9;
  return {ok, fmt("NMI(b=1)=%.15f NMI(b=1024)=%.4f max |closed form - NMI|=%.2e", sweep.points[0].nmi.value,
                  sweep.points.back().nmi.value, worst)};
}

Outcome window_preserves() {
  std::vector<TemporalEdge> edges;
  std::mt19937_64 rng(3);
  for (int s = 1; s <= 50; ++s)
    for (int i = 0; i < 300; ++i) edges.push_back({static_cast<NodeId>(rng() % 500), static_cast<NodeId>(rng() % 500), s});
  const auto g = testing::make_graph(500, edges);
  const double window = window_timestamp_nmi(g, 1).value;
  std::size_t violations = 0, tested = 0;
  double max_other = 0;
  const auto check = [&](std::size_t b) {
    const double v = batch_timestamp_nmi(g, b).value;
    ++tested;
    if (b != 300) {
      max_other = std::max(max_other, v);
      if (!(v < 1.0)) ++violations;
    }
  };
  for (std::size_t b = 1; b <= 1200; ++b) check(b);
  for (std::size_t b = 1500; b <= 15000; b += 300) check(b);
  check(15001);
  const double at300 = batch_timestamp_nmi(g, 300).value;
  return {window == 1.0 && violations == 0,
          fmt("window NMI=%.17g, batch NMI(b=300)=%.6f, max over %zu other b=%.6f", window, at300, tested - 1, max_other)};
}

Outcome burst() {
  std::vector<TemporalEdge> edges;
  for (int i = 0; i < 600; ++i) edges.push_back({0, 1, i});
  for (int i = 0; i < 1705; ++i) edges.push_back({static_cast<NodeId>(i % 50), static_cast<NodeId>(50 + i % 30), 5000});
  for (int i = 0; i < 10; ++i) edges.push_back({2, 3, 6000 + i});
  const auto g = testing::make_graph(80, edges);
  const EdgeRange range{600, 600 + 1705};
  const auto batches = assign_batches(g, range, 200);
  const auto windows = assign_windows(g, range, 1);
  // Same check on the full stream: the burst starts at edge 600, a multiple of 200.
  const auto full = assign_batches(g, {0, g.edge_count()}, 200);
  std::size_t burst_batches = 0;
  for (const auto& c : full.chunks) burst_batches += c.t_start <= 5000 && c.t_end >= 5000;
  const auto full_windows = assign_windows(g, {0, g.edge_count()}, 1);
  std::size_t burst_windows = 0;
  for (const auto& c : full_windows.chunks) burst_windows += c.size() > 0 && c.t_end == 5000;
  const bool ok = batches.chunks.size() == 9 && windows.occupied_chunks() == 1 && burst_batches == 9 && burst_windows == 1;
  return {ok, fmt("batches=%zu occupied windows=%zu (in full stream: %zu batches, %zu window)", batches.chunks.size(),
                  windows.occupied_chunks(), burst_batches, burst_windows)};
}

Outcome metric_oracles() {
  std::mt19937_64 rng(5);
  double worst_auc = 0, worst_ap = 0;
  std::size_t binary_cases = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 999;
    std::vector<Label> labels(n);
    std::vector<double> scores(n);
    const int mode = trial % 4;  // 0: binary, 1: few levels, 2: continuous, 3: all tied
    for (std::size_t i = 0; i < n; ++i) {
      labels[i] = rng() % 3 == 0 ? Label::Positive : Label::Negative;
      switch (mode) {
        case 0: scores[i] = static_cast<double>(rng() % 2); break;
        case 1: scores[i] = static_cast<double>(rng() % 5) * 0.25; break;
        case 2: scores[i] = std::uniform_real_distribution<double>(0, 1)(rng); break;
        default: scores[i] = 0.5;
      }
    }
    labels[0] = Label::Positive;
    labels[n - 1] = Label::Negative;
    binary_cases += mode == 0;
    worst_auc = std::max(worst_auc, std::fabs(auc_roc(labels, scores) - testing::oracle_auc(labels, scores)));
    worst_ap = std::max(worst_ap, std::fabs(average_precision(labels, scores) - testing::oracle_ap(labels, scores)));
  }
  return {worst_auc <= 1e-12 && worst_ap <= 1e-12,
          fmt("200 cases (%zu binary-score), max error AUC=%.1e AP=%.1e", binary_cases, worst_auc, worst_ap)};
}

Outcome leak_freedom() {
  const auto g = testing::leak_fixture();
  LeakProbeConfig c;
  c.train_ratio = 0.6;
  c.val_ratio = 0.2;
  c.batch = BatchScheme{200};
  c.window = WindowScheme{1, AnchorRule::RangeStart};
  c.sampler.kind = SamplerKind::Random;
  c.sampler.seed = 1;
  c.shuffle_seed = 3;
  const auto r = leak_probe([] { return std::make_unique<EdgeBank>(); }, g, c);
  const bool window_same = r.window.original.to_json().dump() == r.window.shuffled.to_json().dump();
  const bool batch_drop = r.batch.shuffled.macro_auc < r.batch.original.macro_auc;
  return {window_same && batch_drop,
          fmt("batch macro AUC %.4f -> %.4f, window macro AUC %.4f -> %.4f (reports %s)", r.batch.original.macro_auc,
              r.batch.shuffled.macro_auc, r.window.original.macro_auc, r.window.shuffled.macro_auc,
              window_same ? "bit-identical" : "differ")};
}

Outcome sub_chunks() {
  const auto g = testing::random_graph(2024, 3000, 100000, 20000);
  const auto split = chronological_split(g, 0.7, 0.15);
  NegSamplerSpec spec;
  spec.seed = 11;
  std::size_t checked = 0;
  bool ok = true;
  for (const ChunkScheme scheme : {ChunkScheme{WindowScheme{40, AnchorRule::RangeStart}}, ChunkScheme{BatchScheme{200}}}) {
    const auto set = generate_instances(g, split, assign_chunks(g, split.test(), scheme), spec);
    for (const auto& mode : {EdgeBankConfig::unlimited(), EdgeBankConfig::fixed_proportion(0.15),
                             EdgeBankConfig::repeat_threshold(std::nullopt)}) {
      auto run = [&](std::size_t piece) {
        EdgeBank bank(mode);
        bank.begin(g.edges(split.history()));
        EvalOptions opt;
        opt.max_sub_chunk = piece;
        return evaluate(bank, set, opt).scores;
      };
      const auto whole = run(0);
      for (std::size_t piece : {1u, 7u, 200u}) {
        ok = ok && run(piece) == whole;
        ++checked;
      }
    }
  }
  return {ok, fmt("%zu sub-chunked runs over %zu edges, all scores bit-identical: %s", checked, g.edge_count(),
                  ok ? "yes" : "no")};
}

std::map<std::string, std::string> dir_contents(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::directory_iterator(dir)) out[entry.path().filename().string()] = testing::read_text(entry.path());
  return out;
}

Outcome determinism() {
  testing::TempDir dir;
  save_edge_list(testing::random_graph(42, 200, 20000, 2000), dir / "edges.csv");
  RunConfig c;
  c.input = dir / "edges.csv";
  c.format = make_format("csv", true, {}, 1);
  c.batch_size = 200;
  c.horizon = 20;
  c.scheme = "both";
  c.seed = 1;
  c.out = dir / "a";
  run_pipeline(c);
  c.out = dir / "b";
  run_pipeline(c);
  c.out = dir / "c";
  c.seed = 2;
  run_pipeline(c);
  const auto a = dir_contents(dir / "a"), b = dir_contents(dir / "b"), d = dir_contents(dir / "c");
  const bool same = a == b;
  const bool seed_changes = a.at("instances_window.csv") != d.at("instances_window.csv") &&
                            a.at("instances_batch.csv") != d.at("instances_batch.csv");
  return {same && seed_changes, fmt("%zu files byte-identical: %s; new seed changes instance files: %s", a.size(),
                                    same ? "yes" : "no", seed_changes ? "yes" : "no")};
}

Outcome performance() {
  testing::TempDir dir;
  {
    // 1M edges over 50k nodes, ~20 edges per second-level timestamp, with
    // a recurring core of pairs so EdgeBank has something to remember.
    std::mt19937_64 rng(9);
    std::ofstream out(dir / "big.csv");
    std::string line;
    for (std::int64_t i = 0; i < 1000000; ++i) {
      std::uint64_t s, d;
      if (rng() % 2) {
        const auto k = rng() % 20000;
        s = k % 5000;
        d = 5000 + (k * 7919) % 45000;
      } else {
        s = rng() % 50000;
        d = rng() % 50000;
        if (s == d) d = (d + 1) % 50000;
      }
      out << s << ',' << d << ',' << i / 20 << '\n';
    }
  }
  RunConfig c;
  c.input = dir / "big.csv";
  c.horizon = 500;
  c.scheme = "window";
  c.sampler.kind = SamplerKind::Historic;
  c.seed = 1;
  c.threads = 1;
  c.out = dir / "out";
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = run_pipeline(c);
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto& rep = r.reports.at("window");
  return {s < 60.0 && rep.evaluable_chunks > 0,
          fmt("pipeline on 1,000,000 edges in %.1f s (window h=500, historic, EdgeBank): macro AUC %.4f over %zu chunks",
              s, rep.macro_auc, rep.evaluable_chunks)};
}

Outcome enron() {
  const char* path = std::getenv("LINKCAST_ENRON");
  EdgeListFormat f;
  f.has_header = std::getenv("LINKCAST_ENRON_HEADER") != nullptr;
  const auto g = load_edge_list(path, f);
  const auto stats = dataset_stats(g);
  const auto split = chronological_split(g, 0.7, 0.15);
  const auto windows = assign_windows(g, split.test(), 172800);
  const auto size_stats = chunk_stats(windows);
  const double wb = window_batch_nmi(windows, assign_batches(g, split.test(), 200)).value;
  NegSamplerSpec spec;
  spec.kind = SamplerKind::Historic;
  spec.seed = 0;
  const auto set = generate_instances(g, split, windows, spec);
  EdgeBank bank;
  bank.begin(g.edges(split.history()));
  const double auc = 100 * evaluate(bank, set).report.macro_auc;
  const double density = static_cast<double>(stats.duration) / static_cast<double>(stats.edges);
  const bool ok = stats.edges == 125235 && std::fabs(density - 908.2) <= 0.5 && std::fabs(size_stats.mean - 214.1) <= 1.0 &&
                  std::fabs(wb - 0.8017) <= 0.005 && std::fabs(auc - 82.7) <= 1.0;
  return {ok, fmt("m=%zu T/m=%.1f mean window size=%.1f window-batch NMI=%.4f EdgeBank AUC=%.1f", stats.edges, density,
                  size_stats.mean, wb, auc)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "six-edge worked example golden values", 1, true, worked_example},
      {2, "batch NMI information loss on unique timestamps", 5, true, information_loss},
      {3, "window NMI preserves timestamps", 5, true, window_preserves},
      {4, "burst chunking", 0, true, burst},
      {5, "AUC/AP match brute-force oracles", 10, true, metric_oracles},
      {6, "window protocol is leak-free under snapshot shuffling", 0, true, leak_freedom},
      {7, "sub-chunk equivalence", 30, true, sub_chunks},
      {8, "pipeline determinism", 0, true, determinism},
      {9, "1M-edge pipeline performance", 60, true, performance},
      {10, "Enron integration", 0, false, enron},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    if (c.id == 10 && !std::getenv("LINKCAST_ENRON")) {
      std::printf("SKIP  %2d  %s: set LINKCAST_ENRON to an edge list to run (not gating)\n", c.id, c.title);
      continue;
    }
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit_s > 0 && s >= c.time_limit_s) {
      o.pass = false;
      o.detail += fmt(" [over the %.0f s limit]", c.time_limit_s);
    }
    std::printf("%s  %2d  %s (%.3f s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.title, s, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass && c.gating) ++failures;
  }
  std::printf("%s\n", failures == 0 ? "all gating criteria passed" : fmt("%d gating criteria failed", failures).c_str());
  return failures == 0 ? 0 : 1;
}
