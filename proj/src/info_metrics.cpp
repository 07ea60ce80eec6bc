#include "linkcast/info_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <tuple>

#include "linkcast/errors.hpp"
#include "linkcast/parallel.hpp"

namespace linkcast {

namespace {

// Category counts sorted ascending. Summing in count order instead of label
// order makes every quantity independent of how categories are named.
std::vector<std::uint64_t> sorted_counts(LabelSeq labels) {
  std::vector<std::int64_t> sorted(labels.begin(), labels.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::uint64_t> counts;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i + 1;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    counts.push_back(j - i);
    i = j;
  }
  std::sort(counts.begin(), counts.end());
  return counts;
}

long double entropy_from_counts(const std::vector<std::uint64_t>& counts, std::uint64_t n) {
  const long double total = static_cast<long double>(n);
  long double h = 0;
  for (auto c : counts) {
    const long double cc = static_cast<long double>(c);
    h += (cc / total) * std::log(total / cc);
  }
  return h;
}

struct Cell {
  std::uint64_t joint;
  std::uint64_t lo;  // smaller marginal
  std::uint64_t hi;  // larger marginal
  bool operator<(const Cell& o) const { return std::tie(joint, lo, hi) < std::tie(o.joint, o.lo, o.hi); }
};

struct JointStats {
  long double h_x = 0;
  long double h_y = 0;
  long double mi = 0;
  std::size_t x_categories = 0;
  std::size_t y_categories = 0;
};

// Dense ids for each distinct label plus per-id counts.
std::vector<std::uint32_t> densify(LabelSeq labels, std::vector<std::uint64_t>& counts) {
  std::vector<std::pair<std::int64_t, std::uint32_t>> order(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) order[i] = {labels[i], static_cast<std::uint32_t>(i)};
  std::sort(order.begin(), order.end());
  std::vector<std::uint32_t> ids(labels.size());
  counts.clear();
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i == 0 || order[i].first != order[i - 1].first) counts.push_back(0);
    ids[order[i].second] = static_cast<std::uint32_t>(counts.size() - 1);
    ++counts.back();
  }
  return ids;
}

JointStats joint_stats(LabelSeq x, LabelSeq y) {
  if (x.size() != y.size())
    throw ConfigError("label sequences differ in length (" + std::to_string(x.size()) + " vs " +
                      std::to_string(y.size()) + ")");
  if (x.empty()) throw ConfigError("label sequences must be non-empty");
  const std::uint64_t n = x.size();

  std::vector<std::uint64_t> cx, cy;
  const auto ix = densify(x, cx);
  const auto iy = densify(y, cy);

  std::vector<std::uint64_t> keys(n);
  for (std::size_t i = 0; i < n; ++i) keys[i] = (static_cast<std::uint64_t>(ix[i]) << 32) | iy[i];
  std::sort(keys.begin(), keys.end());
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < keys.size();) {
    std::size_t j = i + 1;
    while (j < keys.size() && keys[j] == keys[i]) ++j;
    const auto a = cx[keys[i] >> 32];
    const auto b = cy[keys[i] & 0xffffffffu];
    cells.push_back({j - i, std::min(a, b), std::max(a, b)});
    i = j;
  }
  std::sort(cells.begin(), cells.end());

  const long double total = static_cast<long double>(n);
  long double mi = 0;
  for (const auto& c : cells) {
    const long double joint = static_cast<long double>(c.joint);
    const long double ratio = (joint * total) / (static_cast<long double>(c.lo) * static_cast<long double>(c.hi));
    mi += (joint / total) * std::log(ratio);
  }

  JointStats s;
  std::sort(cx.begin(), cx.end());
  std::sort(cy.begin(), cy.end());
  s.h_x = entropy_from_counts(cx, n);
  s.h_y = entropy_from_counts(cy, n);
  s.mi = std::max<long double>(mi, 0);
  s.x_categories = cx.size();
  s.y_categories = cy.size();
  return s;
}

std::vector<std::int64_t> timestamps(const TemporalGraph& g) {
  std::vector<std::int64_t> ts;
  ts.reserve(g.edge_count());
  for (const auto& e : g.edges()) ts.push_back(e.t);
  return ts;
}

}  // namespace

double entropy(LabelSeq labels) {
  if (labels.empty()) throw ConfigError("entropy of an empty sequence");
  return static_cast<double>(entropy_from_counts(sorted_counts(labels), labels.size()));
}

double mutual_information(LabelSeq x, LabelSeq y) { return static_cast<double>(joint_stats(x, y).mi); }

NmiReport nmi(LabelSeq x, LabelSeq y) {
  const auto s = joint_stats(x, y);
  NmiReport r;
  r.h_x = static_cast<double>(s.h_x);
  r.h_y = static_cast<double>(s.h_y);
  r.mi = static_cast<double>(s.mi);
  r.samples = x.size();
  r.x_categories = s.x_categories;
  r.y_categories = s.y_categories;
  const bool x_const = s.x_categories == 1;
  const bool y_const = s.y_categories == 1;
  if (x_const && y_const) {
    r.value = 1.0;
  } else if (x_const || y_const) {
    r.value = 0.0;
  } else {
    r.value = static_cast<double>(s.mi / (0.5L * (s.h_x + s.h_y)));
  }
  return r;
}

NmiReport batch_timestamp_nmi(const TemporalGraph& g, std::size_t batch_size) {
  const auto a = assign_batches(g, {0, g.edge_count()}, batch_size);
  const auto ts = timestamps(g);
  const auto ord = a.ordinals();
  return nmi(ts, ord);
}

NmiReport window_timestamp_nmi(const TemporalGraph& g, std::int64_t horizon, AnchorRule anchor) {
  const auto a = assign_windows(g, {0, g.edge_count()}, horizon, anchor);
  const auto ts = timestamps(g);
  const auto ord = a.ordinals();
  return nmi(ts, ord);
}

NmiReport window_batch_nmi(const ChunkAssignment& windows, const ChunkAssignment& batches) {
  if (windows.range != batches.range) throw ConfigError("window and batch assignments cover different edge ranges");
  const auto w = windows.ordinals();
  const auto b = batches.ordinals();
  return nmi(w, b);
}

NmiSweep nmi_sweep(const TemporalGraph& g, SweepKind kind, std::span<const std::int64_t> grid, AnchorRule anchor,
                   unsigned threads) {
  if (grid.empty()) throw ConfigError("NMI sweep needs at least one parameter");
  NmiSweep sweep;
  sweep.kind = kind;
  sweep.points.resize(grid.size());
  parallel_for(grid.size(), threads, [&](std::size_t i) {
    const auto p = grid[i];
    if (p < 1) throw ConfigError("sweep parameters must be positive");
    sweep.points[i].parameter = p;
    sweep.points[i].nmi = kind == SweepKind::Batch ? batch_timestamp_nmi(g, static_cast<std::size_t>(p))
                                                   : window_timestamp_nmi(g, p, anchor);
  });
  for (std::size_t i = 1; i < sweep.points.size(); ++i) {
    if (sweep.points[i].nmi.value > sweep.points[sweep.argmax].nmi.value) sweep.argmax = i;
  }
  return sweep;
}

void write_sweep_csv(std::ostream& out, const NmiSweep& sweep) {
  out << (sweep.kind == SweepKind::Batch ? "batch_size" : "horizon") << ",nmi,h_x,h_y,mi\n";
  out << std::setprecision(17);
  for (const auto& p : sweep.points)
    out << p.parameter << ',' << p.nmi.value << ',' << p.nmi.h_x << ',' << p.nmi.h_y << ',' << p.nmi.mi << '\n';
}

}  // namespace linkcast
