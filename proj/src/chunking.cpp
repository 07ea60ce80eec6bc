#include "linkcast/chunking.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "linkcast/errors.hpp"

namespace linkcast {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// ceil(a / b) for b > 0 and any sign of a.
std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
  const std::int64_t q = a / b;
  return (a % b != 0 && a > 0) ? q + 1 : q;
}

}  // namespace

std::string to_string(AnchorRule anchor) { return anchor == AnchorRule::AbsoluteZero ? "zero" : "range-start"; }

AnchorRule parse_anchor(const std::string& text) {
  if (text == "zero") return AnchorRule::AbsoluteZero;
  if (text == "range-start") return AnchorRule::RangeStart;
  throw ConfigError("unknown anchor '" + text + "' (expected zero|range-start)");
}

std::string describe(const ChunkScheme& scheme) {
  return std::visit(overloaded{
                        [](const BatchScheme& b) { return "batch;b=" + std::to_string(b.batch_size); },
                        [](const WindowScheme& w) {
                          return "window;h=" + std::to_string(w.horizon) + ";anchor=" + to_string(w.anchor);
                        },
                    },
                    scheme);
}

std::size_t ChunkAssignment::occupied_chunks() const {
  return static_cast<std::size_t>(std::count_if(chunks.begin(), chunks.end(), [](const Chunk& c) { return c.size() > 0; }));
}

std::vector<std::int64_t> ChunkAssignment::ordinals() const {
  std::vector<std::int64_t> out;
  out.reserve(chunk_of.size());
  for (auto pos : chunk_of) out.push_back(chunks[pos].ordinal);
  return out;
}

std::vector<std::int64_t> ChunkAssignment::compressed_labels() const {
  std::vector<std::int64_t> relabel(chunks.size(), 0);
  std::int64_t next = 0;
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    if (chunks[i].size() > 0) relabel[i] = ++next;
  }
  std::vector<std::int64_t> out;
  out.reserve(chunk_of.size());
  for (auto pos : chunk_of) out.push_back(relabel[pos]);
  return out;
}

ChunkAssignment assign_batches(const TemporalGraph& g, EdgeRange range, std::size_t batch_size) {
  if (batch_size == 0) throw ConfigError("batch size must be at least 1");
  ChunkAssignment a;
  a.scheme = BatchScheme{batch_size};
  a.range = range;
  a.chunk_of.resize(range.size());
  for (std::size_t begin = range.begin, k = 0; begin < range.end; begin += batch_size, ++k) {
    const std::size_t end = std::min(begin + batch_size, range.end);
    Chunk c;
    c.ordinal = static_cast<std::int64_t>(k);
    c.t_start = g.edge(begin).t;
    c.t_end = g.edge(end - 1).t;
    c.edges = {begin, end};
    c.half_open = false;
    std::fill(a.chunk_of.begin() + static_cast<std::ptrdiff_t>(begin - range.begin),
              a.chunk_of.begin() + static_cast<std::ptrdiff_t>(end - range.begin), a.chunks.size());
    a.chunks.push_back(c);
  }
  return a;
}

ChunkAssignment assign_windows(const TemporalGraph& g, EdgeRange range, std::int64_t horizon, AnchorRule anchor) {
  if (horizon < 1) throw ConfigError("horizon must be at least 1");
  ChunkAssignment a;
  a.scheme = WindowScheme{horizon, anchor};
  a.range = range;
  if (range.empty()) return a;
  a.origin = anchor == AnchorRule::AbsoluteZero ? 0 : g.edge(range.begin).t - 1;
  a.chunk_of.resize(range.size());

  const auto ordinal_of = [&](Timestamp t) { return ceil_div(t - a.origin, horizon) - 1; };
  const std::int64_t first = ordinal_of(g.edge(range.begin).t);
  const std::int64_t last = ordinal_of(g.edge(range.end - 1).t);
  a.chunks.reserve(static_cast<std::size_t>(last - first + 1));
  std::size_t idx = range.begin;
  for (std::int64_t i = first; i <= last; ++i) {
    Chunk c;
    c.ordinal = i;
    c.t_start = a.origin + i * horizon;
    c.t_end = c.t_start + horizon;
    c.half_open = true;
    const std::size_t begin = idx;
    while (idx < range.end && g.edge(idx).t <= c.t_end) {
      a.chunk_of[idx - range.begin] = a.chunks.size();
      ++idx;
    }
    c.edges = {begin, idx};
    a.chunks.push_back(c);
  }
  return a;
}

ChunkAssignment assign_chunks(const TemporalGraph& g, EdgeRange range, const ChunkScheme& scheme) {
  return std::visit(overloaded{
                        [&](const BatchScheme& b) { return assign_batches(g, range, b.batch_size); },
                        [&](const WindowScheme& w) { return assign_windows(g, range, w.horizon, w.anchor); },
                    },
                    scheme);
}

ChunkStats chunk_stats(const ChunkAssignment& a, std::size_t bins) {
  ChunkStats s;
  s.durations = !a.is_window();
  s.values.reserve(a.chunks.size());
  for (const auto& c : a.chunks) {
    s.values.push_back(s.durations ? static_cast<double>(c.t_end - c.t_start) : static_cast<double>(c.size()));
  }
  if (s.values.empty()) return s;
  long double sum = 0;
  for (double v : s.values) sum += v;
  const long double n = static_cast<long double>(s.values.size());
  s.mean = static_cast<double>(sum / n);
  long double ss = 0;
  for (double v : s.values) ss += (v - s.mean) * (v - s.mean);
  s.stddev = static_cast<double>(std::sqrt(ss / n));
  const auto [mn, mx] = std::minmax_element(s.values.begin(), s.values.end());
  s.min = *mn;
  s.max = *mx;

  bins = std::max<std::size_t>(bins, 1);
  s.histogram.lo = s.min;
  s.histogram.width = s.max > s.min ? (s.max - s.min) / static_cast<double>(bins) : 1.0;
  s.histogram.counts.assign(s.max > s.min ? bins : 1, 0);
  for (double v : s.values) {
    auto b = static_cast<std::size_t>((v - s.min) / s.histogram.width);
    ++s.histogram.counts[std::min(b, s.histogram.counts.size() - 1)];
  }
  return s;
}

std::vector<SubChunk> subdivide_chunk(const Chunk& chunk, std::size_t max_size) {
  if (max_size == 0) throw ConfigError("sub-chunk size must be at least 1");
  std::vector<SubChunk> pieces;
  std::size_t begin = chunk.edges.begin;
  do {
    const std::size_t end = std::min(begin + max_size, chunk.edges.end);
    pieces.push_back({chunk.ordinal, {begin, end}, end == chunk.edges.end});
    begin = end;
  } while (begin < chunk.edges.end);
  return pieces;
}

void write_assignment_csv(std::ostream& out, const TemporalGraph& g, const ChunkAssignment& a) {
  out << "edge_index,chunk_ordinal,t\n";
  for (std::size_t i = 0; i < a.chunk_of.size(); ++i) {
    const auto idx = a.range.begin + i;
    out << idx << ',' << a.chunks[a.chunk_of[i]].ordinal << ',' << g.edge(idx).t << '\n';
  }
}

}  // namespace linkcast
