#include "linkcast/temporal_graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "linkcast/errors.hpp"

namespace linkcast {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Splits on `delim`; a space delimiter collapses runs of whitespace.
void split_fields(std::string_view line, char delim, std::vector<std::string_view>& out) {
  out.clear();
  if (delim == ' ') {
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
      if (i >= line.size()) break;
      std::size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
      out.push_back(line.substr(i, j - i));
      i = j;
    }
    return;
  }
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(delim, start);
    if (pos == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      return;
    }
    out.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

}  // namespace

TemporalGraph::TemporalGraph(std::size_t node_count, std::vector<TemporalEdge> edges,
                             std::vector<std::string> labels, std::int64_t resolution)
    : node_count_(node_count), edges_(std::move(edges)), labels_(std::move(labels)), resolution_(resolution) {
  for (const auto& e : edges_) {
    if (e.src >= node_count_ || e.dst >= node_count_)
      throw ConfigError("edge endpoint out of range for node count " + std::to_string(node_count_));
    if (e.t < 0) throw ConfigError("negative timestamp " + std::to_string(e.t));
  }
  std::stable_sort(edges_.begin(), edges_.end(),
                   [](const TemporalEdge& a, const TemporalEdge& b) { return a.t < b.t; });
  if (labels_.empty()) {
    labels_.reserve(node_count_);
    for (std::size_t i = 0; i < node_count_; ++i) labels_.push_back(std::to_string(i));
  } else if (labels_.size() != node_count_) {
    throw ConfigError("label table size does not match node count");
  }
  if (resolution_ < 1) throw ConfigError("resolution must be positive");
}

Timestamp TemporalGraph::t_min() const { return edges_.empty() ? 0 : edges_.front().t; }
Timestamp TemporalGraph::t_max() const { return edges_.empty() ? 0 : edges_.back().t; }

std::size_t TemporalGraph::lower_index(Timestamp t) const {
  auto it = std::partition_point(edges_.begin(), edges_.end(), [t](const TemporalEdge& e) { return e.t < t; });
  return static_cast<std::size_t>(it - edges_.begin());
}

std::size_t TemporalGraph::upper_index(Timestamp t) const {
  auto it = std::partition_point(edges_.begin(), edges_.end(), [t](const TemporalEdge& e) { return e.t <= t; });
  return static_cast<std::size_t>(it - edges_.begin());
}

TemporalGraph TemporalGraph::with_edges(std::vector<TemporalEdge> edges) const {
  if (edges.size() != edges_.size()) throw ConfigError("with_edges: edge count changed");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (edges[i].t != edges_[i].t) throw ConfigError("with_edges: timestamps must keep their positions");
  }
  TemporalGraph g = *this;
  g.edges_ = std::move(edges);
  return g;
}

TemporalGraph parse_edge_list(std::string_view text, const EdgeListFormat& format, const std::string& source_name) {
  struct RawEdge {
    std::string_view src, dst;
    Timestamp t;
  };
  std::vector<RawEdge> raw;
  std::vector<std::string_view> fields;
  const std::size_t needed = std::max({format.src_column, format.dst_column, format.time_column}) + 1;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool header_pending = format.has_header;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const std::string_view line = trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (line.empty() || line.front() == '#' || line.front() == '%') continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    split_fields(line, format.delimiter, fields);
    const auto where = source_name + ":" + std::to_string(line_no);
    if (fields.size() < needed)
      throw IngestError(where + ": expected at least " + std::to_string(needed) + " columns");
    const auto src = fields[format.src_column];
    const auto dst = fields[format.dst_column];
    if (src.empty() || dst.empty()) throw IngestError(where + ": empty node label");
    const auto ts = fields[format.time_column];
    Timestamp t = 0;
    const auto [ptr, ec] = std::from_chars(ts.data(), ts.data() + ts.size(), t);
    if (ec != std::errc() || ptr != ts.data() + ts.size()) {
      // Accept integral values written in floating notation, e.g. "12.0".
      double d = 0;
      const auto [p2, ec2] = std::from_chars(ts.data(), ts.data() + ts.size(), d);
      if (ec2 != std::errc() || p2 != ts.data() + ts.size() || d != std::floor(d) || !std::isfinite(d))
        throw IngestError(where + ": timestamp '" + std::string(ts) + "' is not an integer");
      t = static_cast<Timestamp>(d);
    }
    if (t < 0) throw IngestError(where + ": negative timestamp " + std::to_string(t));
    raw.push_back({src, dst, t});
  }
  if (raw.empty()) throw IngestError(source_name + ": no edges");

  std::stable_sort(raw.begin(), raw.end(), [](const RawEdge& a, const RawEdge& b) { return a.t < b.t; });

  std::unordered_map<std::string_view, NodeId> ids;
  ids.reserve(raw.size());
  std::vector<std::string> labels;
  auto id_of = [&](std::string_view label) {
    auto [it, inserted] = ids.try_emplace(label, static_cast<NodeId>(labels.size()));
    if (inserted) labels.emplace_back(label);
    return it->second;
  };
  std::vector<TemporalEdge> edges;
  edges.reserve(raw.size());
  for (const auto& r : raw) {
    const NodeId s = id_of(r.src);
    const NodeId d = id_of(r.dst);
    edges.push_back({s, d, r.t});
  }
  const auto n = labels.size();
  return TemporalGraph(n, std::move(edges), std::move(labels), format.resolution);
}

TemporalGraph load_edge_list(const std::filesystem::path& path, const EdgeListFormat& format) {
  const std::string text = read_file(path);
  return parse_edge_list(text, format, path.string());
}

std::string graph_metadata_json(const TemporalGraph& g) {
  nlohmann::ordered_json meta;
  meta["nodes"] = g.node_count();
  meta["edges"] = g.edge_count();
  meta["resolution"] = g.resolution();
  meta["t_min"] = g.t_min();
  meta["t_max"] = g.t_max();
  meta["labels"] = g.labels();
  return meta.dump(2) + "\n";
}

void save_edge_list(const TemporalGraph& g, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IngestError("cannot write " + path.string());
  out << "src,dst,t\n";
  for (const auto& e : g.edges()) out << g.label(e.src) << ',' << g.label(e.dst) << ',' << e.t << '\n';
  std::ofstream meta(path.string() + ".meta.json", std::ios::binary);
  meta << graph_metadata_json(g);
}

ChronologicalSplit chronological_split(const TemporalGraph& g, double train_ratio, double val_ratio) {
  if (!(train_ratio > 0) || !(val_ratio >= 0) || !(train_ratio + val_ratio < 1))
    throw ConfigError("split ratios must satisfy 0 < train, 0 <= val, train + val < 1");
  const auto m = g.edge_count();
  // The small slack keeps e.g. 0.7 * 100 from flooring to 69 after rounding.
  const auto count = [m](double ratio) {
    return static_cast<std::size_t>(std::floor(ratio * static_cast<double>(m) + 1e-9));
  };
  ChronologicalSplit split;
  split.edge_count = m;
  split.train_end = std::min(count(train_ratio), m);
  split.val_end = std::min(count(train_ratio + val_ratio), m);
  if (split.train_end == 0) throw ConfigError("split leaves the training range empty");
  if (split.val_end == m) throw ConfigError("split leaves the test range empty");
  split.t_val = split.val_end > split.train_end ? g.edge(split.train_end).t : g.edge(split.val_end).t;
  split.t_test = g.edge(split.val_end).t;
  const bool train_shared = split.train_end < m && g.edge(split.train_end - 1).t == g.edge(split.train_end).t;
  const bool test_shared = split.val_end > 0 && g.edge(split.val_end - 1).t == g.edge(split.val_end).t;
  split.boundary_shared = train_shared || test_shared;
  return split;
}

std::vector<SnapshotGroup> snapshot_groups(std::span<const TemporalEdge> edges) {
  std::vector<SnapshotGroup> groups;
  std::size_t i = 0;
  while (i < edges.size()) {
    std::size_t j = i + 1;
    while (j < edges.size() && edges[j].t == edges[i].t) ++j;
    groups.push_back({edges[i].t, {i, j}});
    i = j;
  }
  return groups;
}

std::vector<SnapshotGroup> snapshot_groups(const TemporalGraph& g) { return snapshot_groups(g.edges()); }

DatasetStats dataset_stats(const TemporalGraph& g) {
  if (g.edge_count() == 0) throw ConfigError("dataset_stats needs at least one edge");
  const auto groups = snapshot_groups(g);
  DatasetStats s;
  s.nodes = g.node_count();
  s.edges = g.edge_count();
  s.duration = g.duration();
  s.distinct_timestamps = groups.size();
  const double k = static_cast<double>(groups.size());
  s.mean_edges_per_timestamp = static_cast<double>(g.edge_count()) / k;
  long double ss = 0;
  for (const auto& grp : groups) {
    const long double d = static_cast<long double>(grp.range.size()) - s.mean_edges_per_timestamp;
    ss += d * d;
  }
  s.std_edges_per_timestamp = static_cast<double>(std::sqrt(ss / k));
  s.temporal_density = static_cast<double>(s.duration) / static_cast<double>(s.edges);
  return s;
}

std::vector<std::size_t> activity_histogram(const TemporalGraph& g, std::int64_t bin_width) {
  if (bin_width < 1) throw ConfigError("bin width must be positive");
  if (g.edge_count() == 0) return {};
  const auto bins = static_cast<std::size_t>(g.duration() / bin_width) + 1;
  std::vector<std::size_t> counts(bins, 0);
  for (const auto& e : g.edges()) ++counts[static_cast<std::size_t>((e.t - g.t_min()) / bin_width)];
  return counts;
}

std::string fingerprint_bytes(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string file_fingerprint(const std::filesystem::path& path) { return fingerprint_bytes(read_file(path)); }

}  // namespace linkcast
