#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace linkcast {

using NodeId = std::uint32_t;
using Timestamp = std::int64_t;

struct TemporalEdge {
  NodeId src = 0;
  NodeId dst = 0;
  Timestamp t = 0;

  friend bool operator==(const TemporalEdge&, const TemporalEdge&) = default;
};

// Packs an ordered (src, dst) pair into one key.
constexpr std::uint64_t pair_key(NodeId src, NodeId dst) {
  return (static_cast<std::uint64_t>(src) << 32) | dst;
}
constexpr NodeId key_src(std::uint64_t key) { return static_cast<NodeId>(key >> 32); }
constexpr NodeId key_dst(std::uint64_t key) { return static_cast<NodeId>(key & 0xffffffffu); }

struct EdgeListFormat {
  char delimiter = ',';
  bool has_header = false;
  std::size_t src_column = 0;
  std::size_t dst_column = 1;
  std::size_t time_column = 2;
  std::int64_t resolution = 1;
};

// Index range [begin, end) into a graph's edge sequence.
struct EdgeRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool empty() const { return begin == end; }
  friend bool operator==(const EdgeRange&, const EdgeRange&) = default;
};

/// Immutable, chronologically ordered edge sequence with dense node ids.
///
/// Edges with equal timestamps keep their input order. `labels()` maps each
/// dense id back to the label it had in the source file; ids are assigned in
/// order of first appearance in the time-sorted sequence, so a graph written
/// with `save_edge_list` reloads to an identical graph.
class TemporalGraph {
 public:
  TemporalGraph() = default;

  /// Builds a graph from raw edges; sorts them stably by time.
  /// Labels default to the decimal ids when `labels` is empty.
  TemporalGraph(std::size_t node_count, std::vector<TemporalEdge> edges,
                std::vector<std::string> labels = {}, std::int64_t resolution = 1);

  std::size_t node_count() const { return node_count_; }
  std::size_t edge_count() const { return edges_.size(); }
  std::span<const TemporalEdge> edges() const { return edges_; }
  std::span<const TemporalEdge> edges(EdgeRange r) const {
    return std::span<const TemporalEdge>(edges_).subspan(r.begin, r.size());
  }
  const TemporalEdge& edge(std::size_t i) const { return edges_[i]; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(NodeId id) const { return labels_[id]; }
  std::int64_t resolution() const { return resolution_; }

  Timestamp t_min() const;
  Timestamp t_max() const;
  Timestamp duration() const { return t_max() - t_min(); }

  /// First edge index with t >= `t` (lower bound).
  std::size_t lower_index(Timestamp t) const;
  /// First edge index with t > `t` (upper bound).
  std::size_t upper_index(Timestamp t) const;

  /// Same nodes and labels, different edge order. Edges must stay
  /// time-sorted; used by the snapshot shuffle.
  TemporalGraph with_edges(std::vector<TemporalEdge> edges) const;

  friend bool operator==(const TemporalGraph&, const TemporalGraph&) = default;

 private:
  std::size_t node_count_ = 0;
  std::vector<TemporalEdge> edges_;
  std::vector<std::string> labels_;
  std::int64_t resolution_ = 1;
};

TemporalGraph load_edge_list(const std::filesystem::path& path, const EdgeListFormat& format = {});
TemporalGraph parse_edge_list(std::string_view text, const EdgeListFormat& format = {},
                              const std::string& source_name = "<memory>");

/// Writes `src,dst,t` rows with original labels plus a `<path>.meta.json`
/// sidecar holding n, m, resolution and the remap table.
void save_edge_list(const TemporalGraph& g, const std::filesystem::path& path);
std::string graph_metadata_json(const TemporalGraph& g);

struct ChronologicalSplit {
  std::size_t train_end = 0;
  std::size_t val_end = 0;
  std::size_t edge_count = 0;
  Timestamp t_val = 0;   // timestamp of the first validation edge
  Timestamp t_test = 0;  // timestamp of the first test edge
  bool boundary_shared = false;

  EdgeRange train() const { return {0, train_end}; }
  EdgeRange val() const { return {train_end, val_end}; }
  EdgeRange test() const { return {val_end, edge_count}; }
  /// Everything a forecaster may see before the test range.
  EdgeRange history() const { return {0, val_end}; }
};

/// Count-based split: train = floor(train_ratio * m), val end =
/// floor((train_ratio + val_ratio) * m). A timestamp may straddle a boundary;
/// `boundary_shared` reports it.
ChronologicalSplit chronological_split(const TemporalGraph& g, double train_ratio, double val_ratio);

struct SnapshotGroup {
  Timestamp t = 0;
  EdgeRange range;
};

std::vector<SnapshotGroup> snapshot_groups(const TemporalGraph& g);
std::vector<SnapshotGroup> snapshot_groups(std::span<const TemporalEdge> edges);

struct DatasetStats {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  Timestamp duration = 0;
  std::size_t distinct_timestamps = 0;
  double mean_edges_per_timestamp = 0;
  double std_edges_per_timestamp = 0;  // population
  double temporal_density = 0;         // T / m
};

DatasetStats dataset_stats(const TemporalGraph& g);

/// Edge counts per fixed-width bin starting at t_min; empty bins are zeros.
std::vector<std::size_t> activity_histogram(const TemporalGraph& g, std::int64_t bin_width);

/// 64-bit FNV-1a over a file's bytes, rendered as 16 hex digits.
std::string file_fingerprint(const std::filesystem::path& path);
std::string fingerprint_bytes(std::string_view bytes);

}  // namespace linkcast
