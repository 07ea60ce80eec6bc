#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "linkcast/temporal_graph.hpp"

namespace linkcast {

struct BatchScheme {
  std::size_t batch_size = 200;
};

enum class AnchorRule {
  RangeStart,    // windows (s-1 + i*h, s-1 + (i+1)*h] with s the first timestamp of the range
  AbsoluteZero,  // windows (i*h, (i+1)*h]
};

struct WindowScheme {
  std::int64_t horizon = 1;
  AnchorRule anchor = AnchorRule::RangeStart;
};

using ChunkScheme = std::variant<BatchScheme, WindowScheme>;

std::string describe(const ChunkScheme& scheme);
std::string to_string(AnchorRule anchor);
AnchorRule parse_anchor(const std::string& text);

/// One evaluation chunk.
///
/// Batch chunks cover the closed interval [t_start, t_end] of their first and
/// last edge. Window chunks cover the half-open interval (t_start, t_end] with
/// t_end - t_start == horizon. `exclusion_lo()`/`exclusion_hi()` give the
/// inclusive integer bounds of either, and `start_time()` is the instant at
/// which a forecaster scores the chunk.
struct Chunk {
  std::int64_t ordinal = 0;  // batch index, or raw window index relative to the origin
  Timestamp t_start = 0;
  Timestamp t_end = 0;
  EdgeRange edges;
  bool half_open = false;

  std::size_t size() const { return edges.size(); }
  Timestamp exclusion_lo() const { return half_open ? t_start + 1 : t_start; }
  Timestamp exclusion_hi() const { return t_end; }
  Timestamp start_time() const { return t_start; }
  double t_mid() const { return 0.5 * (static_cast<double>(t_start) + static_cast<double>(t_end)); }
};

struct ChunkAssignment {
  ChunkScheme scheme;
  EdgeRange range;
  Timestamp origin = 0;           // window origin; unused for batches
  std::vector<Chunk> chunks;      // consecutive in time, empty windows included
  std::vector<std::size_t> chunk_of;  // (edge index - range.begin) -> position in `chunks`

  bool is_window() const { return std::holds_alternative<WindowScheme>(scheme); }
  std::size_t occupied_chunks() const;
  /// Raw ordinal of every edge in the range, in edge order.
  std::vector<std::int64_t> ordinals() const;
  /// 1-based occupied-only relabeling, as used for display.
  std::vector<std::int64_t> compressed_labels() const;
};

ChunkAssignment assign_batches(const TemporalGraph& g, EdgeRange range, std::size_t batch_size);
ChunkAssignment assign_windows(const TemporalGraph& g, EdgeRange range, std::int64_t horizon,
                               AnchorRule anchor = AnchorRule::RangeStart);
ChunkAssignment assign_chunks(const TemporalGraph& g, EdgeRange range, const ChunkScheme& scheme);

struct Histogram {
  double lo = 0;
  double width = 0;
  std::vector<std::size_t> counts;
};

struct ChunkStats {
  bool durations = true;        // true: batch durations, false: window sizes
  std::vector<double> values;
  double mean = 0;
  double stddev = 0;  // population
  double min = 0;
  double max = 0;
  Histogram histogram;
};

ChunkStats chunk_stats(const ChunkAssignment& a, std::size_t bins = 20);

struct SubChunk {
  std::int64_t logical_ordinal = 0;
  EdgeRange edges;
  bool last_piece = false;
};

/// Splits a chunk into order-preserving pieces of at most `max_size` edges.
/// All pieces carry the chunk's ordinal; only the final one is flagged
/// `last_piece`, which is where a driver may observe the chunk.
std::vector<SubChunk> subdivide_chunk(const Chunk& chunk, std::size_t max_size);

/// Rows `edge_index,chunk_ordinal,t`.
void write_assignment_csv(std::ostream& out, const TemporalGraph& g, const ChunkAssignment& a);

}  // namespace linkcast
