#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "linkcast/chunking.hpp"
#include "linkcast/temporal_graph.hpp"

namespace linkcast {

using LabelSeq = std::span<const std::int64_t>;

// All quantities are in nats.
struct NmiReport {
  double value = 0;
  double h_x = 0;
  double h_y = 0;
  double mi = 0;
  std::size_t samples = 0;
  std::size_t x_categories = 0;
  std::size_t y_categories = 0;
};

/// Plug-in entropy of the empirical distribution. Throws on empty input.
double entropy(LabelSeq labels);

/// Mutual information of the empirical joint distribution.
double mutual_information(LabelSeq x, LabelSeq y);

/// MI normalized by the arithmetic mean of the two entropies. When both
/// sequences are constant the value is 1; when exactly one is, 0.
NmiReport nmi(LabelSeq x, LabelSeq y);

/// Timestamps vs batch ordinals of b-sized batches over the whole graph.
NmiReport batch_timestamp_nmi(const TemporalGraph& g, std::size_t batch_size);
/// Timestamps vs window ordinals over the whole graph.
NmiReport window_timestamp_nmi(const TemporalGraph& g, std::int64_t horizon, AnchorRule anchor = AnchorRule::RangeStart);
/// Window ordinal vs batch ordinal per edge; both must cover the same range.
NmiReport window_batch_nmi(const ChunkAssignment& windows, const ChunkAssignment& batches);

enum class SweepKind { Batch, Window };

struct SweepPoint {
  std::int64_t parameter = 0;
  NmiReport nmi;
};

struct NmiSweep {
  SweepKind kind = SweepKind::Batch;
  std::vector<SweepPoint> points;
  std::size_t argmax = 0;  // first point attaining the grid maximum
};

NmiSweep nmi_sweep(const TemporalGraph& g, SweepKind kind, std::span<const std::int64_t> grid,
                   AnchorRule anchor = AnchorRule::RangeStart, unsigned threads = 1);

/// Rows `batch_size,nmi,h_x,h_y,mi` or `horizon,nmi,h_x,h_y,mi`.
void write_sweep_csv(std::ostream& out, const NmiSweep& sweep);

}  // namespace linkcast
