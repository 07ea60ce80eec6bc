#include <gtest/gtest.h>

#include <numeric>
#include <sstream>

#include "fixtures.hpp"
#include "linkcast/chunking.hpp"
#include "linkcast/errors.hpp"

namespace linkcast {
namespace {

using testing::six_edge_graph;

EdgeRange all(const TemporalGraph& g) { return {0, g.edge_count()}; }

void expect_partition(const ChunkAssignment& a) {
  std::size_t next = a.range.begin;
  std::size_t total = 0;
  for (std::size_t k = 0; k < a.chunks.size(); ++k) {
    const auto& c = a.chunks[k];
    EXPECT_EQ(c.edges.begin, next);
    next = c.edges.end;
    total += c.size();
    for (std::size_t i = c.edges.begin; i < c.edges.end; ++i) EXPECT_EQ(a.chunk_of[i - a.range.begin], k);
    if (k > 0) EXPECT_EQ(a.chunks[k - 1].ordinal + 1, c.ordinal);
  }
  EXPECT_EQ(next, a.range.end);
  EXPECT_EQ(total, a.range.size());
}

TEST(AssignBatches, WorkedExample) {
  const auto g = six_edge_graph();
  const auto a = assign_batches(g, all(g), 2);
  EXPECT_EQ(a.compressed_labels(), (std::vector<std::int64_t>{1, 1, 2, 2, 3, 3}));
  ASSERT_EQ(a.chunks.size(), 3u);
  EXPECT_EQ(a.chunks[1].t_start, 2);
  EXPECT_EQ(a.chunks[1].t_end, 4);
  EXPECT_FALSE(a.chunks[1].half_open);
  EXPECT_EQ(a.chunks[1].exclusion_lo(), 2);
  expect_partition(a);
}

TEST(AssignBatches, OneBatchWhenSizeCoversEverything) {
  const auto g = six_edge_graph();
  EXPECT_EQ(assign_batches(g, all(g), 6).chunks.size(), 1u);
  EXPECT_EQ(assign_batches(g, all(g), 1000).chunks.size(), 1u);
  EXPECT_THROW(assign_batches(g, all(g), 0), ConfigError);
}

TEST(AssignBatches, BurstAlignedToBatchBoundary) {
  std::vector<TemporalEdge> edges;
  for (int i = 0; i < 400; ++i) edges.push_back({0, 1, i});  // two full batches before the burst
  for (int i = 0; i < 1705; ++i) edges.push_back({2, 3, 1000});
  const auto g = testing::make_graph(4, edges);
  const EdgeRange burst{400, g.edge_count()};
  const auto a = assign_batches(g, burst, 200);
  EXPECT_EQ(a.chunks.size(), 9u);
  for (std::size_t k = 0; k + 1 < a.chunks.size(); ++k) EXPECT_EQ(a.chunks[k].size(), 200u);
  EXPECT_EQ(a.chunks.back().size(), 105u);
  const auto w = assign_windows(g, burst, 1);
  EXPECT_EQ(w.occupied_chunks(), 1u);
}

TEST(AssignBatches, BatchOfOneGivesOneChunkPerEdge) {
  const auto g = testing::random_graph(3, 10, 123, 50);
  const auto a = assign_batches(g, all(g), 1);
  EXPECT_EQ(a.chunks.size(), g.edge_count());
  expect_partition(a);
}

TEST(AssignWindows, WorkedExampleAnchoredAtZero) {
  const auto g = six_edge_graph();
  const auto a = assign_windows(g, all(g), 1, AnchorRule::AbsoluteZero);
  EXPECT_EQ(a.ordinals(), (std::vector<std::int64_t>{0, 1, 1, 3, 4, 4}));
  EXPECT_EQ(a.compressed_labels(), (std::vector<std::int64_t>{1, 2, 2, 3, 4, 4}));
  // Window (2,3] is materialized but empty.
  ASSERT_EQ(a.chunks.size(), 5u);
  EXPECT_EQ(a.chunks[2].size(), 0u);
  EXPECT_EQ(a.chunks[2].t_start, 2);
  EXPECT_EQ(a.chunks[2].t_end, 3);
  EXPECT_EQ(a.occupied_chunks(), 4u);
  expect_partition(a);
}

TEST(AssignWindows, RangeStartAnchorPutsFirstEdgeInWindowZero) {
  const auto g = six_edge_graph();
  const EdgeRange tail{3, 6};  // t = 4, 5, 5
  const auto a = assign_windows(g, tail, 1);
  EXPECT_EQ(a.origin, 3);
  EXPECT_EQ(a.ordinals(), (std::vector<std::int64_t>{0, 1, 1}));
  EXPECT_EQ(parse_anchor("zero"), AnchorRule::AbsoluteZero);
  EXPECT_EQ(parse_anchor("range-start"), AnchorRule::RangeStart);
  EXPECT_THROW(parse_anchor("middle"), ConfigError);
  EXPECT_THROW(assign_windows(g, tail, 0), ConfigError);
}

TEST(AssignWindows, LongHorizonGivesSingleWindow) {
  const auto g = six_edge_graph();
  const auto a = assign_windows(g, all(g), g.duration() + 1);
  EXPECT_EQ(a.chunks.size(), 1u);
  EXPECT_EQ(a.chunks[0].size(), 6u);
}

TEST(AssignWindows, UniformTimestampsTenPerWindow) {
  std::vector<TemporalEdge> edges;
  for (int t = 1; t <= 100; ++t) edges.push_back({0, 1, t});
  const auto g = testing::make_graph(2, edges);
  const auto a = assign_windows(g, all(g), 10, AnchorRule::AbsoluteZero);
  ASSERT_EQ(a.chunks.size(), 10u);
  for (const auto& c : a.chunks) EXPECT_EQ(c.size(), 10u);
  const auto s = chunk_stats(a);
  EXPECT_FALSE(s.durations);
  EXPECT_DOUBLE_EQ(s.mean, 10.0);
  EXPECT_DOUBLE_EQ(s.stddev, 0.0);
}

TEST(AssignWindows, IntervalsTileTime) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = testing::random_graph(seed, 15, 200, 500);
    const std::int64_t h = 1 + static_cast<std::int64_t>(seed * 13 % 40);
    for (auto anchor : {AnchorRule::RangeStart, AnchorRule::AbsoluteZero}) {
      const auto a = assign_windows(g, all(g), h, anchor);
      expect_partition(a);
      for (std::size_t k = 0; k < a.chunks.size(); ++k) {
        const auto& c = a.chunks[k];
        EXPECT_EQ(c.t_end - c.t_start, h);
        EXPECT_TRUE(c.half_open);
        if (k > 0) EXPECT_EQ(a.chunks[k - 1].t_end, c.t_start);
        for (auto e : g.edges(c.edges)) {
          EXPECT_LT(c.t_start, e.t);
          EXPECT_LE(e.t, c.t_end);
        }
      }
    }
  }
}

TEST(AssignWindows, InvariantUnderEqualTimestampPermutation) {
  const auto g = testing::random_graph(11, 8, 300, 20);
  std::vector<TemporalEdge> edges(g.edges().begin(), g.edges().end());
  std::mt19937_64 rng(5);
  for (const auto& grp : snapshot_groups(g)) {
    std::shuffle(edges.begin() + static_cast<std::ptrdiff_t>(grp.range.begin),
                 edges.begin() + static_cast<std::ptrdiff_t>(grp.range.end), rng);
  }
  const auto permuted = testing::make_graph(g.node_count(), edges);
  const auto a = assign_windows(g, all(g), 3);
  const auto b = assign_windows(permuted, all(permuted), 3);
  EXPECT_EQ(a.ordinals(), b.ordinals());
}

TEST(ChunkStats, WorkedExampleBatchDurations) {
  const auto g = six_edge_graph();
  const auto s = chunk_stats(assign_batches(g, all(g), 2));
  EXPECT_TRUE(s.durations);
  EXPECT_EQ(s.values, (std::vector<double>{1, 2, 0}));
}

TEST(ChunkStats, UniqueTimestampsBatchOfOne) {
  std::vector<TemporalEdge> edges;
  for (int t = 0; t < 30; ++t) edges.push_back({0, 1, t});
  const auto g = testing::make_graph(2, edges);
  const auto s = chunk_stats(assign_batches(g, all(g), 1));
  EXPECT_EQ(s.values.size(), 30u);
  for (double v : s.values) EXPECT_EQ(v, 0.0);
  std::size_t binned = 0;
  for (auto c : s.histogram.counts) binned += c;
  EXPECT_EQ(binned, 30u);
}

TEST(SubdivideChunk, BurstIntoNinePieces) {
  Chunk c;
  c.ordinal = 4;
  c.edges = {100, 1805};
  const auto pieces = subdivide_chunk(c, 200);
  ASSERT_EQ(pieces.size(), 9u);
  for (std::size_t i = 0; i < 8; ++i) {
    EXPECT_EQ(pieces[i].edges.size(), 200u);
    EXPECT_FALSE(pieces[i].last_piece);
    EXPECT_EQ(pieces[i].logical_ordinal, 4);
  }
  EXPECT_EQ(pieces[8].edges.size(), 105u);
  EXPECT_TRUE(pieces[8].last_piece);
}

TEST(SubdivideChunk, SmallChunkIsIdentityAndConcatenationRestoresRange) {
  Chunk c;
  c.edges = {10, 15};
  const auto one = subdivide_chunk(c, 5);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].edges, c.edges);
  EXPECT_TRUE(one[0].last_piece);
  for (std::size_t max = 1; max < 40; ++max) {
    Chunk big;
    big.edges = {7, 7 + 3 * max + 2};
    std::size_t next = big.edges.begin;
    for (const auto& p : subdivide_chunk(big, max)) {
      EXPECT_EQ(p.edges.begin, next);
      EXPECT_LE(p.edges.size(), max);
      next = p.edges.end;
    }
    EXPECT_EQ(next, big.edges.end);
  }
  EXPECT_THROW(subdivide_chunk(c, 0), ConfigError);
}

TEST(AssignmentCsv, OneRowPerEdge) {
  const auto g = six_edge_graph();
  std::ostringstream out;
  write_assignment_csv(out, g, assign_windows(g, all(g), 1, AnchorRule::AbsoluteZero));
  const auto text = out.str();
  EXPECT_NE(text.find("edge_index,chunk_ordinal,t"), std::string::npos);
  EXPECT_NE(text.find("3,3,4"), std::string::npos);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 7);
}

}  // namespace
}  // namespace linkcast
