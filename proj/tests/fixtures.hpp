#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "linkcast/temporal_graph.hpp"

namespace linkcast::testing {

// The six-edge worked example: (a,b,1) (b,c,2) (c,a,2) (a,c,4) (a,b,5) (b,a,5).
inline constexpr const char* kSixEdgeText = "a,b,1\nb,c,2\nc,a,2\na,c,4\na,b,5\nb,a,5\n";

inline TemporalGraph six_edge_graph() { return parse_edge_list(kSixEdgeText); }

inline TemporalGraph make_graph(std::size_t n, std::vector<TemporalEdge> edges) {
  return TemporalGraph(n, std::move(edges));
}

/// `count` edges over `nodes` nodes with timestamps drawn from [0, t_range).
inline TemporalGraph random_graph(std::uint64_t seed, std::size_t nodes, std::size_t count, std::int64_t t_range) {
  std::mt19937_64 rng(seed);
  std::vector<TemporalEdge> edges;
  for (std::size_t i = 0; i < count; ++i) {
    const auto s = static_cast<NodeId>(rng() % nodes);
    auto d = static_cast<NodeId>(rng() % nodes);
    if (d == s) d = static_cast<NodeId>((d + 1) % nodes);
    edges.push_back({s, d, static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(t_range))});
  }
  return TemporalGraph(nodes, std::move(edges));
}

/// Train snapshots of distinct pairs followed by one 400-edge test snapshot
/// in which 200 brand-new pairs each occur twice, first copies first.
/// Split 0.6/0.2 puts exactly that snapshot in the test range.
inline TemporalGraph leak_fixture() {
  std::vector<TemporalEdge> edges;
  const NodeId n = 2000;
  std::mt19937_64 rng(7);
  // 1600 history edges over 8 snapshots, pairs among nodes 0..999.
  for (int snap = 0; snap < 8; ++snap) {
    for (int i = 0; i < 200; ++i) {
      const auto s = static_cast<NodeId>(rng() % 1000);
      const auto d = static_cast<NodeId>((s + 1 + rng() % 999) % 1000);
      edges.push_back({s, d, snap + 1});
    }
  }
  // Test snapshot over nodes 1000..1999, unseen in history.
  std::vector<TemporalEdge> fresh;
  for (NodeId i = 0; i < 200; ++i) fresh.push_back({1000 + i, 1000 + (i * 7 + 3) % 1000, 10});
  for (const auto& e : fresh) edges.push_back(e);
  for (const auto& e : fresh) edges.push_back(e);
  return TemporalGraph(n, std::move(edges));
}

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("linkcast_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace linkcast::testing
