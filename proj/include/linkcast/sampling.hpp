#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "linkcast/chunking.hpp"
#include "linkcast/rng.hpp"
#include "linkcast/temporal_graph.hpp"

namespace linkcast {

enum class SamplerKind { Random, Historic, Inductive };
enum class CollisionPolicy { AllowPositiveCollision, ExcludePositives };

std::string to_string(SamplerKind kind);
SamplerKind parse_sampler(const std::string& text);

struct NegSamplerSpec {
  SamplerKind kind = SamplerKind::Historic;
  std::uint64_t seed = 0;  // root seed; the sampling stream is derived from it
  std::size_t negatives_per_positive = 1;
  CollisionPolicy collision = CollisionPolicy::AllowPositiveCollision;
  bool bipartite = false;  // draw src from observed sources, dst from observed destinations

  std::string describe() const;
};

enum class Label : std::uint8_t { Negative = 0, Positive = 1 };

struct EvalInstance {
  std::int64_t chunk_ordinal = 0;
  NodeId src = 0;
  NodeId dst = 0;
  Timestamp t = 0;
  Label label = Label::Negative;

  friend bool operator==(const EvalInstance&, const EvalInstance&) = default;
};

/// Candidate endpoints for random pairs. Self-loops are never drawn.
struct NodeUniverse {
  std::vector<NodeId> sources;
  std::vector<NodeId> destinations;
  std::vector<bool> is_source;
  std::vector<bool> is_destination;

  static NodeUniverse all(std::size_t node_count);
  static NodeUniverse bipartite(const TemporalGraph& g);

  bool contains(std::uint64_t key) const;
  /// |sources x destinations| minus self-loops.
  std::uint64_t pair_count() const;
};

/// Uniform ordered pairs without replacement. Timestamps are copied
/// positionally: negative j takes the time of positive j / negatives_per_positive.
/// Throws ConfigError if the universe cannot supply enough distinct pairs.
std::vector<TemporalEdge> sample_random(std::span<const TemporalEdge> positives, const NodeUniverse& nodes,
                                        const NegSamplerSpec& spec, Rng& rng);

/// Distinct (u, v) pairs of the training range minus every pair that occurs
/// anywhere in the graph at a time in [lo, hi]. Sorted by pair key.
std::vector<std::uint64_t> build_historic_pool(const TemporalGraph& g, EdgeRange train, Timestamp lo, Timestamp hi);

/// Distinct test pairs never seen in training and not occurring in [lo, hi].
std::vector<std::uint64_t> build_inductive_pool(const TemporalGraph& g, EdgeRange train, EdgeRange test,
                                                Timestamp lo, Timestamp hi);

struct NegativeDraw {
  std::vector<TemporalEdge> negatives;
  std::size_t from_pool = 0;
  std::size_t from_fallback = 0;
};

/// Draws without replacement from a sorted pool, then tops up with random
/// pairs when the pool runs dry. Used by both historic and inductive sampling.
NegativeDraw sample_from_pool(std::span<const TemporalEdge> positives, std::span<const std::uint64_t> pool,
                              const NodeUniverse& nodes, const NegSamplerSpec& spec, Rng& rng);

NegativeDraw sample_historic(std::span<const TemporalEdge> positives, std::span<const std::uint64_t> pool,
                             const NodeUniverse& nodes, const NegSamplerSpec& spec, Rng& rng);

NegativeDraw sample_inductive(const TemporalGraph& g, std::span<const TemporalEdge> positives, EdgeRange train,
                              EdgeRange test, Timestamp lo, Timestamp hi, const NodeUniverse& nodes,
                              const NegSamplerSpec& spec, Rng& rng);

struct ChunkInstances {
  Chunk chunk;
  std::size_t positives = 0;
  std::size_t pool_size = 0;  // candidates available before drawing (random: 0)
  std::size_t fallbacks = 0;
  std::vector<EvalInstance> instances;  // positives first, then negatives
};

struct InstanceSet {
  ChunkScheme scheme;
  NegSamplerSpec sampler;
  std::vector<ChunkInstances> chunks;

  std::size_t size() const;
};

/// Positives and negatives for every chunk of an assignment over the test
/// range. Each chunk draws from its own stream, so output does not depend on
/// `threads`.
InstanceSet generate_instances(const TemporalGraph& g, const ChronologicalSplit& split,
                               const ChunkAssignment& assignment, const NegSamplerSpec& spec,
                               unsigned threads = 1);

}  // namespace linkcast
