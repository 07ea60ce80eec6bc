#include "linkcast/sampling.hpp"

#include <algorithm>
#include <unordered_set>

#include "linkcast/errors.hpp"
#include "linkcast/parallel.hpp"

namespace linkcast {

namespace {

// Logical pool = base \ excluded, both sorted and distinct, excluded ⊆ base.
struct PoolView {
  std::span<const std::uint64_t> base;
  std::span<const std::uint64_t> excluded;

  std::size_t size() const { return base.size() - excluded.size(); }
  bool is_excluded(std::uint64_t key) const { return std::binary_search(excluded.begin(), excluded.end(), key); }

  std::vector<std::uint64_t> materialize() const {
    std::vector<std::uint64_t> out;
    out.reserve(size());
    std::set_difference(base.begin(), base.end(), excluded.begin(), excluded.end(), std::back_inserter(out));
    return out;
  }
};

// Dense pools are materialized and partially shuffled; sparse requests use
// rejection on the base so per-chunk cost stays proportional to the draw.
constexpr std::size_t kDenseFactor = 4;
constexpr std::uint64_t kEnumerateLimit = 1ULL << 26;

std::vector<std::uint64_t> draw_pool(const PoolView& pool, std::size_t need, Rng& rng) {
  const std::size_t k = std::min(need, pool.size());
  std::vector<std::uint64_t> picked;
  if (k == 0) return picked;
  picked.reserve(k);
  if (pool.size() <= kDenseFactor * k) {
    auto items = pool.materialize();
    for (std::size_t i = 0; i < k; ++i) {
      const auto j = i + static_cast<std::size_t>(rng.below(items.size() - i));
      std::swap(items[i], items[j]);
      picked.push_back(items[i]);
    }
    return picked;
  }
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(2 * k);
  while (picked.size() < k) {
    const auto key = pool.base[static_cast<std::size_t>(rng.below(pool.base.size()))];
    if (pool.is_excluded(key) || !seen.insert(key).second) continue;
    picked.push_back(key);
  }
  return picked;
}

// Uniform pairs from the universe avoiding `excluded` (which may hold keys
// outside the universe).
std::vector<std::uint64_t> draw_random_pairs(const NodeUniverse& nodes, const std::unordered_set<std::uint64_t>& excluded,
                                             std::size_t need, Rng& rng) {
  std::vector<std::uint64_t> picked;
  if (need == 0) return picked;
  const std::uint64_t total = nodes.pair_count();
  std::uint64_t blocked = 0;
  for (auto key : excluded) blocked += nodes.contains(key) ? 1 : 0;
  const std::uint64_t available = total - blocked;
  if (need > available) {
    throw ConfigError("node universe offers " + std::to_string(available) + " candidate pairs but " +
                      std::to_string(need) + " negatives were requested");
  }
  picked.reserve(need);
  if (available <= kDenseFactor * need && total <= kEnumerateLimit) {
    std::vector<std::uint64_t> items;
    items.reserve(available);
    for (auto s : nodes.sources) {
      for (auto d : nodes.destinations) {
        const auto key = pair_key(s, d);
        if (s != d && !excluded.contains(key)) items.push_back(key);
      }
    }
    for (std::size_t i = 0; i < need; ++i) {
      const auto j = i + static_cast<std::size_t>(rng.below(items.size() - i));
      std::swap(items[i], items[j]);
      picked.push_back(items[i]);
    }
    return picked;
  }
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(2 * need);
  while (picked.size() < need) {
    const auto s = nodes.sources[static_cast<std::size_t>(rng.below(nodes.sources.size()))];
    const auto d = nodes.destinations[static_cast<std::size_t>(rng.below(nodes.destinations.size()))];
    if (s == d) continue;
    const auto key = pair_key(s, d);
    if (excluded.contains(key) || !seen.insert(key).second) continue;
    picked.push_back(key);
  }
  return picked;
}

std::size_t required_negatives(std::span<const TemporalEdge> positives, const NegSamplerSpec& spec) {
  if (spec.negatives_per_positive == 0) throw ConfigError("negatives_per_positive must be at least 1");
  return positives.size() * spec.negatives_per_positive;
}

void append_stamped(std::vector<TemporalEdge>& out, std::span<const std::uint64_t> keys,
                    std::span<const TemporalEdge> positives, std::size_t per_positive) {
  for (auto key : keys) {
    const auto j = out.size();
    out.push_back({key_src(key), key_dst(key), positives[j / per_positive].t});
  }
}

std::unordered_set<std::uint64_t> positive_exclusions(std::span<const TemporalEdge> positives, const NegSamplerSpec& spec) {
  std::unordered_set<std::uint64_t> excluded;
  if (spec.collision == CollisionPolicy::ExcludePositives) {
    excluded.reserve(positives.size() * 2);
    for (const auto& e : positives) excluded.insert(pair_key(e.src, e.dst));
  }
  return excluded;
}

NegativeDraw draw_with_fallback(std::span<const TemporalEdge> positives, const PoolView& pool,
                                const NodeUniverse& nodes, const NegSamplerSpec& spec, Rng& rng) {
  const std::size_t need = required_negatives(positives, spec);
  NegativeDraw draw;
  draw.negatives.reserve(need);
  const auto from_pool = draw_pool(pool, need, rng);
  append_stamped(draw.negatives, from_pool, positives, spec.negatives_per_positive);
  draw.from_pool = from_pool.size();
  if (from_pool.size() < need) {
    auto excluded = positive_exclusions(positives, spec);
    excluded.insert(from_pool.begin(), from_pool.end());
    const auto extra = draw_random_pairs(nodes, excluded, need - from_pool.size(), rng);
    append_stamped(draw.negatives, extra, positives, spec.negatives_per_positive);
    draw.from_fallback = extra.size();
  }
  return draw;
}

std::vector<std::uint64_t> distinct_pairs(std::span<const TemporalEdge> edges) {
  std::vector<std::uint64_t> keys;
  keys.reserve(edges.size());
  for (const auto& e : edges) keys.push_back(pair_key(e.src, e.dst));
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  return keys;
}

// Pairs of `base` that occur in the graph at a time in [lo, hi].
std::vector<std::uint64_t> active_in_interval(const TemporalGraph& g, std::span<const std::uint64_t> base,
                                              Timestamp lo, Timestamp hi) {
  if (hi < lo) return {};
  const auto begin = g.lower_index(lo);
  const auto end = g.upper_index(hi);
  auto active = distinct_pairs(g.edges({begin, end}));
  std::vector<std::uint64_t> out;
  std::set_intersection(active.begin(), active.end(), base.begin(), base.end(), std::back_inserter(out));
  return out;
}

std::vector<std::uint64_t> inductive_base(const TemporalGraph& g, EdgeRange train, EdgeRange test) {
  const auto train_pairs = distinct_pairs(g.edges(train));
  const auto test_pairs = distinct_pairs(g.edges(test));
  std::vector<std::uint64_t> out;
  std::set_difference(test_pairs.begin(), test_pairs.end(), train_pairs.begin(), train_pairs.end(),
                      std::back_inserter(out));
  return out;
}

}  // namespace

std::string to_string(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::Random: return "random";
    case SamplerKind::Historic: return "historic";
    case SamplerKind::Inductive: return "inductive";
  }
  return "?";
}

SamplerKind parse_sampler(const std::string& text) {
  if (text == "random") return SamplerKind::Random;
  if (text == "historic") return SamplerKind::Historic;
  if (text == "inductive") return SamplerKind::Inductive;
  throw ConfigError("unknown sampler '" + text + "' (expected random|historic|inductive)");
}

std::string NegSamplerSpec::describe() const {
  return "kind=" + to_string(kind) + ";seed=" + std::to_string(seed) +
         ";negatives_per_positive=" + std::to_string(negatives_per_positive) +
         ";collision=" + (collision == CollisionPolicy::ExcludePositives ? "exclude" : "allow") +
         ";bipartite=" + (bipartite ? "1" : "0");
}

NodeUniverse NodeUniverse::all(std::size_t node_count) {
  NodeUniverse u;
  u.sources.resize(node_count);
  for (std::size_t i = 0; i < node_count; ++i) u.sources[i] = static_cast<NodeId>(i);
  u.destinations = u.sources;
  u.is_source.assign(node_count, true);
  u.is_destination.assign(node_count, true);
  return u;
}

NodeUniverse NodeUniverse::bipartite(const TemporalGraph& g) {
  NodeUniverse u;
  u.is_source.assign(g.node_count(), false);
  u.is_destination.assign(g.node_count(), false);
  for (const auto& e : g.edges()) {
    u.is_source[e.src] = true;
    u.is_destination[e.dst] = true;
  }
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    if (u.is_source[i]) u.sources.push_back(static_cast<NodeId>(i));
    if (u.is_destination[i]) u.destinations.push_back(static_cast<NodeId>(i));
  }
  return u;
}

bool NodeUniverse::contains(std::uint64_t key) const {
  const auto s = key_src(key), d = key_dst(key);
  return s != d && s < is_source.size() && d < is_destination.size() && is_source[s] && is_destination[d];
}

std::uint64_t NodeUniverse::pair_count() const {
  std::uint64_t both = 0;
  for (auto s : sources) both += (s < is_destination.size() && is_destination[s]) ? 1 : 0;
  return static_cast<std::uint64_t>(sources.size()) * destinations.size() - both;
}

std::vector<TemporalEdge> sample_random(std::span<const TemporalEdge> positives, const NodeUniverse& nodes,
                                        const NegSamplerSpec& spec, Rng& rng) {
  const std::size_t need = required_negatives(positives, spec);
  const auto keys = draw_random_pairs(nodes, positive_exclusions(positives, spec), need, rng);
  std::vector<TemporalEdge> out;
  out.reserve(need);
  append_stamped(out, keys, positives, spec.negatives_per_positive);
  return out;
}

std::vector<std::uint64_t> build_historic_pool(const TemporalGraph& g, EdgeRange train, Timestamp lo, Timestamp hi) {
  const auto base = distinct_pairs(g.edges(train));
  const auto active = active_in_interval(g, base, lo, hi);
  return PoolView{base, active}.materialize();
}

std::vector<std::uint64_t> build_inductive_pool(const TemporalGraph& g, EdgeRange train, EdgeRange test,
                                                Timestamp lo, Timestamp hi) {
  const auto base = inductive_base(g, train, test);
  const auto active = active_in_interval(g, base, lo, hi);
  return PoolView{base, active}.materialize();
}

NegativeDraw sample_from_pool(std::span<const TemporalEdge> positives, std::span<const std::uint64_t> pool,
                              const NodeUniverse& nodes, const NegSamplerSpec& spec, Rng& rng) {
  return draw_with_fallback(positives, PoolView{pool, {}}, nodes, spec, rng);
}

NegativeDraw sample_historic(std::span<const TemporalEdge> positives, std::span<const std::uint64_t> pool,
                             const NodeUniverse& nodes, const NegSamplerSpec& spec, Rng& rng) {
  return sample_from_pool(positives, pool, nodes, spec, rng);
}

NegativeDraw sample_inductive(const TemporalGraph& g, std::span<const TemporalEdge> positives, EdgeRange train,
                              EdgeRange test, Timestamp lo, Timestamp hi, const NodeUniverse& nodes,
                              const NegSamplerSpec& spec, Rng& rng) {
  const auto pool = build_inductive_pool(g, train, test, lo, hi);
  return sample_from_pool(positives, pool, nodes, spec, rng);
}

std::size_t InstanceSet::size() const {
  std::size_t n = 0;
  for (const auto& c : chunks) n += c.instances.size();
  return n;
}

InstanceSet generate_instances(const TemporalGraph& g, const ChronologicalSplit& split,
                               const ChunkAssignment& assignment, const NegSamplerSpec& spec, unsigned threads) {
  if (assignment.range != split.test())
    throw ConfigError("chunk assignment must cover exactly the test range");
  if (spec.negatives_per_positive == 0) throw ConfigError("negatives_per_positive must be at least 1");

  const auto nodes = spec.bipartite ? NodeUniverse::bipartite(g) : NodeUniverse::all(g.node_count());
  std::vector<std::uint64_t> base;
  if (spec.kind == SamplerKind::Historic) base = distinct_pairs(g.edges(split.train()));
  if (spec.kind == SamplerKind::Inductive) base = inductive_base(g, split.train(), split.test());
  const auto sampling_seed = purpose_seed(spec.seed, kSamplingPurpose);

  InstanceSet out;
  out.scheme = assignment.scheme;
  out.sampler = spec;
  out.chunks.resize(assignment.chunks.size());
  parallel_for(assignment.chunks.size(), threads, [&](std::size_t i) {
    const Chunk& chunk = assignment.chunks[i];
    ChunkInstances& ci = out.chunks[i];
    ci.chunk = chunk;
    const auto positives = g.edges(chunk.edges);
    ci.positives = positives.size();
    if (positives.empty()) return;

    Rng rng(chunk_stream_seed(sampling_seed, chunk.ordinal));
    NegativeDraw draw;
    if (spec.kind == SamplerKind::Random) {
      draw.negatives = sample_random(positives, nodes, spec, rng);
      draw.from_fallback = draw.negatives.size();
    } else {
      const auto active = active_in_interval(g, base, chunk.exclusion_lo(), chunk.exclusion_hi());
      const PoolView pool{base, active};
      ci.pool_size = pool.size();
      draw = draw_with_fallback(positives, pool, nodes, spec, rng);
    }
    ci.fallbacks = spec.kind == SamplerKind::Random ? 0 : draw.from_fallback;

    ci.instances.reserve(positives.size() + draw.negatives.size());
    for (const auto& e : positives) ci.instances.push_back({chunk.ordinal, e.src, e.dst, e.t, Label::Positive});
    for (const auto& e : draw.negatives) ci.instances.push_back({chunk.ordinal, e.src, e.dst, e.t, Label::Negative});
  });
  return out;
}

}  // namespace linkcast
