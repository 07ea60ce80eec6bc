#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace linkcast {

/// Seed derivation.
///
/// Every random decision flows from one root seed. A purpose seed is
/// `splitmix64(root ^ fnv1a(purpose))`; a per-chunk stream seed is
/// `splitmix64(purpose_seed + (ordinal + 1) * 0x9e3779b97f4a7c15)`. Streams
/// are std::mt19937_64 engines, whose output sequence is fixed by the C++
/// standard, and bounded draws use rejection sampling rather than
/// std::uniform_int_distribution, so results are identical across
/// standard libraries.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t purpose_seed(std::uint64_t root, std::string_view purpose);
std::uint64_t chunk_stream_seed(std::uint64_t purpose, std::int64_t ordinal);

inline constexpr std::string_view kSamplingPurpose = "sampling";
inline constexpr std::string_view kShufflePurpose = "shuffle";

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound). `bound` must be positive.
  std::uint64_t below(std::uint64_t bound);

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace linkcast
