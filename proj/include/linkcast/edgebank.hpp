#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>

#include "linkcast/forecaster.hpp"

namespace linkcast {

struct EdgeBankConfig {
  enum class Mode { Unlimited, TimeWindow, RepeatThreshold };
  enum class WindowPolicy { FixedProportion, RepeatInterval, Explicit };

  Mode mode = Mode::Unlimited;
  WindowPolicy policy = WindowPolicy::FixedProportion;
  double proportion = 0.15;           // FixedProportion
  double window = 0;                  // resolved trailing window length
  std::optional<std::int64_t> threshold;  // empty: derive from the mean occurrence count
  bool resolved = false;

  static EdgeBankConfig unlimited() { return {}; }
  static EdgeBankConfig fixed_proportion(double p);
  static EdgeBankConfig repeat_interval();
  static EdgeBankConfig explicit_window(double window);
  static EdgeBankConfig repeat_threshold(std::optional<std::int64_t> k);

  std::string describe() const;
};

/// Parses `unlimited`, `window:<p>`, `window:repeat`, `window=<duration>`,
/// `threshold:<k>`, `threshold:mean`.
EdgeBankConfig parse_edgebank_mode(const std::string& text);

/// Fills in the window length and threshold from the training edges.
/// `warning` is set when RepeatInterval finds no repeated pair and falls back
/// to the full span.
EdgeBankConfig derive_edgebank_params(std::span<const TemporalEdge> train, const EdgeBankConfig& config,
                                      std::string* warning = nullptr);

struct PairMemory {
  Timestamp last_seen = 0;
  std::uint64_t count = 0;
};

using EdgeMemory = std::unordered_map<std::uint64_t, PairMemory>;

/// 1 if the pair qualifies under the (resolved) memory mode at `chunk_start`.
double edgebank_score(const EdgeBankConfig& config, const EdgeMemory& memory, NodeId src, NodeId dst,
                      Timestamp chunk_start);

class EdgeBank final : public Forecaster {
 public:
  explicit EdgeBank(EdgeBankConfig config = {});

  void begin(std::span<const TemporalEdge> history) override;
  void score_chunk(const ChunkContext& ctx, std::span<const EvalInstance> instances, std::span<double> scores) override;
  void observe_chunk(const ChunkContext& ctx, std::span<const TemporalEdge> positives) override;
  std::string name() const override { return "edgebank"; }
  nlohmann::ordered_json describe() const override;

  const EdgeBankConfig& config() const { return resolved_; }
  const EdgeMemory& memory() const { return memory_; }

 private:
  void remember(const TemporalEdge& e);

  EdgeBankConfig requested_;
  EdgeBankConfig resolved_;
  std::string warning_;
  EdgeMemory memory_;
};

}  // namespace linkcast
