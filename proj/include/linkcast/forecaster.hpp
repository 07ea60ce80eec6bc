#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "linkcast/sampling.hpp"
#include "linkcast/temporal_graph.hpp"

namespace linkcast {

struct ChunkContext {
  std::int64_t ordinal = 0;
  Timestamp start_time = 0;  // every instance of the chunk is scored as of this instant
};

/// Score-then-observe forecaster contract.
///
/// `begin` receives every edge before the evaluated range. For each logical
/// chunk in increasing ordinal, `score_chunk` may be called once per piece
/// (sub-chunking) and then `observe_chunk` exactly once with the chunk's real
/// edges. Scores for chunk i may depend only on history plus chunks < i.
class Forecaster {
 public:
  virtual ~Forecaster() = default;

  virtual void begin(std::span<const TemporalEdge> history) = 0;
  virtual void score_chunk(const ChunkContext& ctx, std::span<const EvalInstance> instances,
                           std::span<double> scores) = 0;
  virtual void observe_chunk(const ChunkContext& ctx, std::span<const TemporalEdge> positives) = 0;
  /// Called once after the last chunk.
  virtual void end() {}

  virtual std::string name() const = 0;
  /// Resolved parameters, embedded in reports.
  virtual nlohmann::ordered_json describe() const { return {{"name", name()}}; }
};

using ForecasterFactory = std::function<std::unique_ptr<Forecaster>()>;

/// State machine that rejects out-of-protocol calls with ContractViolation.
class ProtocolGuard {
 public:
  void on_begin();
  void on_score(std::int64_t ordinal);
  void on_observe(std::int64_t ordinal);
  void on_end();
  /// For drivers handed a forecaster whose begin() already ran.
  void assume_begun();

 private:
  enum class State { Fresh, Ready, Scoring, Done };
  State state_ = State::Fresh;
  bool has_last_ = false;
  std::int64_t last_observed_ = 0;
  std::int64_t scoring_ = 0;
};

/// Wraps a forecaster and enforces the protocol on every call.
class GuardedForecaster final : public Forecaster {
 public:
  explicit GuardedForecaster(Forecaster& inner, bool already_begun = false) : inner_(inner) {
    if (already_begun) guard_.assume_begun();
  }

  void begin(std::span<const TemporalEdge> history) override;
  void score_chunk(const ChunkContext& ctx, std::span<const EvalInstance> instances, std::span<double> scores) override;
  void observe_chunk(const ChunkContext& ctx, std::span<const TemporalEdge> positives) override;
  void end() override;
  std::string name() const override { return inner_.name(); }
  nlohmann::ordered_json describe() const override { return inner_.describe(); }

 private:
  Forecaster& inner_;
  ProtocolGuard guard_;
};

struct ScoredInstance {
  EvalInstance instance;
  double score = 0;
};

/// Replays externally produced scores. Rows must match the evaluated
/// instances one-to-one, in order; the first divergent row aborts.
class ReplayForecaster final : public Forecaster {
 public:
  explicit ReplayForecaster(std::vector<ScoredInstance> rows);

  void begin(std::span<const TemporalEdge>) override { cursor_ = 0; }
  void score_chunk(const ChunkContext& ctx, std::span<const EvalInstance> instances, std::span<double> scores) override;
  void observe_chunk(const ChunkContext&, std::span<const TemporalEdge>) override {}
  void end() override;
  std::string name() const override { return "replay"; }

 private:
  std::vector<ScoredInstance> rows_;
  std::size_t cursor_ = 0;
};

/// exp(-(chunk start - last occurrence) / decay); never-seen pairs score 0.
class RecencyForecaster final : public Forecaster {
 public:
  explicit RecencyForecaster(double decay);

  void begin(std::span<const TemporalEdge> history) override;
  void score_chunk(const ChunkContext& ctx, std::span<const EvalInstance> instances, std::span<double> scores) override;
  void observe_chunk(const ChunkContext& ctx, std::span<const TemporalEdge> positives) override;
  std::string name() const override { return "recency"; }
  nlohmann::ordered_json describe() const override;

 private:
  double decay_;
  std::unordered_map<std::uint64_t, Timestamp> last_seen_;
};

}  // namespace linkcast
