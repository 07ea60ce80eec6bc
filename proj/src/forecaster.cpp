#include "linkcast/forecaster.hpp"

#include <cmath>

#include "linkcast/errors.hpp"

namespace linkcast {

void ProtocolGuard::on_begin() {
  if (state_ != State::Fresh) throw ContractViolation("begin() called on a forecaster that already started");
  state_ = State::Ready;
}

void ProtocolGuard::assume_begun() {
  if (state_ != State::Fresh) throw ContractViolation("forecaster already started");
  state_ = State::Ready;
}

void ProtocolGuard::on_score(std::int64_t ordinal) {
  if (state_ == State::Fresh) throw ContractViolation("score_chunk() before begin()");
  if (state_ == State::Done) throw ContractViolation("score_chunk() after end()");
  if (state_ == State::Scoring) {
    if (ordinal != scoring_)
      throw ContractViolation("chunk " + std::to_string(ordinal) + " scored before chunk " +
                              std::to_string(scoring_) + " was observed");
    return;
  }
  if (has_last_ && ordinal <= last_observed_)
    throw ContractViolation("chunk " + std::to_string(ordinal) + " scored after chunk " +
                            std::to_string(last_observed_) + " was observed");
  state_ = State::Scoring;
  scoring_ = ordinal;
}

void ProtocolGuard::on_observe(std::int64_t ordinal) {
  if (state_ != State::Scoring || ordinal != scoring_)
    throw ContractViolation("observe_chunk(" + std::to_string(ordinal) + ") without a preceding score_chunk");
  state_ = State::Ready;
  has_last_ = true;
  last_observed_ = ordinal;
}

void ProtocolGuard::on_end() {
  if (state_ == State::Scoring) throw ContractViolation("end() while chunk " + std::to_string(scoring_) + " is unobserved");
  if (state_ != State::Ready) throw ContractViolation("end() in invalid state");
  state_ = State::Done;
}

void GuardedForecaster::begin(std::span<const TemporalEdge> history) {
  guard_.on_begin();
  inner_.begin(history);
}

void GuardedForecaster::score_chunk(const ChunkContext& ctx, std::span<const EvalInstance> instances,
                                    std::span<double> scores) {
  guard_.on_score(ctx.ordinal);
  if (scores.size() != instances.size()) throw ContractViolation("score buffer size mismatch");
  inner_.score_chunk(ctx, instances, scores);
  for (double s : scores) {
    if (!std::isfinite(s)) throw ContractViolation(inner_.name() + " produced a non-finite score");
  }
}

void GuardedForecaster::observe_chunk(const ChunkContext& ctx, std::span<const TemporalEdge> positives) {
  guard_.on_observe(ctx.ordinal);
  inner_.observe_chunk(ctx, positives);
}

void GuardedForecaster::end() {
  guard_.on_end();
  inner_.end();
}

ReplayForecaster::ReplayForecaster(std::vector<ScoredInstance> rows) : rows_(std::move(rows)) {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (!std::isfinite(rows_[i].score))
      throw IngestError("score row " + std::to_string(i + 1) + " holds a non-finite score");
  }
}

void ReplayForecaster::score_chunk(const ChunkContext&, std::span<const EvalInstance> instances,
                                   std::span<double> scores) {
  for (std::size_t i = 0; i < instances.size(); ++i, ++cursor_) {
    if (cursor_ >= rows_.size())
      throw IngestError("score file has " + std::to_string(rows_.size()) + " rows but more instances were evaluated");
    if (!(rows_[cursor_].instance == instances[i]))
      throw IngestError("score file row " + std::to_string(cursor_ + 1) + " does not match the evaluated instance");
    scores[i] = rows_[cursor_].score;
  }
}

void ReplayForecaster::end() {
  if (cursor_ != rows_.size())
    throw IngestError("score file has " + std::to_string(rows_.size()) + " rows but only " + std::to_string(cursor_) +
                      " instances were evaluated");
}

RecencyForecaster::RecencyForecaster(double decay) : decay_(decay) {
  if (!(decay > 0)) throw ConfigError("recency decay must be positive");
}

void RecencyForecaster::begin(std::span<const TemporalEdge> history) {
  last_seen_.clear();
  for (const auto& e : history) last_seen_[pair_key(e.src, e.dst)] = e.t;
}

void RecencyForecaster::score_chunk(const ChunkContext& ctx, std::span<const EvalInstance> instances,
                                    std::span<double> scores) {
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto it = last_seen_.find(pair_key(instances[i].src, instances[i].dst));
    if (it == last_seen_.end()) {
      scores[i] = 0.0;
    } else {
      const double dt = static_cast<double>(ctx.start_time - it->second);
      scores[i] = std::exp(-std::max(dt, 0.0) / decay_);
    }
  }
}

void RecencyForecaster::observe_chunk(const ChunkContext&, std::span<const TemporalEdge> positives) {
  for (const auto& e : positives) {
    auto& slot = last_seen_[pair_key(e.src, e.dst)];
    slot = std::max(slot, e.t);
  }
}

nlohmann::ordered_json RecencyForecaster::describe() const { return {{"name", name()}, {"decay", decay_}}; }

}  // namespace linkcast
