#include "linkcast/edgebank.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "linkcast/errors.hpp"

namespace linkcast {

EdgeBankConfig EdgeBankConfig::fixed_proportion(double p) {
  if (!(p > 0 && p <= 1)) throw ConfigError("EdgeBank window proportion must be in (0, 1]");
  EdgeBankConfig c;
  c.mode = Mode::TimeWindow;
  c.policy = WindowPolicy::FixedProportion;
  c.proportion = p;
  return c;
}

EdgeBankConfig EdgeBankConfig::repeat_interval() {
  EdgeBankConfig c;
  c.mode = Mode::TimeWindow;
  c.policy = WindowPolicy::RepeatInterval;
  return c;
}

EdgeBankConfig EdgeBankConfig::explicit_window(double window) {
  if (!(window >= 0)) throw ConfigError("EdgeBank window must be non-negative");
  EdgeBankConfig c;
  c.mode = Mode::TimeWindow;
  c.policy = WindowPolicy::Explicit;
  c.window = window;
  return c;
}

EdgeBankConfig EdgeBankConfig::repeat_threshold(std::optional<std::int64_t> k) {
  if (k && *k < 1) throw ConfigError("EdgeBank repeat threshold must be at least 1");
  EdgeBankConfig c;
  c.mode = Mode::RepeatThreshold;
  c.threshold = k;
  return c;
}

std::string EdgeBankConfig::describe() const {
  std::ostringstream out;
  switch (mode) {
    case Mode::Unlimited: out << "unlimited"; break;
    case Mode::TimeWindow:
      out << "time-window;policy="
          << (policy == WindowPolicy::FixedProportion ? "fixed-proportion"
              : policy == WindowPolicy::RepeatInterval ? "repeat-interval"
                                                       : "explicit");
      if (policy == WindowPolicy::FixedProportion) out << ";p=" << proportion;
      if (resolved || policy == WindowPolicy::Explicit) out << ";window=" << window;
      break;
    case Mode::RepeatThreshold:
      out << "repeat-threshold;k=" << (threshold ? std::to_string(*threshold) : std::string("mean"));
      break;
  }
  return out.str();
}

EdgeBankConfig parse_edgebank_mode(const std::string& text) {
  if (text == "unlimited") return EdgeBankConfig::unlimited();
  if (text == "window") return EdgeBankConfig::fixed_proportion(0.15);
  if (text == "window:repeat") return EdgeBankConfig::repeat_interval();
  try {
    if (text.rfind("window:", 0) == 0) return EdgeBankConfig::fixed_proportion(std::stod(text.substr(7)));
    if (text.rfind("window=", 0) == 0) return EdgeBankConfig::explicit_window(std::stod(text.substr(7)));
    if (text == "threshold:mean" || text == "threshold") return EdgeBankConfig::repeat_threshold(std::nullopt);
    if (text.rfind("threshold:", 0) == 0) return EdgeBankConfig::repeat_threshold(std::stoll(text.substr(10)));
  } catch (const std::logic_error&) {
    // std::stod / std::stoll failures fall through to the error below.
  }
  throw ConfigError("unknown EdgeBank mode '" + text +
                    "' (expected unlimited | window[:<p>|:repeat|=<duration>] | threshold:<k>|mean)");
}

EdgeBankConfig derive_edgebank_params(std::span<const TemporalEdge> train, const EdgeBankConfig& config,
                                      std::string* warning) {
  if (train.empty()) throw ConfigError("EdgeBank needs a non-empty training range");
  EdgeBankConfig r = config;
  const double span = static_cast<double>(train.back().t - train.front().t);
  if (r.mode == EdgeBankConfig::Mode::TimeWindow) {
    if (r.policy == EdgeBankConfig::WindowPolicy::FixedProportion) {
      r.window = r.proportion * span;
    } else if (r.policy == EdgeBankConfig::WindowPolicy::RepeatInterval) {
      std::unordered_map<std::uint64_t, Timestamp> last;
      long double gap_sum = 0;
      std::uint64_t gaps = 0;
      for (const auto& e : train) {
        const auto [it, inserted] = last.try_emplace(pair_key(e.src, e.dst), e.t);
        if (!inserted) {
          gap_sum += static_cast<long double>(e.t - it->second);
          ++gaps;
          it->second = e.t;
        }
      }
      if (gaps == 0) {
        r.window = span;
        if (warning) *warning = "no pair repeats in the training range; EdgeBank window falls back to the full span";
      } else {
        r.window = static_cast<double>(gap_sum / static_cast<long double>(gaps));
      }
    }
  } else if (r.mode == EdgeBankConfig::Mode::RepeatThreshold && !r.threshold) {
    std::unordered_map<std::uint64_t, std::uint64_t> counts;
    for (const auto& e : train) ++counts[pair_key(e.src, e.dst)];
    const long double mean = static_cast<long double>(train.size()) / static_cast<long double>(counts.size());
    r.threshold = static_cast<std::int64_t>(std::ceil(mean - 1e-12L));
  }
  r.resolved = true;
  return r;
}

double edgebank_score(const EdgeBankConfig& config, const EdgeMemory& memory, NodeId src, NodeId dst,
                      Timestamp chunk_start) {
  const auto it = memory.find(pair_key(src, dst));
  if (it == memory.end() || it->second.count == 0) return 0.0;
  switch (config.mode) {
    case EdgeBankConfig::Mode::Unlimited: return 1.0;
    case EdgeBankConfig::Mode::TimeWindow:
      return static_cast<double>(it->second.last_seen) >= static_cast<double>(chunk_start) - config.window ? 1.0 : 0.0;
    case EdgeBankConfig::Mode::RepeatThreshold:
      return it->second.count >= static_cast<std::uint64_t>(config.threshold.value_or(1)) ? 1.0 : 0.0;
  }
  return 0.0;
}

EdgeBank::EdgeBank(EdgeBankConfig config) : requested_(config), resolved_(config) {}

void EdgeBank::remember(const TemporalEdge& e) {
  auto& slot = memory_[pair_key(e.src, e.dst)];
  slot.last_seen = slot.count == 0 ? e.t : std::max(slot.last_seen, e.t);
  ++slot.count;
}

void EdgeBank::begin(std::span<const TemporalEdge> history) {
  memory_.clear();
  warning_.clear();
  resolved_ = derive_edgebank_params(history, requested_, &warning_);
  if (!warning_.empty()) std::fprintf(stderr, "warning: %s\n", warning_.c_str());
  memory_.reserve(history.size());
  for (const auto& e : history) remember(e);
}

void EdgeBank::score_chunk(const ChunkContext& ctx, std::span<const EvalInstance> instances, std::span<double> scores) {
  for (std::size_t i = 0; i < instances.size(); ++i)
    scores[i] = edgebank_score(resolved_, memory_, instances[i].src, instances[i].dst, ctx.start_time);
}

void EdgeBank::observe_chunk(const ChunkContext&, std::span<const TemporalEdge> positives) {
  for (const auto& e : positives) remember(e);
}

nlohmann::ordered_json EdgeBank::describe() const {
  nlohmann::ordered_json j{{"name", name()}, {"memory", resolved_.describe()}};
  if (resolved_.mode == EdgeBankConfig::Mode::TimeWindow) j["window"] = resolved_.window;
  if (resolved_.mode == EdgeBankConfig::Mode::RepeatThreshold) j["threshold"] = resolved_.threshold.value_or(1);
  if (!warning_.empty()) j["warning"] = warning_;
  return j;
}

}  // namespace linkcast
