#include "linkcast/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "linkcast/errors.hpp"

namespace linkcast {

namespace {

struct Group {
  double score;
  std::uint64_t pos;
  std::uint64_t neg;
};

// Equal-score groups in ascending score order. Only class counts per group
// survive, so the result is independent of input order.
std::vector<Group> score_groups(std::span<const Label> labels, std::span<const double> scores) {
  if (labels.size() != scores.size()) throw ConfigError("labels and scores differ in length");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  for (double s : scores) {
    if (!std::isfinite(s)) throw ConfigError("scores must be finite");
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  std::vector<Group> groups;
  for (auto i : order) {
    if (groups.empty() || groups.back().score != scores[i]) groups.push_back({scores[i], 0, 0});
    (labels[i] == Label::Positive ? groups.back().pos : groups.back().neg) += 1;
  }
  return groups;
}

}  // namespace

double auc_roc(std::span<const Label> labels, std::span<const double> scores) {
  const auto groups = score_groups(labels, scores);
  std::uint64_t pos = 0, neg = 0;
  for (const auto& g : groups) {
    pos += g.pos;
    neg += g.neg;
  }
  if (pos == 0 || neg == 0) throw NotEvaluable("AUC-ROC needs at least one positive and one negative");
  // Twice the Mann-Whitney statistic, kept integral until the final division.
  std::uint64_t twice_wins = 0;
  std::uint64_t neg_below = 0;
  for (const auto& g : groups) {
    twice_wins += g.pos * (2 * neg_below + g.neg);
    neg_below += g.neg;
  }
  return static_cast<double>(twice_wins) / (2.0 * static_cast<double>(pos) * static_cast<double>(neg));
}

double average_precision(std::span<const Label> labels, std::span<const double> scores) {
  const auto groups = score_groups(labels, scores);
  std::uint64_t total_pos = 0;
  for (const auto& g : groups) total_pos += g.pos;
  if (total_pos == 0) throw NotEvaluable("average precision needs at least one positive");
  std::uint64_t tp = 0, fp = 0;
  double ap = 0;
  for (auto it = groups.rbegin(); it != groups.rend(); ++it) {
    tp += it->pos;
    fp += it->neg;
    if (it->pos == 0) continue;
    const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    ap += (static_cast<double>(it->pos) / static_cast<double>(total_pos)) * precision;
  }
  return ap;
}

}  // namespace linkcast
