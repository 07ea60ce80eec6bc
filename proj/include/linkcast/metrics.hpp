#pragma once

#include <span>

#include "linkcast/sampling.hpp"

namespace linkcast {

/// Probability that a random positive outranks a random negative; ties count
/// one half. Throws NotEvaluable unless both classes are present.
double auc_roc(std::span<const Label> labels, std::span<const double> scores);

/// Step-wise average precision over the score-descending ranking, with equal
/// scores forming a single threshold. Throws NotEvaluable without positives.
double average_precision(std::span<const Label> labels, std::span<const double> scores);

}  // namespace linkcast
