#pragma once

#include <stdexcept>
#include <string>

namespace linkcast {

// Malformed or unusable input files (edge lists, instance/score files).
class IngestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid parameters (ratios, chunk sizes, sampler settings).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A forecaster or driver broke the score-then-observe protocol.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A metric was requested on input that cannot produce one, e.g. a
// single-class chunk. Distinct from a metric value of 0.
class NotEvaluable : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace linkcast
