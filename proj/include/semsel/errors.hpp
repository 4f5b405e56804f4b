#pragma once

#include <stdexcept>
#include <string>

namespace semsel {

// Malformed vocabulary, rule set, scenario or run configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A pair could not be grounded into a complete Q-sentence.
class GroundingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The request exceeds an enumeration or exponent budget.
class FeasibilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Conditioning on evidence that no constituent satisfies.
class ContradictionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UndefinedMetricError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace semsel
