#pragma once

// Error types raised by the numerical layers. Each carries the quantity a
// caller needs to retry (a required table length, the accuracy achieved).

#include <cstdint>
#include <stdexcept>
#include <string>

namespace momentlab {

/// A coefficient table is too short; `required` is the length that would do.
class TableExhausted : public std::out_of_range {
 public:
  TableExhausted(const std::string& what, std::int64_t required_bound)
      : std::out_of_range(what + " (need n up to " +
                          std::to_string(required_bound) + ")"),
        required(required_bound) {}
  std::int64_t required;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double achieved_accuracy)
      : std::runtime_error(what + " (achieved " +
                           std::to_string(achieved_accuracy) + ")"),
        achieved(achieved_accuracy) {}
  double achieved;
};

/// Two Hecke eigenvalues coincide; a finer operator is needed.
class DegenerateHecke : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PoleProximity : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ContourTruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class AsymptoticRegimeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace momentlab
