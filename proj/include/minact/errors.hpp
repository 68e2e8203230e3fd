#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace minact {

/// Precondition violated by a caller (bad sizes, non-positive parameters, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A density value left the representable range so that rho^-alpha is not finite.
class NumericalRangeError : public std::runtime_error {
 public:
  NumericalRangeError(const std::string& what, int node)
      : std::runtime_error(what), node_(node) {}
  int node() const noexcept { return node_; }

 private:
  int node_;
};

/// Gradient descent produced a non-finite objective.
/// `snapshot` holds the last finite iterate (flattened parameter vector).
class OptimizationFailure : public std::runtime_error {
 public:
  OptimizationFailure(const std::string& what, std::vector<double> snapshot, int iteration)
      : std::runtime_error(what), snapshot_(std::move(snapshot)), iteration_(iteration) {}
  const std::vector<double>& snapshot() const noexcept { return snapshot_; }
  int iteration() const noexcept { return iteration_; }

 private:
  std::vector<double> snapshot_;
  int iteration_;
};

class IntegrationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shooting search exhausted its budget; `best_mismatch` is the smallest J(v) seen.
class NoConvergence : public std::runtime_error {
 public:
  NoConvergence(const std::string& what, double best_mismatch)
      : std::runtime_error(what), best_mismatch_(best_mismatch) {}
  double best_mismatch() const noexcept { return best_mismatch_; }

 private:
  double best_mismatch_;
};

class DegenerateCloud : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnsupportedDimension : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class HeuristicUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidMetric : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace minact
