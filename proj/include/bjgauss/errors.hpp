#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace bjgauss {

/// Partial output of a recurrence algorithm that stopped early.
struct PartialCoefficients {
  std::vector<double> alpha;
  std::vector<double> beta;
};

/// Raised when a coefficient algorithm hits a non-positive β_k (or a
/// non-positive Cholesky pivot). `index()` is the first k that could not be
/// produced; `partial()` holds every coefficient computed before it.
class BreakdownError : public std::runtime_error {
 public:
  BreakdownError(std::string algorithm, std::size_t index, const std::string& detail,
                 PartialCoefficients partial = {})
      : std::runtime_error(algorithm + ": breakdown at k=" + std::to_string(index) + " (" +
                           detail + ")"),
        algorithm_(std::move(algorithm)),
        index_(index),
        partial_(std::move(partial)) {}

  const std::string& algorithm() const noexcept { return algorithm_; }
  std::size_t index() const noexcept { return index_; }
  const PartialCoefficients& partial() const noexcept { return partial_; }

 private:
  std::string algorithm_;
  std::size_t index_;
  PartialCoefficients partial_;
};

/// An iterative procedure (eigensolver, adaptive quadrature) ran out of budget.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}

  /// Best value or residual reached before giving up.
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

}  // namespace bjgauss
