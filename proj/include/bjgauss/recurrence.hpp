#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "bjgauss/errors.hpp"
#include "bjgauss/moments.hpp"
#include "bjgauss/specfun.hpp"

namespace bjgauss {

/// Coefficients of π_{k+1}(x) = (x - α_k) π_k(x) - β_k π_{k-1}(x), k < n.
/// β_0 is the total mass of the weight.
struct RecurrenceCoefficients {
  std::vector<double> alpha;
  std::vector<double> beta;

  std::size_t size() const noexcept { return alpha.size(); }

  /// First `n` coefficient pairs. Valid because every algorithm here
  /// produces order-independent prefixes.
  RecurrenceCoefficients truncated(std::size_t n) const;
};

/// Chebyshev algorithm on ordinary moments μ_0..μ_{2n-1}.
/// Throws BreakdownError when a mixed moment σ_{k,k} is not positive.
RecurrenceCoefficients chebyshev(std::span<const double> moments);

/// Modified Chebyshev algorithm on modified moments m_0..m_{2n-1} taken with
/// respect to the monic family p_{k+1} = (x - a_k) p_k - b_k p_{k-1}.
/// `a` and `b` need at least 2n-1 entries.
RecurrenceCoefficients modified_chebyshev(std::span<const double> modified,
                                          std::span<const double> a,
                                          std::span<const double> b);

/// Monic scaled Laguerre family orthogonal for x^α e^{-cx}.
RecurrenceCoefficients laguerre_recurrence(double alpha, double c, std::size_t n);

/// Entry (i, j), 1 <= i <= j, of the upper Cholesky factor R of the Hankel
/// matrix [Γ(i+j+α-1)].
double cholesky_factor_entry(double alpha, std::size_t i, std::size_t j);

/// Entry (i, j), 1 <= i <= j, of the inverse of the Cholesky factor of the
/// Hankel matrix of η_k = Γ(k+α+1)/c^{k+α+1}.
SignedLog inverse_cholesky_entry(double alpha, double c, std::size_t i, std::size_t j);

/// Q = I + R^{-T} M₀ R^{-1}: the core-moment Hankel matrix M₀ two-sided
/// preconditioned by the inverse Cholesky factor of the Laguerre Hankel
/// matrix. The Cholesky factor of Q is grown one row at a time so nested
/// leading blocks can be solved without refactoring.
class PreconditionedSystem {
 public:
  PreconditionedSystem(const WeightParams& params, std::size_t size);

  std::size_t size() const noexcept { return size_; }
  const WeightParams& params() const noexcept { return params_; }

  /// Q(i, j) with zero-based indices.
  double q(std::size_t i, std::size_t j) const { return q_[i * size_ + j]; }

  /// Leading k×k block of Q, row-major.
  std::vector<double> leading_block(std::size_t k) const;

  /// Number of rows of the Cholesky factor computed so far.
  std::size_t factored_size() const noexcept { return factored_; }

  /// Extend the Cholesky factor to cover the leading `k` rows. Throws
  /// BreakdownError (algorithm "cholesky", index = failing block size) if a
  /// pivot is not positive.
  void factor_through(std::size_t k);

  /// Lower Cholesky factor entry L(i, j), zero-based, i, j < factored_size().
  double factor(std::size_t i, std::size_t j) const { return chol_[i * size_ + j]; }

  /// Solve Q_k y = rhs using the leading k×k block (k = rhs.size()).
  std::vector<double> solve(std::span<const double> rhs);

 private:
  WeightParams params_;
  std::size_t size_;
  std::vector<double> q_;
  std::vector<double> chol_;
  std::size_t factored_ = 0;
};

/// Right-hand side used for the nested preconditioned systems.
enum class RhsScaling {
  /// Q ŷ = e_k; the diagonal ratio of R^{-1} is folded into β_k analytically.
  unit,
  /// Q y = R^{-T} e_k as written in the original derivation. Underflows for
  /// large k; kept for cross-checking.
  scaled,
};

/// Recurrence coefficients by the preconditioned Cramer approach.
RecurrenceCoefficients preconditioned_cramer(const WeightParams& params, std::size_t n,
                                             RhsScaling rhs = RhsScaling::unit);

enum class Algorithm { chebyshev, modified, cramer };

std::string_view to_string(Algorithm a);
Algorithm parse_algorithm(std::string_view name);

/// n recurrence pairs for w_{ν,α,c} with the chosen algorithm.
RecurrenceCoefficients bessel_weight_recurrence(const WeightParams& params, std::size_t n,
                                                Algorithm algorithm);

}  // namespace bjgauss
