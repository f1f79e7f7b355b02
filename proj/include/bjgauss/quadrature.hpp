#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "bjgauss/moments.hpp"
#include "bjgauss/recurrence.hpp"

namespace bjgauss {

/// n-point Gaussian rule: ascending positive nodes, positive weights, and
/// the mass β_0 of the generating weight.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  double mass = 0.0;

  std::size_t size() const noexcept { return nodes.size(); }

  /// Σ w_i f(x_i).
  double apply(const std::function<double(double)>& f) const;
};

/// Eigenvalues of the symmetric tridiagonal matrix (diag, offdiag) and the
/// first component of each normalized eigenvector, by implicit-shift QL.
/// Output is unsorted. Throws ConvergenceError after 60 sweeps on one
/// eigenvalue.
struct TridiagonalEigen {
  std::vector<double> values;
  std::vector<double> first_components;
};
TridiagonalEigen tridiagonal_eigen(std::span<const double> diag, std::span<const double> offdiag);

/// Golub-Welsch: nodes are the eigenvalues of the Jacobi matrix, weights are
/// β_0 times the squared first eigenvector components.
GaussRule golub_welsch(const RecurrenceCoefficients& coeffs);

/// Rule for x^α e^{-cx} on (0, ∞).
GaussRule gauss_laguerre_rule(double alpha, double c, std::size_t n);

/// Rule for w(x) = x^α e^{-cx} [J_ν(x) + 1].
GaussRule bessel_weight_rule(const WeightParams& params, std::size_t n, Algorithm algorithm);

/// The pair of rules whose difference approximates ∫ f x^α e^{-cx} J_ν dx.
struct SplitRule {
  GaussRule bessel;    // for x^α e^{-cx}[J_ν + 1]
  GaussRule laguerre;  // for x^α e^{-cx}
};

SplitRule make_split_rule(const WeightParams& params, const RecurrenceCoefficients& coeffs);

/// I_n^J(f) - I_n^L(f). Throws std::domain_error naming the node when f is
/// not finite there.
double integrate_split(const SplitRule& rule, const std::function<double(double)>& f);

/// ∫_0^∞ f(x) x^α e^{-cx} J_ν(x) dx approximated with n-point rules.
double integrate_bessel(const WeightParams& params, const std::function<double(double)>& f,
                        std::size_t n, Algorithm algorithm);

/// Upper bound on |E_n(f)| given sup|f^{(2n)}|:
/// sup/(2n)! · (Π_{j=0}^{n} β_j + n! Γ(n+α+1)). Needs β_0..β_n. Returns
/// +infinity when the bound overflows.
double truncation_bound(const RecurrenceCoefficients& coeffs, double alpha, std::size_t n,
                        double sup_f2n);

/// Euclidean condition number κ₂(Q_k) of each requested leading block.
std::vector<std::pair<std::size_t, double>> condition_report(const WeightParams& params,
                                                             std::span<const std::size_t> sizes);

}  // namespace bjgauss
