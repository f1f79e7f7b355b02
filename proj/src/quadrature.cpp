#include "bjgauss/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>

#include "bjgauss/errors.hpp"
#include "bjgauss/kernels.hpp"
#include "bjgauss/specfun.hpp"

namespace bjgauss {

double GaussRule::apply(const std::function<double(double)>& f) const {
  std::vector<double> values(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    values[i] = f(nodes[i]);
    if (!std::isfinite(values[i])) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "integrand is not finite at node " << i << " (x = " << nodes[i] << ")";
      throw std::domain_error(msg.str());
    }
  }
  return kernels::dot(weights, values);
}

TridiagonalEigen tridiagonal_eigen(std::span<const double> diag, std::span<const double> offdiag) {
  const std::size_t n = diag.size();
  if (n == 0) throw std::invalid_argument("tridiagonal_eigen: empty matrix");
  if (offdiag.size() + 1 < n) throw std::invalid_argument("tridiagonal_eigen: offdiag too short");

  std::vector<double> d(diag.begin(), diag.end());
  std::vector<double> e(n, 0.0);
  std::copy_n(offdiag.begin(), n - 1, e.begin());
  std::vector<double> z(n, 0.0);
  z[0] = 1.0;

  constexpr int kMaxSweeps = 60;
  for (std::size_t l = 0; l < n; ++l) {
    int sweeps = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) + dd == dd) break;
      }
      if (m == l) break;
      if (++sweeps > kMaxSweeps)
        throw ConvergenceError("tridiagonal_eigen: no convergence for eigenvalue " +
                                   std::to_string(l) + " after " + std::to_string(kMaxSweeps) +
                                   " QL sweeps (residual off-diagonal " +
                                   std::to_string(std::abs(e[l])) + ")",
                               std::abs(e[l]));

      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      bool deflated = false;
      for (std::size_t i = m; i-- > l;) {
        double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          deflated = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
        f = z[i + 1];
        z[i + 1] = s * z[i] + c * f;
        z[i] = c * z[i] - s * f;
      }
      if (deflated) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    } while (m != l);
  }
  return {std::move(d), std::move(z)};
}

GaussRule golub_welsch(const RecurrenceCoefficients& coeffs) {
  const std::size_t n = coeffs.size();
  if (n == 0 || coeffs.beta.size() != n)
    throw std::invalid_argument("golub_welsch: empty or inconsistent coefficients");
  for (std::size_t k = 0; k < n; ++k)
    if (!(coeffs.beta[k] > 0.0) || !std::isfinite(coeffs.beta[k]) || !std::isfinite(coeffs.alpha[k]))
      throw std::domain_error("golub_welsch: invalid coefficient at k=" + std::to_string(k));

  std::vector<double> off(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) off[k] = std::sqrt(coeffs.beta[k + 1]);
  const auto eig = tridiagonal_eigen(coeffs.alpha, off);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return eig.values[a] < eig.values[b]; });

  GaussRule rule;
  rule.mass = coeffs.beta[0];
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double v = eig.first_components[order[i]];
    rule.nodes[i] = eig.values[order[i]];
    rule.weights[i] = coeffs.beta[0] * v * v;
  }
  return rule;
}

GaussRule gauss_laguerre_rule(double alpha, double c, std::size_t n) {
  if (!(c > 0.0)) throw std::domain_error("gauss_laguerre_rule: c must be positive");
  auto rule = golub_welsch(laguerre_recurrence(alpha, 1.0, n));
  const double scale = std::pow(c, alpha + 1.0);
  for (auto& x : rule.nodes) x /= c;
  for (auto& w : rule.weights) w /= scale;
  rule.mass /= scale;
  return rule;
}

GaussRule bessel_weight_rule(const WeightParams& params, std::size_t n, Algorithm algorithm) {
  return golub_welsch(bessel_weight_recurrence(params, n, algorithm));
}

SplitRule make_split_rule(const WeightParams& params, const RecurrenceCoefficients& coeffs) {
  return {golub_welsch(coeffs), gauss_laguerre_rule(params.alpha(), params.c(), coeffs.size())};
}

double integrate_split(const SplitRule& rule, const std::function<double(double)>& f) {
  return rule.bessel.apply(f) - rule.laguerre.apply(f);
}

double integrate_bessel(const WeightParams& params, const std::function<double(double)>& f,
                        std::size_t n, Algorithm algorithm) {
  return integrate_split(make_split_rule(params, bessel_weight_recurrence(params, n, algorithm)), f);
}

double truncation_bound(const RecurrenceCoefficients& coeffs, double alpha, std::size_t n,
                        double sup_f2n) {
  if (coeffs.size() < n + 1)
    throw std::invalid_argument("truncation_bound: need beta_0..beta_n");
  if (!(sup_f2n >= 0.0)) throw std::domain_error("truncation_bound: sup must be nonnegative");
  if (sup_f2n == 0.0) return 0.0;
  double log_bessel = 0.0;
  for (std::size_t j = 0; j <= n; ++j) {
    if (!(coeffs.beta[j] > 0.0)) throw std::domain_error("truncation_bound: beta must be positive");
    log_bessel += std::log(coeffs.beta[j]);
  }
  const double nd = static_cast<double>(n);
  const double log_laguerre = log_gamma(nd + 1.0) + log_gamma(nd + alpha + 1.0);
  const double top = std::max(log_bessel, log_laguerre);
  const double log_sum =
      top + std::log(std::exp(log_bessel - top) + std::exp(log_laguerre - top));
  const double log_bound = std::log(sup_f2n) + log_sum - log_gamma(2.0 * nd + 1.0);
  if (log_bound > std::log(std::numeric_limits<double>::max()))
    return std::numeric_limits<double>::infinity();
  return std::exp(log_bound);
}

std::vector<std::pair<std::size_t, double>> condition_report(const WeightParams& params,
                                                             std::span<const std::size_t> sizes) {
  if (sizes.empty()) throw std::invalid_argument("condition_report: no sizes requested");
  const std::size_t top = *std::max_element(sizes.begin(), sizes.end());
  if (*std::min_element(sizes.begin(), sizes.end()) == 0)
    throw std::invalid_argument("condition_report: sizes must be positive");
  const PreconditionedSystem system(params, top);

  std::vector<std::pair<std::size_t, double>> out;
  out.reserve(sizes.size());
  for (const std::size_t k : sizes) {
    Eigen::MatrixXd q(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = system.q(i, j);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(q, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success)
      throw ConvergenceError("condition_report: eigensolver failed for k=" + std::to_string(k), 0.0);
    const auto& ev = eig.eigenvalues();
    out.emplace_back(k, ev.maxCoeff() / ev.minCoeff());
  }
  return out;
}

}  // namespace bjgauss
