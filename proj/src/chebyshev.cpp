// Chebyshev and modified Chebyshev algorithms (mixed-moment sweeps).

#include <cmath>
#include <stdexcept>
#include <string>

#include "bjgauss/kernels.hpp"
#include "bjgauss/recurrence.hpp"
#include "short_number.hpp"

namespace bjgauss {

namespace {

std::size_t half_length(std::size_t moment_count, const char* who) {
  if (moment_count < 2 || moment_count % 2 != 0)
    throw std::invalid_argument(std::string(who) + ": need an even number (>= 2) of moments");
  return moment_count / 2;
}

[[noreturn]] void breakdown(const char* who, std::size_t k, double sigma,
                            const RecurrenceCoefficients& so_far) {
  PartialCoefficients partial{
      {so_far.alpha.begin(), so_far.alpha.begin() + static_cast<std::ptrdiff_t>(k)},
      {so_far.beta.begin(), so_far.beta.begin() + static_cast<std::ptrdiff_t>(k)}};
  throw BreakdownError(who, k, "sigma_kk = " + detail::short_number(sigma), std::move(partial));
}

}  // namespace

RecurrenceCoefficients RecurrenceCoefficients::truncated(std::size_t n) const {
  if (n > size()) throw std::out_of_range("RecurrenceCoefficients::truncated: not enough terms");
  return {{alpha.begin(), alpha.begin() + static_cast<std::ptrdiff_t>(n)},
          {beta.begin(), beta.begin() + static_cast<std::ptrdiff_t>(n)}};
}

RecurrenceCoefficients chebyshev(std::span<const double> moments) {
  const std::size_t n = half_length(moments.size(), "chebyshev");
  if (!(moments[0] > 0.0)) throw std::domain_error("chebyshev: mu_0 must be positive");
  const std::size_t len = 2 * n;

  RecurrenceCoefficients out;
  out.alpha.assign(n, 0.0);
  out.beta.assign(n, 0.0);
  out.alpha[0] = moments[1] / moments[0];
  out.beta[0] = moments[0];

  // Rows σ_{k-2}, σ_{k-1}, σ_k indexed by l.
  std::vector<double> older(len, 0.0);
  std::vector<double> prev(moments.begin(), moments.end());
  std::vector<double> cur(len, 0.0);

  for (std::size_t k = 1; k < n; ++k) {
    const std::size_t count = len - 2 * k;
    kernels::chebyshev_row(std::span(cur).subspan(k, count),
                           std::span<const double>(prev).subspan(k + 1, count),
                           std::span<const double>(prev).subspan(k, count),
                           std::span<const double>(older).subspan(k, count), out.alpha[k - 1],
                           out.beta[k - 1]);
    const double skk = cur[k];
    if (!(skk > 0.0) || !std::isfinite(skk)) breakdown("chebyshev", k, skk, out);
    out.alpha[k] = cur[k + 1] / skk - prev[k] / prev[k - 1];
    out.beta[k] = skk / prev[k - 1];
    std::swap(older, prev);
    std::swap(prev, cur);
  }
  return out;
}

RecurrenceCoefficients modified_chebyshev(std::span<const double> modified,
                                          std::span<const double> a,
                                          std::span<const double> b) {
  const std::size_t n = half_length(modified.size(), "modified_chebyshev");
  const std::size_t len = 2 * n;
  if (a.size() + 1 < len || b.size() + 1 < len)
    throw std::invalid_argument("modified_chebyshev: reference recurrence too short");
  if (!(modified[0] > 0.0)) throw std::domain_error("modified_chebyshev: m_0 must be positive");

  RecurrenceCoefficients out;
  out.alpha.assign(n, 0.0);
  out.beta.assign(n, 0.0);
  out.alpha[0] = a[0] + modified[1] / modified[0];
  out.beta[0] = modified[0];

  std::vector<double> older(len, 0.0);
  std::vector<double> prev(modified.begin(), modified.end());
  std::vector<double> cur(len, 0.0);

  for (std::size_t k = 1; k < n; ++k) {
    const std::size_t count = len - 2 * k;
    kernels::modified_row(std::span(cur).subspan(k, count),
                          std::span<const double>(prev).subspan(k + 1, count),
                          std::span<const double>(prev).subspan(k, count),
                          std::span<const double>(older).subspan(k, count),
                          std::span<const double>(prev).subspan(k - 1, count),
                          a.subspan(k, count), b.subspan(k, count), out.alpha[k - 1],
                          out.beta[k - 1]);
    const double skk = cur[k];
    if (!(skk > 0.0) || !std::isfinite(skk)) breakdown("modified", k, skk, out);
    out.alpha[k] = a[k] + cur[k + 1] / skk - prev[k] / prev[k - 1];
    out.beta[k] = skk / prev[k - 1];
    std::swap(older, prev);
    std::swap(prev, cur);
  }
  return out;
}

RecurrenceCoefficients laguerre_recurrence(double alpha, double c, std::size_t n) {
  if (!(alpha > -1.0)) throw std::domain_error("laguerre_recurrence: alpha must exceed -1");
  if (!(c > 0.0)) throw std::domain_error("laguerre_recurrence: c must be positive");
  if (n == 0) throw std::domain_error("laguerre_recurrence: n must be positive");
  RecurrenceCoefficients out;
  out.alpha.resize(n);
  out.beta.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double kd = static_cast<double>(k);
    out.alpha[k] = (2.0 * kd + alpha + 1.0) / c;
    out.beta[k] = kd * (kd + alpha) / (c * c);
  }
  out.beta[0] = std::tgamma(alpha + 1.0) / std::pow(c, alpha + 1.0);
  if (!std::isfinite(out.beta[0]) || out.beta[0] == 0.0)
    out.beta[0] = std::exp(log_gamma(alpha + 1.0) - (alpha + 1.0) * std::log(c));
  return out;
}

}  // namespace bjgauss
