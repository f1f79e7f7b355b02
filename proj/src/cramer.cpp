// Preconditioned Cramer approach: recurrence coefficients from ratios of
// solution components of nested Hankel systems, preconditioned by the
// explicit Cholesky factor of the Laguerre moment matrix.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

#include "bjgauss/kernels.hpp"
#include "bjgauss/recurrence.hpp"
#include "short_number.hpp"

namespace bjgauss {

namespace {

void require_upper(std::size_t i, std::size_t j, const char* who) {
  if (i < 1 || i > j)
    throw std::domain_error(std::string(who) + ": need 1 <= i <= j (got i=" + std::to_string(i) +
                            ", j=" + std::to_string(j) + ")");
}

}  // namespace

double cholesky_factor_entry(double alpha, std::size_t i, std::size_t j) {
  require_upper(i, j, "cholesky_factor_entry");
  if (!(alpha > -1.0)) throw std::domain_error("cholesky_factor_entry: alpha must exceed -1");
  const double id = static_cast<double>(i), jd = static_cast<double>(j);
  return std::exp(log_gamma(jd) - log_gamma(jd - id + 1.0) + log_gamma(alpha + jd) -
                  0.5 * (log_gamma(id) + log_gamma(alpha + id)));
}

SignedLog inverse_cholesky_entry(double alpha, double c, std::size_t i, std::size_t j) {
  require_upper(i, j, "inverse_cholesky_entry");
  if (!(alpha > -1.0)) throw std::domain_error("inverse_cholesky_entry: alpha must exceed -1");
  if (!(c > 0.0)) throw std::domain_error("inverse_cholesky_entry: c must be positive");
  const double id = static_cast<double>(i), jd = static_cast<double>(j);
  const double lc = std::log(c);
  const double logmag = 0.5 * (alpha + 1.0) * lc + (id - 1.0) * lc +
                        0.5 * (log_gamma(jd) + log_gamma(alpha + jd)) - log_gamma(jd - id + 1.0) -
                        log_gamma(id) - log_gamma(alpha + id);
  return SignedLog::from_log((i + j) % 2 == 0 ? 1 : -1, logmag);
}

PreconditionedSystem::PreconditionedSystem(const WeightParams& params, std::size_t size)
    : params_(params), size_(size), q_(size * size, 0.0), chol_(size * size, 0.0) {
  if (size == 0) throw std::domain_error("PreconditionedSystem: size must be positive");
  const double alpha = params.alpha(), c = params.c();
  const auto core = core_moments(params, 2 * size - 1);

  std::vector<SignedLog> mu(core.size());
  for (std::size_t s = 0; s < core.size(); ++s) mu[s] = SignedLog::from_double(core[s]);

  // rinv[l * size + i] = (R^{-1})_{l+1, i+1} for l <= i.
  std::vector<SignedLog> rinv(size * size);
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t l = 0; l <= i; ++l)
      rinv[l * size + i] = inverse_cholesky_entry(alpha, c, l + 1, i + 1);

  std::vector<SignedLog> terms;
  terms.reserve(size * size);
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = i; j < size; ++j) {
      terms.clear();
      for (std::size_t l = 0; l <= i; ++l) {
        const SignedLog left = rinv[l * size + i];
        for (std::size_t m = 0; m <= j; ++m) {
          const SignedLog t = left * mu[l + m] * rinv[m * size + j];
          if (t.sign != 0 && !std::isfinite(t.logmag))
            throw std::range_error("PreconditionedSystem: non-finite term at (i,j,l,m)=(" +
                                   std::to_string(i + 1) + "," + std::to_string(j + 1) + "," +
                                   std::to_string(l + 1) + "," + std::to_string(m + 1) + ")");
          terms.push_back(t);
        }
      }
      const double v = signed_log_sum(terms).to_double() + (i == j ? 1.0 : 0.0);
      if (!std::isfinite(v))
        throw std::range_error("PreconditionedSystem: entry (" + std::to_string(i + 1) + "," +
                               std::to_string(j + 1) + ") is not finite");
      q_[i * size + j] = v;
      q_[j * size + i] = v;
    }
  }
}

std::vector<double> PreconditionedSystem::leading_block(std::size_t k) const {
  if (k > size_) throw std::out_of_range("PreconditionedSystem::leading_block: k exceeds size");
  std::vector<double> out(k * k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) out[i * k + j] = q(i, j);
  return out;
}

void PreconditionedSystem::factor_through(std::size_t k) {
  if (k > size_) throw std::out_of_range("PreconditionedSystem::factor_through: k exceeds size");
  for (std::size_t r = factored_; r < k; ++r) {
    const std::span<const double> row(&chol_[r * size_], r);
    for (std::size_t j = 0; j < r; ++j) {
      const std::span<const double> other(&chol_[j * size_], j);
      chol_[r * size_ + j] = (q(r, j) - kernels::dot(row.first(j), other)) / chol_[j * size_ + j];
    }
    const double pivot = q(r, r) - kernels::dot(row, row);
    if (!(pivot > 0.0) || !std::isfinite(pivot))
      throw BreakdownError("cholesky", r + 1,
                           "leading block of size " + std::to_string(r + 1) +
                               " is not positive definite");
    chol_[r * size_ + r] = std::sqrt(pivot);
    factored_ = r + 1;
  }
}

std::vector<double> PreconditionedSystem::solve(std::span<const double> rhs) {
  const std::size_t k = rhs.size();
  factor_through(k);
  std::vector<double> y(rhs.begin(), rhs.end());
  for (std::size_t i = 0; i < k; ++i) {
    const std::span<const double> row(&chol_[i * size_], i);
    y[i] = (y[i] - kernels::dot(row, std::span<const double>(y).first(i))) / chol_[i * size_ + i];
  }
  for (std::size_t i = k; i-- > 0;) {
    double s = y[i];
    for (std::size_t j = i + 1; j < k; ++j) s -= chol_[j * size_ + i] * y[j];
    y[i] = s / chol_[i * size_ + i];
  }
  return y;
}

RecurrenceCoefficients preconditioned_cramer(const WeightParams& params, std::size_t n,
                                             RhsScaling rhs) {
  if (n == 0) throw std::domain_error("preconditioned_cramer: n must be positive");
  const double alpha = params.alpha(), c = params.c();

  // Power moments μ_0..μ_2 seed α_0, β_0 and β_1.
  const auto core = core_moments(params, 3);
  const auto eta = scaled_laguerre_moments(alpha, c, 3);
  const double mu0 = core[0] + eta[0], mu1 = core[1] + eta[1], mu2 = core[2] + eta[2];

  RecurrenceCoefficients out;
  out.alpha.assign(n, 0.0);
  out.beta.assign(n, 0.0);
  out.alpha[0] = mu1 / mu0;
  out.beta[0] = mu0;
  if (n == 1) return out;
  out.beta[1] = (mu0 * mu2 - mu1 * mu1) / (mu0 * mu0);

  // Solve the nested systems of sizes 1..n+1. last[k] is the k-th (last)
  // component of the size-k solution, ratio[k] = y_{k-1} / y_k.
  const std::size_t top = n + 1;
  PreconditionedSystem system(params, top);
  std::vector<double> last(top + 1, 0.0), ratio(top + 1, 0.0);
  std::size_t solved = 0;
  std::string failure;
  for (std::size_t k = 1; k <= top; ++k) {
    std::vector<double> b(k, 0.0);
    b[k - 1] = rhs == RhsScaling::unit ? 1.0 : inverse_cholesky_entry(alpha, c, k, k).to_double();
    try {
      const auto y = system.solve(b);
      last[k] = y[k - 1];
      if (k >= 2) ratio[k] = y[k - 2] / y[k - 1];
    } catch (const BreakdownError& e) {
      failure = e.what();
      break;
    }
    solved = k;
  }

  auto sqrt_kk = [alpha](std::size_t k) {
    const double kd = static_cast<double>(k);
    return std::sqrt(kd * (alpha + kd));
  };

  // β_k needs systems k and k+1, α_k needs systems k+1 and k+2.
  for (std::size_t k = 1; k < n; ++k) {
    auto stop = [&](const std::string& why) {
      PartialCoefficients partial{
          {out.alpha.begin(), out.alpha.begin() + static_cast<std::ptrdiff_t>(k)},
          {out.beta.begin(), out.beta.begin() + static_cast<std::ptrdiff_t>(k)}};
      throw BreakdownError("cramer", k, why, std::move(partial));
    };
    if (k + 2 > solved) stop(failure.empty() ? "system not solved" : failure);
    if (k >= 2) {
      const double scale = rhs == RhsScaling::unit
                               ? static_cast<double>(k) * (alpha + static_cast<double>(k)) / (c * c)
                               : sqrt_kk(k) / c;
      out.beta[k] = scale * last[k] / last[k + 1];
    }
    const double s1 = sqrt_kk(k + 1), s0 = sqrt_kk(k);
    out.alpha[k] = -(s1 / c) * (ratio[k + 2] - s1) + (s0 / c) * (ratio[k + 1] - s0);
    if (!(out.beta[k] > 0.0) || !std::isfinite(out.beta[k]) || !std::isfinite(out.alpha[k]))
      stop("beta_k = " + detail::short_number(out.beta[k]));
  }
  return out;
}

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::chebyshev: return "chebyshev";
    case Algorithm::modified: return "modified";
    case Algorithm::cramer: return "cramer";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  for (auto a : {Algorithm::chebyshev, Algorithm::modified, Algorithm::cramer})
    if (to_string(a) == name) return a;
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

namespace {

// Largest even count <= 2n for which `moments(count)` does not overflow. The
// moment-based algorithms only read μ_0..μ_{2k+1} for step k, so a breakdown
// below the overflow point is still reported as such.
template <class F>
std::size_t usable_moment_count(std::size_t n, F moments) {
  std::size_t lo = 0, hi = 2 * n;
  while (lo < hi) {
    const std::size_t mid = (lo + hi + 1) / 2;
    try {
      moments(mid);
      lo = mid;
    } catch (const std::range_error&) {
      hi = mid - 1;
    }
  }
  return lo - lo % 2;
}

RecurrenceCoefficients require_order(RecurrenceCoefficients r, std::size_t n, std::string_view name) {
  if (r.size() < n)
    throw std::range_error(std::string(name) + ": moments overflow beyond order " +
                           std::to_string(r.size()) + " (requested " + std::to_string(n) + ")");
  return r;
}

}  // namespace

RecurrenceCoefficients bessel_weight_recurrence(const WeightParams& params, std::size_t n,
                                                Algorithm algorithm) {
  if (n == 0) throw std::domain_error("bessel_weight_recurrence: n must be positive");
  switch (algorithm) {
    case Algorithm::chebyshev: {
      const std::size_t count = std::min(2 * n, max_power_moment_count(params)) / 2 * 2;
      if (count == 0) throw std::range_error("chebyshev: power moments overflow at k=0");
      const auto mu = power_moments(params, count);
      return require_order(chebyshev(mu.values), n, "chebyshev");
    }
    case Algorithm::modified: {
      const std::size_t count =
          usable_moment_count(n, [&](std::size_t k) { return modified_moments(params, k); });
      if (count == 0) throw std::range_error("modified: modified moments overflow at k=0");
      const auto m = modified_moments(params, count);
      const auto ref = laguerre_recurrence(params.alpha(), params.c(), count);
      return require_order(modified_chebyshev(m.values, ref.alpha, ref.beta), n, "modified");
    }
    case Algorithm::cramer:
      return preconditioned_cramer(params, n);
  }
  throw std::invalid_argument("bessel_weight_recurrence: unknown algorithm");
}

}  // namespace bjgauss
