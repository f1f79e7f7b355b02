#include "bjgauss/moments.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "bjgauss/specfun.hpp"

namespace bjgauss {

namespace {

// Leave headroom so the recursions can multiply by O(k) factors safely.
const double kLogMax = std::log(std::numeric_limits<double>::max()) - 8.0;

// Γ(s) / c^p, avoiding intermediate overflow when either factor alone is out
// of range.
double gamma_over_power(double s, double c, double p) {
  const double g = std::tgamma(s);
  const double cp = std::pow(c, p);
  if (std::isfinite(g) && std::isfinite(cp) && cp > 0.0) {
    const double r = g / cp;
    if (std::isfinite(r) && r > 0.0) return r;
  }
  return std::exp(log_gamma(s) - p * std::log(c));
}

void require_count(std::size_t count, const char* who) {
  if (count == 0) throw std::domain_error(std::string(who) + ": count must be positive");
}

void require_laguerre_params(double alpha, double c, const char* who) {
  if (!(alpha > -1.0)) throw std::domain_error(std::string(who) + ": alpha must exceed -1");
  if (!(c > 0.0)) throw std::domain_error(std::string(who) + ": c must be positive");
}

}  // namespace

WeightParams::WeightParams(double nu, double alpha, double c) : nu_(nu), alpha_(alpha), c_(c) {
  if (!(nu >= 0.0) || !std::isfinite(nu)) throw std::domain_error("WeightParams: nu must be >= 0");
  if (!(alpha > -1.0) || !std::isfinite(alpha))
    throw std::domain_error("WeightParams: alpha must exceed -1");
  if (!(c > 0.0) || !std::isfinite(c)) throw std::domain_error("WeightParams: c must be positive");
}

std::string_view to_string(MomentKind kind) {
  switch (kind) {
    case MomentKind::power: return "power";
    case MomentKind::core: return "core";
    case MomentKind::modified: return "modified";
    case MomentKind::laguerre: return "laguerre";
    case MomentKind::scaled_laguerre: return "scaled_laguerre";
  }
  return "unknown";
}

MomentKind parse_moment_kind(std::string_view name) {
  for (auto kind : {MomentKind::power, MomentKind::core, MomentKind::modified,
                    MomentKind::laguerre, MomentKind::scaled_laguerre})
    if (to_string(kind) == name) return kind;
  throw std::invalid_argument("unknown moment kind '" + std::string(name) + "'");
}

MomentTable core_moments(const WeightParams& params, std::size_t count) {
  require_count(count, "core_moments");
  const double nu = params.nu(), alpha = params.alpha(), c = params.c();
  const double s = std::hypot(c, 1.0);
  const double cs = c + s;
  const double z = 1.0 / (2.0 * s * cs);  // (s - c) / (2s)

  MomentTable table{MomentKind::core, nu, alpha, c, {}};
  table.values.resize(count);
  const double log_common = -log_gamma(nu + 1.0) - nu * std::log(cs);
  table.values[0] = std::exp(log_common + log_gamma(alpha + nu + 1.0) - (alpha + 1.0) * std::log(s)) *
                    gauss_2f1(-alpha, alpha + 1.0, 1.0 + nu, z);
  if (count == 1) return table;
  table.values[1] = std::exp(log_common + log_gamma(alpha + nu + 2.0) - (alpha + 2.0) * std::log(s)) *
                    gauss_2f1(-alpha - 1.0, alpha + 2.0, 1.0 + nu, z);

  const double denom = c * c + 1.0;
  for (std::size_t k = 1; k + 1 < count; ++k) {
    const double ka = static_cast<double>(k) + alpha;
    const double next =
        (c * (2.0 * ka + 1.0) * table.values[k] - (ka * ka - nu * nu) * table.values[k - 1]) / denom;
    if (!std::isfinite(next))
      throw std::range_error("core_moments: overflow at k=" + std::to_string(k + 1));
    table.values[k + 1] = next;
  }
  return table;
}

std::size_t max_power_moment_count(const WeightParams& params) {
  // The recursion step producing μ_{k+1} needs Γ(k+α)/c^{k+α+2}, and μ_k
  // itself contains η_k = Γ(k+α+1)/c^{k+α+1}.
  const double alpha = params.alpha(), c = params.c(), lc = std::log(c);
  std::size_t k = 0;
  for (;; ++k) {
    const double ka = static_cast<double>(k) + alpha;
    if (log_gamma(ka + 1.0) - (ka + 1.0) * lc > kLogMax) break;
    if (k >= 2 && log_gamma(ka - 1.0) - (ka + 1.0) * lc > kLogMax) break;
    if (k > 100000) break;
  }
  return k;
}

MomentTable power_moments(const WeightParams& params, std::size_t count) {
  require_count(count, "power_moments");
  const std::size_t limit = max_power_moment_count(params);
  if (count > limit)
    throw std::range_error("power_moments: Laguerre part overflows at k=" + std::to_string(limit));

  const double nu = params.nu(), alpha = params.alpha(), c = params.c();
  const auto core = core_moments(params, std::min<std::size_t>(count, 2));
  MomentTable table{MomentKind::power, nu, alpha, c, {}};
  table.values.resize(count);
  table.values[0] = core[0] + gamma_over_power(alpha + 1.0, c, alpha + 1.0);
  if (count == 1) return table;
  table.values[1] = core[1] + gamma_over_power(alpha + 2.0, c, alpha + 2.0);

  const double denom = c * c + 1.0;
  for (std::size_t k = 1; k + 1 < count; ++k) {
    const double ka = static_cast<double>(k) + alpha;
    const double source =
        gamma_over_power(ka, c, ka + 2.0) * (ka * ka + ka - c * c * nu * nu);
    table.values[k + 1] = (c * (2.0 * ka + 1.0) * table.values[k] -
                           (ka * ka - nu * nu) * table.values[k - 1] + source) /
                          denom;
  }
  return table;
}

MomentTable laguerre_moments(double alpha, std::size_t count) {
  require_count(count, "laguerre_moments");
  require_laguerre_params(alpha, 1.0, "laguerre_moments");
  MomentTable table{MomentKind::laguerre, 0.0, alpha, 1.0, {}};
  table.values.resize(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double v = std::tgamma(static_cast<double>(k) + alpha + 1.0);
    if (!std::isfinite(v))
      throw std::range_error("laguerre_moments: overflow at k=" + std::to_string(k));
    table.values[k] = v;
  }
  return table;
}

MomentTable scaled_laguerre_moments(double alpha, double c, std::size_t count) {
  require_count(count, "scaled_laguerre_moments");
  require_laguerre_params(alpha, c, "scaled_laguerre_moments");
  MomentTable table{MomentKind::scaled_laguerre, 0.0, alpha, c, {}};
  table.values.resize(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double p = static_cast<double>(k) + alpha + 1.0;
    const double v = gamma_over_power(p, c, p);
    if (!std::isfinite(v) || v == 0.0)
      throw std::range_error("scaled_laguerre_moments: out of range at k=" + std::to_string(k));
    table.values[k] = v;
  }
  return table;
}

std::vector<double> modified_from_moments(double alpha, double c, std::span<const double> base) {
  require_laguerre_params(alpha, c, "modified_from_moments");
  const double lc = std::log(c);
  std::vector<double> out(base.size());
  if (base.empty()) return out;
  out[0] = base[0];
  for (std::size_t k = 1; k < base.size(); ++k) {
    const double kd = static_cast<double>(k);
    // Sum of (-1)^{k+j} k!/c^k · C(k+α, k-j) · c^j/j! · base_j.
    const double log_head = log_gamma(kd + 1.0) + log_gamma(kd + alpha + 1.0) - kd * lc;
    double sum = 0.0;
    for (std::size_t j = 0; j <= k; ++j) {
      const double jd = static_cast<double>(j);
      const double log_coef = log_head + jd * lc - log_gamma(jd + 1.0) -
                              log_gamma(kd - jd + 1.0) - log_gamma(alpha + jd + 1.0);
      if (log_coef > kLogMax)
        throw std::range_error("modified_moments: factorial term overflows at k=" +
                               std::to_string(k));
      const double term = std::exp(log_coef) * base[j];
      sum += ((k + j) % 2 == 0) ? term : -term;
    }
    if (!std::isfinite(sum))
      throw std::range_error("modified_moments: overflow at k=" + std::to_string(k));
    out[k] = sum;
  }
  return out;
}

MomentTable modified_moments(const WeightParams& params, std::size_t count) {
  require_count(count, "modified_moments");
  const double alpha = params.alpha(), c = params.c();
  const auto core = core_moments(params, count);
  MomentTable table{MomentKind::modified, params.nu(), alpha, c,
                    modified_from_moments(alpha, c, core.values)};
  // Only p_0 = 1 sees the Laguerre part; the rest vanish by orthogonality.
  table.values[0] += gamma_over_power(alpha + 1.0, c, alpha + 1.0);
  return table;
}

}  // namespace bjgauss
