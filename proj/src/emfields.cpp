#include "bjgauss/emfields.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "bjgauss/quadrature.hpp"
#include "bjgauss/recurrence.hpp"
#include "short_number.hpp"

namespace bjgauss {

namespace {

using cplx = std::complex<double>;

bool positive_finite(double v) { return v > 0.0 && std::isfinite(v); }

// Principal root: Re >= 0, and Im >= 0 on the cut.
cplx decaying_sqrt(cplx z) {
  cplx r = std::sqrt(z);
  if (r.real() == 0.0 && r.imag() < 0.0) r = -r;
  return r;
}

std::size_t bessel_order(FieldComponent component) {
  return component == FieldComponent::hz ? 0 : 1;
}

double field_sign(FieldComponent component) {
  return component == FieldComponent::hz ? 1.0 : -1.0;
}

}  // namespace

LayeredEarth::LayeredEarth(std::vector<double> sigma, std::vector<double> h, double omega,
                           double mu)
    : sigma_(std::move(sigma)), h_(std::move(h)), omega_(omega), mu_(mu) {
  if (sigma_.empty()) throw std::invalid_argument("LayeredEarth: at least one layer is required");
  if (h_.size() + 1 != sigma_.size())
    throw std::invalid_argument("LayeredEarth: need " + std::to_string(sigma_.size() - 1) +
                                " thicknesses for " + std::to_string(sigma_.size()) +
                                " layers, got " + std::to_string(h_.size()));
  for (std::size_t j = 0; j < sigma_.size(); ++j)
    if (!positive_finite(sigma_[j]))
      throw std::domain_error("LayeredEarth: sigma_" + std::to_string(j + 1) + " must be positive");
  for (std::size_t j = 0; j < h_.size(); ++j)
    if (!positive_finite(h_[j]))
      throw std::domain_error("LayeredEarth: h_" + std::to_string(j + 1) + " must be positive");
  if (!positive_finite(omega_)) throw std::domain_error("LayeredEarth: omega must be positive");
  if (!positive_finite(mu_)) throw std::domain_error("LayeredEarth: mu must be positive");
}

cplx LayeredEarth::wavenumber_squared(std::size_t j) const {
  if (j == 0 || j > sigma_.size()) throw std::out_of_range("LayeredEarth: layer index out of range");
  return {0.0, -omega_ * mu_ * sigma_[j - 1]};
}

SurveyGeometry::SurveyGeometry(double height, double offset, double moment)
    : height_(height), offset_(offset), moment_(moment) {
  if (!positive_finite(height_)) throw std::domain_error("SurveyGeometry: height must be positive");
  if (!positive_finite(offset_)) throw std::domain_error("SurveyGeometry: offset must be positive");
  if (!std::isfinite(moment_)) throw std::domain_error("SurveyGeometry: moment must be finite");
}

double SurveyGeometry::prefactor() const noexcept {
  return moment_ / (4.0 * std::numbers::pi * offset_ * offset_ * offset_);
}

cplx reflection_coefficient(const LayeredEarth& model, double lambda) {
  if (!positive_finite(lambda)) throw std::domain_error("reflection_coefficient: lambda must be positive");
  const std::size_t n = model.layers();
  const double l2 = lambda * lambda;

  // u_0 = λ in the air; Ψ_j uses u_{j-1}² - u_j² = k_j² - k_{j-1}² directly.
  std::vector<cplx> u(n + 1), k2(n + 1, 0.0);
  u[0] = lambda;
  for (std::size_t j = 1; j <= n; ++j) {
    k2[j] = model.wavenumber_squared(j);
    u[j] = decaying_sqrt(l2 - k2[j]);
  }
  auto psi = [&](std::size_t j) {
    const cplx s = u[j - 1] + u[j];
    return (k2[j] - k2[j - 1]) / (s * s);
  };

  cplx r = 0.0;
  for (std::size_t j = n - 1; j >= 1; --j) {
    const cplx p = psi(j + 1);
    r = (r + p) / (r * p + 1.0) * std::exp(-2.0 * u[j] * model.h()[j - 1]);
  }
  const cplx p = psi(1);
  return (r + p) / (r * p + 1.0);
}

std::vector<std::size_t> field_orders(std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t k = 5; k < n; k += 5) out.push_back(k);
  if (n > 0) out.push_back(n);
  return out;
}

FieldResult field(FieldComponent component, const LayeredEarth& model,
                  const SurveyGeometry& geometry, std::size_t n, double tol) {
  if (n < 2) throw std::domain_error("field: order budget must be at least 2");
  if (!(tol > 0.0)) throw std::domain_error("field: tol must be positive");

  const double c = geometry.decay();
  const double r = geometry.offset();
  const WeightParams params(static_cast<double>(bessel_order(component)), 0.0, c);
  const double scale = field_sign(component) * geometry.prefactor();
  auto integrand = [&model, r](double x) {
    return reflection_coefficient(model, x / r).imag() * x * x;
  };

  FieldResult result;
  if (c >= 1.0)
    result.warnings.push_back("decay rate 2H/r = " + detail::short_number(c) +
                              " is outside the usual range (0, 1)");

  const auto coeffs = preconditioned_cramer(params, n);
  for (const std::size_t order : field_orders(n)) {
    const SplitRule rule = make_split_rule(params, coeffs.truncated(order));
    const double v = scale * integrate_split(rule, integrand);
    if (!result.trace.empty() && std::abs(v - result.trace.back().value) < tol) {
      result.trace.push_back({order, v});
      result.value = v;
      result.converged = true;
      return result;
    }
    result.trace.push_back({order, v});
    result.value = v;
  }
  result.warnings.push_back("successive orders did not agree to " + detail::short_number(tol) +
                            " within the order budget " + std::to_string(n));
  return result;
}

FieldResult hz_field(const LayeredEarth& model, const SurveyGeometry& geometry, std::size_t n,
                     double tol) {
  return field(FieldComponent::hz, model, geometry, n, tol);
}

FieldResult hrho_field(const LayeredEarth& model, const SurveyGeometry& geometry, std::size_t n,
                       double tol) {
  return field(FieldComponent::hrho, model, geometry, n, tol);
}

OracleResult field_reference(FieldComponent component, const LayeredEarth& model,
                             const SurveyGeometry& geometry, double tol) {
  const double r = geometry.offset();
  const WeightParams params(static_cast<double>(bessel_order(component)), 0.0, geometry.decay());
  const double scale = field_sign(component) * geometry.prefactor();
  auto integrand = [&model, r](double x) {
    return reflection_coefficient(model, x / r).imag() * x * x;
  };
  if (scale == 0.0) return {};
  // |Im R_0| <= 1, so x² bounds the integrand.
  OracleResult out = reference_integral(params, integrand, tol / std::abs(scale), {1.0, 2.0, 0.0});
  out.value *= scale;
  out.error_estimate *= std::abs(scale);
  return out;
}

}  // namespace bjgauss
