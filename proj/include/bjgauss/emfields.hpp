#pragma once

// Magnetic fields of a vertical magnetic dipole above a horizontally layered
// earth, evaluated with the Bessel-weight Gaussian rules.

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "bjgauss/oracle.hpp"

namespace bjgauss {

inline constexpr double kVacuumPermeability = 4.0e-7 * 3.14159265358979323846;

/// Conductivities σ_1..σ_N (S/m), thicknesses h_1..h_{N-1} (m, the deepest
/// layer is a half-space), angular frequency ω (rad/s) and permeability μ.
class LayeredEarth {
 public:
  LayeredEarth(std::vector<double> sigma, std::vector<double> h, double omega,
               double mu = kVacuumPermeability);

  const std::vector<double>& sigma() const noexcept { return sigma_; }
  const std::vector<double>& h() const noexcept { return h_; }
  double omega() const noexcept { return omega_; }
  double mu() const noexcept { return mu_; }
  std::size_t layers() const noexcept { return sigma_.size(); }

  /// k_j² = -iωμσ_j for j = 1..N.
  std::complex<double> wavenumber_squared(std::size_t j) const;

 private:
  std::vector<double> sigma_;
  std::vector<double> h_;
  double omega_;
  double mu_;
};

/// Dipole height H, transmitter-receiver offset r (both m) and moment m (A·m²).
class SurveyGeometry {
 public:
  SurveyGeometry(double height, double offset, double moment = 1.0);

  double height() const noexcept { return height_; }
  double offset() const noexcept { return offset_; }
  double moment() const noexcept { return moment_; }

  /// Decay rate c = 2H/r of the transformed integrand.
  double decay() const noexcept { return 2.0 * height_ / offset_; }

  /// m / (4π r³).
  double prefactor() const noexcept;

 private:
  double height_;
  double offset_;
  double moment_;
};

/// R_0(λ) by the backward layer recursion.
std::complex<double> reflection_coefficient(const LayeredEarth& model, double lambda);

enum class FieldComponent { hz, hrho };

struct OrderValue {
  std::size_t order;
  double value;
};

struct FieldResult {
  double value = 0.0;
  bool converged = false;
  std::vector<OrderValue> trace;
  std::vector<std::string> warnings;
};

/// Rule orders tried for a budget n: 5, 10, 15, ... below n, then n.
std::vector<std::size_t> field_orders(std::size_t n);

/// Im H_z or Im H_ρ. Orders from field_orders(n) are tried in turn and the
/// sweep stops when two successive values differ by less than `tol` (an
/// absolute tolerance on the field in A/m). Recurrence breakdown propagates.
FieldResult hz_field(const LayeredEarth& model, const SurveyGeometry& geometry, std::size_t n,
                     double tol);
FieldResult hrho_field(const LayeredEarth& model, const SurveyGeometry& geometry, std::size_t n,
                       double tol);
FieldResult field(FieldComponent component, const LayeredEarth& model,
                  const SurveyGeometry& geometry, std::size_t n, double tol);

/// The same field by adaptive integration of the untransformed integrand.
/// `tol` is absolute on the field value.
OracleResult field_reference(FieldComponent component, const LayeredEarth& model,
                             const SurveyGeometry& geometry, double tol);

}  // namespace bjgauss
