#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace bjgauss {

/// Parameters (nu, alpha, c) of the weight x^alpha e^{-cx} [J_nu(x) + 1].
class WeightParams {
 public:
  /// Throws std::domain_error unless nu >= 0, alpha > -1, c > 0.
  WeightParams(double nu, double alpha, double c);

  double nu() const noexcept { return nu_; }
  double alpha() const noexcept { return alpha_; }
  double c() const noexcept { return c_; }

  friend bool operator==(const WeightParams&, const WeightParams&) = default;

 private:
  double nu_;
  double alpha_;
  double c_;
};

enum class MomentKind { power, core, modified, laguerre, scaled_laguerre };

std::string_view to_string(MomentKind kind);
MomentKind parse_moment_kind(std::string_view name);

/// A moment sequence indexed from k = 0. Laguerre kinds only use alpha and c
/// (nu is carried as 0).
struct MomentTable {
  MomentKind kind;
  double nu = 0.0;
  double alpha = 0.0;
  double c = 1.0;
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t k) const { return values[k]; }
};

/// μ_{k,0} = ∫ x^{k+α} e^{-cx} J_ν(x) dx for k < count, from the two 2F1
/// starting values and the three-term forward recursion.
MomentTable core_moments(const WeightParams& params, std::size_t count);

/// μ_k = ∫ x^k w(x) dx, by the inhomogeneous power-moment recursion.
/// Throws std::range_error naming the first k whose Laguerre part overflows.
MomentTable power_moments(const WeightParams& params, std::size_t count);

/// Largest count accepted by power_moments for these parameters.
std::size_t max_power_moment_count(const WeightParams& params);

/// γ_k = Γ(k+α+1).
MomentTable laguerre_moments(double alpha, std::size_t count);

/// η_k = Γ(k+α+1) / c^{k+α+1}.
MomentTable scaled_laguerre_moments(double alpha, double c, std::size_t count);

/// m_k = ∫ L_k^{α,c}(x) w(x) dx with L_k^{α,c} the monic scaled Laguerre
/// polynomials.
MomentTable modified_moments(const WeightParams& params, std::size_t count);

/// Modified moments, against the monic scaled Laguerre family, of a weight
/// whose ordinary moments ∫ x^j dλ are `base`.
std::vector<double> modified_from_moments(double alpha, double c, std::span<const double> base);

}  // namespace bjgauss
