#include "bjgauss/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "bjgauss/errors.hpp"
#include "bjgauss/specfun.hpp"

namespace bjgauss {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr std::size_t kPanelBudget = 200000;

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
  double error = 0.0;
  bool transformed = false;  // integrated in u with x = u^p
};

struct PanelOrder {
  bool operator()(const Panel& l, const Panel& r) const { return l.error < r.error; }
};

class Integrand {
 public:
  Integrand(const WeightParams& params, const std::function<double(double)>& f, OracleKernel kernel)
      : params_(params), f_(f), power_(1.0 / (1.0 + params.alpha())), kernel_(kernel) {}

  double operator()(double x) const {
    if (x <= 0.0) return 0.0;
    const double jv = bessel(x);
    if (jv == 0.0) return 0.0;
    const double fx = f_(x);
    if (fx == 0.0) return 0.0;
    return fx * std::exp(params_.alpha() * std::log(x) - params_.c() * x) * jv;
  }

  // First-panel form after x = u^p, p = 1/(1+α): x^α dx = p du.
  double transformed(double u) const {
    if (u <= 0.0) return 0.0;
    const double x = std::pow(u, power_);
    const double fx = f_(x);
    if (fx == 0.0) return 0.0;
    return power_ * fx * std::exp(-params_.c() * x) * bessel(x);
  }

 private:
  double bessel(double x) const {
    return kernel_ == OracleKernel::unit ? 1.0 : bessel_j(params_.nu(), x);
  }

  const WeightParams& params_;
  const std::function<double(double)>& f_;
  double power_;
  OracleKernel kernel_;
};

Panel evaluate(const Integrand& g, double a, double b, bool transformed) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  auto eval = [&](double t) { return transformed ? g.transformed(t) : g(t); };

  const double fc = eval(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  double abs_sum = std::abs(kronrod);
  std::array<double, 7> f1{}, f2{};
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    f1[j] = eval(center - dx);
    f2[j] = eval(center + dx);
    kronrod += kKronrodWeights[j] * (f1[j] + f2[j]);
    abs_sum += kKronrodWeights[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * (f1[j] + f2[j]);
  }
  const double mean = 0.5 * kronrod;
  double asc = kKronrodWeights[7] * std::abs(fc - mean);
  for (std::size_t j = 0; j < 7; ++j)
    asc += kKronrodWeights[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));

  // QUADPACK error heuristic.
  double err = std::abs((kronrod - gauss) * half);
  const double resasc = asc * half;
  const double resabs = abs_sum * half;
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps))
    err = std::max(50.0 * kEps * resabs, err);
  return {a, b, kronrod * half, err, transformed};
}

// log of a closed overestimate of ∫_X^∞ x^s e^{-rx} dx.
double log_tail_bound(double s, double r, double x) {
  double slope = r;
  if (s > 0.0) slope = r - s / x;
  if (slope <= 0.0) return std::numeric_limits<double>::infinity();
  return s * std::log(x) - r * x - std::log(slope);
}

}  // namespace

OracleResult reference_integral(const WeightParams& params, const std::function<double(double)>& f,
                                double tol, const IntegrandEnvelope& envelope,
                                OracleKernel kernel) {
  if (!(tol > 0.0)) throw std::domain_error("reference_integral: tol must be positive");
  if (!(envelope.scale >= 0.0) || !(envelope.power >= 0.0))
    throw std::domain_error("reference_integral: envelope scale and power must be nonnegative");
  const double rate = params.c() - envelope.growth;
  if (!(rate > 0.0)) throw std::domain_error("reference_integral: envelope growth must be below c");
  if (envelope.scale == 0.0) return {};

  const double s = envelope.power + params.alpha();
  const double log_mass = std::log(envelope.scale) + log_gamma(s + 1.0) - (s + 1.0) * std::log(rate);
  // Each panel error is floored at 50 eps of its absolute mass.
  const double target = std::max(tol, 100.0 * kEps * std::exp(log_mass));
  const double log_tail_target = std::log(target / 10.0) - std::log(envelope.scale);

  const double period = std::numbers::pi;
  std::size_t panel_count = 1;
  for (;; ++panel_count) {
    const double x = period * static_cast<double>(panel_count);
    if (rate * x > 2.0 * s && log_tail_bound(s, rate, x) < log_tail_target) break;
    if (panel_count > kPanelBudget)
      throw ConvergenceError("reference_integral: truncation point not found", 0.0);
  }
  const double upper = period * static_cast<double>(panel_count);
  const double tail = envelope.scale * std::exp(log_tail_bound(s, rate, upper));

  const Integrand g(params, f, kernel);
  // Max-heap on panel error.
  std::vector<Panel> heap;
  const PanelOrder order;
  auto push = [&](const Panel& panel) {
    heap.push_back(panel);
    std::push_heap(heap.begin(), heap.end(), order);
  };
  const bool transform_first = params.alpha() < 0.0;
  if (transform_first)
    push(evaluate(g, 0.0, std::pow(period, 1.0 + params.alpha()), true));
  else
    push(evaluate(g, 0.0, period, false));
  for (std::size_t j = 1; j < panel_count; ++j)
    push(evaluate(g, period * static_cast<double>(j), period * static_cast<double>(j + 1), false));

  auto total_error = [&heap] {
    double e = 0.0;
    for (const auto& p : heap) e += p.error;
    return e;
  };

  double err = total_error();
  std::size_t since_check = 0;
  while (err + tail > target) {
    if (heap.size() >= kPanelBudget) {
      double v = 0.0;
      for (const auto& p : heap) v += p.value;
      throw ConvergenceError("reference_integral: panel budget exhausted (estimate " +
                                 std::to_string(v) + ", error " + std::to_string(err) + ")",
                             v);
    }
    std::pop_heap(heap.begin(), heap.end(), order);
    const Panel worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    const Panel left = evaluate(g, worst.a, mid, worst.transformed);
    const Panel right = evaluate(g, mid, worst.b, worst.transformed);
    push(left);
    push(right);
    err += left.error + right.error - worst.error;
    if (++since_check >= 64) {
      err = total_error();
      since_check = 0;
    }
    if (err + tail <= target) err = total_error();
  }

  std::vector<Panel>& panels = heap;
  std::sort(panels.begin(), panels.end(), [](const Panel& l, const Panel& r) {
    if (l.transformed != r.transformed) return l.transformed;
    return l.a < r.a;
  });
  double sum = 0.0, carry = 0.0, error = 0.0;
  for (const auto& p : panels) {
    const double t = sum + p.value;
    carry += std::abs(sum) >= std::abs(p.value) ? (sum - t) + p.value : (p.value - t) + sum;
    sum = t;
    error += p.error;
  }
  return {sum + carry, error + tail, panels.size()};
}

double exact_exponential_integral(double nu, double alpha, double d) {
  if (!(nu >= 0.0) || !(alpha > -1.0) || !(d > 0.0))
    throw std::domain_error("exact_exponential_integral: need nu >= 0, alpha > -1, d > 0");
  const double root = std::hypot(d, 1.0);
  const double log_scale = log_gamma(alpha + nu + 1.0) - log_gamma(nu + 1.0) -
                           (alpha + 1.0) * std::log(root) - nu * std::log(d + root);
  const double z = 0.5 / (root * (root + d));
  return std::exp(log_scale) * gauss_2f1(-alpha, alpha + 1.0, 1.0 + nu, z);
}

OracleResult moment_oracle(const WeightParams& params, std::size_t k, double tol) {
  const double kd = static_cast<double>(k);
  auto power = [kd](double x) { return std::pow(x, kd); };
  OracleResult bessel = reference_integral(params, power, tol, {1.0, kd, 0.0});
  const double p = kd + params.alpha() + 1.0;
  double laguerre = std::tgamma(p) / std::pow(params.c(), p);
  if (!std::isfinite(laguerre) || laguerre == 0.0)
    laguerre = std::exp(log_gamma(p) - p * std::log(params.c()));
  bessel.value += laguerre;
  return bessel;
}

}  // namespace bjgauss
