#include "bjgauss/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "bjgauss/emfields.hpp"
#include "bjgauss/errors.hpp"
#include "bjgauss/moments.hpp"
#include "bjgauss/quadrature.hpp"
#include "bjgauss/recurrence.hpp"

namespace bjgauss::cli {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::optional<double> nu, alpha, c;
  std::size_t n = 0;
  std::size_t count = 0;
  std::vector<std::string> algorithms;
  std::string kind;
  std::vector<std::size_t> sizes;
  double gamma = 0.5;
  std::optional<double> exact;
  std::string integrand = "exp";
  std::string format = "csv";
  std::string output;
  // em
  std::string component = "hz";
  std::vector<double> sigma;
  std::vector<double> h;
  double height = 0.0, offset = 0.0, frequency = 0.0, moment = 1.0;
  double tol = 1e-8;
  bool reference = false;
};

// One output cell: empty, number, integer or text.
using Cell = std::variant<std::monostate, double, std::size_t, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string json_string(const std::string& s) {
  std::string out = "\"";
  for (const char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      default: out += ch;
    }
  }
  return out + "\"";
}

std::string json_number(double v) { return std::isfinite(v) ? format_number(v) : "null"; }

std::string csv_cell(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) return format_number(*d);
  if (const auto* i = std::get_if<std::size_t>(&cell)) return std::to_string(*i);
  if (const auto* s = std::get_if<std::string>(&cell)) return *s;
  return "";
}

std::string json_cell(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) return json_number(*d);
  if (const auto* i = std::get_if<std::size_t>(&cell)) return std::to_string(*i);
  if (const auto* s = std::get_if<std::string>(&cell)) return json_string(*s);
  return "null";
}

void write_csv(const Table& t, std::ostream& os) {
  for (std::size_t j = 0; j < t.columns.size(); ++j) os << (j ? "," : "") << t.columns[j];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) os << (j ? "," : "") << csv_cell(row[j]);
    os << '\n';
  }
}

using Header = std::vector<std::pair<std::string, std::string>>;  // key, encoded value

void write_json(const Header& header, const Table& t, std::ostream& os) {
  os << "{";
  for (const auto& [key, value] : header) os << json_string(key) << ":" << value << ",";
  os << "\"rows\":[";
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    os << (r ? "," : "") << "{";
    for (std::size_t j = 0; j < t.columns.size(); ++j)
      os << (j ? "," : "") << json_string(t.columns[j]) << ":" << json_cell(t.rows[r][j]);
    os << "}";
  }
  os << "]}\n";
}

void emit(const RunConfig& cfg, const Header& header, const Table& t, std::ostream& os) {
  if (cfg.format == "json")
    write_json(header, t, os);
  else
    write_csv(t, os);
}

WeightParams require_params(const RunConfig& cfg) {
  if (!cfg.nu || !cfg.alpha || !cfg.c)
    throw UsageError(cfg.command + ": --nu, --alpha and --c are required");
  return WeightParams(*cfg.nu, *cfg.alpha, *cfg.c);
}

Header params_header(const WeightParams& p) {
  return {{"nu", json_number(p.nu())}, {"alpha", json_number(p.alpha())}, {"c", json_number(p.c())}};
}

std::vector<Algorithm> parse_algorithms(const RunConfig& cfg) {
  std::vector<Algorithm> out;
  for (const auto& name : cfg.algorithms) {
    try {
      out.push_back(parse_algorithm(name));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  if (out.empty()) throw UsageError(cfg.command + ": --algorithm is required");
  return out;
}

void report_breakdown(const BreakdownError& e, std::ostream& err) {
  err << "breakdown: algorithm=" << e.algorithm() << " index=" << e.index() << "\n"
      << e.what() << "\n";
}

// Coefficients up to n, or the prefix computed before a breakdown.
struct Attempt {
  RecurrenceCoefficients coeffs;
  std::optional<std::size_t> breakdown_index;
  std::string failure;  // any other numerical failure
};

Attempt attempt(const WeightParams& params, std::size_t n, Algorithm algorithm, std::ostream& err) {
  Attempt a;
  try {
    a.coeffs = bessel_weight_recurrence(params, n, algorithm);
  } catch (const BreakdownError& e) {
    a.coeffs = {e.partial().alpha, e.partial().beta};
    a.breakdown_index = e.index();
    err << e.what() << "\n";
  } catch (const std::range_error& e) {
    a.failure = e.what();
    err << to_string(algorithm) << ": " << e.what() << "\n";
  } catch (const ConvergenceError& e) {
    a.failure = e.what();
    err << to_string(algorithm) << ": " << e.what() << "\n";
  }
  return a;
}

int cmd_rule(const RunConfig& cfg, std::ostream& os, std::ostream& err) {
  const WeightParams p = require_params(cfg);
  const auto algs = parse_algorithms(cfg);
  if (algs.size() != 1) throw UsageError("rule: exactly one --algorithm is required");
  if (cfg.n == 0) throw UsageError("rule: --n must be positive");
  GaussRule rule;
  try {
    rule = bessel_weight_rule(p, cfg.n, algs[0]);
  } catch (const BreakdownError& e) {
    report_breakdown(e, err);
    return kBreakdown;
  }
  if (cfg.format == "json") {
    os << "{\"nu\":" << json_number(p.nu()) << ",\"alpha\":" << json_number(p.alpha())
       << ",\"c\":" << json_number(p.c()) << ",\"algorithm\":" << json_string(cfg.algorithms[0])
       << ",\"nodes\":[";
    for (std::size_t i = 0; i < rule.size(); ++i) os << (i ? "," : "") << json_number(rule.nodes[i]);
    os << "],\"weights\":[";
    for (std::size_t i = 0; i < rule.size(); ++i) os << (i ? "," : "") << json_number(rule.weights[i]);
    os << "]}\n";
    return kSuccess;
  }
  Table t{{"index", "node", "weight"}, {}};
  for (std::size_t i = 0; i < rule.size(); ++i) t.rows.push_back({i, rule.nodes[i], rule.weights[i]});
  write_csv(t, os);
  return kSuccess;
}

int cmd_moments(const RunConfig& cfg, std::ostream& os, std::ostream&) {
  MomentKind kind;
  try {
    kind = parse_moment_kind(cfg.kind);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (cfg.count == 0) throw UsageError("moments: --count must be positive");
  const double alpha = cfg.alpha.value_or(0.0);
  MomentTable table;
  Header header{{"kind", json_string(cfg.kind)}};
  switch (kind) {
    case MomentKind::laguerre:
      table = laguerre_moments(alpha, cfg.count);
      header.emplace_back("alpha", json_number(alpha));
      break;
    case MomentKind::scaled_laguerre: {
      if (!cfg.c) throw UsageError("moments: --c is required for scaled_laguerre");
      table = scaled_laguerre_moments(alpha, *cfg.c, cfg.count);
      header.emplace_back("alpha", json_number(alpha));
      header.emplace_back("c", json_number(*cfg.c));
      break;
    }
    default: {
      const WeightParams p = require_params(cfg);
      table = kind == MomentKind::power  ? power_moments(p, cfg.count)
              : kind == MomentKind::core ? core_moments(p, cfg.count)
                                         : modified_moments(p, cfg.count);
      for (auto& kv : params_header(p)) header.push_back(kv);
    }
  }
  Table t{{"k", "value"}, {}};
  for (std::size_t k = 0; k < table.size(); ++k) t.rows.push_back({k, table[k]});
  emit(cfg, header, t, os);
  return kSuccess;
}

int cmd_coeffs(const RunConfig& cfg, std::ostream& os, std::ostream& err) {
  const WeightParams p = require_params(cfg);
  const auto algs = parse_algorithms(cfg);
  if (cfg.n == 0) throw UsageError("coeffs: --n must be positive");
  Table t{{"algorithm", "k", "alpha", "beta", "status"}, {}};
  for (const Algorithm alg : algs) {
    const Attempt a = attempt(p, cfg.n, alg, err);
    const std::string name(to_string(alg));
    for (std::size_t k = 0; k < cfg.n; ++k) {
      if (k < a.coeffs.size()) {
        t.rows.push_back({name, k, a.coeffs.alpha[k], a.coeffs.beta[k], std::string("ok")});
      } else {
        std::string status = !a.failure.empty()           ? "failed"
                             : k == *a.breakdown_index ? "breakdown"
                                                         : "after_breakdown";
        t.rows.push_back({name, k, std::monostate{}, std::monostate{}, status});
      }
    }
  }
  emit(cfg, params_header(p), t, os);
  return kSuccess;
}

int cmd_convergence(const RunConfig& cfg, std::ostream& os, std::ostream& err) {
  const WeightParams p = require_params(cfg);
  const auto algs = parse_algorithms(cfg);
  if (cfg.n == 0) throw UsageError("convergence: --nmax must be positive");
  if (cfg.integrand != "exp") throw UsageError("convergence: unknown integrand '" + cfg.integrand + "'");
  if (!(cfg.gamma > -p.c()) || !std::isfinite(cfg.gamma))
    throw UsageError("convergence: --gamma must exceed -c");
  const double gamma = cfg.gamma;
  const double exact = cfg.exact ? *cfg.exact
                                 : exact_exponential_integral(p.nu(), p.alpha(), p.c() + gamma);
  auto f = [gamma](double x) { return std::exp(-gamma * x); };

  Table t{{"algorithm", "n", "approx", "abs_error", "bound", "status"}, {}};
  for (const Algorithm alg : algs) {
    // One extra pair feeds β_n into the bound.
    const Attempt a = attempt(p, cfg.n + 1, alg, err);
    const std::string name(to_string(alg));
    for (std::size_t n = 1; n <= cfg.n; ++n) {
      if (n > a.coeffs.size()) {
        t.rows.push_back({name, n, std::monostate{}, std::monostate{}, std::monostate{},
                          std::string(a.failure.empty() ? "breakdown" : "failed")});
        continue;
      }
      Cell approx, error, bound;
      std::string status = "ok";
      try {
        const double v = integrate_split(make_split_rule(p, a.coeffs.truncated(n)), f);
        approx = v;
        error = std::abs(v - exact);
      } catch (const std::exception& e) {
        err << name << " n=" << n << ": " << e.what() << "\n";
        status = "failed";
      }
      const double sup = std::pow(std::abs(gamma), 2.0 * static_cast<double>(n));
      if (n + 1 <= a.coeffs.size() && std::isfinite(sup))
        bound = truncation_bound(a.coeffs, p.alpha(), n, sup);
      t.rows.push_back({name, n, approx, error, bound, status});
    }
  }
  Header header = params_header(p);
  header.emplace_back("integrand", json_string(cfg.integrand));
  header.emplace_back("gamma", json_number(gamma));
  header.emplace_back("exact", json_number(exact));
  emit(cfg, header, t, os);
  return kSuccess;
}

int cmd_condition(const RunConfig& cfg, std::ostream& os, std::ostream& err) {
  const WeightParams p = require_params(cfg);
  if (cfg.sizes.empty()) throw UsageError("condition: --k is required");
  if (std::find(cfg.sizes.begin(), cfg.sizes.end(), 0u) != cfg.sizes.end())
    throw UsageError("condition: sizes must be positive");
  std::vector<std::size_t> sizes = cfg.sizes;
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  std::vector<std::pair<std::size_t, double>> report;
  try {
    report = condition_report(p, sizes);
  } catch (const BreakdownError& e) {
    report_breakdown(e, err);
    return kBreakdown;
  }
  Table t{{"k", "kappa2_Q"}, {}};
  for (const auto& [k, kappa] : report) t.rows.push_back({k, kappa});
  emit(cfg, params_header(p), t, os);
  return kSuccess;
}

int cmd_em(const RunConfig& cfg, std::ostream& os, std::ostream& err) {
  if (cfg.sigma.empty()) throw UsageError("em: --sigma is required");
  if (!(cfg.frequency > 0.0)) throw UsageError("em: --frequency (Hz) is required and must be positive");
  if (cfg.component != "hz" && cfg.component != "hrho")
    throw UsageError("em: --component must be hz or hrho");
  if (cfg.n < 2) throw UsageError("em: --n must be at least 2");
  const LayeredEarth model(cfg.sigma, cfg.h, 2.0 * std::numbers::pi * cfg.frequency);
  const SurveyGeometry geometry(cfg.height, cfg.offset, cfg.moment);
  const FieldComponent comp = cfg.component == "hz" ? FieldComponent::hz : FieldComponent::hrho;

  FieldResult result;
  try {
    result = field(comp, model, geometry, cfg.n, cfg.tol);
  } catch (const BreakdownError& e) {
    report_breakdown(e, err);
    return kBreakdown;
  }
  for (const auto& w : result.warnings) err << "warning: " << w << "\n";

  Table t{{"kind", "order", "value", "converged"}, {}};
  for (const auto& step : result.trace)
    t.rows.push_back({std::string("trace"), step.order, step.value, std::monostate{}});
  t.rows.push_back({std::string("final"), result.trace.back().order, result.value,
                    std::string(result.converged ? "true" : "false")});
  if (cfg.reference) {
    const OracleResult ref = field_reference(comp, model, geometry, cfg.tol * 1e-3);
    t.rows.push_back({std::string("reference"), std::monostate{}, ref.value, std::monostate{}});
  }
  Header header{{"component", json_string(cfg.component)},
                {"frequency", json_number(cfg.frequency)},
                {"height", json_number(cfg.height)},
                {"offset", json_number(cfg.offset)},
                {"moment", json_number(cfg.moment)},
                {"converged", result.converged ? "true" : "false"}};
  emit(cfg, header, t, os);
  return kSuccess;
}

void add_params(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--nu", cfg.nu, "Bessel order nu >= 0");
  sub->add_option("--alpha", cfg.alpha, "exponent alpha > -1");
  sub->add_option("--c", cfg.c, "decay rate c > 0");
}

void add_output(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--format", cfg.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--output,-o", cfg.output, "output file (default: standard output)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Gaussian rules for x^alpha e^{-cx} [J_nu(x) + 1] on (0, inf)", "bjgauss"};
  app.require_subcommand(1);

  auto* rule = app.add_subcommand("rule", "nodes and weights of an n-point rule");
  add_params(rule, cfg);
  rule->add_option("--n", cfg.n, "number of points")->required();
  rule->add_option("--algorithm", cfg.algorithms, "chebyshev, modified or cramer")->required();
  add_output(rule, cfg);

  auto* moments = app.add_subcommand("moments", "moment sequences");
  add_params(moments, cfg);
  moments->add_option("--kind", cfg.kind, "power, core, modified, laguerre or scaled_laguerre")
      ->required();
  moments->add_option("--count", cfg.count, "number of moments")->required();
  add_output(moments, cfg);

  auto* coeffs = app.add_subcommand("coeffs", "recurrence coefficients with breakdown status");
  add_params(coeffs, cfg);
  coeffs->add_option("--n", cfg.n, "number of coefficient pairs")->required();
  coeffs->add_option("--algorithm", cfg.algorithms, "comma-separated algorithms")
      ->required()
      ->delimiter(',');
  add_output(coeffs, cfg);

  auto* conv = app.add_subcommand("convergence", "error of the split rule against an exact value");
  add_params(conv, cfg);
  conv->add_option("--nmax", cfg.n, "largest rule size")->required();
  conv->add_option("--algorithm", cfg.algorithms, "comma-separated algorithms")
      ->delimiter(',')
      ->default_str("cramer");
  conv->add_option("--integrand", cfg.integrand, "integrand from the registry: exp = e^{-gamma x}");
  conv->add_option("--gamma", cfg.gamma, "rate of the exponential integrand (default 0.5)");
  conv->add_option("--exact", cfg.exact, "override the closed-form exact value");
  add_output(conv, cfg);

  auto* cond = app.add_subcommand("condition", "condition numbers of the preconditioned matrix");
  add_params(cond, cfg);
  cond->add_option("--k", cfg.sizes, "comma-separated block sizes")->required()->delimiter(',');
  add_output(cond, cfg);

  auto* em = app.add_subcommand("em", "magnetic field of a dipole over a layered earth");
  // --h is a layer thickness here, so help is long-form only.
  em->set_help_flag("--help", "print this help message and exit");
  em->add_option("--component", cfg.component, "hz or hrho");
  em->add_option("--sigma", cfg.sigma, "comma-separated layer conductivities (S/m)")
      ->required()
      ->delimiter(',');
  em->add_option("--h", cfg.h, "comma-separated layer thicknesses (m), one fewer than --sigma")
      ->delimiter(',');
  em->add_option("--height", cfg.height, "dipole height H (m)")->required();
  em->add_option("--offset", cfg.offset, "transmitter-receiver offset r (m)")->required();
  em->add_option("--frequency", cfg.frequency, "frequency in Hz")->required();
  em->add_option("--moment", cfg.moment, "dipole moment (A m^2, default 1)");
  em->add_option("--n", cfg.n, "largest rule size (default 85)");
  em->add_option("--tol", cfg.tol, "absolute tolerance between successive orders (default 1e-8)");
  em->add_flag("--reference", cfg.reference, "also print the adaptive-quadrature reference");
  add_output(em, cfg);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      for (auto* sub : app.get_subcommands()) out << sub->help();
      return kSuccess;
    }
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return kInvalidArguments;
  }

  for (auto* sub : {rule, moments, coeffs, conv, cond, em})
    if (sub->parsed()) cfg.command = sub->get_name();
  if (cfg.command == "convergence" && cfg.algorithms.empty()) cfg.algorithms = {"cramer"};
  if (cfg.command == "em" && cfg.n == 0) cfg.n = 85;

  std::ostringstream buffer;
  int status = kSuccess;
  try {
    if (cfg.command == "rule") status = cmd_rule(cfg, buffer, err);
    else if (cfg.command == "moments") status = cmd_moments(cfg, buffer, err);
    else if (cfg.command == "coeffs") status = cmd_coeffs(cfg, buffer, err);
    else if (cfg.command == "convergence") status = cmd_convergence(cfg, buffer, err);
    else if (cfg.command == "condition") status = cmd_condition(cfg, buffer, err);
    else status = cmd_em(cfg, buffer, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidArguments;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidArguments;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidArguments;
  } catch (const BreakdownError& e) {
    report_breakdown(e, err);
    return kBreakdown;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kNumericalFailure;
  }
  if (status != kSuccess) return status;

  if (cfg.output.empty() || cfg.output == "-") {
    out << buffer.str();
  } else {
    std::ofstream file(cfg.output, std::ios::binary);
    if (!file) {
      err << "error: cannot open " << cfg.output << " for writing\n";
      return kInvalidArguments;
    }
    file << buffer.str();
  }
  return kSuccess;
}

}  // namespace bjgauss::cli
