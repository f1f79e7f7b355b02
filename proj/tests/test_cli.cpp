#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "bjgauss/cli.hpp"
#include "bjgauss/moments.hpp"

using namespace bjgauss;

namespace {

struct Outcome {
  int status;
  std::string out, err;
};

Outcome run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int status = cli::run(args, out, err);
  return {status, out.str(), err.str()};
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (const char ch : s) {
    if (ch == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  return parts;
}

// Rows of a CSV document, keyed by column name.
std::vector<std::map<std::string, std::string>> read_csv(const std::string& text) {
  auto lines = split(text, '\n');
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  REQUIRE_FALSE(lines.empty());
  const auto header = split(lines[0], ',');
  std::vector<std::map<std::string, std::string>> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto cells = split(lines[i], ',');
    REQUIRE(cells.size() == header.size());
    std::map<std::string, std::string> row;
    for (std::size_t j = 0; j < header.size(); ++j) row[header[j]] = cells[j];
    rows.push_back(row);
  }
  return rows;
}

double num(const std::string& s) { return std::strtod(s.c_str(), nullptr); }

std::vector<double> json_array(const std::string& doc, const std::string& key) {
  const auto start = doc.find("\"" + key + "\":[");
  REQUIRE(start != std::string::npos);
  const auto open = doc.find('[', start), close = doc.find(']', open);
  std::vector<double> out;
  for (const auto& cell : split(doc.substr(open + 1, close - open - 1), ',')) out.push_back(num(cell));
  return out;
}

const std::vector<std::string> kResistiveFlags{"em",          "--sigma",  "0.05,0.0049,0.0182", "--h",
                                          "2.5,0.5",     "--height", "0.4",                "--offset",
                                          "8",           "--frequency", "10"};

}  // namespace

TEST_CASE("format_number round-trips doubles") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) CHECK(num(cli::format_number(v)) == v);
  CHECK(cli::format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(cli::format_number(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(cli::format_number(std::nan("")) == "nan");
}

TEST_CASE("one-point rule is (mu_1/mu_0, mu_0)") {
  const auto r = run_cli({"rule", "--nu", "0", "--alpha", "0", "--c", "1", "--n", "1", "--algorithm", "cramer"});
  REQUIRE(r.status == cli::kSuccess);
  const auto rows = read_csv(r.out);
  REQUIRE(rows.size() == 1);
  const auto mu = power_moments(WeightParams(0.0, 0.0, 1.0), 2);
  CHECK(num(rows[0].at("node")) == doctest::Approx(mu[1] / mu[0]).epsilon(1e-14));
  CHECK(num(rows[0].at("weight")) == doctest::Approx(mu[0]).epsilon(1e-14));
  CHECK(rows[0].at("index") == "0");
}

TEST_CASE("rule JSON layout") {
  const auto r = run_cli(
      {"rule", "--nu", "0", "--alpha", "0", "--c", "1", "--n", "3", "--algorithm", "cramer", "--format", "json"});
  REQUIRE(r.status == cli::kSuccess);
  CHECK(r.out.rfind("{\"nu\":0,\"alpha\":0,\"c\":1,\"algorithm\":\"cramer\",\"nodes\":[", 0) == 0);
  CHECK(json_array(r.out, "nodes").size() == 3);
  CHECK(json_array(r.out, "weights").size() == 3);
}

TEST_CASE("rule breakdown exits with status 2 and names the index") {
  const auto r =
      run_cli({"rule", "--nu", "0.5", "--alpha", "0.5", "--c", "0.2", "--n", "30", "--algorithm", "chebyshev"});
  CHECK(r.status == cli::kBreakdown);
  CHECK(r.out.empty());
  const auto pos = r.err.find("index=");
  REQUIRE(pos != std::string::npos);
  const long index = std::strtol(r.err.c_str() + pos + 6, nullptr, 10);
  CHECK(index >= 1);
  CHECK(index <= 30);
}

TEST_CASE("sixty-point cramer rule") {
  const auto r =
      run_cli({"rule", "--nu", "0.9", "--alpha", "0.1", "--c", "0.1", "--n", "60", "--algorithm", "cramer"});
  REQUIRE(r.status == cli::kSuccess);
  const auto rows = read_csv(r.out);
  REQUIRE(rows.size() == 60);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(num(rows[i].at("weight")) > 0.0);
    if (i) CHECK(num(rows[i].at("node")) > num(rows[i - 1].at("node")));
  }
}

TEST_CASE("invalid flags exit with status 1") {
  const std::vector<std::vector<std::string>> cases{
      {},
      {"frobnicate"},
      {"rule", "--nu", "-1", "--alpha", "0", "--c", "1", "--n", "3", "--algorithm", "cramer"},
      {"rule", "--nu", "0", "--alpha", "-1", "--c", "1", "--n", "3", "--algorithm", "cramer"},
      {"rule", "--nu", "0", "--alpha", "0", "--c", "0", "--n", "3", "--algorithm", "cramer"},
      {"rule", "--nu", "0", "--alpha", "0", "--c", "1", "--n", "3", "--algorithm", "simpson"},
      {"rule", "--nu", "0", "--alpha", "0", "--c", "1", "--n", "0", "--algorithm", "cramer"},
      {"rule", "--alpha", "0", "--c", "1", "--n", "3", "--algorithm", "cramer"},
      {"rule", "--nu", "0", "--alpha", "0", "--c", "1", "--n", "3", "--algorithm", "cramer", "--format", "xml"},
      {"moments", "--kind", "bogus", "--count", "3"},
      {"condition", "--nu", "0.9", "--alpha", "0.1", "--c", "0.1", "--k", "0,5"},
      {"convergence", "--nu", "1", "--alpha", "0.7", "--c", "0.3", "--nmax", "5", "--integrand", "sin"},
      {"em", "--sigma", "0.05", "--height", "0.4", "--offset", "8"},
      {"em", "--sigma", "0.05,0.01", "--height", "0.4", "--offset", "8", "--frequency", "10"},
      {"em", "--sigma", "0.05", "--height", "0.4", "--offset", "8", "--frequency", "10", "--component", "ex"},
  };
  for (const auto& args : cases) {
    const auto r = run_cli(args);
    CHECK(r.status == cli::kInvalidArguments);
    CHECK_FALSE(r.err.empty());
  }
}

TEST_CASE("help exits cleanly") {
  CHECK(run_cli({"--help"}).status == cli::kSuccess);
  const auto em = run_cli({"em", "--help"});
  CHECK(em.status == cli::kSuccess);
  CHECK(em.out.find("--frequency") != std::string::npos);
}

TEST_CASE("moments of the Laguerre weight") {
  const auto r = run_cli({"moments", "--kind", "laguerre", "--alpha", "0", "--count", "4"});
  REQUIRE(r.status == cli::kSuccess);
  CHECK(r.out == "k,value\n0,1\n1,1\n2,2\n3,6\n");
  const auto j = run_cli({"moments", "--kind", "laguerre", "--alpha", "0", "--count", "2", "--format", "json"});
  CHECK(j.out == "{\"kind\":\"laguerre\",\"alpha\":0,\"rows\":[{\"k\":0,\"value\":1},{\"k\":1,\"value\":1}]}\n");
}

TEST_CASE("power moments through the CLI equal the library") {
  const auto r = run_cli({"moments", "--kind", "power", "--nu", "1.5", "--alpha", "0.5", "--c", "0.2", "--count", "10"});
  REQUIRE(r.status == cli::kSuccess);
  const auto rows = read_csv(r.out);
  const auto mu = power_moments(WeightParams(1.5, 0.5, 0.2), 10);
  REQUIRE(rows.size() == 10);
  for (std::size_t k = 0; k < 10; ++k) CHECK(num(rows[k].at("value")) == mu[k]);
}

TEST_CASE("identical flags give byte-identical output") {
  const std::vector<std::vector<std::string>> cases{
      {"rule", "--nu", "1", "--alpha", "0.7", "--c", "0.3", "--n", "25", "--algorithm", "cramer"},
      {"coeffs", "--algorithm", "chebyshev,modified,cramer", "--nu", "0.9", "--alpha", "0.1", "--c", "0.1", "--n",
       "30"},
      {"convergence", "--nu", "1", "--alpha", "0.7", "--c", "0.3", "--nmax", "20", "--format", "json"},
  };
  for (const auto& args : cases) {
    const auto a = run_cli(args), b = run_cli(args);
    CHECK(a.status == b.status);
    CHECK(a.out == b.out);
  }
}

TEST_CASE("rule output round-trips through CSV, JSON and files") {
  const std::vector<std::string> base{"rule", "--nu", "1.5", "--alpha", "0.5", "--c", "0.2", "--n", "10",
                                      "--algorithm", "cramer"};
  const auto csv = run_cli(base);
  auto json_args = base;
  json_args.insert(json_args.end(), {"--format", "json"});
  const auto json = run_cli(json_args);
  REQUIRE(csv.status == cli::kSuccess);
  REQUIRE(json.status == cli::kSuccess);

  const auto rows = read_csv(csv.out);
  const auto nodes = json_array(json.out, "nodes"), weights = json_array(json.out, "weights");
  REQUIRE(rows.size() == 10);
  REQUIRE(nodes.size() == 10);
  for (std::size_t i = 0; i < 10; ++i) {
    CHECK(num(rows[i].at("node")) == nodes[i]);
    CHECK(num(rows[i].at("weight")) == weights[i]);
  }
  // Re-read nodes and weights still integrate x^j exactly for j <= 2n-1.
  const auto mu = power_moments(WeightParams(1.5, 0.5, 0.2), 20);
  for (std::size_t j = 0; j < 20; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < 10; ++i) s += weights[i] * std::pow(nodes[i], static_cast<double>(j));
    CHECK(std::abs(s - mu[j]) <= 1e-8 * std::abs(mu[j]));
  }

  const auto path = std::filesystem::temp_directory_path() / "bjgauss_cli_rule.csv";
  auto file_args = base;
  file_args.insert(file_args.end(), {"--output", path.string()});
  const auto to_file = run_cli(file_args);
  CHECK(to_file.status == cli::kSuccess);
  CHECK(to_file.out.empty());
  std::ifstream in(path, std::ios::binary);
  const std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(content == csv.out);
  std::filesystem::remove(path);

  auto bad_args = base;
  bad_args.insert(bad_args.end(), {"--output", "/nonexistent-dir/rule.csv"});
  CHECK(run_cli(bad_args).status == cli::kInvalidArguments);
}

TEST_CASE("coeffs marks the chebyshev breakdown and completes cramer") {
  const auto r = run_cli(
      {"coeffs", "--algorithm", "chebyshev,cramer", "--nu", "0.9", "--alpha", "0.1", "--c", "0.1", "--n", "40"});
  REQUIRE(r.status == cli::kSuccess);
  const auto rows = read_csv(r.out);
  REQUIRE(rows.size() == 80);
  long breakdown = -1;
  std::size_t cramer_ok = 0;
  for (const auto& row : rows) {
    if (row.at("algorithm") == "chebyshev" && row.at("status") == "breakdown") breakdown = std::stol(row.at("k"));
    if (row.at("algorithm") == "cramer" && row.at("status") == "ok") {
      ++cramer_ok;
      CHECK(num(row.at("beta")) > 0.0);
    }
  }
  CHECK(breakdown >= 15);
  CHECK(breakdown <= 25);
  CHECK(cramer_ok == 40);
  // Rows before the breakdown are data, rows after it are empty.
  for (const auto& row : rows) {
    if (row.at("algorithm") != "chebyshev") continue;
    const long k = std::stol(row.at("k"));
    CHECK((k < breakdown) == (row.at("status") == "ok"));
    CHECK((k < breakdown) == !row.at("alpha").empty());
  }
}

TEST_CASE("convergence sweep reaches machine precision") {
  const auto r = run_cli({"convergence", "--nu", "1", "--alpha", "0.7", "--c", "0.3", "--gamma", "0.5", "--nmax",
                          "40", "--algorithm", "cramer"});
  REQUIRE(r.status == cli::kSuccess);
  const auto rows = read_csv(r.out);
  REQUIRE(rows.size() == 40);
  CHECK(rows.front().at("n") == "1");
  CHECK(rows.back().at("status") == "ok");
  CHECK(num(rows.back().at("abs_error")) <= 1e-12);
}

TEST_CASE("convergence sweep n=1 row against a supplied exact value") {
  // --exact replaces the closed form; the error column must follow it.
  const double exact = 0.5;
  const auto r = run_cli({"convergence", "--nu", "0", "--alpha", "0", "--c", "1", "--gamma", "1", "--nmax", "3",
                          "--exact", "0.5"});
  REQUIRE(r.status == cli::kSuccess);
  const auto rows = read_csv(r.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].at("n") == "1");
  CHECK(num(rows[0].at("abs_error")) == doctest::Approx(std::abs(num(rows[0].at("approx")) - exact)));
}

TEST_CASE("convergence bound dominates the error above the rounding floor") {
  const auto r = run_cli(
      {"convergence", "--nu", "1", "--alpha", "-0.5", "--c", "1", "--nmax", "20", "--algorithm", "cramer"});
  REQUIRE(r.status == cli::kSuccess);
  const auto rows = read_csv(r.out);
  REQUIRE(rows.size() == 20);
  // The split rule subtracts the Laguerre part, Γ(α+1)/(c+γ)^{α+1} ≈ 1.45 here,
  // so that is the scale the rounding works on.
  const double laguerre = std::tgamma(0.5) / std::sqrt(1.5);
  for (const auto& row : rows) {
    REQUIRE_FALSE(row.at("bound").empty());
    const double approx = num(row.at("approx"));
    const double floor = 16.0 * std::numeric_limits<double>::epsilon() * (std::abs(approx) + laguerre);
    CHECK(num(row.at("abs_error")) <= std::max(num(row.at("bound")), floor));
  }
}

TEST_CASE("convergence bound dominates the error literally at every n" * doctest::should_fail()) {
  // Once the bound drops below the rounding of the sum it cannot dominate.
  const auto r = run_cli(
      {"convergence", "--nu", "1", "--alpha", "-0.5", "--c", "1", "--nmax", "20", "--algorithm", "cramer"});
  for (const auto& row : read_csv(r.out)) CHECK(num(row.at("abs_error")) <= num(row.at("bound")));
}

TEST_CASE("convergence records breakdown rows instead of aborting") {
  const auto r = run_cli({"convergence", "--nu", "0.5", "--alpha", "0.5", "--c", "0.2", "--nmax", "30",
                          "--algorithm", "chebyshev,cramer"});
  REQUIRE(r.status == cli::kSuccess);
  const auto rows = read_csv(r.out);
  REQUIRE(rows.size() == 60);
  std::size_t broken = 0;
  for (const auto& row : rows)
    if (row.at("algorithm") == "chebyshev" && row.at("status") == "breakdown") ++broken;
  CHECK(broken > 0);
  CHECK(rows.back().at("status") == "ok");
}

TEST_CASE("condition table") {
  const auto r = run_cli({"condition", "--nu", "0.9", "--alpha", "0.1", "--c", "0.1", "--k", "30,10,20"});
  REQUIRE(r.status == cli::kSuccess);
  const auto rows = read_csv(r.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].at("k") == "10");
  CHECK(rows[2].at("k") == "30");
  const double expected[] = {1.3, 1.4, 1.6};
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(num(rows[i].at("kappa2_Q")) >= 1.0);
    CHECK(std::abs(num(rows[i].at("kappa2_Q")) - expected[i]) <= 0.1 * expected[i]);
  }
}

TEST_CASE("em trace converges and matches the reference") {
  auto args = kResistiveFlags;
  args.push_back("--reference");
  const auto r = run_cli(args);
  REQUIRE(r.status == cli::kSuccess);
  CHECK(r.err.empty());
  const auto rows = read_csv(r.out);
  REQUIRE(rows.size() >= 4);
  const auto& final_row = rows[rows.size() - 2];
  const auto& ref_row = rows.back();
  CHECK(rows.front().at("kind") == "trace");
  CHECK(rows.front().at("order") == "5");
  CHECK(final_row.at("kind") == "final");
  CHECK(final_row.at("converged") == "true");
  CHECK(ref_row.at("kind") == "reference");
  CHECK(std::abs(num(final_row.at("value")) - num(ref_row.at("value"))) <= 1e-8);

  auto json_args = kResistiveFlags;
  json_args.insert(json_args.end(), {"--component", "hrho", "--format", "json"});
  const auto j = run_cli(json_args);
  REQUIRE(j.status == cli::kSuccess);
  CHECK(j.out.find("\"component\":\"hrho\"") != std::string::npos);
  CHECK(j.out.find("\"converged\":true") != std::string::npos);
}

TEST_CASE("em reports a non-converged sweep") {
  auto args = kResistiveFlags;
  args.insert(args.end(), {"--n", "5", "--tol", "1e-14"});
  const auto r = run_cli(args);
  REQUIRE(r.status == cli::kSuccess);
  CHECK(r.err.find("warning") != std::string::npos);
  CHECK(r.out.find("final,5,") != std::string::npos);
  CHECK(r.out.find(",false") != std::string::npos);
}
