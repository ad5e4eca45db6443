#include "morseflow/cli.hpp"

#include "doctest.h"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using nlohmann::json;

namespace {

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

RunResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  RunResult r;
  r.code = morseflow::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "missing file: " << path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// data rows of a CSV payload: comma-split, header and '#' comments skipped
std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream lines(text);
  std::string line;
  bool first = true;
  while (std::getline(lines, line)) {
    if (first) {
      first = false;
      continue;
    }
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace

TEST_CASE("cli: version and argument errors") {
  auto ver = run_cli({"--version"});
  CHECK(ver.code == 0);
  CHECK(ver.out.find("0.1.0") != std::string::npos);

  CHECK(run_cli({}).code == 1);                       // no subcommand
  CHECK(run_cli({"morse"}).code == 1);                // --spec is required
  CHECK(run_cli({"frobnicate"}).code == 1);           // unknown subcommand
}

TEST_CASE("cli: morse on the constrained well, all routes agree") {
  auto r = run_cli({"morse", "--spec", "data/well25.json"});
  REQUIRE_MESSAGE(r.code == 0, r.err);

  const json rep = json::parse(r.out);
  CHECK(rep.at("toolkit_version") == "0.1.0");
  CHECK(rep.at("problem").at("bc") == "dirichlet");
  CHECK(rep.at("problem").at("constraint_count") == 1);
  CHECK(rep.at("agreement") == true);
  CHECK(rep.at("notes").empty());

  const json& routes = rep.at("routes");
  CHECK(routes.at("direct").at("morse_index") == 2);
  CHECK(routes.at("direct").at("unconstrained_index") == 3);
  CHECK(routes.at("direct").at("matrix_size") == 200);
  CHECK(routes.at("maslov").at("morse_index") == 2);
  CHECK(routes.at("maslov").at("crossings").size() == 2);
  CHECK(routes.at("conjugate").at("morse_index_claim") == 2);
  CHECK(routes.at("conjugate").at("label") == "morse");
  CHECK(routes.at("matrix").at("morse_index") == 2);
  CHECK(routes.at("matrix").at("index_drop") == 1);
  CHECK(routes.at("matrix").at("unconstrained_index") == 3);

  // identical inputs produce byte-identical reports
  auto again = run_cli({"morse", "--spec", "data/well25.json"});
  CHECK(again.code == 0);
  CHECK(again.out == r.out);

  // --out routes the same bytes into a file
  auto filed = run_cli(
      {"morse", "--spec", "data/well25.json", "--out", "cli_morse_out.json"});
  CHECK(filed.code == 0);
  CHECK(filed.out.empty());
  CHECK(slurp("cli_morse_out.json") == r.out);
}

TEST_CASE("cli: morse route disagreement exits 2 and says so") {
  // 8 interior nodes cannot resolve a depth-80 well: every discrete
  // eigenvalue is negative, so the direct count saturates at 7 while the
  // sweep finds the true index 4.
  auto r = run_cli({"morse", "--spec", "data/well80_coarse.json", "--routes",
                    "direct,maslov", "--out", "cli_disagree.json"});
  CHECK(r.code == 2);
  CHECK(r.err.find("routes disagree") != std::string::npos);

  const json rep = json::parse(slurp("cli_disagree.json"));
  CHECK(rep.at("agreement") == false);
  CHECK(rep.at("routes").at("direct").at("morse_index") == 7);
  CHECK(rep.at("routes").at("maslov").at("morse_index") == 4);
  REQUIRE(rep.at("notes").size() == 1);
  const std::string note = rep.at("notes")[0].get<std::string>();
  CHECK(note.find("routes disagree") != std::string::npos);
}

TEST_CASE("cli: morse on the Neumann well skips the conjugate route") {
  auto r = run_cli({"morse", "--spec", "data/well25_neumann.json"});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  const json rep = json::parse(r.out);
  CHECK(rep.at("agreement") == true);
  CHECK(rep.at("routes").at("direct").at("morse_index") == 3);
  CHECK(rep.at("routes").at("maslov").at("morse_index") == 3);
  CHECK(rep.at("routes").at("matrix").at("morse_index") == 3);
  CHECK_FALSE(rep.at("routes").contains("conjugate"));
  REQUIRE(rep.at("notes").size() == 1);
  CHECK(rep.at("notes")[0].get<std::string>().find("conjugate route skipped") !=
        std::string::npos);
}

TEST_CASE("cli: maslov-sweep CSV round-trips exactly") {
  auto r = run_cli({"maslov-sweep", "--spec", "data/well25.json", "--out",
                    "cli_sweep.json", "--csv", "cli_sweep.csv"});
  REQUIRE_MESSAGE(r.code == 0, r.err);

  const json rep = json::parse(slurp("cli_sweep.json"));
  CHECK(rep.at("sweep").at("morse_index") == 2);
  CHECK(rep.at("sweep").at("lambda_infinity").get<double>() ==
        doctest::Approx(-26.25));

  const std::string csv = slurp("cli_sweep.csv");
  CHECK(csv.rfind("lambda,determinant\n", 0) == 0);
  const auto rows = csv_rows(csv);
  REQUIRE(rows.size() == 129);  // lambda_grid 128 -> 129 nodes
  REQUIRE(rows.front().size() == 2);
  CHECK(std::strtod(rows.front()[0].c_str(), nullptr) == doctest::Approx(-26.25));
  CHECK(std::strtod(rows.back()[0].c_str(), nullptr) == 0.0);

  double prev = -1e300;
  for (const auto& row : rows) {
    REQUIRE(row.size() == 2);
    for (const std::string& cell : row) {
      // %.17g formatting means parse-then-print reproduces the cell
      const double v = std::strtod(cell.c_str(), nullptr);
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      CHECK(cell == buf);
    }
    const double lambda = std::strtod(row[0].c_str(), nullptr);
    CHECK(lambda > prev);
    prev = lambda;
  }
}

TEST_CASE("cli: conjugate-scan emits refined points with multiplicities") {
  auto r = run_cli({"conjugate-scan", "--spec", "data/well25.json", "--out",
                    "cli_scan.json", "--csv", "cli_scan.csv"});
  REQUIRE_MESSAGE(r.code == 0, r.err);

  const json rep = json::parse(slurp("cli_scan.json"));
  CHECK(rep.at("conjugate").at("label") == "morse");
  CHECK(rep.at("conjugate").at("morse_index_claim") == 2);
  REQUIRE(rep.at("conjugate").at("conjugate_points").size() == 2);
  const double pi = std::acos(-1.0);
  CHECK(rep.at("conjugate").at("conjugate_points")[0].at("t").get<double>() ==
        doctest::Approx(pi / 5.0).epsilon(1e-6));

  const auto rows = csv_rows(slurp("cli_scan.csv"));
  CHECK(rows.size() == 129 + 2);  // t_grid nodes plus two refined points
  int refined = 0;
  for (const auto& row : rows) {
    REQUIRE(row.size() == 3);
    refined += row[2] != "0";
  }
  CHECK(refined == 2);

  // Neumann problems have no Dirichlet defect to scan
  auto bad = run_cli({"conjugate-scan", "--spec", "data/well25_neumann.json"});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("Dirichlet") != std::string::npos);
}

TEST_CASE("cli: constraint-matrix reports the stabilized drop") {
  auto r = run_cli({"constraint-matrix", "--spec", "data/well25.json", "--csv",
                    "cli_matrix.csv"});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  // JSON report on stdout, samples in the CSV file
  const json rep = json::parse(r.out);
  CHECK(rep.at("constraint_matrix").at("limit") == 1);
  CHECK(rep.at("constraint_matrix").at("skipped").empty());
  CHECK(rep.at("constraint_matrix").at("samples").size() == 13);

  const auto rows = csv_rows(slurp("cli_matrix.csv"));
  REQUIRE(rows.size() == 13);
  // final sample: lambda = -0.1 * 2^-12, still one negative eigenvalue
  CHECK(std::strtod(rows.back()[0].c_str(), nullptr) ==
        doctest::Approx(-0.1 * std::pow(2.0, -12.0)));
  CHECK(rows.back()[1] == "1");
}

TEST_CASE("cli: nls stability by flags, spec file, and CSV") {
  auto sup = run_cli({"nls", "--p", "3", "--omega", "-1"});
  REQUIRE_MESSAGE(sup.code == 0, sup.err);
  const json rep = json::parse(sup.out);
  CHECK(rep.at("verdict") == "conjugate point exists");
  CHECK(rep.at("root_count") == 1);
  CHECK(rep.at("slope").get<double>() > 0.0);

  // the same parameters through a spec file give byte-identical output
  auto from_spec = run_cli({"nls", "--spec", "data/nls3.json"});
  CHECK(from_spec.code == 0);
  CHECK(from_spec.out == sup.out);

  // c-function texture: exactly one positive-t sign change at p = 3, none at
  // p = 1 where the slope is negative
  auto csv3 = run_cli({"nls", "--p", "3", "--omega", "-1", "--out",
                       "cli_nls3.json", "--csv", "cli_nls3.csv"});
  REQUIRE(csv3.code == 0);
  auto csv1 = run_cli({"nls", "--p", "1", "--omega", "-1", "--out",
                       "cli_nls1.json", "--csv", "cli_nls1.csv"});
  REQUIRE(csv1.code == 0);

  auto positive_sign_changes = [](const std::string& path) {
    int changes = 0;
    double prev = 0.0;
    bool have_prev = false;
    for (const auto& row : csv_rows(slurp(path))) {
      REQUIRE(row.size() == 2);
      const double t = std::strtod(row[0].c_str(), nullptr);
      const double c = std::strtod(row[1].c_str(), nullptr);
      if (t <= 0.0) continue;
      if (have_prev && (prev < 0.0) != (c < 0.0)) ++changes;
      prev = c;
      have_prev = true;
    }
    return changes;
  };
  CHECK(positive_sign_changes("cli_nls3.csv") == 1);
  CHECK(positive_sign_changes("cli_nls1.csv") == 0);
  const std::string tail3 = slurp("cli_nls3.csv");
  CHECK(tail3.find("# verdict: conjugate point exists") != std::string::npos);

  auto missing = run_cli({"nls"});
  CHECK(missing.code == 1);
  CHECK(missing.err.find("--p") != std::string::npos);
}

TEST_CASE("cli: input errors name the offending key") {
  auto gone = run_cli({"morse", "--spec", "data/no_such_file.json"});
  CHECK(gone.code == 1);
  CHECK(gone.err.find("cannot open spec file") != std::string::npos);

  {
    std::ofstream bad("cli_bad_spec.json", std::ios::binary);
    bad << "{\"intervall\": {\"left\": -1.0, \"right\": 1.0}}";
  }
  auto typo = run_cli({"morse", "--spec", "cli_bad_spec.json"});
  CHECK(typo.code == 1);
  CHECK(typo.err.find("unknown key \"intervall\"") != std::string::npos);

  auto route = run_cli(
      {"morse", "--spec", "data/well25.json", "--routes", "direct,bogus"});
  CHECK(route.code == 1);
  CHECK(route.err.find("unknown route \"bogus\"") != std::string::npos);

  {
    std::ofstream bad("cli_bad_grid.json", std::ios::binary);
    bad << "{\"interval\": {\"left\": -1.0, \"right\": 1.0},"
           " \"potential\": {\"kind\": \"constant\", \"value\": -25.0},"
           " \"bc\": \"dirichlet\","
           " \"numerics\": {\"grid_n\": 4}}";
  }
  auto grid = run_cli({"morse", "--spec", "cli_bad_grid.json"});
  CHECK(grid.code == 1);
  CHECK(grid.err.find("grid_n") != std::string::npos);
}
