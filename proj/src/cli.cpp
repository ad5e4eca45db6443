#include "morseflow/cli.hpp"

#include "morseflow/problem_io.hpp"
#include "morseflow/version.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace morseflow::cli {

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kNumericalFailure = 2;

struct CommonArgs {
  std::string spec_path;
  std::string out_path;
  std::string csv_path;
  std::string routes = "all";
  int steps_per_unit = 0;  // 0: spec / default
  double p = std::nan("");
  double omega = std::nan("");
};

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open output file: " + path);
  f << text;
  if (!f) throw Error("failed writing output file: " + path);
}

RouteSelection parse_routes(const std::string& text) {
  RouteSelection sel;
  if (text == "all" || text.empty()) return sel;
  sel = RouteSelection{false, false, false, false};
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "direct")
      sel.direct = true;
    else if (item == "maslov")
      sel.maslov = true;
    else if (item == "conjugate")
      sel.conjugate = true;
    else if (item == "matrix")
      sel.matrix = true;
    else
      throw Error("unknown route \"" + item +
                  "\" (expected direct, maslov, conjugate, matrix, or all)");
  }
  if (!sel.direct && !sel.maslov && !sel.conjugate && !sel.matrix)
    throw Error("empty route selection");
  return sel;
}

// Loads the spec and applies CLI overrides; all failures here are input errors.
ProblemSpecFile load_spec(const CommonArgs& args, bool need_problem) {
  ProblemSpecFile spec = parse_spec_file(args.spec_path);
  if (need_problem && !spec.problem)
    throw Error("spec has no problem section (interval/potential/bc)");
  if (args.steps_per_unit > 0) spec.numerics.steps_per_unit = args.steps_per_unit;
  return spec;
}

int absolute_steps(const ProblemSpecFile& spec) {
  return default_steps(spec.problem->interval, spec.numerics.steps_per_unit);
}

int cmd_morse(const CommonArgs& args, std::ostream& out, std::ostream& err) {
  ProblemSpecFile spec;
  RouteSelection selection;
  try {
    spec = load_spec(args, true);
    selection = parse_routes(args.routes);
  } catch (const Error& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  }
  try {
    const MorseReport report = run_routes(*spec.problem, selection, spec.numerics);
    write_text(args.out_path, morse_report_json(spec, report), out);
    if (!report.agreement) {
      err << "numerical failure: computed routes disagree\n";
      return kNumericalFailure;
    }
    return kOk;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  }
}

int cmd_maslov_sweep(const CommonArgs& args, std::ostream& out, std::ostream& err) {
  ProblemSpecFile spec;
  try {
    spec = load_spec(args, true);
  } catch (const Error& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  }
  try {
    const LambdaSweepReport report =
        sweep(*spec.problem, spec.numerics.lambda_grid, absolute_steps(spec));
    write_text(args.out_path, sweep_report_json(spec, report), out);
    if (!args.csv_path.empty()) {
      std::ostringstream csv;
      csv << "lambda,determinant\n";
      for (size_t i = 0; i < report.grid.size(); ++i)
        csv << csv_cell(report.grid[i]) << "," << csv_cell(report.determinant[i])
            << "\n";
      write_text(args.csv_path, csv.str(), out);
    }
    return kOk;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  }
}

int cmd_conjugate_scan(const CommonArgs& args, std::ostream& out, std::ostream& err) {
  ProblemSpecFile spec;
  try {
    spec = load_spec(args, true);
    if (spec.problem->bc != BoundaryCondition::Dirichlet)
      throw Error("conjugate-scan requires a Dirichlet problem");
  } catch (const Error& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  }
  try {
    const DomainFamily family =
        DomainFamily::scaling(spec.problem->interval, spec.numerics.t_min_factor);
    const ConjugateReport report =
        scan(*spec.problem, family, spec.numerics.t_grid, 0);
    write_text(args.out_path, conjugate_report_json(spec, report), out);
    if (!args.csv_path.empty()) {
      // grid rows carry multiplicity 0; refined conjugate points (and the
      // excluded endpoint kernel) are spliced in sorted by t
      struct Row {
        double t, defect;
        int multiplicity;
      };
      std::vector<Row> rows;
      for (size_t i = 0; i < report.grid.size(); ++i)
        rows.push_back({report.grid[i], report.defects[i], 0});
      for (const auto& c : report.conjugate_points)
        rows.push_back({c.location, 0.0, c.dimension});
      for (const auto& c : report.endpoint_excluded)
        rows.push_back({c.location, 0.0, c.dimension});
      std::stable_sort(rows.begin(), rows.end(),
                       [](const Row& a, const Row& b) { return a.t < b.t; });
      std::ostringstream csv;
      csv << "t,defect,multiplicity\n";
      for (const Row& r : rows)
        csv << csv_cell(r.t) << "," << csv_cell(r.defect) << "," << r.multiplicity
            << "\n";
      write_text(args.csv_path, csv.str(), out);
    }
    return kOk;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  }
}

int cmd_constraint_matrix(const CommonArgs& args, std::ostream& out,
                          std::ostream& err) {
  ProblemSpecFile spec;
  try {
    spec = load_spec(args, true);
    if (spec.problem->constraint_count() == 0)
      throw Error("constraint-matrix requires at least one constraint");
  } catch (const Error& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  }
  try {
    const IndexLimitReport report =
        index_limit(*spec.problem, default_lambda_sequence(), absolute_steps(spec));
    write_text(args.out_path, matrix_report_json(spec, report), out);
    if (!args.csv_path.empty()) {
      const int m = spec.problem->constraint_count();
      std::ostringstream csv;
      csv << "lambda,negative_count,asymmetry";
      for (int i = 0; i < m; ++i) csv << ",eig_" << i + 1;
      csv << "\n";
      for (const auto& s : report.samples) {
        csv << csv_cell(s.lambda) << "," << s.negative_count << ","
            << csv_cell(s.asymmetry);
        for (double e : s.eigenvalues) csv << "," << csv_cell(e);
        csv << "\n";
      }
      write_text(args.csv_path, csv.str(), out);
    }
    return kOk;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  }
}

int cmd_nls(const CommonArgs& args, std::ostream& out, std::ostream& err) {
  NlsSpec nls;
  try {
    if (!args.spec_path.empty()) {
      const ProblemSpecFile spec = load_spec(args, false);
      if (!spec.nls) throw Error("spec has no nls section");
      nls = *spec.nls;
    } else {
      if (std::isnan(args.p) || std::isnan(args.omega))
        throw Error("nls needs either --spec or both --p and --omega");
      nls.p = args.p;
      nls.omega = args.omega;
    }
  } catch (const Error& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  }
  try {
    const SolitonProfile profile = soliton(PowerLawNonlinearity{nls.p}, nls.omega);
    const VerdictReport verdict = stability_verdict(profile);
    write_text(args.out_path, nls_report_json(nls, verdict), out);
    if (!args.csv_path.empty()) {
      const double t_big = profile.truncation();
      const double delta =
          std::min(1e-3, 1.0 / (4000.0 * nls.p * nls.p * (-nls.omega)));
      std::ostringstream csv;
      csv << "t,c\n";
      const int per_side = 256;
      for (int side = -1; side <= 1; side += 2) {
        for (int i = 0; i <= per_side; ++i) {
          // geometric ladder from the singularity window out to the tail
          const int j = (side < 0) ? per_side - i : i;
          const double t =
              side * delta * std::pow(t_big / delta, static_cast<double>(j) / per_side);
          csv << csv_cell(t) << "," << csv_cell(c_function(profile, t, delta * 0.5))
              << "\n";
        }
      }
      csv << "# verdict: " << to_string(verdict.verdict)
          << ", slope: " << csv_cell(verdict.slope) << "\n";
      write_text(args.csv_path, csv.str(), out);
    }
    return kOk;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Morse-index toolkit for constrained 1D Schroedinger operators"};
  app.set_version_flag("--version", std::string(kToolkitVersion));
  app.require_subcommand(1);

  CommonArgs common;
  auto add_spec = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--spec", common.spec_path, "problem spec (JSON file)");
    if (required) opt->required();
  };
  auto add_io = [&](CLI::App* sub) {
    sub->add_option("--out", common.out_path,
                    "write the JSON report to this file (default: stdout)");
    sub->add_option("--steps", common.steps_per_unit,
                    "RK4 steps per unit length (default 2048)");
  };
  auto add_csv = [&](CLI::App* sub, const char* what) {
    sub->add_option("--csv", common.csv_path, what);
  };

  CLI::App* morse =
      app.add_subcommand("morse", "run the selected index routes and reconcile them");
  add_spec(morse, true);
  add_io(morse);
  morse->add_option("--routes", common.routes,
                    "comma list of direct,maslov,conjugate,matrix (default all)");

  CLI::App* sweep_cmd = app.add_subcommand(
      "maslov-sweep", "lambda-sweep crossings and the spectral-flow index");
  add_spec(sweep_cmd, true);
  add_io(sweep_cmd);
  add_csv(sweep_cmd, "write lambda,determinant samples to this CSV file");

  CLI::App* conj = app.add_subcommand(
      "conjugate-scan", "conjugate points of the shrinking-domain family");
  add_spec(conj, true);
  add_io(conj);
  add_csv(conj, "write t,defect,multiplicity samples to this CSV file");

  CLI::App* cmat = app.add_subcommand(
      "constraint-matrix", "n(M(lambda)) along the default lambda sequence");
  add_spec(cmat, true);
  add_io(cmat);
  add_csv(cmat, "write lambda,counts,eigenvalues to this CSV file");

  CLI::App* nls_cmd =
      app.add_subcommand("nls", "standing-wave stability of the power NLS soliton");
  add_spec(nls_cmd, false);
  add_io(nls_cmd);
  add_csv(nls_cmd, "write t,c samples of the c-function to this CSV file");
  nls_cmd->add_option("--p", common.p, "nonlinearity power in [0.5, 4]");
  nls_cmd->add_option("--omega", common.omega, "wave frequency (negative)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  if (app.got_subcommand(morse)) return cmd_morse(common, out, err);
  if (app.got_subcommand(sweep_cmd)) return cmd_maslov_sweep(common, out, err);
  if (app.got_subcommand(conj)) return cmd_conjugate_scan(common, out, err);
  if (app.got_subcommand(cmat)) return cmd_constraint_matrix(common, out, err);
  if (app.got_subcommand(nls_cmd)) return cmd_nls(common, out, err);
  err << "error: no command selected\n";
  return kInputError;
}

}  // namespace morseflow::cli
