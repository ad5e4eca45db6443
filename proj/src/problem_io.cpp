#include "morseflow/problem_io.hpp"

#include "morseflow/version.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace morseflow {

using ordered_json = nlohmann::ordered_json;

namespace {

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
  throw Error("spec error at " + where + ": " + what);
}

void reject_unknown_keys(const ordered_json& obj, const std::string& where,
                         std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* k : allowed)
      if (item.key() == k) ok = true;
    if (!ok) schema_error(where, "unknown key \"" + item.key() + "\"");
  }
}

double require_number(const ordered_json& obj, const std::string& where,
                      const char* key) {
  if (!obj.contains(key)) schema_error(where, std::string("missing key \"") + key + "\"");
  const auto& v = obj.at(key);
  if (!v.is_number()) schema_error(where + "." + key, "expected a number");
  return v.get<double>();
}

std::vector<double> require_number_array(const ordered_json& obj,
                                         const std::string& where, const char* key) {
  if (!obj.contains(key)) schema_error(where, std::string("missing key \"") + key + "\"");
  const auto& v = obj.at(key);
  if (!v.is_array()) schema_error(where + "." + key, "expected an array");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) schema_error(where + "." + key, "expected numeric entries");
    out.push_back(e.get<double>());
  }
  return out;
}

std::string require_string(const ordered_json& obj, const std::string& where,
                           const char* key) {
  if (!obj.contains(key)) schema_error(where, std::string("missing key \"") + key + "\"");
  const auto& v = obj.at(key);
  if (!v.is_string()) schema_error(where + "." + key, "expected a string");
  return v.get<std::string>();
}

Potential parse_potential(const ordered_json& obj, const std::string& where) {
  if (!obj.is_object()) schema_error(where, "expected an object");
  const std::string kind = require_string(obj, where, "kind");
  if (kind == "constant") {
    reject_unknown_keys(obj, where, {"kind", "value"});
    return Potential::constant(require_number(obj, where, "value"));
  }
  if (kind == "table") {
    reject_unknown_keys(obj, where, {"kind", "x", "v"});
    return Potential::table(require_number_array(obj, where, "x"),
                            require_number_array(obj, where, "v"));
  }
  schema_error(where + ".kind", "unsupported kind \"" + kind + "\"");
}

ConstraintFunction parse_constraint(const ordered_json& obj, const std::string& where) {
  if (!obj.is_object()) schema_error(where, "expected an object");
  const std::string kind = require_string(obj, where, "kind");
  if (kind == "constant") {
    reject_unknown_keys(obj, where, {"kind", "value"});
    return ConstraintFunction::constant(require_number(obj, where, "value"));
  }
  if (kind == "table") {
    reject_unknown_keys(obj, where, {"kind", "x", "v"});
    return ConstraintFunction::table(require_number_array(obj, where, "x"),
                                     require_number_array(obj, where, "v"));
  }
  schema_error(where + ".kind", "unsupported kind \"" + kind + "\"");
}

ordered_json crossing_json(const CrossingRecord& c, const char* location_key) {
  ordered_json j;
  j[location_key] = c.location;
  j["dimension"] = c.dimension;
  j["n_plus"] = c.n_plus;
  j["n_minus"] = c.n_minus;
  j["form_value"] = c.form_value;
  return j;
}

ordered_json problem_json(const ProblemSpecFile& spec) {
  ordered_json j;
  if (spec.problem) {
    j["interval"] = {{"left", spec.problem->interval.left},
                     {"right", spec.problem->interval.right}};
    j["bc"] = to_string(spec.problem->bc);
    j["constraint_count"] = spec.problem->constraint_count();
  }
  return j;
}

ordered_json sweep_json_body(const LambdaSweepReport& r, bool include_grid) {
  ordered_json j;
  j["lambda_infinity"] = r.lambda_infinity;
  j["kernel_dimension_at_zero"] = r.kernel_dimension_at_zero;
  j["maslov_index"] = r.maslov_index;
  j["morse_index"] = r.morse_index;
  ordered_json crossings = ordered_json::array();
  for (const auto& c : r.crossings) crossings.push_back(crossing_json(c, "lambda"));
  j["crossings"] = std::move(crossings);
  if (include_grid) {
    j["grid"] = r.grid;
    j["determinant"] = r.determinant;
  }
  return j;
}

ordered_json conjugate_json_body(const ConjugateReport& r, bool include_grid) {
  ordered_json j;
  j["total_count"] = r.total_count;
  j["morse_index_claim"] = r.morse_index_claim;
  j["shrinks_to_point"] = r.shrinks_to_point;
  j["certificate_t"] = r.certificate_t;
  j["label"] = r.label;
  ordered_json pts = ordered_json::array();
  for (const auto& c : r.conjugate_points) pts.push_back(crossing_json(c, "t"));
  j["conjugate_points"] = std::move(pts);
  ordered_json excl = ordered_json::array();
  for (const auto& c : r.endpoint_excluded) excl.push_back(crossing_json(c, "t"));
  j["endpoint_excluded"] = std::move(excl);
  if (include_grid) {
    j["grid"] = r.grid;
    j["defects"] = r.defects;
  }
  return j;
}

ordered_json matrix_json_body(const IndexLimitReport& r) {
  ordered_json j;
  ordered_json samples = ordered_json::array();
  for (const auto& s : r.samples) {
    ordered_json e;
    e["lambda"] = s.lambda;
    e["negative_count"] = s.negative_count;
    e["asymmetry"] = s.asymmetry;
    e["eigenvalues"] = s.eigenvalues;
    samples.push_back(std::move(e));
  }
  j["samples"] = std::move(samples);
  j["skipped"] = r.skipped;
  j["limit"] = r.limit;
  return j;
}

}  // namespace

ProblemSpecFile parse_spec_text(const std::string& json_text) {
  ordered_json root;
  try {
    root = ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("spec is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) schema_error("$", "top level must be an object");
  reject_unknown_keys(root, "$",
                      {"interval", "potential", "bc", "constraints", "numerics", "nls"});

  ProblemSpecFile spec;
  spec.source_text = json_text;

  const bool has_problem =
      root.contains("interval") || root.contains("potential") || root.contains("bc");
  if (has_problem) {
    if (!root.contains("interval") || !root.contains("potential") || !root.contains("bc"))
      schema_error("$", "a problem needs interval, potential, and bc together");
    const auto& iv = root.at("interval");
    if (!iv.is_object()) schema_error("$.interval", "expected an object");
    reject_unknown_keys(iv, "$.interval", {"left", "right"});
    Interval interval{require_number(iv, "$.interval", "left"),
                      require_number(iv, "$.interval", "right")};

    Potential v = parse_potential(root.at("potential"), "$.potential");

    const std::string bc_name = require_string(root, "$", "bc");
    BoundaryCondition bc;
    if (bc_name == "dirichlet")
      bc = BoundaryCondition::Dirichlet;
    else if (bc_name == "neumann")
      bc = BoundaryCondition::Neumann;
    else
      schema_error("$.bc", "expected \"dirichlet\" or \"neumann\"");

    std::vector<ConstraintFunction> constraints;
    if (root.contains("constraints")) {
      const auto& arr = root.at("constraints");
      if (!arr.is_array()) schema_error("$.constraints", "expected an array");
      int idx = 0;
      for (const auto& e : arr) {
        std::ostringstream where;
        where << "$.constraints[" << idx++ << "]";
        constraints.push_back(parse_constraint(e, where.str()));
      }
    }
    spec.problem.emplace(interval, std::move(v), bc, std::move(constraints));
  } else if (root.contains("constraints")) {
    schema_error("$", "constraints given without a problem section");
  }

  if (root.contains("numerics")) {
    const auto& num = root.at("numerics");
    if (!num.is_object()) schema_error("$.numerics", "expected an object");
    reject_unknown_keys(
        num, "$.numerics",
        {"steps_per_unit", "lambda_grid", "t_grid", "grid_n", "t_min_factor"});
    auto pick_int = [&](const char* key, int low, int* out) {
      if (!num.contains(key)) return;
      const double v = require_number(num, "$.numerics", key);
      if (v != static_cast<int>(v) || static_cast<int>(v) < low) {
        std::ostringstream os;
        os << "expected an integer >= " << low;
        schema_error(std::string("$.numerics.") + key, os.str());
      }
      *out = static_cast<int>(v);
    };
    pick_int("steps_per_unit", 16, &spec.numerics.steps_per_unit);
    pick_int("lambda_grid", 64, &spec.numerics.lambda_grid);
    pick_int("t_grid", 64, &spec.numerics.t_grid);
    pick_int("grid_n", 8, &spec.numerics.grid_n);
    if (num.contains("t_min_factor")) {
      const double f = require_number(num, "$.numerics", "t_min_factor");
      if (!(f > 0.0 && f < 1.0))
        schema_error("$.numerics.t_min_factor", "expected a value in (0, 1)");
      spec.numerics.t_min_factor = f;
    }
  }

  if (root.contains("nls")) {
    const auto& n = root.at("nls");
    if (!n.is_object()) schema_error("$.nls", "expected an object");
    reject_unknown_keys(n, "$.nls", {"p", "omega"});
    NlsSpec ns;
    ns.p = require_number(n, "$.nls", "p");
    ns.omega = require_number(n, "$.nls", "omega");
    if (!(ns.p >= 0.5 && ns.p <= 4.0))
      schema_error("$.nls.p", "expected a power in [0.5, 4]");
    if (!(ns.omega < 0.0)) schema_error("$.nls.omega", "expected omega < 0");
    spec.nls = ns;
  }
  return spec;
}

ProblemSpecFile parse_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open spec file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_spec_text(buffer.str());
}

std::string morse_report_json(const ProblemSpecFile& spec, const MorseReport& report) {
  ordered_json j;
  j["toolkit_version"] = kToolkitVersion;
  j["problem"] = problem_json(spec);
  ordered_json routes;
  if (report.direct) {
    ordered_json d;
    d["morse_index"] = report.direct->morse_index;
    d["unconstrained_index"] = report.direct->unconstrained_index;
    d["matrix_size"] = report.direct->matrix_size;
    routes["direct"] = std::move(d);
  }
  if (report.maslov) routes["maslov"] = sweep_json_body(*report.maslov, false);
  if (report.conjugate)
    routes["conjugate"] = conjugate_json_body(*report.conjugate, false);
  if (report.matrix) {
    ordered_json m;
    m["morse_index"] = report.matrix->morse_index;
    m["index_drop"] = report.matrix->index_drop;
    m["unconstrained_index"] = report.matrix->unconstrained_index;
    if (!report.matrix->limit.samples.empty())
      m["limit"] = matrix_json_body(report.matrix->limit);
    routes["matrix"] = std::move(m);
  }
  j["routes"] = std::move(routes);
  j["notes"] = report.notes;
  j["agreement"] = report.agreement;
  return j.dump(2) + "\n";
}

std::string conjugate_report_json(const ProblemSpecFile& spec,
                                  const ConjugateReport& report) {
  ordered_json j;
  j["toolkit_version"] = kToolkitVersion;
  j["problem"] = problem_json(spec);
  j["conjugate"] = conjugate_json_body(report, true);
  return j.dump(2) + "\n";
}

std::string sweep_report_json(const ProblemSpecFile& spec,
                              const LambdaSweepReport& report) {
  ordered_json j;
  j["toolkit_version"] = kToolkitVersion;
  j["problem"] = problem_json(spec);
  j["sweep"] = sweep_json_body(report, true);
  return j.dump(2) + "\n";
}

std::string matrix_report_json(const ProblemSpecFile& spec,
                               const IndexLimitReport& report) {
  ordered_json j;
  j["toolkit_version"] = kToolkitVersion;
  j["problem"] = problem_json(spec);
  j["constraint_matrix"] = matrix_json_body(report);
  return j.dump(2) + "\n";
}

std::string nls_report_json(const NlsSpec& nls, const VerdictReport& verdict) {
  ordered_json j;
  j["toolkit_version"] = kToolkitVersion;
  j["nls"] = {{"p", nls.p}, {"omega", nls.omega}};
  j["slope"] = verdict.slope;
  j["root_count"] = verdict.root_count;
  j["verdict"] = to_string(verdict.verdict);
  return j.dump(2) + "\n";
}

std::string csv_cell(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace morseflow
