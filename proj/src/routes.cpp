#include "morseflow/routes.hpp"

#include "morseflow/discrete.hpp"

#include <algorithm>
#include <sstream>

namespace morseflow {

MorseReport run_routes(const SchroedingerProblem& problem, const RouteSelection& routes,
                       const NumericsOptions& numerics) {
  MorseReport report;
  std::vector<int> indices;
  const int steps = default_steps(problem.interval, numerics.steps_per_unit);

  if (routes.direct) {
    DirectRouteResult direct;
    direct.morse_index = discrete_morse_index(problem, numerics.grid_n);
    direct.unconstrained_index =
        discrete_morse_index(problem.unconstrained(), numerics.grid_n);
    direct.matrix_size = numerics.grid_n;
    indices.push_back(direct.morse_index);
    report.direct = std::move(direct);
  }

  if (routes.maslov) {
    LambdaSweepReport sw = sweep(problem, numerics.lambda_grid, steps);
    indices.push_back(sw.morse_index);
    report.maslov = std::move(sw);
  }

  if (routes.conjugate) {
    if (problem.bc != BoundaryCondition::Dirichlet) {
      report.notes.push_back("conjugate route skipped (Dirichlet boundary only)");
    } else {
      const DomainFamily family =
          DomainFamily::scaling(problem.interval, numerics.t_min_factor);
      ConjugateReport scan_report = scan(problem, family, numerics.t_grid, 0);
      if (scan_report.label == "morse") {
        indices.push_back(scan_report.morse_index_claim);
      } else {
        report.notes.push_back(
            "conjugate route uncertified (no shrink-to-point and no "
            "first-eigenvalue certificate); count excluded from agreement");
      }
      report.conjugate = std::move(scan_report);
    }
  }

  if (routes.matrix) {
    if (problem.constraint_count() == 0) {
      report.notes.push_back("matrix route trivial (no constraints): index drop 0");
      MatrixRouteResult mr;
      mr.index_drop = 0;
      mr.unconstrained_index = sweep(problem, numerics.lambda_grid, steps).morse_index;
      mr.morse_index = mr.unconstrained_index;
      indices.push_back(mr.morse_index);
      report.matrix = std::move(mr);
    } else {
      MatrixRouteResult mr;
      mr.limit = index_limit(problem, default_lambda_sequence(), steps);
      mr.index_drop = mr.limit.limit;
      mr.unconstrained_index =
          sweep(problem.unconstrained(), numerics.lambda_grid, steps).morse_index;
      mr.morse_index = mr.unconstrained_index - mr.index_drop;
      indices.push_back(mr.morse_index);
      report.matrix = std::move(mr);
    }
  }

  report.agreement =
      !indices.empty() &&
      std::all_of(indices.begin(), indices.end(),
                  [&](int v) { return v == indices.front(); });
  if (!report.agreement && !indices.empty()) {
    std::ostringstream os;
    os << "routes disagree:";
    for (int v : indices) os << " " << v;
    report.notes.push_back(os.str());
  }
  return report;
}

}  // namespace morseflow
