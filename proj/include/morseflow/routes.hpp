#pragma once

// Route aggregation: run the selected independent computations of the
// constrained Morse index and reconcile them.

#include "morseflow/conjugate.hpp"
#include "morseflow/constraint_matrix.hpp"
#include "morseflow/core_model.hpp"
#include "morseflow/maslov.hpp"

#include <optional>

namespace morseflow {

struct NumericsOptions {
  int steps_per_unit = 2048;  // RK4 resolution
  int lambda_grid = 512;      // sweep determinant samples
  int t_grid = 512;           // conjugate defect samples
  int grid_n = 400;           // finite-difference interior nodes
  double t_min_factor = 0.02; // conjugate family start, t_min = factor * t_max
};

struct RouteSelection {
  bool direct = true;
  bool maslov = true;
  bool conjugate = true;
  bool matrix = true;
};

struct DirectRouteResult {
  int morse_index = 0;
  int unconstrained_index = 0;
  int matrix_size = 0;
};

struct MatrixRouteResult {
  int morse_index = 0;          // unconstrained_index - index drop
  int index_drop = 0;           // stabilized n(M(lambda -> 0^-))
  int unconstrained_index = 0;  // by the unconstrained lambda-sweep
  IndexLimitReport limit;
};

struct MorseReport {
  std::optional<DirectRouteResult> direct;
  std::optional<LambdaSweepReport> maslov;
  std::optional<ConjugateReport> conjugate;
  std::optional<MatrixRouteResult> matrix;
  std::vector<std::string> notes;  // skipped routes etc.
  bool agreement = false;          // all computed indices equal
};

MorseReport run_routes(const SchroedingerProblem& problem, const RouteSelection& routes,
                       const NumericsOptions& numerics);

}  // namespace morseflow
