#pragma once

// Lambda-sweep route: follow the constrained solution plane mu_c(lambda) from
// lambda_infinity (below inf V, where no crossings exist) up to 0 and count
// its intersections with the boundary reference plane. Every crossing form is
// -int u^2 < 0, so crossings are monotone and the Morse index equals the
// total crossing dimension (minus the Maslov index).

#include "morseflow/core_model.hpp"
#include "morseflow/shooting.hpp"

namespace morseflow {

struct LambdaSweepReport {
  double lambda_infinity = 0.0;
  std::vector<CrossingRecord> crossings;  // in (lambda_infinity, 0), sorted
  int kernel_dimension_at_zero = 0;       // |lambda*| <= 1e-8 |lambda_inf|, not counted
  int maslov_index = 0;                   // -(sum of crossing dimensions)
  int morse_index = 0;                    // -maslov_index
  std::vector<double> grid;               // sweep grid (diagnostics / CSV)
  std::vector<double> determinant;        // condition determinant on the grid
};

// inf V on a dense sample grid minus the margin 1 + 0.01 |inf V|.
double lambda_infinity(const SchroedingerProblem& problem);

// Crossing form evaluated on the kernel element u = sum_k coeffs_k basis_k:
// omega(tr u, tr du/dlambda) = -int u^2, computed by Simpson quadrature on
// the shooting grid. Always negative for nonzero u.
double crossing_form_lambda(const ConstrainedSolutionBasis& basis,
                            const std::vector<double>& kernel_coeffs);

// Sweep with grid_points >= 64 determinant samples on [lambda_inf, 0]:
// sign changes are bisected to machine resolution, tangential (even-order)
// roots are caught by a quadratic-fit filter on |E| minima plus an SVD
// nullity check, every crossing dimension is confirmed through
// intersection_dimension on the trace plane, and crossing forms certify
// negativity. steps = 0 means the default shooting resolution.
LambdaSweepReport sweep(const SchroedingerProblem& problem, int grid_points = 512,
                        int steps = 0);

}  // namespace morseflow
