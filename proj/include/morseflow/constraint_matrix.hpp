#pragma once

// Constraint-matrix route: M(lambda)_ij = <(L - lambda)^{-1} phi_i, phi_j>
// for lambda below the spectrum, extended toward 0^-. The limit of the
// negative count n(M(lambda)) equals the index drop n(L) - n(L_c). Resolvent
// solves use shooting (variation of parameters), keeping this route
// independent of the discrete assembly it is checked against.

#include "morseflow/core_model.hpp"
#include "morseflow/linalg.hpp"

namespace morseflow {

// Thrown when lambda sits numerically on an eigenvalue of the unconstrained
// operator, where the resolvent has a pole.
struct ResolventPoleError : Error {
  using Error::Error;
};

struct ResolventSolution {
  std::vector<double> x;
  std::vector<double> u;
  std::vector<double> du;
  double residual_sup = 0.0;  // sup |(L-lambda)u - phi| via 4th-order stencil
};

// Solve (L - lambda) u = phi with the problem's boundary condition. Throws
// Error("resolvent pole ...") when lambda sits on an unconstrained eigenvalue
// (shooting determinant below 1e-8 of its trajectory scale).
ResolventSolution resolvent_apply(const SchroedingerProblem& problem, double lambda,
                                  const ConstraintFunction& phi, int steps = 0);

struct ConstraintMatrixSample {
  double lambda = 0.0;
  Matrix matrix;                    // m x m, symmetrized
  double asymmetry = 0.0;           // max |M_ij - M_ji| before symmetrization
  std::vector<double> eigenvalues;  // by the dense Jacobi oracle, ascending
  int negative_count = 0;
};

// Requires m >= 1. Entries by Simpson quadrature on the shooting grid.
ConstraintMatrixSample constraint_matrix(const SchroedingerProblem& problem,
                                         double lambda, int steps = 0);

struct IndexLimitReport {
  std::vector<ConstraintMatrixSample> samples;  // usable lambdas, in input order
  std::vector<double> skipped;                  // lambdas skipped at resolvent poles
  int limit = 0;                                // stabilized n(M(lambda))
};

// lambda_sequence must increase toward 0^- . Stabilization rule: the last
// three usable counts agree and the smallest |lambda| <= 1e-4 |lambda_inf|;
// otherwise Error("no stabilization ...") carrying the trail.
IndexLimitReport index_limit(const SchroedingerProblem& problem,
                             std::vector<double> lambda_sequence, int steps = 0);

// Default sequence -0.1 * 2^{-k}, k = 0..12.
std::vector<double> default_lambda_sequence();

}  // namespace morseflow
