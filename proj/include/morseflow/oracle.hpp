#pragma once

// Independent ground truth for the test and acceptance suites: transcendental
// root counts for the constant-potential zero-mean benchmark, a dense
// symmetric eigensolver by cyclic Jacobi rotations (deliberately separate
// from the LDLT inertia engine it cross-checks), and composite Simpson.

#include "morseflow/linalg.hpp"

#include <vector>

namespace morseflow {

enum class RootCountMode {
  ConstrainedDirichlet,   // gamma in (0, sqrt(C)): sin gamma = 0 or tan gamma = gamma
  UnconstrainedDirichlet  // gamma in (0, sqrt(C)): gamma = k pi/2
};

struct RootCountQuery {
  double c = 0.0;  // potential V = -c on (-1, 1)
  RootCountMode mode = RootCountMode::ConstrainedDirichlet;
};

// Per-branch bisection of tan gamma = gamma on (k pi + 1e-9, (k+1/2) pi - 1e-9).
// If sqrt(C) lies within 1e-9 of a counted root the query is ill-posed:
// Error("root-count guard ...") suggesting a perturbed C.
int count_roots(const RootCountQuery& query);

// k-th positive root of tan gamma = gamma (k = 1 gives ~4.4934), bisected to
// ~1e-13; exposed for tests that freeze expected eigenvalue locations.
double tan_equals_gamma_root(int k);

// Eigenvalues of a symmetric matrix (n <= 400) by cyclic Jacobi sweeps until
// the off-diagonal Frobenius norm falls below 1e-12 * |A|_F; ascending order.
// Asymmetry beyond 1e-10 (relative) or oversize input throws.
std::vector<double> symmetric_eigenvalues(const Matrix& a);

// Count of strictly negative eigenvalues via symmetric_eigenvalues.
int dense_negative_count(const Matrix& a);

// Composite Simpson over uniformly sampled values; requires an odd sample
// count >= 3 (Error otherwise).
double quadrature(const std::vector<double>& samples, double h);

}  // namespace morseflow
