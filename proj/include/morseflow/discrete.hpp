#pragma once

// Direct spectral counting: second-order finite differences assemble the
// quadratic form of L, constraints are imposed by explicit compression onto
// the orthogonal complement of the sampled constraint vectors, and negative
// eigenvalues are counted by Sylvester inertia of a signed-pivot LDLT
// factorization (Bunch-Parlett full diagonal pivoting with 1x1/2x2 pivots,
// reliable for the indefinite matrices this toolkit exists to count).

#include "morseflow/core_model.hpp"
#include "morseflow/linalg.hpp"

namespace morseflow {

// Symmetric matrix representing the form in coordinates where the discrete
// L^2 inner product is Euclidean (Dirichlet: interior nodes, uniform weight;
// Neumann: boundary nodes included via second-order ghost reflection, then
// symmetrized by the half-weight trapezoid similarity).
struct DiscreteForm {
  Matrix matrix;              // n x n symmetric
  std::vector<double> grid;   // node positions
  std::vector<double> scale;  // sqrt(h * trapezoid weight) per node
  Interval interval;
  BoundaryCondition bc = BoundaryCondition::Dirichlet;
};

// Uniform-grid assembly with n_interior interior nodes (>= 8).
DiscreteForm assemble(const SchroedingerProblem& problem, int n_interior);

// Compress the form onto the discrete constraint complement
// { v : <v, phi_i>_h = 0 } (trapezoid inner product). Result size n - m.
DiscreteForm constrain(const DiscreteForm& form, const std::vector<ConstraintFunction>& constraints);

// Number of eigenvalues strictly below `shift`, by LDLT inertia. If a pivot
// falls below 1e-12 * |matrix| the shift is perturbed by 1e-10 * |matrix| and
// retried once; `perturbed` (when given) reports the shift actually used.
// Still-degenerate pivots throw Error("shift at eigenvalue ...").
int inertia_below(const DiscreteForm& form, double shift, double* perturbed = nullptr);

// Convenience: negative-eigenvalue count of the (optionally constrained)
// problem at resolution n_interior.
int discrete_morse_index(const SchroedingerProblem& problem, int n_interior);

}  // namespace morseflow
