#pragma once

// Constrained shooting: integrate the extended system
//
//   u'' = (V - lambda) u - sum_i a_i phi_i,   w_i' = u phi_i,   a_i' = 0
//
// with fixed-step RK4, build the two-parameter family of constrained
// solutions K_c(lambda) = { u : w_i(right) = 0 for all i }, and map it to the
// Lagrangian plane of boundary traces. Also exposes the square boundary
// condition system whose determinant the lambda- and t-sweeps track.

#include "morseflow/core_model.hpp"
#include "morseflow/linalg.hpp"

namespace morseflow {

// State at one point: (u, u', multipliers a, accumulators w).
struct ExtendedState {
  double u = 0.0;
  double du = 0.0;
  std::vector<double> multipliers;   // a_i, constant along the flow
  std::vector<double> accumulators;  // w_i(x) = int_left^x u phi_i
};

struct Trajectory {
  Interval sub;
  double lambda = 0.0;
  std::vector<double> x;   // steps+1 uniform samples
  std::vector<double> u;
  std::vector<double> du;
  std::vector<double> multipliers;
  std::vector<double> constraint_values;  // w_i(right)

  double sup_norm() const;
};

// Default resolution: 2048 steps per unit length, at least 16, even.
int default_steps(const Interval& sub, int steps_per_unit = 2048);

// RK4 with steps uniform steps; samples stored at every node. Throws
// Error("blow-up at x = ...") if the state leaves [-1e100, 1e100].
Trajectory integrate_extended(const SchroedingerProblem& problem, double lambda,
                              const Interval& sub, const ExtendedState& init,
                              int steps);

// Basis of the constrained solution space on sub. The m linear conditions
// w_i(right) = 0 on the (2+m)-dimensional parameter space (u(l), u'(l), a)
// are imposed through an SVD null space; when the (u(l), u'(l)) block of the
// null space is nonsingular the basis is re-normalized to graph form
// ((1,0,a^1), (0,1,a^2)) -- deterministic and continuous in lambda -- then
// each element is scaled to unit sup norm. `canonical` records whether the
// graph normalization applied.
struct ConstrainedSolutionBasis {
  double lambda = 0.0;
  Interval sub;
  std::vector<Trajectory> elements;  // dimension 2 generically
  bool canonical = false;

  int dimension() const { return static_cast<int>(elements.size()); }
};

ConstrainedSolutionBasis constrained_basis(const SchroedingerProblem& problem,
                                           double lambda, const Interval& sub,
                                           int steps);

BoundaryTrace trace_of(const Trajectory& t);

// Lagrangian plane spanned by the traces of the basis elements.
// Throws Error("non-generic solution space") unless the basis has dimension 2.
LagrangianPlane trace_plane(const ConstrainedSolutionBasis& basis);

// Square (m+1) x (m+1) system encoding "a constrained solution satisfies the
// boundary condition": parameters are (u'(l), a) with u(l) = 0 for Dirichlet,
// (u(l), a) with u'(l) = 0 for Neumann; condition rows are (w_1..w_m, value
// or outward derivative at the right endpoint). det = 0 exactly at the
// constrained eigenvalues of the sweep parameter; unlike a frame determinant
// it has no basis-orientation ambiguity.
struct ConditionSystem {
  Matrix matrix;                     // (m+1) x (m+1), rows w_1..w_m then bc row
  std::vector<Trajectory> columns;   // parameter trajectories, same order
};

ConditionSystem boundary_condition_system(const SchroedingerProblem& problem,
                                          double lambda, const Interval& sub,
                                          int steps);

// Composite Simpson on steps+1 uniform samples (steps even).
double simpson_uniform(const std::vector<double>& samples, double h);

}  // namespace morseflow
