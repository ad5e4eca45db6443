#pragma once

// Library-internal shooting core. Coefficient functions are sampled once per
// (subinterval, steps) pair on the RK4 half-grid, so sweeps that integrate at
// hundreds of parameter values pay the std::function evaluation cost once.

#include "morseflow/core_model.hpp"
#include "morseflow/linalg.hpp"
#include "morseflow/shooting.hpp"

namespace morseflow::detail {

struct CoefficientSamples {
  Interval sub;
  int steps = 0;   // even
  double h = 0.0;  // sub.length() / steps
  std::vector<double> v;                 // 2*steps+1 half-grid samples of V
  std::vector<std::vector<double>> phi;  // one half-grid sample row per constraint
};

CoefficientSamples sample_coefficients(const SchroedingerProblem& problem,
                                       const Interval& sub, int steps);

Trajectory integrate_sampled(const CoefficientSamples& samples, double lambda,
                             const ExtendedState& init);

// (m+1) x (m+1) boundary condition system over the parameter trajectories;
// columns stored into *columns when non-null.
Matrix condition_matrix(const CoefficientSamples& samples, BoundaryCondition bc,
                        double lambda, std::vector<Trajectory>* columns);

}  // namespace morseflow::detail
