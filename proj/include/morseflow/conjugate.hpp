#pragma once

// Conjugate-point route (Dirichlet only): shrink the domain through an
// increasing family Omega_t and count the parameters t < t_max where the
// constrained problem on Omega_t has a Dirichlet kernel. Each crossing is
// negative (the boundary crossing form for outward-moving endpoints), so the
// Morse index equals the number of conjugate points weighted by multiplicity.

#include "morseflow/core_model.hpp"
#include "morseflow/shooting.hpp"

namespace morseflow {

// Increasing family of subintervals; construction samples monotonicity.
struct DomainFamily {
  std::function<double(double)> left_fn;
  std::function<double(double)> right_fn;
  double t_min = 0.0;
  double t_max = 1.0;

  Interval at(double t) const { return Interval{left_fn(t), right_fn(t)}; }

  // Omega_t scales the full interval about its center; t_max = 1 recovers it.
  static DomainFamily scaling(const Interval& full, double t_min);
};

DomainFamily make_family(std::function<double(double)> left_fn,
                         std::function<double(double)> right_fn, double t_min,
                         double t_max);

// Constraints restricted to a subinterval: evaluation maps are unchanged,
// only the pairing domain narrows (handled by the integrators).
std::vector<ConstraintFunction> restricted_constraints(const SchroedingerProblem& problem,
                                                       const Interval& sub);

// Dirichlet defect on a subinterval at the problem's own energy (lambda = 0):
// determinant of the (m+1) x (m+1) condition matrix [w_i(right); u(right)]
// over the parameters (u'(left), a) with u(left) = 0. Zero exactly at
// constrained conjugate subintervals; nullity (SVD, relative tolerance 1e-8)
// is the multiplicity, and kernel trajectories realize the defect space.
struct DefectResult {
  double value = 0.0;
  int nullity = 0;
  std::vector<Trajectory> kernel;
  Matrix condition;
};

DefectResult dirichlet_defect(const SchroedingerProblem& problem, const Interval& sub,
                              int steps = 0);

// Boundary crossing form of a kernel element at t: with outward normal
// velocities this is -[u'(left)^2 * (-left'(t)) + u'(right)^2 * right'(t)],
// negative for increasing families. Endpoint velocities by central
// differences of the family maps.
double crossing_form_t(const DomainFamily& family, double t, const Trajectory& kernel_element);

struct ConjugateReport {
  std::vector<CrossingRecord> conjugate_points;  // t in (t_min, t_max), sorted
  std::vector<CrossingRecord> endpoint_excluded; // within 1e-8 of t_max
  int total_count = 0;          // sum of multiplicities, t < t_max
  int morse_index_claim = 0;
  bool shrinks_to_point = false;   // |Omega_{t_min}| < 1e-3 |Omega_{t_max}|
  double certificate_t = 0.0;      // no crossings certified for t < this
  // "morse": total_count is the Morse index. "spectral-flow only": the
  // family neither shrinks to a point nor is covered by the certificate.
  // "activation jump": a constraint's active set changes along the family,
  // the eigenvalue path jumps there, and the count may exceed the index.
  std::string label;
  std::vector<double> grid;
  std::vector<double> defects;
};

// Scan with grid_points >= 64 defect samples on [t_min, t_max]: sign changes
// bisected below 1e-10, tangential roots caught by a quadratic-fit filter
// plus SVD nullity, multiplicities from the SVD (not from root order), and
// crossing-form negativity verified at every point. The absolute Morse claim
// holds when the family shrinks to a point or the first-eigenvalue
// certificate (pi/|Omega_t|)^2 + inf V > 0 covers (0, t_min]; otherwise the
// report is labeled "spectral-flow only".
ConjugateReport scan(const SchroedingerProblem& problem, const DomainFamily& family,
                     int grid_points = 512, int steps = 0);

}  // namespace morseflow
