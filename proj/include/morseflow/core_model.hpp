#pragma once

// Problem descriptions and the symplectic trace geometry shared by every
// route: intervals, potentials, constraint functions, boundary traces with
// OUTWARD normal derivatives, Lagrangian planes, and intersection dimension
// against the Dirichlet/Neumann reference planes.

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace morseflow {

// All domain failures (invalid inputs, numerical breakdowns with named
// causes like "blow-up" or "constraint degeneracy") throw this.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Interval {
  double left = 0.0;
  double right = 1.0;

  double length() const { return right - left; }
  double center() const { return 0.5 * (left + right); }
};

// Throws unless right - left >= 1e-6 and both endpoints are finite.
void validate_interval(const Interval& iv);

// Bounded potential V on an interval. Evaluation must stay finite; problem
// construction samples densely and rejects NaN/inf.
class Potential {
 public:
  Potential();  // zero potential
  static Potential constant(double value);
  // Piecewise-linear interpolation of (xs, values); xs strictly increasing.
  static Potential table(std::vector<double> xs, std::vector<double> values);
  static Potential from_function(std::function<double(double)> fn);

  double operator()(double x) const { return eval_(x); }

 private:
  std::function<double(double)> eval_;
};

// H^1 constraint weight; the constrained space is { u : <u, phi_i> = 0 }.
class ConstraintFunction {
 public:
  static ConstraintFunction constant(double value);
  static ConstraintFunction table(std::vector<double> xs, std::vector<double> values);
  static ConstraintFunction from_function(std::function<double(double)> fn);

  double operator()(double x) const { return eval_(x); }

 private:
  ConstraintFunction() = default;
  std::function<double(double)> eval_;
};

enum class BoundaryCondition { Dirichlet, Neumann };

std::string to_string(BoundaryCondition bc);

// Schroedinger operator L = -d^2/dx^2 + V on an interval with boundary
// condition bc, restricted to the orthogonal complement of the constraints.
// Construction validates the interval, samples V and phi_i for finiteness,
// and checks linear independence of the constraints through the rank of
// their Gram matrix (relative tolerance 1e-10).
struct SchroedingerProblem {
  Interval interval;
  Potential potential;
  BoundaryCondition bc = BoundaryCondition::Dirichlet;
  std::vector<ConstraintFunction> constraints;  // size m, 0 <= m <= 4

  SchroedingerProblem(Interval iv, Potential v, BoundaryCondition b,
                      std::vector<ConstraintFunction> cs);

  int constraint_count() const { return static_cast<int>(constraints.size()); }

  // Problem with the constraints dropped (same operator, full form domain).
  SchroedingerProblem unconstrained() const;
};

// Boundary data of a function on an interval, with outward normals:
// normal_left = -u'(left), normal_right = +u'(right).
struct BoundaryTrace {
  double value_left = 0.0;
  double value_right = 0.0;
  double normal_left = 0.0;
  double normal_right = 0.0;
};

// omega((x,phi),(y,psi)) = psi(x) - phi(y), the boundary pairing summed over
// the two endpoints. Bilinear, antisymmetric; equals the Green identity
// integral int (u v'' - v u'') for traces of smooth functions.
double symplectic_form(const BoundaryTrace& a, const BoundaryTrace& b);

// Isotropic plane in the 4-dimensional trace space, dimension 1 or 2.
// The frame is orthonormalized at construction; rank deficiency
// (sigma_min < 1e-10 sigma_max) and isotropy defects above 1e-8 throw.
class LagrangianPlane {
 public:
  explicit LagrangianPlane(std::vector<BoundaryTrace> frame);

  int dimension() const { return static_cast<int>(frame_.size()); }
  const std::vector<BoundaryTrace>& frame() const { return frame_; }
  // |omega(c_i, c_j)| on the orthonormalized frame (0 for dimension 1).
  double isotropy_defect() const { return isotropy_defect_; }

 private:
  std::vector<BoundaryTrace> frame_;
  double isotropy_defect_ = 0.0;
};

// Reference planes: Dirichlet beta_D = {(0, phi)} (value components vanish),
// Neumann beta_N = {(x, 0)} (normal components vanish).
LagrangianPlane dirichlet_plane();
LagrangianPlane neumann_plane();

// dim(plane intersect beta): singular values of the 2 x k matrix of the
// frame components annihilated by beta (values for Dirichlet, normals for
// Neumann); entries below rel_tol * sigma_max count as zero.
int intersection_dimension(const LagrangianPlane& plane, BoundaryCondition beta,
                           double rel_tol = 1e-8);

enum class CrossingKind { LambdaSweep, DomainSweep };

// One detected crossing of the solution-trace path with the reference plane.
struct CrossingRecord {
  double location = 0.0;  // lambda* or t*
  int dimension = 0;      // dim of the intersection
  int n_plus = 0;         // crossing-form signature
  int n_minus = 0;
  CrossingKind kind = CrossingKind::LambdaSweep;
  double form_value = 0.0;  // sum of crossing-form eigenvalues (trace)
};

}  // namespace morseflow
