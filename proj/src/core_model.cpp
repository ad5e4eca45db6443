#include "morseflow/core_model.hpp"

#include "morseflow/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

namespace morseflow {

namespace {

std::function<double(double)> make_table_eval(std::vector<double> xs,
                                              std::vector<double> values,
                                              const char* what) {
  if (xs.size() < 2) throw Error(std::string(what) + ": table needs at least 2 nodes");
  if (xs.size() != values.size())
    throw Error(std::string(what) + ": node and value counts disagree");
  for (size_t i = 0; i + 1 < xs.size(); ++i)
    if (!(xs[i] < xs[i + 1]))
      throw Error(std::string(what) + ": table nodes must be strictly increasing");
  for (double x : xs)
    if (!std::isfinite(x)) throw Error(std::string(what) + ": non-finite table node");
  for (double v : values)
    if (!std::isfinite(v)) throw Error(std::string(what) + ": non-finite table value");
  return [xs = std::move(xs), values = std::move(values)](double x) {
    if (x <= xs.front()) return values.front();
    if (x >= xs.back()) return values.back();
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const size_t j = static_cast<size_t>(it - xs.begin());
    const double t = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
    return values[j - 1] + t * (values[j] - values[j - 1]);
  };
}

// Composite Simpson of fn over iv with 2*panels subintervals.
double simpson_of(const std::function<double(double)>& fn, const Interval& iv,
                  int panels) {
  const int n = 2 * panels;
  const double h = iv.length() / n;
  double s = fn(iv.left) + fn(iv.right);
  for (int i = 1; i < n; ++i)
    s += fn(iv.left + i * h) * ((i % 2 == 1) ? 4.0 : 2.0);
  return s * h / 3.0;
}

std::vector<double> trace_as_vector(const BoundaryTrace& t) {
  return {t.value_left, t.value_right, t.normal_left, t.normal_right};
}

}  // namespace

void validate_interval(const Interval& iv) {
  if (!std::isfinite(iv.left) || !std::isfinite(iv.right))
    throw Error("interval endpoints must be finite");
  if (!(iv.right - iv.left >= 1e-6)) {
    std::ostringstream os;
    os << "interval too short: length " << iv.right - iv.left << " < 1e-6";
    throw Error(os.str());
  }
}

Potential::Potential() : eval_([](double) { return 0.0; }) {}

Potential Potential::constant(double value) {
  if (!std::isfinite(value)) throw Error("potential: non-finite constant");
  Potential p;
  p.eval_ = [value](double) { return value; };
  return p;
}

Potential Potential::table(std::vector<double> xs, std::vector<double> values) {
  Potential p;
  p.eval_ = make_table_eval(std::move(xs), std::move(values), "potential");
  return p;
}

Potential Potential::from_function(std::function<double(double)> fn) {
  if (!fn) throw Error("potential: empty function");
  Potential p;
  p.eval_ = std::move(fn);
  return p;
}

ConstraintFunction ConstraintFunction::constant(double value) {
  if (!std::isfinite(value)) throw Error("constraint: non-finite constant");
  ConstraintFunction c;
  c.eval_ = [value](double) { return value; };
  return c;
}

ConstraintFunction ConstraintFunction::table(std::vector<double> xs,
                                             std::vector<double> values) {
  ConstraintFunction c;
  c.eval_ = make_table_eval(std::move(xs), std::move(values), "constraint");
  return c;
}

ConstraintFunction ConstraintFunction::from_function(std::function<double(double)> fn) {
  if (!fn) throw Error("constraint: empty function");
  ConstraintFunction c;
  c.eval_ = std::move(fn);
  return c;
}

std::string to_string(BoundaryCondition bc) {
  return bc == BoundaryCondition::Dirichlet ? "dirichlet" : "neumann";
}

SchroedingerProblem::SchroedingerProblem(Interval iv, Potential v, BoundaryCondition b,
                                         std::vector<ConstraintFunction> cs)
    : interval(iv), potential(std::move(v)), bc(b), constraints(std::move(cs)) {
  validate_interval(interval);
  const int m = constraint_count();
  if (m > 4) throw Error("too many constraints (at most 4 supported)");

  // finiteness screen on a dense sample
  const int probes = 512;
  for (int i = 0; i <= probes; ++i) {
    const double x = interval.left + interval.length() * i / probes;
    const double vx = potential(x);
    if (!std::isfinite(vx)) {
      std::ostringstream os;
      os << "potential not finite at x = " << x;
      throw Error(os.str());
    }
    for (int j = 0; j < m; ++j) {
      if (!std::isfinite(constraints[j](x))) {
        std::ostringstream os;
        os << "constraint " << j << " not finite at x = " << x;
        throw Error(os.str());
      }
    }
  }

  if (m >= 1) {
    // Gram matrix of the constraints; rank deficiency means the constrained
    // space is described redundantly and every route downstream would break.
    Matrix gram(m, m);
    for (int i = 0; i < m; ++i) {
      for (int j = i; j < m; ++j) {
        const auto& fi = constraints[i];
        const auto& fj = constraints[j];
        const double g = simpson_of(
            [&](double x) { return fi(x) * fj(x); }, interval, 1024);
        gram(i, j) = gram(j, i) = g;
      }
    }
    if (svd_rank(svd(gram), 1e-10) < m)
      throw Error("linearly dependent constraints (Gram rank below m)");
  }
}

SchroedingerProblem SchroedingerProblem::unconstrained() const {
  return SchroedingerProblem(interval, potential, bc, {});
}

double symplectic_form(const BoundaryTrace& a, const BoundaryTrace& b) {
  return (b.normal_left * a.value_left + b.normal_right * a.value_right) -
         (a.normal_left * b.value_left + a.normal_right * b.value_right);
}

LagrangianPlane::LagrangianPlane(std::vector<BoundaryTrace> frame) {
  const int k = static_cast<int>(frame.size());
  if (k < 1 || k > 2) throw Error("plane dimension must be 1 or 2");
  Matrix f(4, k);
  for (int j = 0; j < k; ++j) {
    const auto col = trace_as_vector(frame[j]);
    for (int i = 0; i < 4; ++i) f(i, j) = col[i];
  }
  const SvdResult s = svd(f);
  if (s.sigma.front() <= 0.0 || svd_rank(s, 1e-10) < k)
    throw Error("rank-deficient plane frame");
  // orthonormal frame spanning the same plane (left singular vectors)
  frame_.resize(k);
  for (int j = 0; j < k; ++j) {
    frame_[j].value_left = s.u(0, j);
    frame_[j].value_right = s.u(1, j);
    frame_[j].normal_left = s.u(2, j);
    frame_[j].normal_right = s.u(3, j);
  }
  isotropy_defect_ = (k == 2) ? std::abs(symplectic_form(frame_[0], frame_[1])) : 0.0;
  if (isotropy_defect_ > 1e-8) {
    std::ostringstream os;
    os << "non-isotropic frame (defect = " << isotropy_defect_ << ")";
    throw Error(os.str());
  }
}

LagrangianPlane dirichlet_plane() {
  return LagrangianPlane({BoundaryTrace{0.0, 0.0, 1.0, 0.0},
                          BoundaryTrace{0.0, 0.0, 0.0, 1.0}});
}

LagrangianPlane neumann_plane() {
  return LagrangianPlane({BoundaryTrace{1.0, 0.0, 0.0, 0.0},
                          BoundaryTrace{0.0, 1.0, 0.0, 0.0}});
}

int intersection_dimension(const LagrangianPlane& plane, BoundaryCondition beta,
                           double rel_tol) {
  const int k = plane.dimension();
  // A frame vector lies in beta_D iff its value components vanish, in beta_N
  // iff its normal components vanish; the intersection dimension is the
  // nullity of the 2 x k matrix of those components.
  Matrix b(2, k);
  for (int j = 0; j < k; ++j) {
    const BoundaryTrace& t = plane.frame()[j];
    if (beta == BoundaryCondition::Dirichlet) {
      b(0, j) = t.value_left;
      b(1, j) = t.value_right;
    } else {
      b(0, j) = t.normal_left;
      b(1, j) = t.normal_right;
    }
  }
  const SvdResult s = svd(b);
  const double smax = s.sigma.empty() ? 0.0 : s.sigma.front();
  if (smax <= 0.0) return k;
  int dim = 0;
  const int measured = std::min(k, 2);
  // The frame is orthonormal, so its components are O(1); anchoring the
  // threshold at max(smax, 1) keeps a full-dimensional intersection (where
  // every singular value shrinks at once) detectable.
  const double anchor = std::max(smax, 1.0);
  for (int i = 0; i < measured; ++i)
    if (s.sigma[i] <= rel_tol * anchor) ++dim;
  // a 2-frame maps through a 2x2 matrix: nullity = k - rank
  if (k > measured) dim += k - measured;
  return dim;
}

}  // namespace morseflow
