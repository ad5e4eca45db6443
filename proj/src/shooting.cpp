#include "morseflow/shooting.hpp"

#include "shooting_detail.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace morseflow {

double Trajectory::sup_norm() const {
  double s = 0.0;
  for (double v : u) s = std::max(s, std::abs(v));
  return s;
}

int default_steps(const Interval& sub, int steps_per_unit) {
  int n = static_cast<int>(std::ceil(sub.length() * steps_per_unit));
  n = std::max(n, 16);
  if (n % 2 != 0) ++n;
  return n;
}

double simpson_uniform(const std::vector<double>& samples, double h) {
  const size_t n = samples.size();
  if (n < 3 || n % 2 == 0)
    throw Error("simpson_uniform: needs an odd sample count of at least 3");
  double s = samples.front() + samples.back();
  for (size_t i = 1; i + 1 < n; ++i) s += samples[i] * ((i % 2 == 1) ? 4.0 : 2.0);
  return s * h / 3.0;
}

namespace detail {

CoefficientSamples sample_coefficients(const SchroedingerProblem& problem,
                                       const Interval& sub, int steps) {
  if (steps < 2 || steps % 2 != 0)
    throw Error("integration step count must be even and at least 2");
  if (sub.left < problem.interval.left - 1e-12 ||
      sub.right > problem.interval.right + 1e-12 || !(sub.length() > 0.0))
    throw Error("subinterval escapes the problem domain");
  CoefficientSamples out;
  out.sub = sub;
  out.steps = steps;
  out.h = sub.length() / steps;
  const int half_nodes = 2 * steps + 1;
  out.v.resize(half_nodes);
  const int m = problem.constraint_count();
  out.phi.assign(m, std::vector<double>(half_nodes));
  for (int s = 0; s < half_nodes; ++s) {
    const double x = sub.left + 0.5 * out.h * s;
    out.v[s] = problem.potential(x);
    for (int i = 0; i < m; ++i) out.phi[i][s] = problem.constraints[i](x);
  }
  return out;
}

Trajectory integrate_sampled(const CoefficientSamples& samples, double lambda,
                             const ExtendedState& init) {
  const int m = static_cast<int>(samples.phi.size());
  if (static_cast<int>(init.multipliers.size()) != m)
    throw Error("initial state multiplier count disagrees with the problem");
  std::array<double, 4> a{};
  for (int i = 0; i < m; ++i) a[i] = init.multipliers[i];

  const int steps = samples.steps;
  const double h = samples.h;
  Trajectory t;
  t.sub = samples.sub;
  t.lambda = lambda;
  t.multipliers = init.multipliers;
  t.x.resize(steps + 1);
  t.u.resize(steps + 1);
  t.du.resize(steps + 1);

  double u = init.u;
  double du = init.du;
  std::array<double, 4> w{};
  for (int i = 0; i < m && i < static_cast<int>(init.accumulators.size()); ++i)
    w[i] = init.accumulators[i];

  t.x[0] = samples.sub.left;
  t.u[0] = u;
  t.du[0] = du;

  // slope of (u, u', w) at half-grid index s
  auto slope = [&](int s, double uu, double dd, std::array<double, 4>& kw,
                   double& ku, double& kd) {
    ku = dd;
    double f = (samples.v[s] - lambda) * uu;
    for (int i = 0; i < m; ++i) {
      f -= a[i] * samples.phi[i][s];
      kw[i] = uu * samples.phi[i][s];
    }
    kd = f;
  };

  std::array<double, 4> kw1{}, kw2{}, kw3{}, kw4{};
  for (int n = 0; n < steps; ++n) {
    const int s0 = 2 * n, s1 = 2 * n + 1, s2 = 2 * n + 2;
    double ku1, kd1, ku2, kd2, ku3, kd3, ku4, kd4;
    slope(s0, u, du, kw1, ku1, kd1);
    slope(s1, u + 0.5 * h * ku1, du + 0.5 * h * kd1, kw2, ku2, kd2);
    slope(s1, u + 0.5 * h * ku2, du + 0.5 * h * kd2, kw3, ku3, kd3);
    slope(s2, u + h * ku3, du + h * kd3, kw4, ku4, kd4);
    u += h / 6.0 * (ku1 + 2.0 * ku2 + 2.0 * ku3 + ku4);
    du += h / 6.0 * (kd1 + 2.0 * kd2 + 2.0 * kd3 + kd4);
    for (int i = 0; i < m; ++i)
      w[i] += h / 6.0 * (kw1[i] + 2.0 * kw2[i] + 2.0 * kw3[i] + kw4[i]);
    if (std::abs(u) > 1e100 || std::abs(du) > 1e100) {
      std::ostringstream os;
      os << "blow-up at x = " << samples.sub.left + (n + 1) * h;
      throw Error(os.str());
    }
    t.x[n + 1] = samples.sub.left + (n + 1) * h;
    t.u[n + 1] = u;
    t.du[n + 1] = du;
  }
  t.x[steps] = samples.sub.right;  // pin the endpoint exactly
  t.constraint_values.assign(w.begin(), w.begin() + m);
  return t;
}

Matrix condition_matrix(const CoefficientSamples& samples, BoundaryCondition bc,
                        double lambda, std::vector<Trajectory>* columns) {
  const int m = static_cast<int>(samples.phi.size());
  std::vector<Trajectory> cols;
  cols.reserve(m + 1);
  {
    ExtendedState base;
    if (bc == BoundaryCondition::Dirichlet) {
      base.u = 0.0;
      base.du = 1.0;
    } else {
      base.u = 1.0;
      base.du = 0.0;
    }
    base.multipliers.assign(m, 0.0);
    cols.push_back(integrate_sampled(samples, lambda, base));
  }
  for (int j = 0; j < m; ++j) {
    ExtendedState st;
    st.multipliers.assign(m, 0.0);
    st.multipliers[j] = 1.0;
    cols.push_back(integrate_sampled(samples, lambda, st));
  }
  Matrix cond(m + 1, m + 1);
  for (int c = 0; c <= m; ++c) {
    const Trajectory& t = cols[c];
    for (int i = 0; i < m; ++i) cond(i, c) = t.constraint_values[i];
    cond(m, c) = (bc == BoundaryCondition::Dirichlet) ? t.u.back() : t.du.back();
  }
  if (columns) *columns = std::move(cols);
  return cond;
}

}  // namespace detail

Trajectory integrate_extended(const SchroedingerProblem& problem, double lambda,
                              const Interval& sub, const ExtendedState& init,
                              int steps) {
  const auto samples = detail::sample_coefficients(problem, sub, steps);
  return detail::integrate_sampled(samples, lambda, init);
}

BoundaryTrace trace_of(const Trajectory& t) {
  BoundaryTrace b;
  b.value_left = t.u.front();
  b.value_right = t.u.back();
  b.normal_left = -t.du.front();  // outward normal at the left endpoint
  b.normal_right = t.du.back();
  return b;
}

namespace {

void rescale(Trajectory& t, double factor) {
  for (double& v : t.u) v *= factor;
  for (double& v : t.du) v *= factor;
  for (double& v : t.multipliers) v *= factor;
  for (double& v : t.constraint_values) v *= factor;
}

}  // namespace

ConstrainedSolutionBasis constrained_basis(const SchroedingerProblem& problem,
                                           double lambda, const Interval& sub,
                                           int steps) {
  if (steps <= 0) steps = default_steps(sub);
  const auto samples = detail::sample_coefficients(problem, sub, steps);
  const int m = problem.constraint_count();

  ConstrainedSolutionBasis basis;
  basis.lambda = lambda;
  basis.sub = sub;

  // parameter space (u(l), u'(l), a_1..a_m); columns of N span the kernel of
  // the constraint map params -> (w_1(r), .., w_m(r))
  Matrix nmat;
  bool canonical = false;
  double wscale = 1.0;
  if (m == 0) {
    nmat = Matrix::identity(2);
    canonical = true;
  } else {
    std::vector<Trajectory> probes;
    probes.reserve(2 + m);
    for (int p = 0; p < 2 + m; ++p) {
      ExtendedState st;
      st.multipliers.assign(m, 0.0);
      if (p == 0)
        st.u = 1.0;
      else if (p == 1)
        st.du = 1.0;
      else
        st.multipliers[p - 2] = 1.0;
      probes.push_back(detail::integrate_sampled(samples, lambda, st));
    }
    Matrix k(m, 2 + m);
    for (int i = 0; i < m; ++i)
      for (int p = 0; p < 2 + m; ++p) k(i, p) = probes[p].constraint_values[i];
    wscale = std::max(1.0, max_abs(k));
    const int rank = svd_rank(svd(k), 1e-10);
    if (rank < m) {
      std::ostringstream os;
      os << "constraint degeneracy (rank " << rank << " < " << m << ")";
      throw Error(os.str());
    }
    nmat = null_space(k, 1e-10);
    if (nmat.cols != 2) throw Error("constrained solution space has unexpected dimension");
    // graph normalization: N * T^{-1} has top block I when T = N[0:2][0:2]
    // is well conditioned, which makes the basis deterministic and continuous
    // in the sweep parameter (no orientation flips from the SVD).
    const double t00 = nmat(0, 0), t01 = nmat(0, 1);
    const double t10 = nmat(1, 0), t11 = nmat(1, 1);
    const double det = t00 * t11 - t01 * t10;
    const double norm = std::sqrt(t00 * t00 + t01 * t01 + t10 * t10 + t11 * t11);
    if (std::abs(det) > 1e-8 * std::max(norm * norm, 1e-30)) {
      Matrix g(2 + m, 2);
      for (int i = 0; i < 2 + m; ++i) {
        g(i, 0) = (nmat(i, 0) * t11 - nmat(i, 1) * t10) / det;
        g(i, 1) = (-nmat(i, 0) * t01 + nmat(i, 1) * t00) / det;
      }
      nmat = std::move(g);
      canonical = true;
    }
  }

  for (int c = 0; c < 2; ++c) {
    ExtendedState st;
    st.u = nmat(0, c);
    st.du = nmat(1, c);
    st.multipliers.assign(m, 0.0);
    for (int i = 0; i < m; ++i) st.multipliers[i] = nmat(2 + i, c);
    Trajectory t = detail::integrate_sampled(samples, lambda, st);
    const double sup = t.sup_norm();
    if (!(sup > 0.0)) throw Error("degenerate constrained solution (u identically zero)");
    rescale(t, 1.0 / sup);
    for (int i = 0; i < m; ++i) {
      if (std::abs(t.constraint_values[i]) > 1e-8 * wscale) {
        std::ostringstream os;
        os << "constraint residual " << std::abs(t.constraint_values[i])
           << " above 1e-8 after re-integration";
        throw Error(os.str());
      }
    }
    basis.elements.push_back(std::move(t));
  }
  basis.canonical = canonical;
  return basis;
}

LagrangianPlane trace_plane(const ConstrainedSolutionBasis& basis) {
  if (basis.dimension() != 2) {
    std::ostringstream os;
    os << "non-generic solution space (dimension " << basis.dimension() << ")";
    throw Error(os.str());
  }
  return LagrangianPlane({trace_of(basis.elements[0]), trace_of(basis.elements[1])});
}

ConditionSystem boundary_condition_system(const SchroedingerProblem& problem,
                                          double lambda, const Interval& sub,
                                          int steps) {
  if (steps <= 0) steps = default_steps(sub);
  const auto samples = detail::sample_coefficients(problem, sub, steps);
  ConditionSystem sys;
  sys.matrix = detail::condition_matrix(samples, problem.bc, lambda, &sys.columns);
  return sys;
}

}  // namespace morseflow
