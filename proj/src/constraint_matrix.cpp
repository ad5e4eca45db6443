#include "morseflow/constraint_matrix.hpp"

#include "morseflow/maslov.hpp"
#include "morseflow/oracle.hpp"
#include "shooting_detail.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace morseflow {

namespace {

// Homogeneous solution satisfying the left boundary condition.
Trajectory homogeneous_left(const detail::CoefficientSamples& samples,
                            BoundaryCondition bc, double lambda, int m) {
  ExtendedState st;
  st.multipliers.assign(m, 0.0);
  if (bc == BoundaryCondition::Dirichlet) {
    st.u = 0.0;
    st.du = 1.0;
  } else {
    st.u = 1.0;
    st.du = 0.0;
  }
  return detail::integrate_sampled(samples, lambda, st);
}

// Right-boundary functional of a trajectory under bc, and its trajectory-wide
// scale for the pole test.
double right_functional(const Trajectory& t, BoundaryCondition bc) {
  return bc == BoundaryCondition::Dirichlet ? t.u.back() : t.du.back();
}

double right_functional_scale(const Trajectory& t, BoundaryCondition bc) {
  double s = 0.0;
  const auto& samples = (bc == BoundaryCondition::Dirichlet) ? t.u : t.du;
  for (double v : samples) s = std::max(s, std::abs(v));
  return s;
}

// u = particular + c * homogeneous meeting both boundary conditions; index
// selects which multiplier column acts as the forcing.
std::vector<double> solve_with_forcing(const detail::CoefficientSamples& samples,
                                       BoundaryCondition bc, double lambda,
                                       const Trajectory& homogeneous, int m,
                                       int forcing_index,
                                       std::vector<double>* du_out) {
  ExtendedState st;
  st.multipliers.assign(m, 0.0);
  st.multipliers[forcing_index] = 1.0;
  const Trajectory particular = detail::integrate_sampled(samples, lambda, st);
  const double denom = right_functional(homogeneous, bc);
  const double scale = right_functional_scale(homogeneous, bc);
  if (std::abs(denom) < 1e-8 * scale) {
    std::ostringstream os;
    os << "resolvent pole near lambda = " << lambda;
    throw ResolventPoleError(os.str());
  }
  const double c = -right_functional(particular, bc) / denom;
  std::vector<double> u(particular.u.size());
  for (size_t i = 0; i < u.size(); ++i) u[i] = particular.u[i] + c * homogeneous.u[i];
  if (du_out) {
    du_out->resize(u.size());
    for (size_t i = 0; i < u.size(); ++i)
      (*du_out)[i] = particular.du[i] + c * homogeneous.du[i];
  }
  return u;
}

}  // namespace

ResolventSolution resolvent_apply(const SchroedingerProblem& problem, double lambda,
                                  const ConstraintFunction& phi, int steps) {
  if (steps <= 0) steps = default_steps(problem.interval);
  if (steps % 2 != 0) ++steps;
  // coefficient samples carrying the forcing as the sole multiplier column
  detail::CoefficientSamples cs;
  cs.sub = problem.interval;
  cs.steps = steps;
  cs.h = problem.interval.length() / steps;
  const int half_nodes = 2 * steps + 1;
  cs.v.resize(half_nodes);
  cs.phi.assign(1, std::vector<double>(half_nodes));
  for (int s = 0; s < half_nodes; ++s) {
    const double x = problem.interval.left + 0.5 * cs.h * s;
    cs.v[s] = problem.potential(x);
    cs.phi[0][s] = phi(x);
  }

  const Trajectory hom = homogeneous_left(cs, problem.bc, lambda, 1);
  ResolventSolution out;
  out.u = solve_with_forcing(cs, problem.bc, lambda, hom, 1, 0, &out.du);
  out.x.resize(steps + 1);
  for (int i = 0; i <= steps; ++i) out.x[i] = problem.interval.left + i * cs.h;
  out.x.back() = problem.interval.right;

  // residual of -u'' + (V - lambda) u - phi through a 4th-order stencil
  // (matches the RK4 convergence order; a 2nd-order stencil would drown the
  // integrator's accuracy in its own truncation error)
  const double h2 = 12.0 * cs.h * cs.h;
  for (int i = 2; i + 2 <= steps; ++i) {
    const double upp = (-out.u[i - 2] + 16.0 * out.u[i - 1] - 30.0 * out.u[i] +
                        16.0 * out.u[i + 1] - out.u[i + 2]) /
                       h2;
    const double r = -upp + (cs.v[2 * i] - lambda) * out.u[i] - cs.phi[0][2 * i];
    out.residual_sup = std::max(out.residual_sup, std::abs(r));
  }
  return out;
}

ConstraintMatrixSample constraint_matrix(const SchroedingerProblem& problem,
                                         double lambda, int steps) {
  const int m = problem.constraint_count();
  if (m < 1) throw Error("constraint_matrix: needs at least one constraint");
  if (steps <= 0) steps = default_steps(problem.interval);
  const auto samples = detail::sample_coefficients(problem, problem.interval, steps);
  const Trajectory hom = homogeneous_left(samples, problem.bc, lambda, m);

  std::vector<std::vector<double>> u(m);
  for (int i = 0; i < m; ++i)
    u[i] = solve_with_forcing(samples, problem.bc, lambda, hom, m, i, nullptr);

  ConstraintMatrixSample out;
  out.lambda = lambda;
  out.matrix = Matrix(m, m);
  std::vector<double> prod(steps + 1);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      for (int s = 0; s <= steps; ++s) prod[s] = u[i][s] * samples.phi[j][2 * s];
      out.matrix(i, j) = simpson_uniform(prod, samples.h);
    }
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      out.asymmetry = std::max(out.asymmetry,
                               std::abs(out.matrix(i, j) - out.matrix(j, i)));
      const double avg = 0.5 * (out.matrix(i, j) + out.matrix(j, i));
      out.matrix(i, j) = out.matrix(j, i) = avg;
    }
  out.eigenvalues = symmetric_eigenvalues(out.matrix);
  out.negative_count = 0;
  for (double e : out.eigenvalues)
    if (e < 0.0) ++out.negative_count;
  return out;
}

IndexLimitReport index_limit(const SchroedingerProblem& problem,
                             std::vector<double> lambda_sequence, int steps) {
  if (lambda_sequence.size() < 3)
    throw Error("index_limit: need at least three lambdas");
  for (size_t i = 0; i < lambda_sequence.size(); ++i) {
    if (!(lambda_sequence[i] < 0.0))
      throw Error("index_limit: all lambdas must be negative");
    if (i > 0 && !(lambda_sequence[i] > lambda_sequence[i - 1]))
      throw Error("index_limit: lambdas must increase toward 0");
  }

  IndexLimitReport report;
  for (double lambda : lambda_sequence) {
    try {
      report.samples.push_back(constraint_matrix(problem, lambda, steps));
    } catch (const ResolventPoleError&) {
      report.skipped.push_back(lambda);
    }
  }

  auto fail = [&](const char* why) {
    std::ostringstream os;
    os << "no stabilization (" << why << "); counts trail = [";
    for (size_t i = 0; i < report.samples.size(); ++i) {
      if (i) os << ", ";
      os << report.samples[i].negative_count;
    }
    os << "]";
    throw Error(os.str());
  };

  if (report.samples.size() < 3) fail("fewer than three usable lambdas");
  const size_t n = report.samples.size();
  const int tail = report.samples[n - 1].negative_count;
  if (report.samples[n - 2].negative_count != tail ||
      report.samples[n - 3].negative_count != tail)
    fail("last three counts disagree");
  const double l_inf = lambda_infinity(problem);
  if (!(std::abs(report.samples[n - 1].lambda) <= 1e-4 * std::abs(l_inf)))
    fail("sequence does not reach 1e-4 of lambda_infinity");
  report.limit = tail;
  return report;
}

std::vector<double> default_lambda_sequence() {
  std::vector<double> seq;
  double lambda = -0.1;
  for (int k = 0; k <= 12; ++k) {
    seq.push_back(lambda);
    lambda *= 0.5;
  }
  return seq;
}

}  // namespace morseflow
