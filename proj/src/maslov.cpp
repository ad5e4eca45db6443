#include "morseflow/maslov.hpp"

#include "morseflow/linalg.hpp"
#include "shooting_detail.hpp"
#include "sweep_detail.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace morseflow {

double lambda_infinity(const SchroedingerProblem& problem) {
  const int probes = 4096;
  double inf_v = problem.potential(problem.interval.left);
  for (int i = 1; i <= probes; ++i) {
    const double x = problem.interval.left + problem.interval.length() * i / probes;
    inf_v = std::min(inf_v, problem.potential(x));
  }
  return inf_v - (1.0 + 0.01 * std::abs(inf_v));
}

double crossing_form_lambda(const ConstrainedSolutionBasis& basis,
                            const std::vector<double>& kernel_coeffs) {
  if (static_cast<int>(kernel_coeffs.size()) != basis.dimension())
    throw Error("crossing_form_lambda: coefficient count disagrees with the basis");
  if (basis.dimension() == 0) throw Error("crossing_form_lambda: empty basis");
  const size_t nodes = basis.elements.front().u.size();
  std::vector<double> usq(nodes, 0.0);
  for (size_t s = 0; s < nodes; ++s) {
    double u = 0.0;
    for (int k = 0; k < basis.dimension(); ++k)
      u += kernel_coeffs[k] * basis.elements[k].u[s];
    usq[s] = u * u;
  }
  const double h = basis.sub.length() / static_cast<double>(nodes - 1);
  return -simpson_uniform(usq, h);
}

namespace {

// Coefficients (in the basis) of the kernel of the boundary restriction:
// right singular vectors of the 2 x 2 matrix of annihilated trace components.
std::vector<std::vector<double>> kernel_coefficients(const ConstrainedSolutionBasis& basis,
                                                     BoundaryCondition bc,
                                                     int expected_dim) {
  Matrix b(2, 2);
  for (int j = 0; j < 2; ++j) {
    const BoundaryTrace t = trace_of(basis.elements[j]);
    if (bc == BoundaryCondition::Dirichlet) {
      b(0, j) = t.value_left;
      b(1, j) = t.value_right;
    } else {
      b(0, j) = t.normal_left;
      b(1, j) = t.normal_right;
    }
  }
  const SvdResult s = svd(b);
  std::vector<std::vector<double>> out;
  for (int j = 2 - expected_dim; j < 2; ++j)
    out.push_back({s.v(0, j), s.v(1, j)});
  return out;
}

struct FormSignature {
  int n_plus = 0;
  int n_minus = 0;
  double trace = 0.0;
};

FormSignature lambda_form_signature(const ConstrainedSolutionBasis& basis,
                                    const std::vector<std::vector<double>>& kernel) {
  const int d = static_cast<int>(kernel.size());
  const size_t nodes = basis.elements.front().u.size();
  const double h = basis.sub.length() / static_cast<double>(nodes - 1);
  // u-samples of each kernel element
  std::vector<std::vector<double>> us(d, std::vector<double>(nodes, 0.0));
  for (int a = 0; a < d; ++a)
    for (size_t s = 0; s < nodes; ++s)
      for (int k = 0; k < basis.dimension(); ++k)
        us[a][s] += kernel[a][k] * basis.elements[k].u[s];
  Matrix q(d, d);
  std::vector<double> prod(nodes);
  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b) {
      for (size_t s = 0; s < nodes; ++s) prod[s] = us[a][s] * us[b][s];
      const double v = -simpson_uniform(prod, h);
      q(a, b) = q(b, a) = v;
    }
  FormSignature sig;
  if (d == 1) {
    sig.trace = q(0, 0);
    (q(0, 0) < 0.0 ? sig.n_minus : sig.n_plus) += 1;
  } else {
    const double tr = q(0, 0) + q(1, 1);
    const double disc = std::sqrt(0.25 * (q(0, 0) - q(1, 1)) * (q(0, 0) - q(1, 1)) +
                                  q(0, 1) * q(0, 1));
    const double e1 = 0.5 * tr - disc, e2 = 0.5 * tr + disc;
    sig.trace = tr;
    (e1 < 0.0 ? sig.n_minus : sig.n_plus) += 1;
    (e2 < 0.0 ? sig.n_minus : sig.n_plus) += 1;
  }
  return sig;
}

}  // namespace

LambdaSweepReport sweep(const SchroedingerProblem& problem, int grid_points,
                        int steps) {
  if (grid_points < 64) throw Error("sweep: grid_points must be at least 64");
  const Interval sub = problem.interval;
  if (steps <= 0) steps = default_steps(sub);
  const auto samples = detail::sample_coefficients(problem, sub, steps);
  const int m = problem.constraint_count();

  LambdaSweepReport report;
  report.lambda_infinity = lambda_infinity(problem);
  const double l_inf = report.lambda_infinity;

  auto det_at = [&](double lambda) {
    return determinant(detail::condition_matrix(samples, problem.bc, lambda, nullptr));
  };
  // Nullity on the equilibrated system: columns scaled to unit-sup
  // trajectories, each constraint row by its attainable ceiling
  // sup|phi| * |interval| (the bound on <phi, u> for a unit-sup u). The
  // ceiling compensates a weakly coupled constraint without inflating a row
  // that is small because the system sits on a kernel. The tolerance is
  // anchored at max(sigma_max, 1) so a system whose singular values all
  // shrink together (m = 0, or a full-dimensional kernel) still reads as
  // rank-deficient.
  std::vector<double> row_ceiling(static_cast<size_t>(m), 0.0);
  for (int i = 0; i < m; ++i) {
    double sup_phi = 0.0;
    for (double v : samples.phi[static_cast<size_t>(i)])
      sup_phi = std::max(sup_phi, std::abs(v));
    row_ceiling[static_cast<size_t>(i)] =
        std::max(sup_phi * sub.length(), 1e-300);
  }
  auto nullity_at = [&](double lambda) {
    std::vector<Trajectory> cols;
    Matrix cond = detail::condition_matrix(samples, problem.bc, lambda, &cols);
    const int size = m + 1;
    for (int j = 0; j < size; ++j) {
      const double sup = cols[static_cast<size_t>(j)].sup_norm();
      const double scale = sup > 0.0 ? sup : 1.0;
      for (int i = 0; i < size; ++i) cond(i, j) /= scale;
    }
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < size; ++j) cond(i, j) /= row_ceiling[static_cast<size_t>(i)];
    const SvdResult s = svd(cond);
    const double anchor = std::max(s.sigma.empty() ? 0.0 : s.sigma.front(), 1.0);
    int nullity = 0;
    for (double sv : s.sigma)
      if (sv <= 1e-8 * anchor) ++nullity;
    return nullity;
  };

  report.grid.resize(grid_points + 1);
  report.determinant.resize(grid_points + 1);
  for (int i = 0; i <= grid_points; ++i) {
    // exact 0 at the last node; uniform in between
    report.grid[i] = l_inf * (static_cast<double>(grid_points - i) / grid_points);
    report.determinant[i] = det_at(report.grid[i]);
  }

  report.kernel_dimension_at_zero = nullity_at(0.0);

  const auto roots = detail::locate_roots(report.grid, report.determinant, det_at,
                                          nullity_at);
  for (const auto& root : roots) {
    if (std::abs(root.location) <= 1e-8 * std::abs(l_inf)) continue;  // kernel at zero
    ConstrainedSolutionBasis basis = constrained_basis(problem, root.location, sub, steps);
    const LagrangianPlane plane = trace_plane(basis);
    const int dim = intersection_dimension(plane, problem.bc, 1e-8);
    if (dim == 0) {
      std::ostringstream os;
      os << "crossing confirmation failed at lambda = " << root.location;
      throw Error(os.str());
    }
    if (root.nullity >= 1 && dim != root.nullity) {
      std::ostringstream os;
      os << "crossing dimension mismatch at lambda = " << root.location << " ("
         << dim << " by traces, " << root.nullity
         << " by the condition kernel); increase grid_points";
      throw Error(os.str());
    }
    const auto kernel = kernel_coefficients(basis, problem.bc, dim);
    const FormSignature sig = lambda_form_signature(basis, kernel);
    if (sig.n_plus > 0) {
      std::ostringstream os;
      os << "non-negative crossing form at lambda = " << root.location;
      throw Error(os.str());
    }
    CrossingRecord rec;
    rec.location = root.location;
    rec.dimension = dim;
    rec.n_plus = sig.n_plus;
    rec.n_minus = sig.n_minus;
    rec.kind = CrossingKind::LambdaSweep;
    rec.form_value = sig.trace;
    // a degenerate (even-order) root resolved through the sign-change path
    // yields two refined locations inside one numerical kernel width; both
    // measure the same crossing, so keep a single record
    if (!report.crossings.empty() &&
        std::abs(rec.location - report.crossings.back().location) <=
            1e-8 * std::abs(l_inf)) {
      if (rec.dimension > report.crossings.back().dimension)
        report.crossings.back() = rec;
      continue;
    }
    report.crossings.push_back(rec);
  }

  int total = 0;
  for (const auto& c : report.crossings) total += c.dimension;
  report.morse_index = total;
  report.maslov_index = -total;
  return report;
}

}  // namespace morseflow
