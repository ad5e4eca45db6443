#include "morseflow/discrete.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace morseflow {

DiscreteForm assemble(const SchroedingerProblem& problem, int n_interior) {
  if (n_interior < 8) throw Error("assemble: need at least 8 interior nodes");
  DiscreteForm form;
  form.interval = problem.interval;
  form.bc = problem.bc;
  const Interval iv = problem.interval;

  if (problem.bc == BoundaryCondition::Dirichlet) {
    const int n = n_interior;
    const double h = iv.length() / (n + 1);
    form.grid.resize(n);
    form.scale.assign(n, std::sqrt(h));
    form.matrix = Matrix(n, n);
    for (int i = 0; i < n; ++i) {
      const double x = iv.left + (i + 1) * h;
      form.grid[i] = x;
      form.matrix(i, i) = 2.0 / (h * h) + problem.potential(x);
      if (i + 1 < n) {
        form.matrix(i, i + 1) = -1.0 / (h * h);
        form.matrix(i + 1, i) = -1.0 / (h * h);
      }
    }
    return form;
  }

  // Neumann: boundary nodes included. Ghost reflection u_{-1} = u_1 gives the
  // boundary row (2 u_0 - 2 u_1) / h^2 + V u_0, which is non-symmetric against
  // the uniform inner product but self-adjoint against trapezoid weights
  // w = (1/2, 1, .., 1, 1/2). The similarity W^{1/2} A W^{-1/2} restores a
  // symmetric matrix with the same spectrum; its coordinates carry the scale
  // sqrt(h w_i) recorded per node.
  const int n = n_interior + 2;
  const double h = iv.length() / (n - 1);
  form.grid.resize(n);
  form.scale.resize(n);
  form.matrix = Matrix(n, n);
  for (int i = 0; i < n; ++i) {
    const double x = iv.left + i * h;
    form.grid[i] = x;
    const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    form.scale[i] = std::sqrt(h * w);
    form.matrix(i, i) = 2.0 / (h * h) + problem.potential(x);
  }
  const double off = -1.0 / (h * h);
  const double off_boundary = -std::sqrt(2.0) / (h * h);
  for (int i = 0; i + 1 < n; ++i) {
    const bool at_boundary = (i == 0) || (i + 1 == n - 1);
    const double v = at_boundary ? off_boundary : off;
    form.matrix(i, i + 1) = v;
    form.matrix(i + 1, i) = v;
  }
  return form;
}

DiscreteForm constrain(const DiscreteForm& form,
                       const std::vector<ConstraintFunction>& constraints) {
  const int m = static_cast<int>(constraints.size());
  if (m == 0) return form;
  if (form.scale.empty())
    throw Error("constrain: form was already compressed");
  const int n = form.matrix.rows;
  if (m >= n) throw Error("constrain: more constraints than grid nodes");

  // constraint vectors in the Euclidean coordinates of the form
  Matrix c(n, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < n; ++i) c(i, j) = form.scale[i] * constraints[j](form.grid[i]);
  Matrix q = orthonormalize_columns(c, 1e-10);
  if (q.cols < m)
    throw Error("constrain: constraints become dependent on this grid; refine it");
  Matrix basis = orthonormal_complement(q);  // n x (n - m)

  DiscreteForm out;
  out.interval = form.interval;
  out.bc = form.bc;
  out.matrix = matmul(transpose(basis), matmul(form.matrix, basis));
  // enforce exact symmetry lost to roundoff
  for (int i = 0; i < out.matrix.rows; ++i)
    for (int j = i + 1; j < out.matrix.cols; ++j) {
      const double avg = 0.5 * (out.matrix(i, j) + out.matrix(j, i));
      out.matrix(i, j) = out.matrix(j, i) = avg;
    }
  // grid/scale intentionally empty: compressed coordinates are not nodal
  return out;
}

namespace {

void symmetric_swap(Matrix& a, int i, int j) {
  if (i == j) return;
  const int n = a.rows;
  for (int k = 0; k < n; ++k) std::swap(a(i, k), a(j, k));
  for (int k = 0; k < n; ++k) std::swap(a(k, i), a(k, j));
}

// Bunch-Parlett LDLT with full diagonal pivoting. Returns the number of
// negative pivots (2x2 pivots always contribute one of each sign here because
// full pivoting only selects them when the off-diagonal dominates, forcing a
// negative determinant). Throws when the trailing block is numerically
// singular -- the caller retries with a perturbed shift.
int signed_pivot_count(Matrix a, double scale) {
  const int n = a.rows;
  const double alpha = (1.0 + std::sqrt(17.0)) / 8.0;
  const double tiny = 1e-12 * std::max(scale, 1e-300);
  int negatives = 0;
  int k = 0;
  while (k < n) {
    // largest diagonal and off-diagonal magnitudes of the trailing block
    int p = k;
    double dmax = 0.0;
    for (int i = k; i < n; ++i) {
      const double d = std::abs(a(i, i));
      if (d > dmax) {
        dmax = d;
        p = i;
      }
    }
    int r = k, s = k + 1;
    double omax = 0.0;
    for (int i = k; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const double d = std::abs(a(i, j));
        if (d > omax) {
          omax = d;
          r = i;
          s = j;
        }
      }
    if (std::max(dmax, omax) < tiny) throw Error("pivot breakdown");

    if (dmax >= alpha * omax) {
      symmetric_swap(a, k, p);
      const double piv = a(k, k);
      if (std::abs(piv) < tiny) throw Error("pivot breakdown");
      if (piv < 0.0) ++negatives;
      for (int i = k + 1; i < n; ++i) {
        const double f = a(i, k) / piv;
        if (f == 0.0) continue;
        for (int j = i; j < n; ++j) a(i, j) -= f * a(k, j);
      }
      // mirror the updated lower triangle
      for (int i = k + 1; i < n; ++i)
        for (int j = i + 1; j < n; ++j) a(j, i) = a(i, j);
      ++k;
    } else {
      // bring the dominant off-diagonal pair to the leading 2x2 block
      // (r < s and r >= k, so the first swap cannot displace s)
      symmetric_swap(a, k, r);
      symmetric_swap(a, k + 1, s);
      const double e11 = a(k, k), e12 = a(k, k + 1), e22 = a(k + 1, k + 1);
      const double det = e11 * e22 - e12 * e12;
      if (std::abs(det) < tiny * tiny) throw Error("pivot breakdown");
      // |e12| > alpha^{-1} max|diag| makes det < 0: signature (+1, -1)
      ++negatives;
      for (int i = k + 2; i < n; ++i) {
        const double b1 = a(i, k), b2 = a(i, k + 1);
        const double x = (e22 * b1 - e12 * b2) / det;
        const double y = (-e12 * b1 + e11 * b2) / det;
        if (x == 0.0 && y == 0.0) continue;
        for (int j = i; j < n; ++j) a(i, j) -= x * a(k, j) + y * a(k + 1, j);
      }
      for (int i = k + 2; i < n; ++i)
        for (int j = i + 1; j < n; ++j) a(j, i) = a(i, j);
      k += 2;
    }
  }
  return negatives;
}

}  // namespace

int inertia_below(const DiscreteForm& form, double shift, double* perturbed) {
  const int n = form.matrix.rows;
  if (n == 0) return 0;
  Matrix a = form.matrix;
  for (int i = 0; i < n; ++i) a(i, i) -= shift;
  const double scale = std::max(max_abs(a), std::abs(shift));
  if (perturbed) *perturbed = shift;
  try {
    return signed_pivot_count(a, scale);
  } catch (const Error&) {
    // shift sits (numerically) on an eigenvalue; nudge it down so the
    // eigenvalue stays outside the strict "below shift" count
    const double nudged = shift - 1e-10 * std::max(scale, 1.0);
    Matrix b = form.matrix;
    for (int i = 0; i < n; ++i) b(i, i) -= nudged;
    if (perturbed) *perturbed = nudged;
    try {
      return signed_pivot_count(b, scale);
    } catch (const Error&) {
      std::ostringstream os;
      os << "shift at eigenvalue (breakdown persists after perturbing " << shift
         << " to " << nudged << ")";
      throw Error(os.str());
    }
  }
}

int discrete_morse_index(const SchroedingerProblem& problem, int n_interior) {
  DiscreteForm form = assemble(problem, n_interior);
  if (problem.constraint_count() > 0) form = constrain(form, problem.constraints);
  return inertia_below(form, 0.0);
}

}  // namespace morseflow
