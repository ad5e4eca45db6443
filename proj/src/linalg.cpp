#include "morseflow/linalg.hpp"

#include "morseflow/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace morseflow {

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix transpose(const Matrix& m) {
  Matrix t(m.cols, m.rows);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
  return t;
}

Matrix matmul(const Matrix& x, const Matrix& y) {
  if (x.cols != y.rows) throw Error("matmul: inner dimensions disagree");
  Matrix r(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i) {
    for (int k = 0; k < x.cols; ++k) {
      const double xik = x(i, k);
      if (xik == 0.0) continue;
      const double* yrow = &y.a[static_cast<size_t>(k) * y.cols];
      double* rrow = &r.a[static_cast<size_t>(i) * r.cols];
      for (int j = 0; j < y.cols; ++j) rrow[j] += xik * yrow[j];
    }
  }
  return r;
}

std::vector<double> matvec(const Matrix& m, const std::vector<double>& v) {
  if (m.cols != static_cast<int>(v.size())) throw Error("matvec: dimensions disagree");
  std::vector<double> r(m.rows, 0.0);
  for (int i = 0; i < m.rows; ++i) {
    double s = 0.0;
    for (int j = 0; j < m.cols; ++j) s += m(i, j) * v[j];
    r[i] = s;
  }
  return r;
}

double frobenius_norm(const Matrix& m) {
  double s = 0.0;
  for (double v : m.a) s += v * v;
  return std::sqrt(s);
}

double max_abs(const Matrix& m) {
  double s = 0.0;
  for (double v : m.a) s = std::max(s, std::abs(v));
  return s;
}

double determinant(Matrix m) {
  if (m.rows != m.cols) throw Error("determinant: matrix not square");
  const int n = m.rows;
  double det = 1.0;
  for (int k = 0; k < n; ++k) {
    int p = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(m(i, k)) > std::abs(m(p, k))) p = i;
    if (m(p, k) == 0.0) return 0.0;
    if (p != k) {
      for (int j = 0; j < n; ++j) std::swap(m(p, j), m(k, j));
      det = -det;
    }
    det *= m(k, k);
    for (int i = k + 1; i < n; ++i) {
      const double f = m(i, k) / m(k, k);
      for (int j = k; j < n; ++j) m(i, j) -= f * m(k, j);
    }
  }
  return det;
}

namespace {

// Householder QR of a (rows >= cols). The tail of each reflector vector is
// stored below the diagonal of a, its head in a side array, and a's upper
// triangle becomes R.
struct HouseholderQr {
  Matrix a;
  std::vector<double> beta;  // reflector scales, 0 when the column was already zero
  std::vector<double> head;  // first component of each reflector
};

HouseholderQr householder_qr(Matrix a) {
  const int rows = a.rows, cols = a.cols;
  HouseholderQr qr{std::move(a), std::vector<double>(cols, 0.0),
                   std::vector<double>(cols, 0.0)};
  Matrix& m = qr.a;
  for (int k = 0; k < cols; ++k) {
    double norm = 0.0;
    for (int i = k; i < rows; ++i) norm += m(i, k) * m(i, k);
    norm = std::sqrt(norm);
    if (norm == 0.0) continue;
    const double alpha = (m(k, k) >= 0.0) ? -norm : norm;
    const double v0 = m(k, k) - alpha;
    m(k, k) = alpha;
    double vnorm2 = v0 * v0;
    for (int i = k + 1; i < rows; ++i) vnorm2 += m(i, k) * m(i, k);
    if (vnorm2 == 0.0) continue;
    qr.beta[k] = 2.0 / vnorm2;
    qr.head[k] = v0;
    for (int j = k + 1; j < cols; ++j) {
      double s = v0 * m(k, j);
      for (int i = k + 1; i < rows; ++i) s += m(i, k) * m(i, j);
      s *= qr.beta[k];
      m(k, j) -= s * v0;
      for (int i = k + 1; i < rows; ++i) m(i, j) -= s * m(i, k);
    }
  }
  return qr;
}

// Apply the k-th reflector (from householder_qr) to a length-rows vector.
void apply_reflector(const HouseholderQr& qr, int k, std::vector<double>& x) {
  const Matrix& m = qr.a;
  const int rows = m.rows;
  const double beta = qr.beta[k];
  if (beta == 0.0) return;
  const double v0 = qr.head[k];
  double s = v0 * x[k];
  for (int i = k + 1; i < rows; ++i) s += m(i, k) * x[i];
  s *= beta;
  x[k] -= s * v0;
  for (int i = k + 1; i < rows; ++i) x[i] -= s * m(i, k);
}

// Q (thin) from the factorization: columns 0..cols-1 of P_0 ... P_{cols-1} I.
Matrix thin_q(const HouseholderQr& qr) {
  const int rows = qr.a.rows, cols = qr.a.cols;
  Matrix q(rows, cols);
  for (int j = 0; j < cols; ++j) {
    std::vector<double> e(rows, 0.0);
    e[j] = 1.0;
    for (int k = cols - 1; k >= 0; --k) apply_reflector(qr, k, e);
    for (int i = 0; i < rows; ++i) q(i, j) = e[i];
  }
  return q;
}

// One-sided Jacobi SVD of a square matrix: s is overwritten by U * Sigma,
// v accumulates the right rotations. Returns singular values unsorted.
std::vector<double> one_sided_jacobi(Matrix& s, Matrix& v) {
  const int n = s.rows;
  v = Matrix::identity(n);
  const double tol = 1e-15;
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool converged = true;
    for (int i = 0; i < n - 1; ++i) {
      for (int j = i + 1; j < n; ++j) {
        double aii = 0.0, ajj = 0.0, aij = 0.0;
        for (int k = 0; k < n; ++k) {
          aii += s(k, i) * s(k, i);
          ajj += s(k, j) * s(k, j);
          aij += s(k, i) * s(k, j);
        }
        if (std::abs(aij) <= tol * std::sqrt(aii * ajj) || aij == 0.0) continue;
        converged = false;
        const double zeta = (ajj - aii) / (2.0 * aij);
        const double t = ((zeta >= 0.0) ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = c * t;
        for (int k = 0; k < n; ++k) {
          const double si = s(k, i), sj = s(k, j);
          s(k, i) = c * si - sn * sj;
          s(k, j) = sn * si + c * sj;
          const double vi = v(k, i), vj = v(k, j);
          v(k, i) = c * vi - sn * vj;
          v(k, j) = sn * vi + c * vj;
        }
      }
    }
    if (converged) break;
  }
  std::vector<double> sigma(n, 0.0);
  for (int j = 0; j < n; ++j) {
    double norm = 0.0;
    for (int k = 0; k < n; ++k) norm += s(k, j) * s(k, j);
    sigma[j] = std::sqrt(norm);
  }
  return sigma;
}

SvdResult svd_tall(const Matrix& m) {
  // rows >= cols: QR then Jacobi on the small square factor
  const int cols = m.cols;
  HouseholderQr qr = householder_qr(m);
  Matrix r(cols, cols);
  for (int i = 0; i < cols; ++i)
    for (int j = i; j < cols; ++j) r(i, j) = qr.a(i, j);
  Matrix v;
  std::vector<double> sigma = one_sided_jacobi(r, v);  // r becomes Ur * Sigma
  // normalize columns of r into Ur
  Matrix ur(cols, cols);
  for (int j = 0; j < cols; ++j) {
    if (sigma[j] > 0.0) {
      for (int i = 0; i < cols; ++i) ur(i, j) = r(i, j) / sigma[j];
    }
  }
  // sort descending
  std::vector<int> order(cols);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) { return sigma[x] > sigma[y]; });
  SvdResult out;
  out.sigma.resize(cols);
  Matrix urs(cols, cols), vs(cols, cols);
  for (int j = 0; j < cols; ++j) {
    out.sigma[j] = sigma[order[j]];
    for (int i = 0; i < cols; ++i) {
      urs(i, j) = ur(i, order[j]);
      vs(i, j) = v(i, order[j]);
    }
  }
  Matrix q = thin_q(qr);
  out.u = matmul(q, urs);
  out.v = vs;
  return out;
}

}  // namespace

SvdResult svd(const Matrix& m) {
  if (m.rows == 0 || m.cols == 0) {
    SvdResult empty;
    empty.u = Matrix(m.rows, 0);
    empty.v = Matrix(m.cols, 0);
    return empty;
  }
  if (m.rows >= m.cols) return svd_tall(m);
  SvdResult t = svd_tall(transpose(m));
  SvdResult out;
  out.sigma = std::move(t.sigma);
  out.u = std::move(t.v);
  out.v = std::move(t.u);
  return out;
}

int svd_rank(const SvdResult& s, double rel_tol) {
  if (s.sigma.empty()) return 0;
  const double smax = s.sigma.front();
  if (smax <= 0.0) return 0;
  int r = 0;
  for (double v : s.sigma)
    if (v > rel_tol * smax) ++r;
  return r;
}

Matrix null_space(const Matrix& m, double rel_tol) {
  const int n = m.cols;
  SvdResult s = svd(m);
  const int rank = svd_rank(s, rel_tol);
  const int small = static_cast<int>(s.sigma.size()) - rank;  // near-zero sigmas
  // V columns with tiny sigma, plus (for wide matrices) the complement of
  // the entire V range, together span the null space.
  Matrix vsmall(n, small);
  for (int j = 0; j < small; ++j)
    for (int i = 0; i < n; ++i) vsmall(i, j) = s.v(i, rank + j);
  if (s.v.cols == n) return vsmall;  // square/tall input: V is complete
  Matrix extra = orthonormal_complement(s.v);
  Matrix out(n, small + extra.cols);
  for (int j = 0; j < small; ++j)
    for (int i = 0; i < n; ++i) out(i, j) = vsmall(i, j);
  for (int j = 0; j < extra.cols; ++j)
    for (int i = 0; i < n; ++i) out(i, small + j) = extra(i, j);
  return out;
}

Matrix orthonormal_complement(const Matrix& q) {
  const int n = q.rows, k = q.cols;
  if (k == 0) return Matrix::identity(n);
  if (k >= n) return Matrix(n, 0);
  HouseholderQr qr = householder_qr(q);
  Matrix out(n, n - k);
  for (int j = 0; j < n - k; ++j) {
    std::vector<double> e(n, 0.0);
    e[k + j] = 1.0;
    for (int r = k - 1; r >= 0; --r) apply_reflector(qr, r, e);
    for (int i = 0; i < n; ++i) out(i, j) = e[i];
  }
  return out;
}

Matrix orthonormalize_columns(const Matrix& m, double rel_tol) {
  const int n = m.rows;
  std::vector<std::vector<double>> kept;
  for (int j = 0; j < m.cols; ++j) {
    std::vector<double> c(n);
    for (int i = 0; i < n; ++i) c[i] = m(i, j);
    double orig = std::sqrt(std::inner_product(c.begin(), c.end(), c.begin(), 0.0));
    if (orig == 0.0) continue;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : kept) {
        double d = std::inner_product(c.begin(), c.end(), q.begin(), 0.0);
        for (int i = 0; i < n; ++i) c[i] -= d * q[i];
      }
    }
    double norm = std::sqrt(std::inner_product(c.begin(), c.end(), c.begin(), 0.0));
    if (norm < rel_tol * orig) continue;  // dependent: drop
    for (double& v : c) v /= norm;
    kept.push_back(std::move(c));
  }
  Matrix out(n, static_cast<int>(kept.size()));
  for (int j = 0; j < out.cols; ++j)
    for (int i = 0; i < n; ++i) out(i, j) = kept[j][i];
  return out;
}

}  // namespace morseflow
