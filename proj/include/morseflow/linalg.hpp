#pragma once

// Small dense linear algebra used across the toolkit: row-major matrices,
// Householder QR, one-sided Jacobi SVD (no normal equations, so tiny singular
// values near the 1e-8 decision thresholds stay resolvable), LU determinants.
//
// The two spectral-counting engines deliberately do NOT live here: the
// signed-pivot LDLT inertia count sits in discrete.cpp and the cyclic Jacobi
// eigensolver in oracle.cpp, so the pair stays an independent cross-check.

#include <vector>

namespace morseflow {

struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;  // row-major, rows*cols entries

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}

  double& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

  static Matrix identity(int n);
};

Matrix transpose(const Matrix& m);
Matrix matmul(const Matrix& x, const Matrix& y);
std::vector<double> matvec(const Matrix& m, const std::vector<double>& v);

// Frobenius norm and max-abs entry.
double frobenius_norm(const Matrix& m);
double max_abs(const Matrix& m);

// Determinant of a small square matrix by partially pivoted LU.
double determinant(Matrix m);

// Thin SVD A = U diag(sigma) V^T with sigma sorted descending.
// U is rows x min(rows,cols), V is cols x min(rows,cols).
// Implemented as Householder QR reduction to a square factor followed by
// one-sided Jacobi, so sigma_min/sigma_max is trustworthy down to ~1e-14.
struct SvdResult {
  std::vector<double> sigma;
  Matrix u;
  Matrix v;
};
SvdResult svd(const Matrix& m);

int svd_rank(const SvdResult& s, double rel_tol);

// Orthonormal basis of the null space of A (columns); empty matrix (cols == 0)
// when A has full column rank at the given relative tolerance.
Matrix null_space(const Matrix& m, double rel_tol);

// Orthonormal basis of the orthogonal complement of span(columns of q) in R^n,
// where q has orthonormal columns; built by Householder QR extension.
Matrix orthonormal_complement(const Matrix& q);

// Modified Gram-Schmidt with re-orthogonalization; drops columns whose
// residual falls below rel_tol times the original norm. Returns the kept,
// orthonormalized columns.
Matrix orthonormalize_columns(const Matrix& m, double rel_tol);

}  // namespace morseflow
