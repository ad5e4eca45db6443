#include "morseflow/linalg.hpp"

#include "benchmarks.hpp"
#include "doctest.h"

#include <cmath>

using namespace morseflow;

namespace {

Matrix random_matrix(testbench::Rng& rng, int rows, int cols, double scale = 1.0) {
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = scale * rng.range(-1.0, 1.0);
  return m;
}

double max_diff(const Matrix& a, const Matrix& b) {
  REQUIRE(a.rows == b.rows);
  REQUIRE(a.cols == b.cols);
  double d = 0.0;
  for (size_t i = 0; i < a.a.size(); ++i) d = std::max(d, std::abs(a.a[i] - b.a[i]));
  return d;
}

double orthonormality_defect(const Matrix& q) {
  Matrix g = matmul(transpose(q), q);
  double d = 0.0;
  for (int i = 0; i < g.rows; ++i)
    for (int j = 0; j < g.cols; ++j) d = std::max(d, std::abs(g(i, j) - (i == j ? 1.0 : 0.0)));
  return d;
}

Matrix reconstruct(const SvdResult& s) {
  Matrix us = s.u;
  for (int i = 0; i < us.rows; ++i)
    for (int j = 0; j < us.cols; ++j) us(i, j) *= s.sigma[static_cast<size_t>(j)];
  return matmul(us, transpose(s.v));
}

}  // namespace

TEST_CASE("matrix basics: identity, transpose, matmul, matvec") {
  Matrix id = Matrix::identity(3);
  CHECK(id(0, 0) == 1.0);
  CHECK(id(0, 1) == 0.0);

  Matrix a(2, 3);
  a(0, 0) = 1; a(0, 1) = 2; a(0, 2) = 3;
  a(1, 0) = 4; a(1, 1) = 5; a(1, 2) = 6;
  Matrix at = transpose(a);
  CHECK(at.rows == 3);
  CHECK(at.cols == 2);
  CHECK(at(2, 1) == 6.0);

  Matrix prod = matmul(a, at);  // 2x2: [[14,32],[32,77]]
  CHECK(prod(0, 0) == doctest::Approx(14.0));
  CHECK(prod(0, 1) == doctest::Approx(32.0));
  CHECK(prod(1, 1) == doctest::Approx(77.0));

  std::vector<double> v = {1.0, 0.0, -1.0};
  auto av = matvec(a, v);
  CHECK(av[0] == doctest::Approx(-2.0));
  CHECK(av[1] == doctest::Approx(-2.0));

  CHECK(frobenius_norm(id) == doctest::Approx(std::sqrt(3.0)));
  CHECK(max_abs(a) == doctest::Approx(6.0));
}

TEST_CASE("determinant: closed-form values and permutation pivoting") {
  Matrix a(3, 3);
  a(0, 0) = 2; a(0, 1) = 0; a(0, 2) = 1;
  a(1, 0) = 1; a(1, 1) = 3; a(1, 2) = 2;
  a(2, 0) = 1; a(2, 1) = 1; a(2, 2) = 1;
  // det = 2(3-2) - 0 + 1(1-3) = 0
  CHECK(std::abs(determinant(a)) <= 1e-12);

  a(2, 2) = 4.0;  // det = 2(12-2) + 1(1-3) = 18
  CHECK(determinant(a) == doctest::Approx(18.0));

  // Zero leading pivot forces a row swap.
  Matrix b(2, 2);
  b(0, 0) = 0; b(0, 1) = 1; b(1, 0) = 1; b(1, 1) = 0;
  CHECK(determinant(b) == doctest::Approx(-1.0));
}

TEST_CASE("svd reconstructs tall, wide, and square matrices") {
  testbench::Rng rng(11);
  for (auto [r, c] : {std::pair{7, 3}, std::pair{3, 7}, std::pair{5, 5}}) {
    Matrix a = random_matrix(rng, r, c);
    SvdResult s = svd(a);
    const int k = std::min(r, c);
    REQUIRE(static_cast<int>(s.sigma.size()) == k);
    CHECK(s.u.rows == r);
    CHECK(s.u.cols == k);
    CHECK(s.v.rows == c);
    CHECK(s.v.cols == k);
    for (int i = 0; i + 1 < k; ++i) CHECK(s.sigma[i] >= s.sigma[i + 1]);
    CHECK(s.sigma.back() >= 0.0);
    CHECK(orthonormality_defect(s.u) < 1e-12);
    CHECK(orthonormality_defect(s.v) < 1e-12);
    CHECK(max_diff(reconstruct(s), a) < 1e-12);
  }
}

TEST_CASE("svd resolves tiny singular values without normal-equation squaring") {
  // diag(1, 1e-7, 1e-13) rotated by a Householder-ish mix: the smallest
  // singular value must come back accurate in a relative sense, which a
  // normal-equations method (squaring to 1e-26) cannot do in doubles.
  Matrix d(3, 3);
  d(0, 0) = 1.0;
  d(1, 1) = 1e-7;
  d(2, 2) = 1e-13;
  testbench::Rng rng(5);
  SvdResult mix = svd(random_matrix(rng, 3, 3));  // orthogonal factors
  Matrix a = matmul(mix.u, matmul(d, transpose(mix.v)));
  SvdResult s = svd(a);
  CHECK(s.sigma[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(s.sigma[1] == doctest::Approx(1e-7).epsilon(1e-6));
  CHECK(s.sigma[2] == doctest::Approx(1e-13).epsilon(1e-2));
}

TEST_CASE("svd_rank and null_space: rank-deficient tall matrix") {
  Matrix a(4, 3);
  // col2 = col0 + col1 exactly
  testbench::Rng rng(23);
  for (int i = 0; i < 4; ++i) {
    a(i, 0) = rng.range(-1.0, 1.0);
    a(i, 1) = rng.range(-1.0, 1.0);
    a(i, 2) = a(i, 0) + a(i, 1);
  }
  SvdResult s = svd(a);
  CHECK(svd_rank(s, 1e-10) == 2);

  Matrix n = null_space(a, 1e-10);
  REQUIRE(n.rows == 3);
  REQUIRE(n.cols == 1);
  CHECK(orthonormality_defect(n) < 1e-12);
  Matrix an = matmul(a, n);
  CHECK(max_abs(an) < 1e-12);
  // The null direction of [c0, c1, c0+c1] is (1, 1, -1)/sqrt(3).
  CHECK(std::abs(n(0, 0)) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-10));
  CHECK(n(0, 0) == doctest::Approx(n(1, 0)).epsilon(1e-10));
  CHECK(n(2, 0) == doctest::Approx(-n(0, 0)).epsilon(1e-10));
}

TEST_CASE("null_space of a wide matrix has full complementary dimension") {
  testbench::Rng rng(31);
  Matrix a = random_matrix(rng, 2, 5);  // generic rank 2 -> null dim 3
  Matrix n = null_space(a, 1e-10);
  REQUIRE(n.rows == 5);
  REQUIRE(n.cols == 3);
  CHECK(orthonormality_defect(n) < 1e-10);
  CHECK(max_abs(matmul(a, n)) < 1e-12);

  Matrix full_rank = random_matrix(rng, 4, 3);
  Matrix empty = null_space(full_rank, 1e-10);
  CHECK(empty.cols == 0);
}

TEST_CASE("orthonormal_complement completes a frame to an orthogonal square") {
  testbench::Rng rng(47);
  Matrix a = random_matrix(rng, 6, 2);
  Matrix q = orthonormalize_columns(a, 1e-12);
  REQUIRE(q.cols == 2);
  Matrix comp = orthonormal_complement(q);
  REQUIRE(comp.rows == 6);
  REQUIRE(comp.cols == 4);
  CHECK(orthonormality_defect(comp) < 1e-12);
  // q^T comp = 0
  CHECK(max_abs(matmul(transpose(q), comp)) < 1e-12);
}

TEST_CASE("orthonormalize_columns drops dependent columns") {
  Matrix a(4, 3);
  testbench::Rng rng(59);
  for (int i = 0; i < 4; ++i) {
    a(i, 0) = rng.range(-1.0, 1.0);
    a(i, 1) = 2.0 * a(i, 0);  // dependent
    a(i, 2) = rng.range(-1.0, 1.0);
  }
  Matrix q = orthonormalize_columns(a, 1e-10);
  CHECK(q.cols == 2);
  CHECK(orthonormality_defect(q) < 1e-12);
}
