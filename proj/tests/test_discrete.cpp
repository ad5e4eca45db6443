#include "morseflow/discrete.hpp"

#include "morseflow/oracle.hpp"

#include "benchmarks.hpp"
#include "doctest.h"

#include <cmath>

using namespace morseflow;

namespace {
const double kPi = std::acos(-1.0);
}

TEST_CASE("assemble Dirichlet: classic second-difference spectrum") {
  // -u'' on (0, pi) with n interior nodes, h = pi/(n+1):
  // discrete eigenvalues (2 - 2cos(k h))/h^2, k = 1..n.
  const int n = 24;
  auto p = SchroedingerProblem(Interval{0.0, kPi}, Potential(),
                               BoundaryCondition::Dirichlet, {});
  auto form = assemble(p, n);
  REQUIRE(form.matrix.rows == n);
  REQUIRE(static_cast<int>(form.grid.size()) == n);
  REQUIRE(static_cast<int>(form.scale.size()) == n);

  const double h = kPi / (n + 1);
  CHECK(form.grid.front() == doctest::Approx(h));
  CHECK(form.grid.back() == doctest::Approx(kPi - h));
  CHECK(form.matrix(0, 0) == doctest::Approx(2.0 / (h * h)));
  CHECK(form.matrix(0, 1) == doctest::Approx(-1.0 / (h * h)));
  CHECK(form.matrix(0, 2) == 0.0);

  auto eig = symmetric_eigenvalues(form.matrix);
  for (int k = 1; k <= n; ++k) {
    const double expected = (2.0 - 2.0 * std::cos(k * h)) / (h * h);
    CHECK(eig[static_cast<size_t>(k - 1)] == doctest::Approx(expected).epsilon(1e-10));
  }

  // inertia_below counts discrete eigenvalues below a shift, exactly.
  const double shift = 6.5;
  int expected_below = 0;
  for (int k = 1; k <= n; ++k)
    if ((2.0 - 2.0 * std::cos(k * h)) / (h * h) < shift) ++expected_below;
  CHECK(inertia_below(form, shift) == expected_below);
}

TEST_CASE("assemble adds the potential on the diagonal") {
  auto p = SchroedingerProblem(Interval{0.0, 1.0}, Potential::constant(-7.0),
                               BoundaryCondition::Dirichlet, {});
  auto form = assemble(p, 16);
  const double h = 1.0 / 17.0;
  CHECK(form.matrix(3, 3) == doctest::Approx(2.0 / (h * h) - 7.0));
  CHECK_THROWS_AS(assemble(p, 4), Error);  // below the minimum resolution
}

TEST_CASE("assemble Neumann: symmetric form with boundary nodes") {
  // V = -1 on (0, pi): continuum Neumann eigenvalues k^2 - 1, k >= 0,
  // exactly one negative (k = 0).
  auto p = SchroedingerProblem(Interval{0.0, kPi}, Potential::constant(-1.0),
                               BoundaryCondition::Neumann, {});
  auto form = assemble(p, 64);
  REQUIRE(form.matrix.rows == 66);  // boundary nodes included

  // The similarity-transformed form must be symmetric to machine precision.
  double asym = 0.0;
  for (int i = 0; i < form.matrix.rows; ++i)
    for (int j = 0; j < i; ++j)
      asym = std::max(asym, std::abs(form.matrix(i, j) - form.matrix(j, i)));
  CHECK(asym == 0.0);

  // Eigenvalues -1, 0, 3, 8, ...: shifts chosen between them (the exact-zero
  // eigenvalue itself is discretization-sensitive and not a fair target).
  CHECK(inertia_below(form, -0.5) == 1);
  CHECK(inertia_below(form, 0.5) == 2);
  CHECK(inertia_below(form, 5.0) == 3);
}

TEST_CASE("discrete_morse_index matches the transcendental oracle") {
  // Dirichlet benchmark: constrained and unconstrained counts for C = 25.
  CHECK(discrete_morse_index(testbench::square_well(25.0), 400) == 2);
  CHECK(discrete_morse_index(testbench::square_well(25.0, false), 400) == 3);
  CHECK(discrete_morse_index(testbench::square_well(25.0, false), 200) == 3);

  // Neumann well: Dirichlet count + 1 (the extra gamma = 0 branch).
  CHECK(discrete_morse_index(
            testbench::square_well(25.0, false, BoundaryCondition::Neumann), 400) == 4);
  // Zero-mean Neumann well: the constraint removes the constant direction;
  // the count drops back to the Dirichlet unconstrained value.
  CHECK(discrete_morse_index(
            testbench::square_well(25.0, true, BoundaryCondition::Neumann), 400) == 3);
}

TEST_CASE("constrain: compression removes constraint directions exactly") {
  auto p = testbench::square_well(25.0);
  auto form = assemble(p, 60);
  auto reduced = constrain(form, p.constraints);
  CHECK(reduced.matrix.rows == 59);
  CHECK(reduced.grid.empty());  // compressed coordinates have no node map
  CHECK_THROWS_WITH_AS(constrain(reduced, p.constraints),
                       doctest::Contains("already compressed"), Error);

  // Compressed form stays symmetric.
  double asym = 0.0;
  for (int i = 0; i < reduced.matrix.rows; ++i)
    for (int j = 0; j < i; ++j)
      asym = std::max(asym, std::abs(reduced.matrix(i, j) - reduced.matrix(j, i)));
  CHECK(asym == 0.0);

  // Rayleigh bound: compression cannot lower eigenvalue counts below the
  // unconstrained count minus m, nor raise them above it.
  const int unc = inertia_below(form, 0.0);
  const int con = inertia_below(reduced, 0.0);
  CHECK(con <= unc);
  CHECK(con >= unc - 1);
}

TEST_CASE("inertia_below agrees with the dense eigenvalue oracle") {
  // The LDLT signed-pivot count and the cyclic Jacobi eigensolver are
  // independent implementations; they must agree exactly.
  testbench::Rng rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 8 + static_cast<int>(rng.uniform() * 25);
    DiscreteForm form;
    form.matrix = Matrix(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j)
        form.matrix(i, j) = form.matrix(j, i) = rng.range(-2.0, 2.0);
    const double shift = rng.range(-3.0, 3.0);

    Matrix shifted = form.matrix;
    for (int i = 0; i < n; ++i) shifted(i, i) -= shift;
    const int oracle_count = dense_negative_count(shifted);
    CHECK(inertia_below(form, shift) == oracle_count);
  }
}

TEST_CASE("inertia_below: indefinite matrix needing 2x2 pivots") {
  // All-zero diagonal: every 1x1 pivot candidate is tiny, forcing the 2x2
  // branch. Eigenvalues of the 4x4 antidiagonal-pair matrix are +-1, +-1.
  DiscreteForm form;
  form.matrix = Matrix(4, 4);
  form.matrix(0, 1) = form.matrix(1, 0) = 1.0;
  form.matrix(2, 3) = form.matrix(3, 2) = 1.0;
  CHECK(inertia_below(form, 0.0) == 2);
  CHECK(inertia_below(form, -1.5) == 0);
  CHECK(inertia_below(form, 1.5) == 4);
}

TEST_CASE("inertia_below: shift on an eigenvalue perturbs and reports") {
  DiscreteForm form;
  form.matrix = Matrix(3, 3);
  form.matrix(0, 0) = 1.0;
  form.matrix(1, 1) = 2.0;
  form.matrix(2, 2) = 3.0;
  double used = 0.0;
  const int count = inertia_below(form, 2.0, &used);
  // The nudge moves the shift below the eigenvalue it collided with.
  CHECK(count == 1);
  CHECK(used != 2.0);
  CHECK(used == doctest::Approx(2.0).epsilon(1e-8));
}
