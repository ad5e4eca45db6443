#include "morseflow/nls.hpp"

#include "morseflow/oracle.hpp"

#include "doctest.h"

#include <cmath>
#include <vector>

using namespace morseflow;

TEST_CASE("soliton: parameter validation") {
  CHECK_THROWS_AS(soliton({0.4}, -1.0), Error);
  CHECK_THROWS_AS(soliton({4.5}, -1.0), Error);
  CHECK_THROWS_AS(soliton({1.0}, 0.0), Error);
  CHECK_THROWS_AS(soliton({1.0}, 0.5), Error);
  CHECK_THROWS_WITH(soliton({1.0}, 1.0), doctest::Contains("omega"));
  CHECK_NOTHROW(soliton({0.5}, -1.0));
  CHECK_NOTHROW(soliton({4.0}, -0.25));
}

TEST_CASE("soliton: cubic profile is sech and solves the profile equation") {
  auto s = soliton({1.0}, -1.0);
  CHECK(s.k == doctest::Approx(1.0));
  for (double x : {-3.0, -1.0, -0.25, 0.0, 0.7, 2.5}) {
    CHECK(s.phi(x) == doctest::Approx(1.0 / std::cosh(x)).epsilon(1e-12));
    CHECK(s.phi_x(x) ==
          doctest::Approx(-std::sinh(x) / std::pow(std::cosh(x), 2)).epsilon(1e-12));
  }

  // -phi'' - (p+1) phi^{2p+1} - omega phi = 0 across powers and frequencies
  for (double p : {0.5, 1.0, 2.0, 3.0, 4.0}) {
    for (double omega : {-0.5, -1.0, -2.0}) {
      auto sp = soliton({p}, omega);
      for (int i = -8; i <= 8; ++i) {
        const double x = 0.4 * i;
        const double f = (p + 1.0) * std::pow(sp.phi(x) * sp.phi(x), p);
        const double residual = -sp.phi_xx(x) - f * sp.phi(x) - omega * sp.phi(x);
        CHECK(std::abs(residual) < 1e-10 * std::max(1.0, std::abs(sp.phi(x))));
      }
    }
  }
}

TEST_CASE("soliton: first integral phi_x^2 + (omega + phi^2p) phi^2 = 0") {
  for (double p : {0.5, 1.5, 3.0}) {
    auto s = soliton({p}, -1.7);
    for (int i = -10; i <= 10; ++i) {
      const double x = 0.35 * i;
      const double ph = s.phi(x);
      const double e = s.phi_x(x) * s.phi_x(x) +
                       (s.omega + std::pow(ph * ph, p)) * ph * ph;
      CHECK(std::abs(e) < 1e-12 * std::max(1.0, ph * ph));
    }
  }
}

TEST_CASE("soliton: x-derivatives agree with central differences") {
  auto s = soliton({2.5}, -1.3);
  const double h = 1e-5;
  for (double x : {-1.7, -0.4, 0.0, 0.9, 2.2}) {
    const double fd1 = (s.phi(x + h) - s.phi(x - h)) / (2.0 * h);
    const double fd2 = (s.phi(x + h) - 2.0 * s.phi(x) + s.phi(x - h)) / (h * h);
    const double fd3 = (s.phi_xx(x + h) - s.phi_xx(x - h)) / (2.0 * h);
    CHECK(s.phi_x(x) == doctest::Approx(fd1).epsilon(1e-8));
    CHECK(s.phi_xx(x) == doctest::Approx(fd2).epsilon(1e-5));
    CHECK(s.phi_xxx(x) == doctest::Approx(fd3).epsilon(1e-7));
    const double fo1 = (s.phi_omega(x + h) - s.phi_omega(x - h)) / (2.0 * h);
    const double fo2 =
        (s.phi_omega(x + h) - 2.0 * s.phi_omega(x) + s.phi_omega(x - h)) / (h * h);
    CHECK(s.phi_omega_x(x) == doctest::Approx(fo1).epsilon(1e-8));
    CHECK(s.phi_omega_xx(x) == doctest::Approx(fo2).epsilon(1e-5));
  }
}

TEST_CASE("soliton: phi_omega matches a frequency difference quotient") {
  const double omega = -1.4, d = 1e-6;
  for (double p : {0.5, 1.0, 2.0, 3.5}) {
    auto lo = soliton({p}, omega - d);
    auto hi = soliton({p}, omega + d);
    auto s = soliton({p}, omega);
    for (double x : {-2.0, -0.6, 0.0, 0.3, 1.8}) {
      const double fd = (hi.phi(x) - lo.phi(x)) / (2.0 * d);
      CHECK(s.phi_omega(x) == doctest::Approx(fd).epsilon(1e-6));
      const double fdx = (hi.phi_x(x) - lo.phi_x(x)) / (2.0 * d);
      CHECK(s.phi_omega_x(x) == doctest::Approx(fdx).epsilon(1e-6));
    }
  }
}

TEST_CASE("soliton: kernel identities of the linearized operator") {
  // L+ phi_x = 0 and L+ phi_omega = phi, pointwise on a wide grid
  for (double p : {0.5, 1.0, 2.0, 3.0, 4.0}) {
    for (double omega : {-0.5, -1.0, -2.0}) {
      auto s = soliton({p}, omega);
      const double scale = s.phi(0.0);
      for (int i = -40; i <= 40; ++i) {
        const double x = 0.15 * i / s.k;
        const double kx = s.l_plus(s.phi_x(x), s.phi_xxx(x), x);
        CHECK(std::abs(kx) < 1e-10 * std::max(1.0, scale * scale * scale));
        const double ko = s.l_plus(s.phi_omega(x), s.phi_omega_xx(x), x);
        CHECK(std::abs(ko - s.phi(x)) < 1e-10 * std::max(1.0, scale));
      }
    }
  }
}

TEST_CASE("g_of: power law and the defining identity") {
  PowerLawNonlinearity f{2.0};
  CHECK(g_of(f, 0.0) == doctest::Approx(0.0));
  CHECK(g_of(f, 0.7) == doctest::Approx(0.49).epsilon(1e-12));
  // u g'(u) + g(u) = f(u) = (p+1) u^p, with g' by central difference
  const double u = 0.7, h = 1e-6;
  const double gp = (g_of(f, u + h) - g_of(f, u - h)) / (2.0 * h);
  CHECK(std::abs(u * gp + g_of(f, u) - 3.0 * std::pow(u, 2.0)) < 1e-8);
  CHECK_THROWS_AS(g_of(f, -0.1), Error);
  CHECK_THROWS_AS(g_of({5.0}, 0.5), Error);
}

TEST_CASE("truncation: tail is genuinely negligible") {
  for (double p : {0.5, 2.0, 4.0}) {
    auto s = soliton({p}, -0.5);
    const double X = s.truncation();
    CHECK(X >= 20.0 / s.k);
    CHECK(s.phi(X) * s.phi(X) < 1e-14 * s.phi(0.0) * s.phi(0.0));
  }
}

TEST_CASE("vk_slope: closed forms across the critical power") {
  // N(omega) = |omega|^{1/p - 1/2} I_p / p with I_p = int sech^{2/p};
  // p = 1: I_1 = 2, so dN/domega at omega = -1 is exactly -1
  auto sub = soliton({1.0}, -1.0);
  CHECK(vk_slope(sub) == doctest::Approx(-1.0).epsilon(1e-6));

  // p = 2 is the critical power: N is independent of omega
  CHECK(std::abs(vk_slope(soliton({2.0}, -1.0))) < 1e-6);
  CHECK(std::abs(vk_slope(soliton({2.0}, -0.5))) < 1e-6);

  // p = 3, omega = -1: slope = I_3 / 18 with I_3 = int sech^{2/3} by Simpson
  const int n = 32001;
  const double half = 60.0;
  std::vector<double> samples(n);
  for (int i = 0; i < n; ++i) {
    const double y = -half + 2.0 * half * i / (n - 1);
    const double e = std::exp(-std::abs(y));
    samples[i] = std::pow(2.0 * e / (1.0 + e * e), 2.0 / 3.0);
  }
  const double i3 = quadrature(samples, 2.0 * half / (n - 1));
  auto sup = soliton({3.0}, -1.0);
  CHECK(vk_slope(sup) == doctest::Approx(i3 / 18.0).epsilon(1e-6));
  CHECK(vk_slope(sup) > 0.0);

  // the sign flips across p = 2
  CHECK(vk_slope(soliton({1.5}, -1.0)) < 0.0);
  CHECK(vk_slope(soliton({2.5}, -1.0)) > 0.0);
}

TEST_CASE("c_function: singularity window and far-field behavior") {
  auto s = soliton({1.0}, -1.0);
  CHECK_THROWS_WITH(c_function(s, 0.0), doctest::Contains("singularity window"));
  CHECK_THROWS_WITH(c_function(s, 5e-4), doctest::Contains("singularity window"));
  CHECK_THROWS_AS(c_function(s, 0.5, -1.0), Error);
  CHECK_NOTHROW(c_function(s, 2e-2, 1e-2));

  const double T = s.truncation();
  CHECK(std::abs(c_function(s, -T)) < 1e-6);
  CHECK(c_function(s, T) == doctest::Approx(vk_slope(s)).epsilon(1e-6));

  // monotone increase away from the pole at t = 0
  CHECK(c_function(s, -0.5) < c_function(s, -0.2));
  CHECK(c_function(s, 0.2) < c_function(s, 0.8));

  // near the pole: large positive from the left, large negative from the right
  CHECK(c_function(s, -2e-4, 1e-4) > 1e3);
  CHECK(c_function(s, 2e-4, 1e-4) < -1e3);
}

TEST_CASE("property_suite: all five c-function properties hold") {
  for (auto [p, omega] : {std::pair{1.0, -1.0}, {3.0, -1.0}, {0.5, -2.0}}) {
    auto s = soliton({p}, omega);
    auto rep = property_suite(s);
    CAPTURE(p);
    CAPTURE(omega);
    CHECK(rep.tail_zero);
    CHECK(rep.diverges_left);
    CHECK(rep.diverges_right);
    CHECK(rep.limit_is_slope);
    CHECK(rep.monotone);
    CHECK(rep.wronskian);
    CHECK(rep.all());
    CHECK(rep.max_wronskian_err < 1e-8);
    CHECK(rep.max_monotone_rel_err < 1e-4);
    CHECK(rep.c_near_zero_left > 1e3);
    CHECK(rep.c_near_zero_right < -1e3);
    CHECK(rep.slope == doctest::Approx(vk_slope(s)).epsilon(1e-10));
  }
  CHECK_THROWS_AS(property_suite(soliton({1.0}, -1.0), 0.0), Error);
}

TEST_CASE("stability_verdict: subcritical, supercritical, critical") {
  auto sub = stability_verdict(soliton({1.0}, -1.0));
  CHECK(sub.verdict == StabilityVerdict::NoConjugatePoint);
  CHECK(sub.root_count == 0);
  CHECK(sub.slope == doctest::Approx(-1.0).epsilon(1e-6));

  auto sup = stability_verdict(soliton({3.0}, -1.0));
  CHECK(sup.verdict == StabilityVerdict::ConjugatePointExists);
  CHECK(sup.root_count == 1);
  CHECK(sup.slope > 0.0);

  auto crit = stability_verdict(soliton({2.0}, -1.0));
  CHECK(crit.verdict == StabilityVerdict::Critical);

  CHECK(to_string(StabilityVerdict::ConjugatePointExists) == "conjugate point exists");
  CHECK(to_string(StabilityVerdict::NoConjugatePoint) == "no conjugate point");
  CHECK(to_string(StabilityVerdict::Critical) == "critical");
}
