#pragma once

// Standing-wave stability for the focusing power NLS: closed-form soliton
// profiles, the c-function whose finite-t root detects the conjugate point of
// the linearized operator on the line, and the Vakhitov-Kolokolov slope
// d/domega int phi^2 whose sign decides existence of that root.

#include "morseflow/core_model.hpp"

namespace morseflow {

// f(s) = (p+1) s^p, valid for p in [0.5, 4].
struct PowerLawNonlinearity {
  double p = 1.0;
};

// g(u) = u^{-1} int_0^u f(s^{1/2}... ) collapses to u^p for the power law.
double g_of(const PowerLawNonlinearity& f, double u);

// phi(x) = |omega|^{1/(2p)} sech^{1/p}(p sqrt(|omega|) x), omega < 0, with
// analytic x- and omega-derivatives (all validated symbolically; the
// identities L+ phi_x = 0 and L+ phi_omega = phi hold exactly).
struct SolitonProfile {
  double p = 1.0;
  double omega = -1.0;
  double k = 1.0;  // sqrt(-omega)

  double phi(double x) const;
  double phi_x(double x) const;
  double phi_xx(double x) const;
  double phi_xxx(double x) const;
  double phi_omega(double x) const;
  double phi_omega_x(double x) const;
  double phi_omega_xx(double x) const;

  // L+ v = -v'' - f(phi^2) v - 2 f'(phi^2) phi^2 v - omega v.
  double l_plus(double v, double vxx, double x) const;

  // Truncation radius X: at least 20/k, enlarged until phi(X)^2 < 1e-14 phi(0)^2.
  double truncation() const;
};

// Validates p in [0.5, 4] and omega < 0.
SolitonProfile soliton(const PowerLawNonlinearity& f, double omega);

// c(t) = -phi^2(t) phi_omega(t) / phi_x(t) + d/domega int_{-inf}^t phi^2.
// Monotone increasing off the singularity at t = 0; the window |t| <= delta
// is excluded (Error("singularity window ...")).
double c_function(const SolitonProfile& s, double t, double delta = 1e-3);

// d/domega int phi^2, by quadrature of int 2 phi phi_omega. Positive iff p > 2.
double vk_slope(const SolitonProfile& s);

struct PropertyReport {
  bool tail_zero = false;       // |c(-T)| < 1e-6 at phi(T)^2 < 1e-14
  bool diverges_left = false;   // c -> +inf as t -> 0^-
  bool diverges_right = false;  // c -> -inf as t -> 0^+
  bool limit_is_slope = false;  // |c(T) - vk_slope| < 1e-6
  bool monotone = false;        // c' = phi^4 / (2 phi_x^2) vs FD, 1e-4 rel
  bool wronskian = false;       // phi_omega phi_xx - phi_omega_x phi_x = phi^2/2, 1e-8
  double c_at_minus_T = 0.0;
  double c_near_zero_left = 0.0;
  double c_near_zero_right = 0.0;
  double c_at_T = 0.0;
  double slope = 0.0;
  double max_monotone_rel_err = 0.0;
  double max_wronskian_err = 0.0;

  bool all() const {
    return tail_zero && diverges_left && diverges_right && limit_is_slope &&
           monotone && wronskian;
  }
};

// The divergence checks are evaluated at delta_div = min(delta, 1/(4000 p^2 k^2))
// so the expected magnitude ~1/(2 p^2 k^2 delta_div) clears the 1e3 threshold.
PropertyReport property_suite(const SolitonProfile& s, double delta = 1e-3);

enum class StabilityVerdict { ConjugatePointExists, NoConjugatePoint, Critical };

std::string to_string(StabilityVerdict v);

struct VerdictReport {
  StabilityVerdict verdict = StabilityVerdict::Critical;
  double slope = 0.0;
  int root_count = 0;  // roots of c on (delta, T]
};

// ConjugatePointExists iff slope > tol; root count of c on (delta, T] must
// match (1 when positive, 0 when negative) or Error("internal inconsistency").
VerdictReport stability_verdict(const SolitonProfile& s, double tol = 1e-6);

}  // namespace morseflow
