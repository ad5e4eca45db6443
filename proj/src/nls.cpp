#include "morseflow/nls.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace morseflow {

namespace {

// sech via the decaying exponential only; never overflows
double sech(double y) {
  const double e = std::exp(-std::abs(y));
  return 2.0 * e / (1.0 + e * e);
}

void validate_power(double p) {
  if (!(p >= 0.5 && p <= 4.0))
    throw Error("nonlinearity power must lie in [0.5, 4]");
}

}  // namespace

double g_of(const PowerLawNonlinearity& f, double u) {
  validate_power(f.p);
  if (!(u >= 0.0)) throw Error("g_of: argument must be nonnegative");
  return std::pow(u, f.p);
}

double SolitonProfile::phi(double x) const {
  return std::pow(k * k, 0.5 / p) * std::pow(sech(p * k * x), 1.0 / p);
}

double SolitonProfile::phi_x(double x) const {
  return -k * phi(x) * std::tanh(p * k * x);
}

double SolitonProfile::phi_xx(double x) const {
  const double s = sech(p * k * x);
  return k * k * phi(x) * (1.0 - (p + 1.0) * s * s);
}

double SolitonProfile::phi_xxx(double x) const {
  const double s = sech(p * k * x);
  const double t = std::tanh(p * k * x);
  return k * k * (phi_x(x) * (1.0 - (p + 1.0) * s * s) +
                  2.0 * p * k * (p + 1.0) * phi(x) * s * s * t);
}

namespace {

// phi_omega = phi * w with w = x tanh(pkx) / (2k) - 1 / (2 p k^2); derivatives
// of w feed the omega-derivative chain below.
double omega_weight(const SolitonProfile& s, double x) {
  return x * std::tanh(s.p * s.k * x) / (2.0 * s.k) - 1.0 / (2.0 * s.p * s.k * s.k);
}

double omega_weight_x(const SolitonProfile& s, double x) {
  const double c = sech(s.p * s.k * x);
  return (std::tanh(s.p * s.k * x) + s.p * s.k * x * c * c) / (2.0 * s.k);
}

double omega_weight_xx(const SolitonProfile& s, double x) {
  const double c = sech(s.p * s.k * x);
  const double t = std::tanh(s.p * s.k * x);
  return s.p * c * c * (1.0 - s.p * s.k * x * t);
}

}  // namespace

double SolitonProfile::phi_omega(double x) const { return phi(x) * omega_weight(*this, x); }

double SolitonProfile::phi_omega_x(double x) const {
  return phi_x(x) * omega_weight(*this, x) + phi(x) * omega_weight_x(*this, x);
}

double SolitonProfile::phi_omega_xx(double x) const {
  return phi_xx(x) * omega_weight(*this, x) + 2.0 * phi_x(x) * omega_weight_x(*this, x) +
         phi(x) * omega_weight_xx(*this, x);
}

double SolitonProfile::l_plus(double v, double vxx, double x) const {
  // f(phi^2) = (p+1) (phi^2)^p = (p+1) k^2 sech^2, and
  // f'(phi^2) phi^2 = p (p+1) k^2 sech^2 -- exact, no pow() noise
  const double s = sech(p * k * x);
  const double well = (p + 1.0) * k * k * s * s;
  return -vxx - well * v - 2.0 * p * well * v - omega * v;
}

double SolitonProfile::truncation() const {
  const double peak2 = phi(0.0) * phi(0.0);
  double x = 20.0 / k;
  while (phi(x) * phi(x) >= 1e-14 * peak2) x *= 1.25;
  return x;
}

SolitonProfile soliton(const PowerLawNonlinearity& f, double omega) {
  validate_power(f.p);
  if (!(omega < 0.0)) throw Error("soliton: omega must be negative");
  SolitonProfile s;
  s.p = f.p;
  s.omega = omega;
  s.k = std::sqrt(-omega);
  return s;
}

namespace {

// Cumulative d/domega int_{-X}^{t} phi^2 on a fixed panel grid, with local
// Simpson refinement between the last panel node and t. Building the prefix
// once makes dense c(t) sampling linear instead of quadratic.
class TailIntegral {
 public:
  TailIntegral(const SolitonProfile& s, double x_left, double x_right)
      : s_(s), x0_(x_left) {
    const double span = x_right - x_left;
    const double target = 1e-3 / std::max(1.0, s.p * s.k / 3.0);
    panels_ = std::max(64, static_cast<int>(std::ceil(span / (2.0 * target))));
    h_ = span / (2.0 * panels_);
    prefix_.resize(panels_ + 1);
    prefix_[0] = 0.0;
    double f0 = integrand(x_left);
    for (int p = 0; p < panels_; ++p) {
      const double xm = x_left + (2 * p + 1) * h_;
      const double x1 = x_left + (2 * p + 2) * h_;
      const double fm = integrand(xm);
      const double f1 = integrand(x1);
      prefix_[p + 1] = prefix_[p] + h_ / 3.0 * (f0 + 4.0 * fm + f1);
      f0 = f1;
    }
  }

  double eval(double t) const {
    if (t <= x0_) return 0.0;
    int p = static_cast<int>((t - x0_) / (2.0 * h_));
    p = std::min(p, panels_);
    const double base = x0_ + 2.0 * p * h_;
    double total = prefix_[p];
    const double rem = t - base;
    if (rem > 0.0) {
      // local Simpson with 16 panels over the remainder
      const double hh = rem / 32.0;
      double sum = integrand(base) + integrand(t);
      for (int i = 1; i < 32; ++i)
        sum += integrand(base + i * hh) * ((i % 2 == 1) ? 4.0 : 2.0);
      total += sum * hh / 3.0;
    }
    return total;
  }

  double full() const { return prefix_.back(); }

 private:
  double integrand(double x) const { return 2.0 * s_.phi(x) * s_.phi_omega(x); }

  const SolitonProfile& s_;
  double x0_;
  int panels_ = 0;
  double h_ = 0.0;
  std::vector<double> prefix_;
};

double c_from_tail(const SolitonProfile& s, const TailIntegral& tail, double t) {
  const double px = s.phi_x(t);
  if (px == 0.0) throw Error("c_function: phi_x vanishes (t = 0)");
  return -s.phi(t) * s.phi(t) * s.phi_omega(t) / px + tail.eval(t);
}

}  // namespace

double c_function(const SolitonProfile& s, double t, double delta) {
  if (!(delta > 0.0)) throw Error("c_function: delta must be positive");
  if (std::abs(t) <= delta) {
    std::ostringstream os;
    os << "singularity window (|t| <= " << delta << ")";
    throw Error(os.str());
  }
  const double x_max = 1.25 * s.truncation();
  const TailIntegral tail(s, -x_max, std::max(x_max, t + 1.0));
  return c_from_tail(s, tail, t);
}

double vk_slope(const SolitonProfile& s) {
  const double x_max = 1.25 * s.truncation();
  return TailIntegral(s, -x_max, x_max).full();
}

PropertyReport property_suite(const SolitonProfile& s, double delta) {
  if (!(delta > 0.0)) throw Error("property_suite: delta must be positive");
  PropertyReport rep;
  const double t_big = s.truncation();
  const double x_max = 1.25 * t_big;
  const TailIntegral tail(s, -x_max, x_max);

  rep.slope = tail.full();
  rep.c_at_minus_T = c_from_tail(s, tail, -t_big);
  rep.c_at_T = c_from_tail(s, tail, t_big);
  rep.tail_zero = std::abs(rep.c_at_minus_T) < 1e-6;
  rep.limit_is_slope = std::abs(rep.c_at_T - rep.slope) < 1e-6;

  // near the singularity c ~ -1/(2 p^2 k^2 t): pick the probe point so the
  // expected magnitude comfortably clears the 1e3 divergence threshold
  const double delta_div =
      std::min(delta, 1.0 / (4000.0 * s.p * s.p * s.k * s.k));
  rep.c_near_zero_left = c_from_tail(s, tail, -delta_div);
  rep.c_near_zero_right = c_from_tail(s, tail, delta_div);
  rep.diverges_left = rep.c_near_zero_left > 1e3;
  rep.diverges_right = rep.c_near_zero_right < -1e3;

  // monotonicity: c' = phi^4 / (2 phi_x^2) against central differences at 20
  // log-spaced probes on both sides
  rep.monotone = true;
  for (int side = -1; side <= 1; side += 2) {
    for (int j = 0; j < 10; ++j) {
      const double lo = 2.0 * delta_div;
      const double hi = 0.25 * t_big;
      const double t = side * lo * std::pow(hi / lo, j / 9.0);
      // step small enough that the O(eps^2 (2k)^2) truncation term stays
      // below the 1e-4 acceptance at the outermost probe t = t_big / 4
      const double eps = 5e-4 * std::abs(t);
      const double fd = (c_from_tail(s, tail, t + eps) - c_from_tail(s, tail, t - eps)) /
                        (2.0 * eps);
      const double px = s.phi_x(t);
      const double exact = std::pow(s.phi(t), 4) / (2.0 * px * px);
      const double rel = std::abs(fd - exact) / std::max(std::abs(exact), 1e-300);
      rep.max_monotone_rel_err = std::max(rep.max_monotone_rel_err, rel);
      if (!(rel < 1e-4) || !(exact > 0.0)) rep.monotone = false;
    }
  }

  // Wronskian identity phi_omega phi_xx - phi_omega_x phi_x = phi^2 / 2
  for (int i = 0; i <= 4000; ++i) {
    const double x = -t_big + 2.0 * t_big * i / 4000.0;
    const double w = s.phi_omega(x) * s.phi_xx(x) - s.phi_omega_x(x) * s.phi_x(x);
    const double err = std::abs(w - 0.5 * s.phi(x) * s.phi(x));
    rep.max_wronskian_err = std::max(rep.max_wronskian_err, err);
  }
  rep.wronskian = rep.max_wronskian_err < 1e-8;
  return rep;
}

std::string to_string(StabilityVerdict v) {
  switch (v) {
    case StabilityVerdict::ConjugatePointExists:
      return "conjugate point exists";
    case StabilityVerdict::NoConjugatePoint:
      return "no conjugate point";
    default:
      return "critical";
  }
}

VerdictReport stability_verdict(const SolitonProfile& s, double tol) {
  VerdictReport rep;
  rep.slope = vk_slope(s);
  const double t_big = s.truncation();
  const double x_max = 1.25 * t_big;
  const TailIntegral tail(s, -x_max, x_max);

  // roots of c on (delta, T]: c rises from -inf, so count sign changes of a
  // monotone sampled curve
  const double delta = std::min(1e-3, 1.0 / (4000.0 * s.p * s.p * s.k * s.k));
  const int samples = 512;
  double prev = c_from_tail(s, tail, delta * (1.0 + 1e-12));
  rep.root_count = 0;
  for (int i = 1; i <= samples; ++i) {
    // geometric spacing resolves the steep region near the singularity
    const double t = delta * std::pow(t_big / delta, static_cast<double>(i) / samples);
    const double c = c_from_tail(s, tail, t);
    if ((prev < 0.0) && (c >= 0.0)) ++rep.root_count;
    if ((prev > 0.0) && (c <= 0.0)) ++rep.root_count;
    prev = c;
  }

  if (rep.slope > tol) {
    rep.verdict = StabilityVerdict::ConjugatePointExists;
    if (rep.root_count != 1)
      throw Error("internal inconsistency: positive slope but c-root count != 1");
  } else if (rep.slope < -tol) {
    rep.verdict = StabilityVerdict::NoConjugatePoint;
    if (rep.root_count != 0)
      throw Error("internal inconsistency: negative slope but c-root count != 0");
  } else {
    rep.verdict = StabilityVerdict::Critical;
  }
  return rep;
}

}  // namespace morseflow
