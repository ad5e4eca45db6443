#include "morseflow/oracle.hpp"

#include "morseflow/core_model.hpp"

#include <algorithm>
#include <cmath>

namespace morseflow {

namespace {

// Roots of tan(g) = g coincide with roots of sin(g) - g*cos(g), which is
// smooth across the tangent poles and therefore safe to bisect.
double tan_gap(double g) { return std::sin(g) - g * std::cos(g); }

}  // namespace

double tan_equals_gamma_root(int k) {
  if (k < 1) throw Error("tan_equals_gamma_root: branch index must be >= 1");
  const double pi = std::acos(-1.0);
  double lo = k * pi + 1e-9;
  double hi = (k + 0.5) * pi - 1e-9;
  double flo = tan_gap(lo);
  double fhi = tan_gap(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0) throw Error("tan_equals_gamma_root: bracket lost a sign change");
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double fm = tan_gap(mid);
    if (fm == 0.0) return mid;
    if (flo * fm < 0.0) {
      hi = mid;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

int count_roots(const RootCountQuery& query) {
  if (!std::isfinite(query.c)) throw Error("count_roots: non-finite well depth");
  if (query.c <= 0.0) return 0;
  const double g = std::sqrt(query.c);
  const double pi = std::acos(-1.0);
  const double guard = 1e-9;
  int count = 0;
  if (query.mode == RootCountMode::UnconstrainedDirichlet) {
    // eigenvalues of the unconstrained well cross zero at sqrt(C) = k*pi/2
    for (int k = 1;; ++k) {
      const double threshold = k * pi / 2.0;
      if (std::abs(g - threshold) < guard)
        throw Error("count_roots: sqrt(C) within guard band of k*pi/2; perturb C");
      if (threshold > g) break;
      ++count;
    }
    return count;
  }
  // Constrained (mean-zero) well: branches at sqrt(C) = k*pi plus the
  // transcendental branches tan(g) = g.
  for (int k = 1;; ++k) {
    const double threshold = k * pi;
    if (std::abs(g - threshold) < guard)
      throw Error("count_roots: sqrt(C) within guard band of k*pi; perturb C");
    if (threshold > g) break;
    ++count;
  }
  for (int k = 1;; ++k) {
    const double root = tan_equals_gamma_root(k);
    if (std::abs(g - root) < guard)
      throw Error("count_roots: sqrt(C) within guard band of a tan(g)=g root; perturb C");
    if (root > g) break;
    ++count;
  }
  return count;
}

std::vector<double> symmetric_eigenvalues(const Matrix& a) {
  if (a.rows != a.cols) throw Error("symmetric_eigenvalues: matrix not square");
  const int n = a.rows;
  if (n == 0) return {};
  if (n > 400) throw Error("symmetric_eigenvalues: dimension capped at 400");
  const double fro = frobenius_norm(a);
  // reject visibly asymmetric input rather than silently averaging it away
  double asym = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) asym = std::max(asym, std::abs(a(i, j) - a(j, i)));
  if (fro > 0.0 && asym > 1e-10 * fro)
    throw Error("symmetric_eigenvalues: input asymmetry exceeds 1e-10 relative");

  Matrix m = a;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double avg = 0.5 * (m(i, j) + m(j, i));
      m(i, j) = m(j, i) = avg;
    }
  if (fro == 0.0) return std::vector<double>(n, 0.0);

  const double stop = 1e-12 * fro;
  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += 2.0 * m(i, j) * m(i, j);
    if (std::sqrt(off) < stop) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = m(p, q);
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (m(q, q) - m(p, p)) / (2.0 * apq);
        const double t = ((theta >= 0.0) ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double app = m(p, p), aqq = m(q, q);
        m(p, p) = app - t * apq;
        m(q, q) = aqq + t * apq;
        m(p, q) = m(q, p) = 0.0;
        for (int k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = m(k, p), akq = m(k, q);
          m(k, p) = m(p, k) = c * akp - s * akq;
          m(k, q) = m(q, k) = s * akp + c * akq;
        }
      }
    }
  }
  std::vector<double> eig(n);
  for (int i = 0; i < n; ++i) eig[i] = m(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

int dense_negative_count(const Matrix& a) {
  int count = 0;
  for (double e : symmetric_eigenvalues(a))
    if (e < 0.0) ++count;
  return count;
}

double quadrature(const std::vector<double>& samples, double h) {
  const size_t n = samples.size();
  if (n < 3 || n % 2 == 0)
    throw Error("quadrature: needs an odd sample count of at least 3");
  if (!(h > 0.0)) throw Error("quadrature: step must be positive");
  double s = samples.front() + samples.back();
  for (size_t i = 1; i + 1 < n; ++i) s += samples[i] * ((i % 2 == 1) ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace morseflow
