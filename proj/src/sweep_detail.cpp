#include "sweep_detail.hpp"

#include "morseflow/core_model.hpp"

#include <algorithm>
#include <cmath>

namespace morseflow::detail {

namespace {

double bisect_root(double a, double b, double fa, double fb,
                   const std::function<double(double)>& f) {
  while (true) {
    const double mid = 0.5 * (a + b);
    if (mid == a || mid == b) return mid;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fa < 0.0) != (fm < 0.0)) {
      b = mid;
      fb = fm;
    } else {
      a = mid;
      fa = fm;
    }
  }
  (void)fb;
}

// Pin the interior extremum of f on [a, b] by bisecting the central
// difference of f. Returns false when the derivative does not change sign.
bool bisect_extremum(double a, double b, const std::function<double(double)>& f,
                     double span, double* out) {
  const double hd = 1e-7 * span;
  auto g = [&](double x) { return f(x + hd) - f(x - hd); };
  double ga = g(a), gb = g(b);
  if (ga == 0.0) {
    *out = a;
    return true;
  }
  if (gb == 0.0) {
    *out = b;
    return true;
  }
  if ((ga < 0.0) == (gb < 0.0)) return false;
  while (true) {
    const double mid = 0.5 * (a + b);
    if (mid == a || mid == b || b - a <= 4.0 * hd) {
      *out = mid;
      return true;
    }
    const double gm = g(mid);
    if (gm == 0.0) {
      *out = mid;
      return true;
    }
    if ((ga < 0.0) != (gm < 0.0)) {
      b = mid;
    } else {
      a = mid;
      ga = gm;
    }
  }
}

}  // namespace

std::vector<LocatedRoot> locate_roots(const std::vector<double>& grid,
                                      const std::vector<double>& values,
                                      const std::function<double(double)>& f,
                                      const std::function<int(double)>& nullity_fn) {
  const int n = static_cast<int>(grid.size());
  if (n < 3 || values.size() != grid.size())
    throw Error("locate_roots: malformed sweep grid");
  double scale = 0.0;
  for (double v : values) scale = std::max(scale, std::abs(v));
  if (scale == 0.0)
    throw Error("determinant vanishes identically on the sweep grid");
  const double span = grid.back() - grid.front();

  std::vector<LocatedRoot> roots;

  // exact zeros at nodes (measure zero, but cheap to honor)
  for (int i = 0; i < n; ++i)
    if (values[i] == 0.0) roots.push_back({grid[i], std::max(nullity_fn(grid[i]), 0)});

  // transversal roots
  for (int i = 0; i + 1 < n; ++i) {
    if (values[i] == 0.0 || values[i + 1] == 0.0) continue;
    if ((values[i] < 0.0) != (values[i + 1] < 0.0))
      roots.push_back(
          {bisect_root(grid[i], grid[i + 1], values[i], values[i + 1], f), 0});
  }

  // even-order candidates: same-sign |f| minima that the quadratic fit or an
  // absolute floor flags as plausibly touching zero
  for (int i = 1; i + 1 < n; ++i) {
    const double vm = values[i - 1], v0 = values[i], vp = values[i + 1];
    if (vm == 0.0 || v0 == 0.0 || vp == 0.0) continue;
    if ((vm < 0.0) != (v0 < 0.0) || (v0 < 0.0) != (vp < 0.0)) continue;
    if (std::abs(v0) > std::abs(vm) || std::abs(v0) > std::abs(vp)) continue;
    const double h = 0.5 * (grid[i + 1] - grid[i - 1]);
    const double curt = (vp - 2.0 * v0 + vm) / (2.0 * h * h);
    const double slope = (vp - vm) / (2.0 * h);
    bool suspicious = std::abs(v0) <= 1e-7 * scale;
    if (!suspicious && curt != 0.0) {
      const double xext = -slope / (2.0 * curt);
      if (std::abs(xext) <= h) {
        // For a double root the fitted vertex value vanishes up to the cubic
        // term of f, which leaves a residue of order h relative to the
        // neighbors; a benign minimum keeps a finite fraction of them. The
        // 5% threshold splits those regimes with a wide margin either way,
        // and a false positive only costs one nullity evaluation.
        const double vext = v0 + slope * xext + curt * xext * xext;
        suspicious = std::abs(vext) <= 5e-2 * std::max(std::abs(vm), std::abs(vp));
      }
    }
    if (!suspicious) continue;

    double xm = 0.0;
    if (!bisect_extremum(grid[i - 1], grid[i + 1], f, span, &xm)) continue;
    // The bisection stalls at O(1e-7 * span); near a tangency f is locally
    // quadratic, so polishing with the vertex of an exact three-point fit
    // gains several more digits. Two passes with a shrinking stencil; the
    // shift is clamped to the stencil so a flat or noisy fit cannot eject
    // the point from the bracket.
    for (const double d : {1e-4 * std::abs(span), 1e-6 * std::abs(span)}) {
      const double fl = f(xm - d), fc = f(xm), fr = f(xm + d);
      const double denom = fl - 2.0 * fc + fr;
      if (denom != 0.0) {
        const double shift = 0.5 * d * (fl - fr) / denom;
        if (std::abs(shift) <= d) xm += shift;
      }
    }
    const double fm = f(xm);
    if (fm != 0.0 && (fm < 0.0) != (v0 < 0.0)) {
      // the dip actually crosses: two merged transversal roots
      const double fa = f(grid[i - 1]), fb = f(grid[i + 1]);
      roots.push_back({bisect_root(grid[i - 1], xm, fa, fm, f), 0});
      roots.push_back({bisect_root(xm, grid[i + 1], fm, fb, f), 0});
      continue;
    }
    const int k = nullity_fn(xm);
    if (k >= 1) roots.push_back({xm, k});
    // k == 0: benign dip, discard
  }

  // endpoint tangencies (zeros reaching the grid boundary without a node
  // sign change); adjacent-cell bisections are deduplicated below
  for (int j : {0, n - 1}) {
    if (values[j] != 0.0 && std::abs(values[j]) <= 1e-7 * scale) {
      const int k = nullity_fn(grid[j]);
      if (k >= 1) roots.push_back({grid[j], k});
    }
  }

  std::sort(roots.begin(), roots.end(),
            [](const LocatedRoot& a, const LocatedRoot& b) {
              return a.location < b.location;
            });
  // merge duplicates within a machine-resolution window, preferring the
  // entry that carries kernel information
  std::vector<LocatedRoot> merged;
  const double window = std::max(1e-12 * std::abs(span), 1e-300);
  for (const LocatedRoot& r : roots) {
    if (!merged.empty() && std::abs(r.location - merged.back().location) <= window) {
      merged.back().nullity = std::max(merged.back().nullity, r.nullity);
      continue;
    }
    merged.push_back(r);
  }
  return merged;
}

}  // namespace morseflow::detail
