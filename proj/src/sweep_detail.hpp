#pragma once

// Library-internal root location for the determinant sweeps. Simple roots
// come from sign-change bisection. Even-order (tangential) roots leave no
// sign change; a quadratic-fit filter flags suspicious |f| minima, the
// extremum is pinned by bisecting the numerical derivative, and an exact
// kernel check decides between a genuine tangency, a pair of merged simple
// roots (re-split and bisected), and a benign dip.

#include <functional>
#include <vector>

namespace morseflow::detail {

struct LocatedRoot {
  double location = 0.0;
  // 0: transversal sign change (dimension decided by the caller);
  // >= 1: kernel dimension measured at an even-order root.
  int nullity = 0;
};

std::vector<LocatedRoot> locate_roots(const std::vector<double>& grid,
                                      const std::vector<double>& values,
                                      const std::function<double(double)>& f,
                                      const std::function<int(double)>& nullity_fn);

}  // namespace morseflow::detail
