#include "morseflow/conjugate.hpp"

#include "morseflow/linalg.hpp"
#include "shooting_detail.hpp"
#include "sweep_detail.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>

namespace morseflow {

DomainFamily DomainFamily::scaling(const Interval& full, double t_min) {
  validate_interval(full);
  if (!(t_min > 0.0 && t_min < 1.0))
    throw Error("scaling family: t_min must lie in (0, 1)");
  const double c = full.center();
  const double l = full.left, r = full.right;
  return make_family([c, l](double t) { return c + t * (l - c); },
                     [c, r](double t) { return c + t * (r - c); }, t_min, 1.0);
}

DomainFamily make_family(std::function<double(double)> left_fn,
                         std::function<double(double)> right_fn, double t_min,
                         double t_max) {
  if (!left_fn || !right_fn) throw Error("family: empty endpoint map");
  if (!(t_min < t_max)) throw Error("family: t_min must be below t_max");
  DomainFamily fam;
  fam.left_fn = std::move(left_fn);
  fam.right_fn = std::move(right_fn);
  fam.t_min = t_min;
  fam.t_max = t_max;

  const int probes = 64;
  double prev_l = fam.left_fn(t_min), prev_r = fam.right_fn(t_min);
  validate_interval(Interval{prev_l, prev_r});
  const double tol = 1e-12 * std::max(1.0, std::abs(prev_r - prev_l));
  for (int i = 1; i <= probes; ++i) {
    const double t = t_min + (t_max - t_min) * i / probes;
    const double l = fam.left_fn(t), r = fam.right_fn(t);
    validate_interval(Interval{l, r});
    if (l > prev_l + tol || r < prev_r - tol)
      throw Error("family not increasing (endpoints must move outward)");
    prev_l = l;
    prev_r = r;
  }
  if (!(fam.at(t_max).length() > fam.at(t_min).length()))
    throw Error("family not increasing (no growth from t_min to t_max)");
  return fam;
}

std::vector<ConstraintFunction> restricted_constraints(const SchroedingerProblem& problem,
                                                       const Interval& sub) {
  if (sub.left < problem.interval.left - 1e-12 ||
      sub.right > problem.interval.right + 1e-12)
    throw Error("subinterval escapes the problem domain");
  return problem.constraints;
}

namespace {

// Constraints with no support on the subinterval make their multiplier
// direction pure gauge (an identically zero condition column); drop them so
// the defect determinant stays meaningful while the domain grows into the
// constraint supports.
std::vector<int> active_constraints(const SchroedingerProblem& problem,
                                    const detail::CoefficientSamples& samples) {
  std::vector<int> active;
  for (size_t i = 0; i < samples.phi.size(); ++i) {
    double sub_sup = 0.0;
    for (double v : samples.phi[i]) sub_sup = std::max(sub_sup, std::abs(v));
    double full_sup = 0.0;
    const auto& fn = problem.constraints[i];
    for (int p = 0; p <= 256; ++p) {
      const double x =
          problem.interval.left + problem.interval.length() * p / 256.0;
      full_sup = std::max(full_sup, std::abs(fn(x)));
    }
    if (sub_sup > 1e-12 * std::max(full_sup, 1e-300))
      active.push_back(static_cast<int>(i));
  }
  return active;
}

detail::CoefficientSamples restricted_samples(const SchroedingerProblem& problem,
                                              const Interval& sub, int steps,
                                              std::vector<int>* active_out) {
  restricted_constraints(problem, sub);  // domain validation
  validate_interval(sub);
  if (steps <= 0) steps = default_steps(sub);
  auto samples = detail::sample_coefficients(problem, sub, steps);
  const auto active = active_constraints(problem, samples);
  if (active.size() != samples.phi.size()) {
    std::vector<std::vector<double>> kept;
    for (int idx : active) kept.push_back(std::move(samples.phi[idx]));
    samples.phi = std::move(kept);
  }
  if (active_out) *active_out = active;
  return samples;
}

Trajectory combine_columns(const std::vector<Trajectory>& cols,
                           const std::vector<double>& coeffs) {
  Trajectory out = cols.front();
  const size_t nodes = out.u.size();
  std::fill(out.u.begin(), out.u.end(), 0.0);
  std::fill(out.du.begin(), out.du.end(), 0.0);
  std::fill(out.multipliers.begin(), out.multipliers.end(), 0.0);
  std::fill(out.constraint_values.begin(), out.constraint_values.end(), 0.0);
  for (size_t c = 0; c < cols.size(); ++c) {
    const double w = coeffs[c];
    if (w == 0.0) continue;
    for (size_t s = 0; s < nodes; ++s) {
      out.u[s] += w * cols[c].u[s];
      out.du[s] += w * cols[c].du[s];
    }
    for (size_t i = 0; i < out.multipliers.size(); ++i)
      out.multipliers[i] += w * cols[c].multipliers[i];
    for (size_t i = 0; i < out.constraint_values.size(); ++i)
      out.constraint_values[i] += w * cols[c].constraint_values[i];
  }
  return out;
}

}  // namespace

DefectResult dirichlet_defect(const SchroedingerProblem& problem, const Interval& sub,
                              int steps) {
  const auto samples = restricted_samples(problem, sub, steps, nullptr);
  DefectResult out;
  std::vector<Trajectory> cols;
  out.condition =
      detail::condition_matrix(samples, BoundaryCondition::Dirichlet, 0.0, &cols);

  // Equilibrate before taking the determinant and the nullity: columns are
  // scaled by their trajectory sup norms and each constraint row by its
  // attainable ceiling sup|phi| * |sub| — the bound on <phi, u> for a
  // unit-sup u. A constraint whose support barely enters the subinterval
  // otherwise shrinks its row by many orders of magnitude, which makes the
  // raw determinant collapse and the singular-value nullity fire without any
  // actual kernel. Scaling by the ceiling rather than the largest entry keeps
  // a row that is small *despite* a healthy ceiling — the signature of a real
  // kernel — small. Positive scalings keep the zero set and the sign.
  const int size = out.condition.rows;
  Matrix scaled = out.condition;
  std::vector<double> col_scale(static_cast<size_t>(size), 1.0);
  for (int j = 0; j < size; ++j) {
    const double sup = cols[static_cast<size_t>(j)].sup_norm();
    col_scale[static_cast<size_t>(j)] = sup > 0.0 ? sup : 1.0;
    for (int i = 0; i < size; ++i) scaled(i, j) /= col_scale[static_cast<size_t>(j)];
  }
  for (int i = 0; i + 1 < size; ++i) {  // constraint rows only, not the boundary row
    double sup_phi = 0.0;
    for (double v : samples.phi[static_cast<size_t>(i)])
      sup_phi = std::max(sup_phi, std::abs(v));
    const double ceiling = std::max(sup_phi * sub.length(), 1e-300);
    for (int j = 0; j < size; ++j) scaled(i, j) /= ceiling;
  }

  out.value = determinant(scaled);
  const SvdResult s = svd(scaled);
  // Tolerance anchored at max(sigma_max, 1): after equilibration the entries
  // are O(1), and a 1 x 1 system (no active constraints) must still read as
  // singular when its lone entry vanishes.
  const double anchor = std::max(s.sigma.empty() ? 0.0 : s.sigma.front(), 1.0);
  out.nullity = 0;
  for (double sv : s.sigma)
    if (sv <= 1e-8 * anchor) ++out.nullity;
  for (int j = size - out.nullity; j < size; ++j) {
    std::vector<double> coeffs(size);
    for (int i = 0; i < size; ++i)
      coeffs[i] = s.v(i, j) / col_scale[static_cast<size_t>(i)];
    Trajectory k = combine_columns(cols, coeffs);
    const double sup = k.sup_norm();
    if (sup > 0.0) {
      for (double& v : k.u) v /= sup;
      for (double& v : k.du) v /= sup;
      for (double& v : k.multipliers) v /= sup;
      for (double& v : k.constraint_values) v /= sup;
    }
    out.kernel.push_back(std::move(k));
  }
  return out;
}

namespace {

// Bitmask of constraints exceeding the activity threshold on `sub`, probing
// the functions directly so the sweep can tell activation jumps from kernels
// without integrating anything. Matches the threshold in active_constraints.
std::uint32_t activation_mask(const SchroedingerProblem& problem, const Interval& sub,
                              const std::vector<double>& full_sups) {
  std::uint32_t mask = 0;
  for (size_t i = 0; i < problem.constraints.size(); ++i) {
    double sub_sup = 0.0;
    const auto& fn = problem.constraints[i];
    for (int p = 0; p <= 256; ++p) {
      const double x = sub.left + sub.length() * p / 256.0;
      sub_sup = std::max(sub_sup, std::abs(fn(x)));
    }
    if (sub_sup > 1e-12 * std::max(full_sups[i], 1e-300))
      mask |= (1u << static_cast<unsigned>(i));
  }
  return mask;
}

// Outward endpoint velocities by central differences, one-sided at the ends
// of the family's parameter range.
void endpoint_velocities(const DomainFamily& family, double t, double* dl,
                         double* dr) {
  const double h = 1e-6 * std::max(1.0, std::abs(t));
  const double lo = std::max(t - h, family.t_min);
  const double hi = std::min(t + h, family.t_max);
  if (!(hi > lo)) throw Error("crossing_form_t: degenerate parameter window");
  *dl = (family.left_fn(hi) - family.left_fn(lo)) / (hi - lo);
  *dr = (family.right_fn(hi) - family.right_fn(lo)) / (hi - lo);
}

}  // namespace

double crossing_form_t(const DomainFamily& family, double t,
                       const Trajectory& kernel_element) {
  double dl = 0.0, dr = 0.0;
  endpoint_velocities(family, t, &dl, &dr);
  const double nl = kernel_element.du.front();  // u'(left); u(left) = 0 on the kernel
  const double nr = kernel_element.du.back();
  return -(nl * nl * (-dl) + nr * nr * dr);
}

ConjugateReport scan(const SchroedingerProblem& problem, const DomainFamily& family,
                     int grid_points, int steps) {
  if (problem.bc != BoundaryCondition::Dirichlet)
    throw Error("conjugate scan requires a Dirichlet problem");
  if (grid_points < 64) throw Error("scan: grid_points must be at least 64");

  ConjugateReport report;
  const double t_min = family.t_min, t_max = family.t_max;

  auto clamp_t = [&](double t) { return std::min(std::max(t, t_min), t_max); };
  auto defect_value = [&](double t) {
    return dirichlet_defect(problem, family.at(clamp_t(t)), steps).value;
  };
  auto defect_nullity = [&](double t) {
    return dirichlet_defect(problem, family.at(clamp_t(t)), steps).nullity;
  };

  std::vector<double> full_sups(problem.constraints.size(), 0.0);
  for (size_t i = 0; i < problem.constraints.size(); ++i) {
    const auto& fn = problem.constraints[i];
    for (int p = 0; p <= 256; ++p) {
      const double x = problem.interval.left + problem.interval.length() * p / 256.0;
      full_sups[i] = std::max(full_sups[i], std::abs(fn(x)));
    }
  }

  report.grid.resize(grid_points + 1);
  report.defects.resize(grid_points + 1);
  std::vector<std::uint32_t> masks(static_cast<size_t>(grid_points) + 1, 0);
  for (int i = 0; i <= grid_points; ++i) {
    const double t =
        (i == grid_points) ? t_max : t_min + (t_max - t_min) * i / grid_points;
    report.grid[i] = t;
    report.defects[i] = defect_value(t);
    if (!problem.constraints.empty())
      masks[static_cast<size_t>(i)] = activation_mask(problem, family.at(t), full_sups);
  }

  const auto roots =
      detail::locate_roots(report.grid, report.defects, defect_value, defect_nullity);

  auto cell_of = [&](double t) {
    const int c = static_cast<int>(std::floor((t - t_min) / (t_max - t_min) *
                                              grid_points));
    return std::min(std::max(c, 0), grid_points - 1);
  };

  for (const auto& root : roots) {
    const double t_star = clamp_t(root.location);
    const DefectResult def = dirichlet_defect(problem, family.at(t_star), steps);
    if (def.nullity == 0) {
      // a constraint entering its active set changes the size of the
      // condition system, so the defect jumps there without a kernel; a sign
      // change riding that jump is not a conjugate point
      bool near_activation = false;
      const int cell = cell_of(t_star);
      for (int c = std::max(cell - 2, 0);
           c <= std::min(cell + 2, grid_points - 1) && !near_activation; ++c)
        near_activation = masks[static_cast<size_t>(c)] !=
                          masks[static_cast<size_t>(c) + 1];
      if (near_activation) continue;
      std::ostringstream os;
      os << "conjugate point confirmation failed at t = " << t_star;
      throw Error(os.str());
    }
    // crossing form on the kernel: matrix of outward boundary terms
    const int d = def.nullity;
    Matrix q(d, d);
    double dl = 0.0, dr = 0.0;
    endpoint_velocities(family, t_star, &dl, &dr);
    for (int a = 0; a < d; ++a)
      for (int b = a; b < d; ++b) {
        const double nla = def.kernel[a].du.front(), nlb = def.kernel[b].du.front();
        const double nra = def.kernel[a].du.back(), nrb = def.kernel[b].du.back();
        const double v = -(nla * nlb * (-dl) + nra * nrb * dr);
        q(a, b) = q(b, a) = v;
      }
    CrossingRecord rec;
    rec.location = t_star;
    rec.dimension = d;
    rec.kind = CrossingKind::DomainSweep;
    if (d == 1) {
      rec.form_value = q(0, 0);
      (q(0, 0) < 0.0 ? rec.n_minus : rec.n_plus) += 1;
      if (q(0, 0) == 0.0) rec.n_minus = rec.n_plus = 0;
    } else {
      const double tr = q(0, 0) + q(1, 1);
      const double disc = std::sqrt(0.25 * (q(0, 0) - q(1, 1)) * (q(0, 0) - q(1, 1)) +
                                    q(0, 1) * q(0, 1));
      rec.form_value = tr;
      const double e1 = 0.5 * tr - disc, e2 = 0.5 * tr + disc;
      if (e1 < 0.0) ++rec.n_minus;
      if (e1 > 0.0) ++rec.n_plus;
      if (e2 < 0.0) ++rec.n_minus;
      if (e2 > 0.0) ++rec.n_plus;
    }
    if (rec.n_plus > 0) {
      std::ostringstream os;
      os << "positive crossing form at t = " << t_star
         << " (family should expand the domain)";
      throw Error(os.str());
    }
    if (std::abs(t_star - t_max) <= 1e-8) {
      if (!report.endpoint_excluded.empty() &&
          std::abs(rec.location - report.endpoint_excluded.back().location) <=
              1e-8 * (t_max - t_min)) {
        if (rec.dimension > report.endpoint_excluded.back().dimension)
          report.endpoint_excluded.back() = rec;
      } else {
        report.endpoint_excluded.push_back(rec);
      }
    } else {
      // two refined locations inside one numerical kernel width measure the
      // same conjugate point; keep a single record
      if (!report.conjugate_points.empty() &&
          std::abs(rec.location - report.conjugate_points.back().location) <=
              1e-8 * (t_max - t_min)) {
        if (rec.dimension > report.conjugate_points.back().dimension)
          report.conjugate_points.back() = rec;
        continue;
      }
      report.conjugate_points.push_back(rec);
    }
  }

  int total = 0;
  for (const auto& c : report.conjugate_points) total += c.dimension;
  report.total_count = total;
  report.morse_index_claim = total;

  report.shrinks_to_point =
      family.at(t_min).length() < 1e-3 * family.at(t_max).length();

  // first-eigenvalue certificate: no Dirichlet kernel can exist while
  // (pi / |Omega_t|)^2 + inf V > 0
  double inf_v = problem.potential(problem.interval.left);
  for (int p = 1; p <= 4096; ++p) {
    const double x = problem.interval.left + problem.interval.length() * p / 4096.0;
    inf_v = std::min(inf_v, problem.potential(x));
  }
  const double pi = std::acos(-1.0);
  if (inf_v >= 0.0) {
    report.certificate_t = t_max;
  } else {
    const double l_crit = pi / std::sqrt(-inf_v);
    if (family.at(t_min).length() >= l_crit) {
      report.certificate_t = 0.0;
    } else if (family.at(t_max).length() < l_crit) {
      report.certificate_t = t_max;
    } else {
      double lo = t_min, hi = t_max;  // length(lo) < l_crit <= length(hi)
      while (true) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (family.at(mid).length() < l_crit ? lo : hi) = mid;
      }
      report.certificate_t = lo;
    }
  }
  for (const auto& c : report.conjugate_points) {
    if (c.location < report.certificate_t) {
      std::ostringstream os;
      os << "conjugate point at t = " << c.location
         << " inside the certified region (t < " << report.certificate_t << ")";
      throw Error(os.str());
    }
  }

  // If a constraint's active set changes along the family, the constrained
  // eigenvalue curves jump at the activation parameter (the restricted
  // constraint direction degenerates there), so the count of conjugate
  // points need not equal the Morse index: an eigenvalue can jump out of the
  // negatives and re-cross. The enumeration itself is still certified.
  bool activation_constant = true;
  for (std::uint32_t v : masks)
    if (v != masks.front()) activation_constant = false;
  if (!activation_constant)
    report.label = "activation jump";
  else
    report.label = (report.shrinks_to_point || report.certificate_t >= t_min)
                       ? "morse"
                       : "spectral-flow only";
  return report;
}

}  // namespace morseflow
