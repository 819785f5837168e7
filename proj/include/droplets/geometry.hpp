#pragma once

// Convexity, univalency and width analysis of droplet boundaries.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Core>
#include <unsupported/Eigen/Polynomials>

#include "droplets/curvature.hpp"
#include "droplets/families.hpp"
#include "droplets/numerics.hpp"
#include "droplets/trace.hpp"

namespace droplets {

// ---------------------------------------------------------------------------
// Curvature cross-checks

inline double signed_area(const std::vector<cplx>& pts) {
  double a = 0.0;
  for (std::size_t k = 0; k < pts.size(); ++k) a += detail::cross(pts[k], pts[(k + 1) % pts.size()]);
  return 0.5 * a;
}

/// Second-order finite-difference curvature of the sampled boundary, signed so
/// that a convex droplet has positive curvature.
inline std::vector<double> curvature_numeric(const BoundaryTrace& t) {
  const std::size_t n = t.size() - 1;
  if (n < 1024) throw std::invalid_argument("curvature_numeric: need n >= 1024");
  std::vector<cplx> pts(t.points.begin(), t.points.end() - 1);
  const double orient = signed_area(pts) < 0.0 ? -1.0 : 1.0;
  const double h = 2.0 * pi / double(n);
  std::vector<double> out(n + 1);
  std::vector<std::size_t> bad;
  for (std::size_t k = 0; k < n; ++k) {
    const cplx zm = pts[(k + n - 1) % n], z0 = pts[k], zp = pts[(k + 1) % n];
    const cplx d1 = (zp - zm) / (2.0 * h);
    const cplx d2 = (zp - 2.0 * z0 + zm) / (h * h);
    const double s = std::abs(d1);
    if (!(s > 1e-12)) {
      bad.push_back(k);
      continue;
    }
    out[k] = orient * (d2 * std::conj(d1)).imag() / (s * s * s);
  }
  if (!bad.empty()) throw DegenerateError("curvature_numeric: degenerate node spacing", bad);
  out[n] = out[0];
  return out;
}

/// max |curvature_hat - curvature_numeric| over the grid.
inline double curvature_numeric_deviation(const DropletFamily& f, int n = 8192) {
  const auto t = boundary_trace(f, n);
  const auto num = curvature_numeric(t);
  double dev = 0.0;
  for (std::size_t k = 0; k < num.size(); ++k) dev = std::max(dev, std::abs(num[k] - t.curvature[k]));
  return dev;
}

/// Max deviation between the stated cos(theta) curvature and curvature_hat at
/// random angles. For the two-pole family the stated form has the opposite sign.
inline double curvature_closed_form_deviation(const DropletFamily& f, int samples = 256,
                                              unsigned seed = 20240617u) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ang(-pi, pi);
  double dev = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double th = ang(rng);
    const double lemma = curvature_hat(f, th);
    double closed = 0.0;
    if (f.tag == FamilyTag::ksv) closed = ksv_curvature_closed(f.c, th);
    else if (f.tag == FamilyTag::two_pole) closed = -two_pole_curvature_closed(f.c, th);
    else throw std::invalid_argument("curvature_closed_form_deviation: ksv or twopole only");
    dev = std::max(dev, std::abs(lemma - closed) / std::max(1.0, std::abs(closed)));
  }
  return dev;
}

// ---------------------------------------------------------------------------
// Thresholds

struct ThresholdResult {
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  bool interval = false;     // inconclusive at maximal resolution
  double cross_check = std::numeric_limits<double>::quiet_NaN();
  int evaluations = 0;
  std::string method;
};

inline DropletFamily family_at(FamilyTag tag, int m, double c) {
  switch (tag) {
    case FamilyTag::ksv: return DropletFamily::ksv(c);
    case FamilyTag::two_pole: return DropletFamily::two_pole(c);
    case FamilyTag::m_pole: return DropletFamily::m_pole(m, c);
    default: throw std::invalid_argument("threshold: family must be ksv, twopole or mpole");
  }
}

/// Minimum of curvature_hat over one rotational period of the boundary.
inline double min_curvature(const DropletFamily& f) {
  const double period = f.tag == FamilyTag::m_pole ? 2.0 * pi / f.m : 2.0 * pi;
  return scan_minimize([&](double th) { return curvature_hat(f, th); }, 0.0, period, 1024).second;
}

inline bool convex_by_scan(const DropletFamily& f) {
  try {
    return min_curvature(f) > 0.0;
  } catch (const Error&) {
    return false;
  }
}

inline bool ksv_convex(double c) { return ksv_curvature_numerator(c, 1.0) < 0.0; }

inline bool two_pole_convex(double c) {
  return two_pole_curvature_numerator(c, 0.0) < 0.0 && two_pole_curvature_numerator(c, 1.0) < 0.0;
}

inline double mpole_upper_probe(int m) { return 0.9 * std::pow(double(m + 1), -1.0 / m); }

inline ThresholdResult convexity_threshold(FamilyTag tag, int m = 2, double tol = 1e-13) {
  ThresholdResult r;
  int evals = 0;
  auto scan_pred = [&](double c) {
    ++evals;
    return convex_by_scan(family_at(tag, m, c));
  };
  if (tag == FamilyTag::ksv || tag == FamilyTag::two_pole) {
    const double lo = 0.1, hi = tag == FamilyTag::ksv ? 0.5 : 0.32;
    auto pred = [&](double c) {
      ++evals;
      return tag == FamilyTag::ksv ? ksv_convex(c) : two_pole_convex(c);
    };
    std::tie(r.lo, r.hi) = bisect_bracket(pred, lo, hi, tol);
    r.value = 0.5 * (r.lo + r.hi);
    r.method = "numerator endpoint signs";
    r.evaluations = evals;
    r.cross_check = bisect_threshold(scan_pred, lo, hi, 1e-10);
    return r;
  }
  if (tag != FamilyTag::m_pole) throw std::invalid_argument("convexity_threshold: unsupported family");
  std::tie(r.lo, r.hi) = bisect_bracket(scan_pred, 0.02, mpole_upper_probe(m), std::max(tol, 1e-12));
  r.value = 0.5 * (r.lo + r.hi);
  r.method = "curvature scan";
  r.evaluations = evals;
  return r;
}

enum class SimplicityVerdict { simple, not_simple, inconclusive };

/// Simplicity of the sampled boundary, doubling n while inconclusive.
inline SimplicityVerdict boundary_simplicity(const DropletFamily& f, int n0 = 4096, int nmax = 1 << 16,
                                             double tol = 1e-12) {
  for (int n = n0; n <= nmax; n *= 2) {
    try {
      const auto t = boundary_trace(f, n, false);
      const auto rep = polyline_is_simple(t.polyline(), tol);
      if (rep.status == Simplicity::simple) return SimplicityVerdict::simple;
      if (rep.status == Simplicity::not_simple) return SimplicityVerdict::not_simple;
    } catch (const Error&) {
      return SimplicityVerdict::not_simple;
    }
  }
  return SimplicityVerdict::inconclusive;
}

inline ThresholdResult univalency_threshold(FamilyTag tag, int m = 2, double tol = 1e-9) {
  double lo = 0.0, hi = 0.0;
  switch (tag) {
    case FamilyTag::ksv: lo = 0.3, hi = 0.7; break;
    case FamilyTag::two_pole: lo = 0.2, hi = 0.4; break;
    case FamilyTag::m_pole: lo = 0.1, hi = mpole_upper_probe(m); break;
    default: throw std::invalid_argument("univalency_threshold: unsupported family");
  }
  ThresholdResult r;
  double inc_lo = std::numeric_limits<double>::infinity(), inc_hi = -inc_lo;
  auto pred = [&](double c) {
    ++r.evaluations;
    const auto v = boundary_simplicity(family_at(tag, m, c));
    if (v == SimplicityVerdict::inconclusive) {
      inc_lo = std::min(inc_lo, c);
      inc_hi = std::max(inc_hi, c);
    }
    return v == SimplicityVerdict::simple;  // inconclusive counts as not simple
  };
  std::tie(r.lo, r.hi) = bisect_bracket(pred, lo, hi, tol);
  if (inc_lo <= inc_hi) {
    r.interval = true;
    r.lo = std::min(r.lo, inc_lo);
    r.hi = std::max(r.hi, inc_hi);
  }
  r.value = 0.5 * (r.lo + r.hi);
  r.method = "polyline simplicity";
  return r;
}

// ---------------------------------------------------------------------------
// KSV stage analysis

inline double ksv_alpha(double c) {
  const double c2 = c * c;
  return (c2 * c2 - 2.0 * c2 * c + c2 - 2.0 * c + 1.0) / (2.0 * c * (c2 - 2.0 * c + 1.0));
}

inline double ksv_a1(double c) {
  const double c2 = c * c;
  return -(c2 * c2 + 2.0 * c2 * c + c2 - 2.0 * c - 1.0) / (2.0 * c);
}

inline double ksv_a2(double c) {
  const double c2 = c * c;
  return -(c2 * c2 - 2.0 * c2 * c + c2 + 2.0 * c - 1.0) / (2.0 * c);
}

inline double ksv_x0(double c) { return (-c * c * c + c * c + 2.0 * c - 1.0) / (c - 1.0); }

inline double ksv_x_pi(double c) { return phi(DropletFamily::ksv(c), -1.0).real(); }

/// Re phi(e^{i theta}) for the KSV map as a rational function of cos(theta).
inline double ksv_x_theta(double c, double theta) {
  const double t = std::cos(theta), c2 = c * c;
  return (2.0 * c * (c2 - 1.0) * t * t + (1.0 + c2 - c2 * c2) * t - c) / (c2 - 2.0 * c * t + 1.0);
}

inline constexpr double ksv_convexity_exact = 0.3819660112501051;  // (3 - sqrt 5) / 2

enum class Stage { I, II, III };

inline const char* stage_name(Stage s) {
  switch (s) {
    case Stage::I: return "I";
    case Stage::II: return "II";
    case Stage::III: return "III";
  }
  return "?";
}

inline Stage ksv_stage(double c) {
  if (c < ksv_convexity_exact) return Stage::I;
  if (c < ksv_univalency_bound) return Stage::II;
  return Stage::III;
}

/// Coefficients (increasing degree) of the polynomial in t = cos(theta) whose
/// roots are the crossings of the boundary with Re z = a.
inline std::vector<double> line_polynomial(FamilyTag tag, double c, double a) {
  const double c2 = c * c, c4 = c2 * c2;
  if (tag == FamilyTag::ksv)
    return {-c - a * (1.0 + c2), -c4 + c2 + 2.0 * a * c + 1.0, 2.0 * c2 * c - 2.0 * c};
  if (tag == FamilyTag::two_pole)
    return {a * c4 + 2.0 * a * c2 + a, 9.0 * c4 - 6.0 * c2 + 1.0, -4.0 * a * c2, -4.0 * c2};
  throw std::invalid_argument("line_polynomial: ksv or twopole only");
}

inline double poly_eval(const std::vector<double>& co, double t) {
  double v = 0.0;
  for (std::size_t k = co.size(); k-- > 0;) v = v * t + co[k];
  return v;
}

struct LineProfile {
  int polyline_count = 0;
  int algebraic_count = 0;
  bool inconclusive = false;
  bool agree() const { return !inconclusive && polyline_count == algebraic_count; }
};

inline LineProfile vertical_line_profile(FamilyTag tag, double c, double a, int n = 8192,
                                         double tangency_tol = 1e-9) {
  LineProfile out;
  const auto t = boundary_trace(family_at(tag, 2, c), n, false);
  const std::size_t np = t.size() - 1;
  for (std::size_t k = 0; k < np; ++k) {
    const double u = t.points[k].real() - a, v = t.points[k + 1].real() - a;
    if (std::abs(u) < 1e-13) out.inconclusive = true;
    if ((u < 0.0) != (v < 0.0)) ++out.polyline_count;
  }

  const auto co = line_polynomial(tag, c, a);
  std::vector<double> dco;
  for (std::size_t k = 1; k < co.size(); ++k) dco.push_back(double(k) * co[k]);
  if (std::abs(poly_eval(co, 1.0)) < tangency_tol || std::abs(poly_eval(co, -1.0)) < tangency_tol)
    out.inconclusive = true;

  std::vector<cplx> roots;
  if (co.back() == 0.0) {
    if (co.size() >= 2 && co[1] != 0.0) roots.push_back(-co[0] / co[1]);
  } else {
    Eigen::VectorXd coeffs(co.size());
    for (std::size_t k = 0; k < co.size(); ++k) coeffs[Eigen::Index(k)] = co[k];
    Eigen::PolynomialSolver<double, Eigen::Dynamic> solver(coeffs);
    for (Eigen::Index k = 0; k < solver.roots().size(); ++k) roots.push_back(solver.roots()[k]);
  }
  for (const cplx& r : roots) {
    const bool near_real = std::abs(r.imag()) < 1e-7;
    const bool in_range = r.real() > -1.0 - 1e-9 && r.real() < 1.0 + 1e-9;
    if (!near_real || !in_range) continue;
    if (std::abs(r.imag()) > 1e-12 || std::abs(poly_eval(dco, r.real())) < tangency_tol) {
      out.inconclusive = true;  // (near) double root: tangency
      continue;
    }
    out.algebraic_count += std::abs(std::abs(r.real()) - 1.0) < 1e-12 ? 1 : 2;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Width of the two-pole droplet

inline constexpr double two_pole_convexity_exact = 0.2652687636643125;  // sqrt(6 sqrt 13 - 21) / 3

inline double two_pole_a_star(double c) {
  const double c2 = c * c, c4 = c2 * c2;
  return (-4.0 * c + std::sqrt(-27.0 * c4 * c4 + 18.0 * c4 + 8.0 * c2 + 1.0)) / (2.0 * (c2 + 1.0) * c);
}

inline double two_pole_x_pi(double c) { return (9.0 * c * c - 1.0) / (c * c - 1.0); }

struct WidthResult {
  double formula = std::numeric_limits<double>::quiet_NaN();
  double trace = 0.0;
  double deviation = std::numeric_limits<double>::quiet_NaN();
  bool formula_regime = false;
};

/// Extent of the boundary along the real axis, with refined extrema.
inline double real_extent(const DropletFamily& f, int samples = 4096) {
  auto x = [&](double th) { return phi(f, std::polar(1.0, th)).real(); };
  const double mx = -scan_minimize([&](double th) { return -x(th); }, -pi, pi, samples).second;
  const double mn = scan_minimize(x, -pi, pi, samples).second;
  return mx - mn;
}

inline WidthResult droplet_width(double c, double tol = 1e-8) {
  WidthResult r;
  r.trace = real_extent(DropletFamily::two_pole(c));
  r.formula_regime = c > two_pole_convexity_exact && c < 1.0 / 3.0;
  if (r.formula_regime) {
    r.formula = 2.0 * two_pole_a_star(c);
    r.deviation = std::abs(r.formula - r.trace);
    if (r.deviation > tol) throw ClosedFormMismatch("droplet_width: 2a* disagrees with trace extent", r.deviation);
  }
  return r;
}

// ---------------------------------------------------------------------------

struct GeometryReport {
  DropletFamily family;
  ThresholdResult convexity;
  ThresholdResult univalency;
  double width = std::numeric_limits<double>::quiet_NaN();
  std::string stage;  // KSV only
};

inline GeometryReport geometry_report(FamilyTag tag, int m, double c) {
  GeometryReport g;
  g.family = family_at(tag, m, c);
  g.convexity = convexity_threshold(tag, m);
  g.univalency = univalency_threshold(tag, m);
  if (tag == FamilyTag::two_pole && c > 0.0) g.width = droplet_width(c).trace;
  if (tag == FamilyTag::ksv) g.stage = stage_name(ksv_stage(c));
  return g;
}

}  // namespace droplets
