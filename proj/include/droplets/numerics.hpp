#pragma once

// Shared numerical substrate: trapezoid loop integrals, argument-principle
// counting by phase unwrapping, threshold bisection and polyline simplicity.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "droplets/errors.hpp"

namespace droplets {

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

enum class Orientation { counterclockwise, clockwise };

inline bool is_power_of_two(long n) { return n > 0 && (n & (n - 1)) == 0; }

struct CircleLoop {
  cplx center{0.0, 0.0};
  double radius{1.0};
  Orientation orientation{Orientation::counterclockwise};
  int samples{64};

  void validate() const {
    if (!(radius > 0.0) || !std::isfinite(radius))
      throw std::invalid_argument("CircleLoop: radius must be positive");
    if (samples < 16 || !is_power_of_two(samples))
      throw std::invalid_argument("CircleLoop: samples must be a power of two >= 16");
  }

  double sign() const { return orientation == Orientation::counterclockwise ? 1.0 : -1.0; }

  /// Point at normalized parameter t in [0, 1).
  cplx point(double t) const { return center + radius * std::polar(1.0, sign() * 2.0 * pi * t); }
};

/// Axis-aligned rectangle traversed counterclockwise; t in [0, 1).
struct RectanglePath {
  cplx lo;
  cplx hi;

  cplx point(double t) const {
    const double w = hi.real() - lo.real();
    const double h = hi.imag() - lo.imag();
    const double perimeter = 2.0 * (w + h);
    double s = (t - std::floor(t)) * perimeter;
    if (s < w) return {lo.real() + s, lo.imag()};
    s -= w;
    if (s < h) return {hi.real(), lo.imag() + s};
    s -= h;
    if (s < w) return {hi.real() - s, hi.imag()};
    s -= w;
    return {lo.real(), hi.imag() - s};
  }
};

struct QuadratureOptions {
  double rel_tol = 1e-14;
  int max_samples = 1 << 20;
};

/// Contour integral of f over a circle by the trapezoid rule, doubling the
/// node count until two successive estimates agree relative to the integrand
/// scale 2*pi*R*max|f|.
template <class F>
cplx integrate_loop(F&& f, const CircleLoop& loop, const QuadratureOptions& opt = {}) {
  loop.validate();
  const double s = loop.sign();
  double scale = 0.0;

  auto weighted = [&](double theta) {
    const cplx e = std::polar(1.0, s * theta);
    const cplx w = loop.center + loop.radius * e;
    const cplx v = f(w);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw ConvergenceError("integrate_loop: non-finite integrand at node w = " + to_string(w));
    scale = std::max(scale, std::abs(v));
    return v * (s * I * loop.radius * e);
  };

  long n = loop.samples;
  cplx sum{0.0, 0.0};
  for (long k = 0; k < n; ++k) sum += weighted(2.0 * pi * double(k) / double(n));
  cplx estimate = sum * (2.0 * pi / double(n));

  while (true) {
    cplx extra{0.0, 0.0};
    for (long k = 0; k < n; ++k) extra += weighted(2.0 * pi * (double(k) + 0.5) / double(n));
    sum += extra;
    n *= 2;
    const cplx refined = sum * (2.0 * pi / double(n));
    const double ref = 2.0 * pi * loop.radius * scale;
    if (std::abs(refined - estimate) <= opt.rel_tol * ref + std::numeric_limits<double>::min())
      return refined;
    if (n >= opt.max_samples) {
      throw ConvergenceError("integrate_loop: no convergence after " + std::to_string(n) +
                             " nodes; last estimates " + to_string(estimate) + " and " +
                             to_string(refined));
    }
    estimate = refined;
  }
}

struct WindingOptions {
  double floor_rel = 1e-13;   // |f| below floor_rel * max|f| counts as a zero on the contour
  double max_jump = pi / 2;   // refine arcs whose phase step exceeds this
  int max_depth = 20;
  int samples = 256;
};

struct PhaseResult {
  double total = 0.0;  // continuous change of arg f along the path
  int winding = 0;
  double max_abs = 0.0;
  double min_abs = 0.0;
};

/// Continuous change of arg f along a closed path given by point(t), t in [0,1).
template <class F, class Path>
PhaseResult unwrap_phase(F&& f, const Path& path, const WindingOptions& opt = {}) {
  const int n = std::max(opt.samples, 16);
  std::vector<double> ts(n + 1);
  std::vector<cplx> vals(n + 1);
  double vmax = 0.0;
  for (int k = 0; k < n; ++k) {
    ts[k] = double(k) / double(n);
    vals[k] = f(path.point(ts[k]));
    if (!std::isfinite(vals[k].real()) || !std::isfinite(vals[k].imag()))
      throw ContourError("unwrap_phase: non-finite value on contour", path.point(ts[k]));
    vmax = std::max(vmax, std::abs(vals[k]));
  }
  ts[n] = 1.0;
  vals[n] = vals[0];
  const double floor = opt.floor_rel * vmax;
  double vmin = std::numeric_limits<double>::infinity();

  auto check = [&](double t, cplx v) {
    const double a = std::abs(v);
    if (!(a > floor) || !std::isfinite(a)) throw ContourError("zero on contour", path.point(t));
    vmin = std::min(vmin, a);
  };
  for (int k = 0; k < n; ++k) check(ts[k], vals[k]);

  // Recursive bisection of arcs whose phase step is too large to be trusted.
  auto arc = [&](auto&& self, double ta, cplx fa, double tb, cplx fb, int depth) -> double {
    const double d = std::arg(fb / fa);
    if (std::abs(d) <= opt.max_jump) return d;
    if (depth >= opt.max_depth)
      throw ConvergenceError("unwrap_phase: phase refinement exceeded depth cap near " +
                             to_string(path.point(ta)));
    const double tm = 0.5 * (ta + tb);
    const cplx fm = f(path.point(tm));
    check(tm, fm);
    return self(self, ta, fa, tm, fm, depth + 1) + self(self, tm, fm, tb, fb, depth + 1);
  };

  PhaseResult res;
  for (int k = 0; k < n; ++k) res.total += arc(arc, ts[k], vals[k], ts[k + 1], vals[k + 1], 0);
  const double turns = res.total / (2.0 * pi);
  res.winding = static_cast<int>(std::lround(turns));
  if (std::abs(turns - res.winding) > 1e-6)
    throw ConvergenceError("unwrap_phase: non-integer winding " + std::to_string(turns));
  res.max_abs = vmax;
  res.min_abs = vmin;
  return res;
}

/// Number of zeros minus poles of f enclosed by the loop (argument principle).
template <class F>
int winding_count(F&& f, const CircleLoop& loop, WindingOptions opt = {}) {
  loop.validate();
  opt.samples = std::max(opt.samples, loop.samples);
  return unwrap_phase(f, loop, opt).winding;
}

/// Bisection for the crossing of a predicate that holds at lo and fails at
/// hi. Returns the final bracket.
template <class P>
std::pair<double, double> bisect_bracket(P&& predicate, double lo, double hi, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("bisect_threshold: tol must be positive");
  const bool at_lo = predicate(lo);
  const bool at_hi = predicate(hi);
  if (!at_lo || at_hi) {
    throw BracketError("bisect_threshold: invalid bracket, predicate(" + std::to_string(lo) +
                       ") = " + (at_lo ? "true" : "false") + ", predicate(" + std::to_string(hi) +
                       ") = " + (at_hi ? "true" : "false"));
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (predicate(mid) ? lo : hi) = mid;
  }
  return {lo, hi};
}

template <class P>
double bisect_threshold(P&& predicate, double lo, double hi, double tol) {
  const auto [a, b] = bisect_bracket(predicate, lo, hi, tol);
  return 0.5 * (a + b);
}

/// Golden-section search for the minimum of a unimodal g on [a, b].
template <class G>
std::pair<double, double> golden_minimize(G&& g, double a, double b, double tol = 1e-12) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - r * (b - a), x2 = a + r * (b - a);
  double f1 = g(x1), f2 = g(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - r * (b - a);
      f1 = g(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + r * (b - a);
      f2 = g(x2);
    }
  }
  return f1 < f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

/// Minimum of a smooth periodic-ish g over [a, b]: uniform scan, then golden
/// refinement around the best sample.
template <class G>
std::pair<double, double> scan_minimize(G&& g, double a, double b, int samples = 1024) {
  const double h = (b - a) / samples;
  int best = 0;
  double fbest = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= samples; ++k) {
    const double v = g(a + h * k);
    if (v < fbest) {
      fbest = v;
      best = k;
    }
  }
  const double lo = std::max(a, a + h * (best - 1)), hi = std::min(b, a + h * (best + 1));
  auto refined = golden_minimize(g, lo, hi);
  return refined.second < fbest ? refined : std::pair{a + h * best, fbest};
}

/// Derivative of an analytic function from its values on a small circle
/// (trapezoid rule applied to the Cauchy integral formula).
template <class F>
cplx cauchy_derivative(F&& f, cplx w, double radius, int samples = 32) {
  cplx acc{0.0, 0.0};
  for (int k = 0; k < samples; ++k) {
    const cplx e = std::polar(1.0, 2.0 * pi * (double(k) + 0.5) / double(samples));
    acc += f(w + radius * e) / e;
  }
  return acc / (double(samples) * radius);
}

// ---------------------------------------------------------------------------
// Polylines

struct Polyline {
  std::vector<cplx> points;
  bool closed = true;
};

enum class Simplicity { simple, not_simple, inconclusive };

struct SimplicityReport {
  Simplicity status = Simplicity::simple;
  std::vector<cplx> intersections;   // proper crossings
  std::vector<cplx> near_contacts;   // non-adjacent segments closer than tol
  bool is_simple() const { return status == Simplicity::simple; }
};

namespace detail {

inline double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

inline double point_segment_distance(cplx p, cplx a, cplx b) {
  const cplx d = b - a;
  const double len2 = std::norm(d);
  double t = len2 > 0.0 ? ((p - a) * std::conj(d)).real() / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(p - (a + t * d));
}

struct SegmentContact {
  bool crossing = false;
  bool contact = false;
  cplx where{};
};

inline SegmentContact classify_segments(cplx a, cplx b, cplx c, cplx d, double tol) {
  SegmentContact out;
  const double lab = std::abs(b - a);
  const double lcd = std::abs(d - c);
  const double o1 = cross(b - a, c - a), o2 = cross(b - a, d - a);
  const double o3 = cross(d - c, a - c), o4 = cross(d - c, b - c);
  const bool strict = std::abs(o1) > tol * lab && std::abs(o2) > tol * lab &&
                      std::abs(o3) > tol * lcd && std::abs(o4) > tol * lcd;
  if (strict && ((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0))) {
    out.crossing = true;
    out.where = a + (b - a) * (o3 / (o3 - o4));
    return out;
  }
  const double dist = std::min({point_segment_distance(a, c, d), point_segment_distance(b, c, d),
                                point_segment_distance(c, a, b), point_segment_distance(d, a, b)});
  if (dist < tol) {
    out.contact = true;
    out.where = 0.5 * (a + c);
  }
  return out;
}

}  // namespace detail

/// Sweep over segment pairs (adjacent pairs excluded) for crossings. Contacts
/// closer than tol are reported as inconclusive rather than guessed.
inline SimplicityReport polyline_is_simple(const Polyline& curve, double tol) {
  std::vector<cplx> pts = curve.points;
  if (curve.closed && pts.size() > 1 && std::abs(pts.front() - pts.back()) <= tol) pts.pop_back();
  const std::size_t n = pts.size();
  if (curve.closed && n < 3) throw DegenerateError("polyline_is_simple: closed polyline needs >= 3 points");
  if (n < 2) throw DegenerateError("polyline_is_simple: need at least one segment");
  const std::size_t nseg = curve.closed ? n : n - 1;

  std::vector<std::size_t> zero_length;
  for (std::size_t i = 0; i < nseg; ++i)
    if (std::abs(pts[(i + 1) % n] - pts[i]) == 0.0) zero_length.push_back(i);
  if (!zero_length.empty())
    throw DegenerateError("polyline_is_simple: zero-length segment(s)", zero_length);

  struct Seg {
    cplx a, b;
    double xmin, xmax, ymin, ymax;
  };
  std::vector<Seg> segs(nseg);
  for (std::size_t i = 0; i < nseg; ++i) {
    const cplx a = pts[i], b = pts[(i + 1) % n];
    segs[i] = {a, b, std::min(a.real(), b.real()), std::max(a.real(), b.real()),
               std::min(a.imag(), b.imag()), std::max(a.imag(), b.imag())};
  }
  std::vector<std::size_t> order(nseg);
  for (std::size_t i = 0; i < nseg; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t l, std::size_t r) { return segs[l].xmin < segs[r].xmin; });

  auto adjacent = [&](std::size_t i, std::size_t j) {
    const std::size_t d = i > j ? i - j : j - i;
    return d <= 1 || (curve.closed && d == nseg - 1);
  };

  SimplicityReport report;
  std::vector<std::size_t> active;
  for (std::size_t idx : order) {
    const Seg& s = segs[idx];
    active.erase(std::remove_if(active.begin(), active.end(),
                                [&](std::size_t j) { return segs[j].xmax + tol < s.xmin; }),
                 active.end());
    for (std::size_t j : active) {
      if (adjacent(idx, j)) continue;
      const Seg& t = segs[j];
      if (t.ymax + tol < s.ymin || s.ymax + tol < t.ymin) continue;
      const auto c = detail::classify_segments(s.a, s.b, t.a, t.b, tol);
      if (c.crossing) report.intersections.push_back(c.where);
      else if (c.contact) report.near_contacts.push_back(c.where);
    }
    active.push_back(idx);
  }
  if (!report.intersections.empty()) report.status = Simplicity::not_simple;
  else if (!report.near_contacts.empty()) report.status = Simplicity::inconclusive;
  return report;
}

}  // namespace droplets
