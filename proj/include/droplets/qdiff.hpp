#pragma once

// Quadratic differentials on the sphere that are positive on the unit circle:
//   Q(w) = -C prod_k [(w - A_k)(1 - conj(A_k) w)]^{m_k}
//            / prod_j [(w - z_j)(1 - conj(z_j) w)]^{n_j}

#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "droplets/errors.hpp"
#include "droplets/numerics.hpp"

namespace droplets {

struct QDPoint {
  cplx location;
  int order = 1;  // multiplicity of a zero or order of a pole
};

struct SphereQD {
  double constant = 1.0;
  std::vector<QDPoint> zeros;
  std::vector<QDPoint> poles;

  int zero_count() const {
    int s = 0;
    for (const auto& z : zeros) s += z.order;
    return s;
  }
  int pole_total() const {
    int s = 0;
    for (const auto& p : poles) s += p.order;
    return s;
  }
};

/// No validation; used to build counterexamples.
inline SphereQD make_qd_unchecked(double constant, std::vector<QDPoint> zeros, std::vector<QDPoint> poles) {
  return {constant, std::move(zeros), std::move(poles)};
}

inline SphereQD build_qd(double constant, std::vector<QDPoint> zeros, std::vector<QDPoint> poles) {
  if (!(constant > 0.0)) throw std::invalid_argument("build_qd: constant must be positive");
  for (const auto& z : zeros) {
    if (!(std::abs(z.location) < 1.0)) throw std::invalid_argument("build_qd: zero outside the open disc at " + to_string(z.location));
    if (z.order < 1) throw std::invalid_argument("build_qd: zero multiplicity must be >= 1");
  }
  for (const auto& p : poles) {
    if (!(std::abs(p.location) < 1.0)) throw std::invalid_argument("build_qd: pole outside the open disc at " + to_string(p.location));
    if (p.order < 1) throw std::invalid_argument("build_qd: pole order must be >= 1");
  }
  SphereQD q{constant, std::move(zeros), std::move(poles)};
  if (q.zero_count() != q.pole_total() - 2) {
    throw std::invalid_argument("build_qd: zero count " + std::to_string(q.zero_count()) +
                                " != total pole order - 2 = " + std::to_string(q.pole_total() - 2));
  }
  return q;
}

/// Factored evaluation with log-magnitude and phase accumulation.
inline cplx eval_qd(const SphereQD& q, cplx w) {
  double logmag = std::log(q.constant);
  double phase = pi;  // leading minus sign
  for (const auto& z : q.zeros) {
    const cplx f = (w - z.location) * (1.0 - std::conj(z.location) * w);
    const double a = std::abs(f);
    if (a == 0.0) return 0.0;
    logmag += z.order * std::log(a);
    phase += z.order * std::arg(f);
  }
  for (const auto& p : q.poles) {
    const cplx f = (w - p.location) * (1.0 - std::conj(p.location) * w);
    const double a = std::abs(f);
    if (a < 1e-300) throw PoleError("eval_qd: pole", w);
    logmag -= p.order * std::log(a);
    phase -= p.order * std::arg(f);
  }
  return std::polar(std::exp(logmag), phase);
}

struct PositivityReport {
  bool positive = true;
  double min_value = std::numeric_limits<double>::infinity();
  double max_imag_ratio = 0.0;
};

/// Checks that -e^{2 i theta} Q(e^{i theta}) is real and positive at n nodes.
inline PositivityReport positivity_on_circle(const SphereQD& q, int n, double tol = 1e-10) {
  for (const auto& p : q.poles)
    if (std::abs(std::abs(p.location) - 1.0) < 1e-12) throw PoleError("positivity_on_circle: pole on the circle", p.location);
  PositivityReport r;
  for (int k = 0; k < n; ++k) {
    const cplx w = std::polar(1.0, -pi + 2.0 * pi * k / n);
    const cplx v = -w * w * eval_qd(q, w);
    const double ratio = std::abs(v.imag()) / std::max(std::abs(v), 1e-300);
    r.max_imag_ratio = std::max(r.max_imag_ratio, ratio);
    r.min_value = std::min(r.min_value, v.real());
    if (ratio > tol || !(v.real() > 0.0)) r.positive = false;
  }
  return r;
}

/// max relative deviation of conj(Q(1/conj w)) w^{-4} from Q(w) at sample
/// points in the annulus 0.2 < |w| < 0.95.
inline double reflection_symmetry(const SphereQD& q, int n_samples, unsigned seed = 7u) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> rad(0.2, 0.95), ang(-pi, pi);
  double dev = 0.0;
  int done = 0;
  while (done < n_samples) {
    const cplx w = std::polar(rad(rng), ang(rng));
    bool near = false;
    for (const auto& p : q.poles) near = near || std::abs(w - p.location) < 0.05;
    if (near) continue;
    const cplx lhs = std::conj(eval_qd(q, 1.0 / std::conj(w))) / (w * w * w * w);
    const cplx rhs = eval_qd(q, w);
    dev = std::max(dev, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
    ++done;
  }
  return dev;
}

/// -w^2 Q1 Q2: stays positive on the circle when both factors are.
inline SphereQD qd_product(const SphereQD& a, const SphereQD& b) {
  SphereQD out{a.constant * b.constant, a.zeros, a.poles};
  out.zeros.insert(out.zeros.end(), b.zeros.begin(), b.zeros.end());
  out.poles.insert(out.poles.end(), b.poles.begin(), b.poles.end());
  out.zeros.push_back({0.0, 2});
  return out;
}

/// 1 / (w^4 Q): zeros and poles swap roles.
inline SphereQD qd_reciprocal(const SphereQD& a) {
  SphereQD out{1.0 / a.constant, a.poles, a.zeros};
  out.poles.push_back({0.0, 4});
  return out;
}

/// Pole order at infinity predicted from the factored form.
inline int order_at_infinity(const SphereQD& q) {
  int num = 0, den = 0;
  for (const auto& z : q.zeros) num += z.order * (z.location == cplx(0.0) ? 1 : 2);
  for (const auto& p : q.poles) den += p.order * (p.location == cplx(0.0) ? 1 : 2);
  return num - den + 4;
}

/// Pole order at infinity measured from Q(1/v) v^{-4} near v = 0.
inline double order_at_infinity_sampled(const SphereQD& q, double eps = 1e-4) {
  const cplx dir = std::polar(1.0, 0.3);
  auto g = [&](double s) {
    const cplx v = s * dir;
    return std::abs(eval_qd(q, 1.0 / v) / (v * v * v * v));
  };
  return std::log2(g(eps) / g(2.0 * eps));
}

inline SphereQD ksv_qd(double c) {
  return build_qd(1.0, {{std::polar(c, pi / 3.0), 2}, {std::polar(c, -pi / 3.0), 2}}, {{0.0, 4}, {c, 2}});
}

inline SphereQD two_pole_qd(double c) {
  const double s = std::sqrt(3.0) * c;
  return build_qd(1.0, {{cplx(0.0, s), 2}, {0.0, 2}, {cplx(0.0, -s), 2}}, {{0.0, 4}, {c, 2}, {-c, 2}});
}

}  // namespace droplets
