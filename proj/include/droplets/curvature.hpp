#pragma once

// Signed curvature of the droplet boundary in the w-variable.

#include <cmath>
#include <complex>
#include <cstdio>
#include <string>

#include "droplets/errors.hpp"
#include "droplets/families.hpp"

namespace droplets {

/// Curvature at w on |w| = 1 from phi, S and their derivatives. The square
/// root sqrt(phi'/S') is taken as -i w phi'/|phi'|, which makes the circle
/// curvature +1.
inline double curvature_hat(const DropletFamily& f, cplx w, double imag_tol = 1e-10) {
  const cplx d1 = phi_prime(f, w);
  const double a1 = std::abs(d1);
  if (!(a1 > 1e-12)) throw DegenerateError("curvature_hat: phi' vanishes at w = " + to_string(w));
  const cplx d2 = phi_second(f, w);
  const cplx s1 = schwarz_prime(f, w);
  const cplx s2 = schwarz_second(f, w);

  cplx root = std::sqrt(d1 / s1);
  const cplx want = cplx(0.0, -1.0) * w * d1 / a1;
  if (std::abs(root - want) > std::abs(root + want)) root = -root;

  const cplx k = cplx(0.0, 0.5) * root * (s2 / (s1 * d1) - d2 / (d1 * d1));
  if (std::abs(k.imag()) > imag_tol * std::max(1.0, std::abs(k.real()))) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "curvature_hat: branch ambiguity, kappa = %.6g%+.6gi", k.real(), k.imag());
    throw Error(std::string(buf) + " at w = " + to_string(w));
  }
  return k.real();
}

inline double curvature_hat(const DropletFamily& f, double theta) {
  return curvature_hat(f, std::polar(1.0, theta));
}

/// KSV curvature in the cos(theta) form.
inline double ksv_curvature_closed(double c, double theta) {
  const double t = std::cos(theta);
  const double c2 = c * c, c3 = c2 * c, c4 = c2 * c2;
  const double den = 4.0 * c2 * t * t - (2.0 * c3 + 2.0 * c) * t + c4 - c2 + 1.0;
  return (c2 - 1.0) * ((4.0 * c3 + 4.0 * c) * t - c4 - 5.0 * c2 - 1.0) / (den * den);
}

/// KSV curvature as a rational function of w.
inline cplx ksv_curvature_rational(double c, cplx w) {
  const double c2 = c * c, c4 = c2 * c2, c5 = c4 * c, c6 = c4 * c2;
  const cplx num = w * w * w * ((2.0 * c5 - 2.0 * c) * w * w + (1.0 + 4.0 * c2 - 4.0 * c4 - c6) * w + (2.0 * c5 - 2.0 * c));
  const cplx d1 = c2 * w * w - c * w + 1.0, d2 = c2 - c * w + w * w;
  return num / (d1 * d1 * d2 * d2);
}

/// Linear numerator p(t) of the KSV curvature, t = cos(theta).
inline double ksv_curvature_numerator(double c, double t) {
  const double c2 = c * c;
  return (4.0 * c2 * c + 4.0 * c) * t - c2 * c2 - 5.0 * c2 - 1.0;
}

/// Even quartic numerator p(t) of the two-pole curvature, t = cos(theta).
inline double two_pole_curvature_numerator(double c, double t) {
  const double c2 = c * c, c4 = c2 * c2, c6 = c4 * c2, c8 = c4 * c4;
  const double t2 = t * t;
  return 48.0 * c4 * t2 * t2 + (24.0 * c2 - 48.0 * c4 - 72.0 * c6) * t2 - 9.0 * c8 + 36.0 * c6 + 34.0 * c4 -
         12.0 * c2 - 1.0;
}

/// Two-pole curvature in the cos(theta) form. It carries the opposite sign
/// to curvature_hat (the opposite traversal).
inline double two_pole_curvature_closed(double c, double theta) {
  const double t = std::cos(theta);
  const double c2 = c * c;
  const double den = 12.0 * c2 * t * t + 9.0 * c2 * c2 - 6.0 * c2 + 1.0;
  return two_pole_curvature_numerator(c, t) / (den * den);
}

inline cplx two_pole_curvature_rational(double c, cplx w) {
  const double c2 = c * c, c4 = c2 * c2, c6 = c4 * c2, c8 = c4 * c4;
  const cplx w2 = w * w, w4 = w2 * w2;
  const cplx num = 3.0 * c4 * w4 * w4 + (6.0 * c2 - 18.0 * c6) * w4 * w2 + (-9.0 * c8 + 28.0 * c4 - 1.0) * w4 +
                   (6.0 * c2 - 18.0 * c6) * w2 + 3.0 * c4;
  const cplx d1 = 3.0 * c2 + w2, d2 = 1.0 + 3.0 * c2 * w2;
  return num / (d1 * d1 * d2 * d2);
}

}  // namespace droplets
