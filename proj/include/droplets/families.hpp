#pragma once

// Closed-form droplet families in the w-plane: maps, Schwarz functions,
// field functions and the combination G = p S + i tau F.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "droplets/errors.hpp"
#include "droplets/numerics.hpp"

namespace droplets {

enum class FamilyTag { circle, mcleod, ksv, two_pole, m_pole, two_pole_general };

inline const char* tag_name(FamilyTag t) {
  switch (t) {
    case FamilyTag::circle: return "circle";
    case FamilyTag::mcleod: return "mcleod";
    case FamilyTag::ksv: return "ksv";
    case FamilyTag::two_pole: return "twopole";
    case FamilyTag::m_pole: return "mpole";
    case FamilyTag::two_pole_general: return "twopole-general";
  }
  return "?";
}

inline constexpr double ksv_univalency_bound = 0.6180339887498948;  // (sqrt 5 - 1) / 2

struct DropletFamily {
  FamilyTag tag = FamilyTag::circle;
  double c = 0.0;
  double q = 0.0;
  int m = 2;

  static DropletFamily circle() { return {FamilyTag::circle, 0.0, 0.0, 2}; }
  static DropletFamily mcleod() { return {FamilyTag::mcleod, 0.0, 0.0, 2}; }
  static DropletFamily ksv(double c) { return {FamilyTag::ksv, c, 0.0, 2}; }
  static DropletFamily two_pole(double c) { return {FamilyTag::two_pole, c, 0.0, 2}; }
  static DropletFamily m_pole(int m, double c) {
    if (m < 2) throw std::invalid_argument("m_pole: m must be >= 2");
    return {FamilyTag::m_pole, c, 0.0, m};
  }
  static DropletFamily two_pole_general(double c, double q) {
    if (q == 0.0) throw std::invalid_argument("two_pole_general: q must be nonzero");
    return {FamilyTag::two_pole_general, c, q, 2};
  }

  std::string describe() const {
    char buf[128];
    switch (tag) {
      case FamilyTag::circle:
      case FamilyTag::mcleod: return tag_name(tag);
      case FamilyTag::m_pole: std::snprintf(buf, sizeof buf, "mpole(m=%d, c=%.15g)", m, c); return buf;
      case FamilyTag::two_pole_general:
        std::snprintf(buf, sizeof buf, "twopole-general(c=%.15g, q=%.15g)", c, q);
        return buf;
      default: std::snprintf(buf, sizeof buf, "%s(c=%.15g)", tag_name(tag), c); return buf;
    }
  }

  /// Parameter-range warnings. Out-of-range parameters stay evaluable so that
  /// threshold searches can probe past the known bounds.
  std::vector<std::string> warnings() const {
    std::vector<std::string> out;
    switch (tag) {
      case FamilyTag::ksv:
        if (c < 0.0 || c >= ksv_univalency_bound) out.push_back("ksv: c outside [0, 0.618...)");
        break;
      case FamilyTag::two_pole:
        if (c <= 0.0 || c >= 1.0 / 3.0) out.push_back("twopole: c outside (0, 1/3)");
        break;
      case FamilyTag::m_pole:
        if (c <= 0.0) out.push_back("mpole: c must be positive");
        if (m == 2 && c >= 1.0 / 3.0) out.push_back("mpole: c beyond the univalency bound 1/3");
        if (m == 3 && c >= std::cbrt((std::sqrt(2.0) - 1.0) / 4.0))
          out.push_back("mpole: c beyond the univalency bound for m=3");
        if (m == 4 && c >= std::pow((37.0 - 8.0 * std::sqrt(10.0)) / 135.0, 0.25))
          out.push_back("mpole: c beyond the univalency bound for m=4");
        if (m > 4) out.push_back("mpole: univalency bound unknown for this m");
        break;
      case FamilyTag::two_pole_general:
        out.push_back("twopole-general: exploratory family, no droplet constants assigned");
        if (!(0.0 < q && q < c && c < 1.0)) out.push_back("twopole-general: (c, q) outside 0 < q < c < 1");
        break;
      default: break;
    }
    return out;
  }
};

namespace detail {

inline cplx ipow(cplx w, int n) {
  if (n == 0) return 1.0;
  cplx base = n > 0 ? w : 1.0 / w;
  int e = n > 0 ? n : -n;
  cplx out = 1.0;
  while (e) {
    if (e & 1) out *= base;
    base *= base;
    e >>= 1;
  }
  return out;
}

inline void pole_guard(cplx den, cplx w, const char* what) {
  if (std::abs(den) <= 1e-15) throw PoleError(what, w);
}

inline cplx checked(cplx value, cplx w, const char* what) {
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) throw PoleError(what, w);
  return value;
}

struct MPoleCoeffs {
  int m;
  cplx a, abar, b, e;
  double k;
  cplx K;
};

inline MPoleCoeffs mpole_coeffs(const DropletFamily& f) {
  MPoleCoeffs r;
  r.m = f.m;
  r.a = ipow(cplx(0.0, f.c), f.m);
  r.abar = std::conj(r.a);
  r.b = double(f.m - 1) * r.a;
  r.e = double(f.m - 1) * r.abar;
  r.k = 4.0 * f.m / double(f.m - 1);
  r.K = 4.0 * f.m * r.abar / double(f.m - 1);
  return r;
}

inline cplx two_pole_general_A(double c, double q) {
  return std::polar(c, pi / 3.0) + std::polar(q, -pi / 3.0);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Conformal map and derivatives

inline cplx phi(const DropletFamily& f, cplx w) {
  using detail::pole_guard;
  pole_guard(w, w, "phi: pole");
  const double c = f.c;
  switch (f.tag) {
    case FamilyTag::circle: return 1.0 / w;
    case FamilyTag::mcleod: return 1.0 / w + 2.0 * w / 3.0 - w * w * w / 27.0;
    case FamilyTag::ksv:
      pole_guard(1.0 - c * w, w, "phi: pole");
      return 1.0 / w - c / (1.0 - c * w) - c * c * w;
    case FamilyTag::two_pole:
      pole_guard(1.0 - c * w, w, "phi: pole");
      pole_guard(1.0 + c * w, w, "phi: pole");
      return -1.0 / w + 4.0 * c / (1.0 - c * w) - 4.0 * c / (1.0 + c * w);
    case FamilyTag::m_pole: {
      const auto k = detail::mpole_coeffs(f);
      const cplx D = 1.0 + k.b * detail::ipow(w, k.m);
      pole_guard(D, w, "phi: pole");
      return 1.0 / w + k.k * k.a * detail::ipow(w, k.m - 1) / D;
    }
    case FamilyTag::two_pole_general: {
      const double q = f.q, d2 = (c - q) * (c - q);
      pole_guard(1.0 - q * w, w, "phi: pole");
      pole_guard(1.0 - c * w, w, "phi: pole");
      return -1.0 / w + d2 / (q * (1.0 - q * w)) + d2 / (c * (1.0 - c * w));
    }
  }
  return {};
}

inline cplx phi_prime(const DropletFamily& f, cplx w) {
  using detail::pole_guard;
  pole_guard(w, w, "phi': pole");
  const double c = f.c;
  const cplx w2 = w * w;
  switch (f.tag) {
    case FamilyTag::circle: return -1.0 / w2;
    case FamilyTag::mcleod: return -1.0 / w2 + 2.0 / 3.0 - w2 / 9.0;
    case FamilyTag::ksv: {
      const cplx d = 1.0 - c * w;
      pole_guard(d, w, "phi': pole");
      return -1.0 / w2 - c * c / (d * d) - c * c;
    }
    case FamilyTag::two_pole: {
      const cplx d1 = 1.0 - c * w, d2 = 1.0 + c * w;
      pole_guard(d1, w, "phi': pole");
      pole_guard(d2, w, "phi': pole");
      return 1.0 / w2 + 4.0 * c * c / (d1 * d1) + 4.0 * c * c / (d2 * d2);
    }
    case FamilyTag::m_pole: {
      const auto k = detail::mpole_coeffs(f);
      const cplx wm = detail::ipow(w, k.m);
      const cplx D = 1.0 + k.b * wm;
      pole_guard(D, w, "phi': pole");
      return -1.0 / w2 + k.k * k.a * detail::ipow(w, k.m - 2) * (double(k.m - 1) - k.b * wm) / (D * D);
    }
    case FamilyTag::two_pole_general: {
      const double q = f.q, s = (c - q) * (c - q);
      const cplx d1 = 1.0 - q * w, d2 = 1.0 - c * w;
      pole_guard(d1, w, "phi': pole");
      pole_guard(d2, w, "phi': pole");
      return 1.0 / w2 + s / (d1 * d1) + s / (d2 * d2);
    }
  }
  return {};
}

inline cplx phi_second(const DropletFamily& f, cplx w) {
  using detail::pole_guard;
  pole_guard(w, w, "phi'': pole");
  const double c = f.c;
  const cplx w3 = w * w * w;
  switch (f.tag) {
    case FamilyTag::circle: return 2.0 / w3;
    case FamilyTag::mcleod: return 2.0 / w3 - 2.0 * w / 9.0;
    case FamilyTag::ksv: {
      const cplx d = 1.0 - c * w;
      pole_guard(d, w, "phi'': pole");
      return 2.0 / w3 - 2.0 * c * c * c / (d * d * d);
    }
    case FamilyTag::two_pole: {
      const cplx d1 = 1.0 - c * w, d2 = 1.0 + c * w;
      pole_guard(d1, w, "phi'': pole");
      pole_guard(d2, w, "phi'': pole");
      const double c3 = c * c * c;
      return -2.0 / w3 + 8.0 * c3 / (d1 * d1 * d1) - 8.0 * c3 / (d2 * d2 * d2);
    }
    case FamilyTag::m_pole: {
      const auto k = detail::mpole_coeffs(f);
      const int m = k.m;
      const cplx wm = detail::ipow(w, m);
      const cplx D = 1.0 + k.b * wm;
      pole_guard(D, w, "phi'': pole");
      const cplx N = double(m - 1) * detail::ipow(w, m - 2) - k.b * detail::ipow(w, 2 * m - 2);
      const cplx dN = double((m - 1) * (m - 2)) * detail::ipow(w, m - 3) -
                      k.b * double(2 * m - 2) * detail::ipow(w, 2 * m - 3);
      const cplx dD = k.b * double(m) * detail::ipow(w, m - 1);
      return 2.0 / w3 + k.k * k.a * (dN * D - 2.0 * N * dD) / (D * D * D);
    }
    case FamilyTag::two_pole_general: {
      const double q = f.q, s = (c - q) * (c - q);
      const cplx d1 = 1.0 - q * w, d2 = 1.0 - c * w;
      pole_guard(d1, w, "phi'': pole");
      pole_guard(d2, w, "phi'': pole");
      return -2.0 / w3 + 2.0 * q * s / (d1 * d1 * d1) + 2.0 * c * s / (d2 * d2 * d2);
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Schwarz function (continuation of conj(phi) off the unit circle)

inline cplx schwarz_hat(const DropletFamily& f, cplx w) {
  using detail::pole_guard;
  const double c = f.c;
  switch (f.tag) {
    case FamilyTag::circle: return w;
    case FamilyTag::mcleod:
      pole_guard(w, w, "schwarz: pole");
      return w + 2.0 / (3.0 * w) - 1.0 / (27.0 * w * w * w);
    case FamilyTag::ksv:
      pole_guard(w, w, "schwarz: pole");
      pole_guard(w - c, w, "schwarz: pole");
      return w - c - c * c / (w - c) - c * c / w;
    case FamilyTag::two_pole:
      pole_guard(w - c, w, "schwarz: pole");
      pole_guard(w + c, w, "schwarz: pole");
      return -w + 4.0 * c * c / (w - c) + 4.0 * c * c / (w + c);
    case FamilyTag::m_pole: {
      const auto k = detail::mpole_coeffs(f);
      const cplx den = detail::ipow(w, k.m) + k.e;
      pole_guard(den, w, "schwarz: pole");
      return w + k.K * w / den;
    }
    case FamilyTag::two_pole_general: {
      const double q = f.q, s = (c - q) * (c - q);
      pole_guard(w - c, w, "schwarz: pole");
      pole_guard(w - q, w, "schwarz: pole");
      return -w + (c * c * c - c * c * q - c * q * q + q * q * q) / (c * q) + s / (w - c) + s / (w - q);
    }
  }
  return {};
}

inline cplx schwarz_prime(const DropletFamily& f, cplx w) {
  using detail::pole_guard;
  const double c = f.c;
  switch (f.tag) {
    case FamilyTag::circle: return 1.0;
    case FamilyTag::mcleod: {
      pole_guard(w, w, "schwarz': pole");
      const cplx w2 = w * w;
      return 1.0 - 2.0 / (3.0 * w2) + 1.0 / (9.0 * w2 * w2);
    }
    case FamilyTag::ksv: {
      pole_guard(w, w, "schwarz': pole");
      pole_guard(w - c, w, "schwarz': pole");
      const cplx d = w - c;
      return 1.0 + c * c / (d * d) + c * c / (w * w);
    }
    case FamilyTag::two_pole: {
      const cplx d1 = w - c, d2 = w + c;
      pole_guard(d1, w, "schwarz': pole");
      pole_guard(d2, w, "schwarz': pole");
      return -1.0 - 4.0 * c * c / (d1 * d1) - 4.0 * c * c / (d2 * d2);
    }
    case FamilyTag::m_pole: {
      const auto k = detail::mpole_coeffs(f);
      const cplx wm = detail::ipow(w, k.m);
      const cplx den = wm + k.e;
      pole_guard(den, w, "schwarz': pole");
      return 1.0 + k.K * (k.e - double(k.m - 1) * wm) / (den * den);
    }
    case FamilyTag::two_pole_general: {
      const double q = f.q, s = (c - q) * (c - q);
      const cplx d1 = w - c, d2 = w - q;
      pole_guard(d1, w, "schwarz': pole");
      pole_guard(d2, w, "schwarz': pole");
      return -1.0 - s / (d1 * d1) - s / (d2 * d2);
    }
  }
  return {};
}

inline cplx schwarz_second(const DropletFamily& f, cplx w) {
  using detail::pole_guard;
  const double c = f.c;
  switch (f.tag) {
    case FamilyTag::circle: return 0.0;
    case FamilyTag::mcleod: {
      pole_guard(w, w, "schwarz'': pole");
      const cplx w3 = w * w * w;
      return 4.0 / (3.0 * w3) - 4.0 / (9.0 * w3 * w * w);
    }
    case FamilyTag::ksv: {
      pole_guard(w, w, "schwarz'': pole");
      pole_guard(w - c, w, "schwarz'': pole");
      const cplx d = w - c;
      return -2.0 * c * c / (d * d * d) - 2.0 * c * c / (w * w * w);
    }
    case FamilyTag::two_pole: {
      const cplx d1 = w - c, d2 = w + c;
      pole_guard(d1, w, "schwarz'': pole");
      pole_guard(d2, w, "schwarz'': pole");
      return 8.0 * c * c / (d1 * d1 * d1) + 8.0 * c * c / (d2 * d2 * d2);
    }
    case FamilyTag::m_pole: {
      const auto k = detail::mpole_coeffs(f);
      const int m = k.m;
      const cplx wm = detail::ipow(w, m);
      const cplx den = wm + k.e;
      pole_guard(den, w, "schwarz'': pole");
      return k.K * double(m) * detail::ipow(w, m - 1) * (double(m - 1) * wm - double(m + 1) * k.e) /
             (den * den * den);
    }
    case FamilyTag::two_pole_general: {
      const double q = f.q, s = (c - q) * (c - q);
      const cplx d1 = w - c, d2 = w - q;
      pole_guard(d1, w, "schwarz'': pole");
      pole_guard(d2, w, "schwarz'': pole");
      return 2.0 * s / (d1 * d1 * d1) + 2.0 * s / (d2 * d2 * d2);
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Field function. The closed forms equal -conj(i w phi'/|phi'|) on |w| = 1,
// i.e. the conjugate unit tangent for the counterclockwise traversal of the
// droplet (theta decreasing).

inline cplx field_hat(const DropletFamily& f, cplx w) {
  using detail::pole_guard;
  const double c = f.c;
  const cplx I1{0.0, 1.0};
  switch (f.tag) {
    case FamilyTag::circle: return -I1 * w;
    case FamilyTag::mcleod: {
      const cplx den = w * (3.0 - w * w);
      pole_guard(den, w, "field: pole");
      return I1 * (1.0 - 3.0 * w * w) / den;
    }
    case FamilyTag::ksv: {
      const cplx den = (1.0 - c * w + c * c * w * w) * (w - c);
      pole_guard(den, w, "field: pole");
      return -I1 * (w * w - c * w + c * c) * (1.0 - c * w) / den;
    }
    case FamilyTag::two_pole: {
      const cplx w2 = w * w;
      const cplx den = (1.0 + 3.0 * c * c * w2) * (w2 - c * c);
      pole_guard(den, w, "field: pole");
      return I1 * w * (w2 + 3.0 * c * c) * (1.0 - c * c * w2) / den;
    }
    case FamilyTag::m_pole: {
      const auto k = detail::mpole_coeffs(f);
      const int m = k.m;
      const cplx wm = detail::ipow(w, m);
      const cplx u = k.a * wm;
      const cplx den = (double(m + 1) * u - 1.0) * (wm + k.e);
      pole_guard(den, w, "field: pole");
      return I1 * w * (double(m - 1) * u + 1.0) * (wm - double(m + 1) * k.abar) / den;
    }
    case FamilyTag::two_pole_general: {
      const double q = f.q;
      const cplx A = detail::two_pole_general_A(c, q);
      const cplx Ab = std::conj(A);
      const cplx den = (q - w) * (c - w) * (1.0 - Ab * w) * (1.0 - A * w);
      pole_guard(den, w, "field: pole");
      return I1 * w * (1.0 - q * w) * (1.0 - c * w) * (w - A) * (w - Ab) / den;
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Models

/// Pressure and surface-tension constants (p, tau).
inline std::pair<double, double> constants(const DropletFamily& f) {
  const double c = f.c;
  switch (f.tag) {
    case FamilyTag::circle: return {1.0, 1.0};
    case FamilyTag::mcleod: return {0.0, 3.0};
    case FamilyTag::ksv: return {1.0 - c * c, 1.0 - c * c + c * c * c * c};
    case FamilyTag::two_pole: return {1.0 - std::pow(c, 4), 6.0 * std::pow(c, 4) + 2.0};
    case FamilyTag::m_pole: {
      const double m = f.m, c2m = std::pow(c, 2 * f.m);
      return {(m - 1.0) * (1.0 - (m - 1.0) * (m - 1.0) * c2m), (2.0 * m * m - 2.0) * c2m + 2.0};
    }
    case FamilyTag::two_pole_general:
      throw std::invalid_argument("constants: no (p, tau) is assigned to the general two-pole map");
  }
  return {};
}

struct DropletModel {
  DropletFamily family;
  double p = 1.0;
  double tau = 1.0;
  /// Sign relating field_hat to the conjugate unit tangent for theta
  /// increasing on |w| = 1.
  double sigma = -1.0;

  static DropletModel of(const DropletFamily& f) {
    const auto [p, tau] = constants(f);
    return {f, p, tau, -1.0};
  }
  DropletModel with_tau(double t) const {
    DropletModel out = *this;
    out.tau = t;
    return out;
  }
};

inline cplx g_hat(const DropletModel& mdl, cplx w) {
  return mdl.p * schwarz_hat(mdl.family, w) + cplx(0.0, mdl.tau) * field_hat(mdl.family, w);
}

// ---------------------------------------------------------------------------
// Singularities (whole plane, finite part)

namespace detail {

inline void push_roots(std::vector<cplx>& out, int m, cplx z) {
  // all m-th roots of z
  const double r = std::pow(std::abs(z), 1.0 / m);
  const double a = std::arg(z);
  for (int k = 0; k < m; ++k) out.push_back(std::polar(r, (a + 2.0 * pi * k) / m));
}

}  // namespace detail

inline std::vector<cplx> phi_poles(const DropletFamily& f) {
  std::vector<cplx> out{0.0};
  const double c = f.c;
  switch (f.tag) {
    case FamilyTag::ksv:
      if (c != 0.0) out.push_back(1.0 / c);
      break;
    case FamilyTag::two_pole:
      out.push_back(1.0 / c);
      out.push_back(-1.0 / c);
      break;
    case FamilyTag::m_pole: {
      const auto k = detail::mpole_coeffs(f);
      detail::push_roots(out, f.m, -1.0 / k.b);
      break;
    }
    case FamilyTag::two_pole_general:
      out.push_back(1.0 / f.q);
      out.push_back(1.0 / c);
      break;
    default: break;
  }
  return out;
}

inline std::vector<cplx> schwarz_poles(const DropletFamily& f) {
  const double c = f.c;
  switch (f.tag) {
    case FamilyTag::circle: return {};
    case FamilyTag::mcleod: return {0.0};
    case FamilyTag::ksv: return c != 0.0 ? std::vector<cplx>{0.0, c} : std::vector<cplx>{};
    case FamilyTag::two_pole: return {c, -c};
    case FamilyTag::m_pole: {
      std::vector<cplx> out;
      detail::push_roots(out, f.m, -detail::mpole_coeffs(f).e);
      return out;
    }
    case FamilyTag::two_pole_general: return {c, f.q};
  }
  return {};
}

inline std::vector<cplx> field_poles(const DropletFamily& f) {
  const double c = f.c;
  std::vector<cplx> out;
  switch (f.tag) {
    case FamilyTag::circle: break;
    case FamilyTag::mcleod:
      out = {0.0, std::sqrt(3.0), -std::sqrt(3.0)};
      break;
    case FamilyTag::ksv:
      if (c != 0.0) {
        out.push_back(c);
        out.push_back(std::polar(1.0 / c, pi / 3.0));
        out.push_back(std::polar(1.0 / c, -pi / 3.0));
      }
      break;
    case FamilyTag::two_pole:
      out = {c, -c, cplx(0.0, 1.0 / (std::sqrt(3.0) * c)), cplx(0.0, -1.0 / (std::sqrt(3.0) * c))};
      break;
    case FamilyTag::m_pole: {
      const auto k = detail::mpole_coeffs(f);
      detail::push_roots(out, f.m, -k.e);
      detail::push_roots(out, f.m, 1.0 / (double(f.m + 1) * k.a));
      break;
    }
    case FamilyTag::two_pole_general: {
      const cplx A = detail::two_pole_general_A(c, f.q);
      out = {c, f.q, 1.0 / A, 1.0 / std::conj(A)};
      break;
    }
  }
  return out;
}

/// Poles of S and F strictly inside the disc, excluding w = 0.
inline std::vector<cplx> interior_poles(const DropletFamily& f) {
  std::vector<cplx> out;
  auto add = [&](cplx z) {
    if (std::abs(z) < 1e-14 || std::abs(z) >= 1.0) return;
    for (const cplx& y : out)
      if (std::abs(y - z) < 1e-12) return;
    out.push_back(z);
  };
  for (cplx z : schwarz_poles(f)) add(z);
  for (cplx z : field_poles(f)) add(z);
  return out;
}

/// Candidate singularities of G = p S + i tau F (union of both pole sets).
inline std::vector<cplx> g_singularities(const DropletFamily& f) {
  std::vector<cplx> out = schwarz_poles(f);
  for (cplx z : field_poles(f)) out.push_back(z);
  if (f.tag == FamilyTag::ksv || f.tag == FamilyTag::mcleod) out.push_back(0.0);
  return out;
}

inline double distance_to(const std::vector<cplx>& pts, cplx w) {
  double d = std::numeric_limits<double>::infinity();
  for (cplx z : pts) d = std::min(d, std::abs(w - z));
  return d;
}

/// dG/dw by the Cauchy integral on a circle sized from the nearest singularity.
inline cplx g_hat_prime(const DropletModel& mdl, cplx w) {
  const double d = distance_to(g_singularities(mdl.family), w);
  if (!(d > 1e-12)) throw PoleError("g_hat_prime: too close to a singularity", w);
  const double rho = std::min(0.25 * d, 0.1);
  return cauchy_derivative([&](cplx z) { return g_hat(mdl, z); }, w, rho, 48);
}

// ---------------------------------------------------------------------------
// Printed closed forms

/// G for the two-pole family in factored form.
inline cplx two_pole_g_closed(double c, cplx w) {
  const cplx w2 = w * w;
  const cplx den = 1.0 + 3.0 * c * c * w2;
  detail::pole_guard(den, w, "two_pole_g_closed: pole");
  return (9.0 * std::pow(c, 4) - 1.0) * w * (3.0 + c * c * w2) / den;
}

/// Square of the stated square-root form of G' for the two-pole family.
inline cplx two_pole_sqrt_g_prime_closed(double c, cplx w) {
  const cplx w2 = w * w;
  const cplx den = 3.0 * c * c * w2 + 1.0;
  detail::pole_guard(den, w, "two_pole_sqrt_g_prime_closed: pole");
  const cplx root = std::sqrt(cplx(27.0 * std::pow(c, 4) - 3.0)) * (1.0 - c * c * w2) / den;
  return root * root;
}

/// Stated G' for the KSV family; it equals -dG/dw.
inline cplx ksv_g_prime_closed(double c, cplx w) {
  const cplx w2 = w * w;
  const cplx q = c * c * w2 - c * w + 1.0;
  const cplx den = q * q * w2;
  detail::pole_guard(den, w, "ksv_g_prime_closed: pole");
  const cplx one = 1.0 - c * w;
  return 2.0 * (c * c - 1.0) * one * one * (c * c / 2.0 * w2 * w2 + (std::pow(c, 4) + 1.0) * w2 + c * c / 2.0) /
         den;
}

/// Printed location of the roots +-w_{+-} of the quartic in the KSV G'.
inline std::array<cplx, 2> ksv_w_pm(double c) {
  const double c4 = std::pow(c, 4);
  const double s = std::sqrt(std::pow(c, 8) + c4 + 1.0);
  const cplx wp = cplx(0.0, 1.0) / c * std::sqrt(cplx(1.0 + c4 + s));
  const cplx wm = cplx(0.0, 1.0) / c * std::sqrt(cplx(1.0 + c4 - s));
  return {wp, wm};
}

/// Rational shape multiplying A_m in the m-pole G.
inline cplx mpole_g_shape(int m, double c, cplx w) {
  const cplx u = detail::ipow(cplx(0.0, c) * w, m);
  const cplx den = double(m + 1) * u - 1.0;
  detail::pole_guard(den, w, "mpole_g_shape: pole");
  return -w * (double(m + 1) - double((m - 1) * (m - 1)) * u) / den;
}

/// Squared ratio in the derivative of the m-pole G. With corrected = false the
/// stated denominator (m-1)u - 1 is used instead of (m+1)u - 1.
inline cplx mpole_g_prime_square(int m, double c, cplx w, bool corrected = true) {
  const cplx u = detail::ipow(cplx(0.0, c) * w, m);
  const cplx den = corrected ? double(m + 1) * u - 1.0 : double(m - 1) * u - 1.0;
  detail::pole_guard(den, w, "mpole_g_prime_square: pole");
  const cplx r = (double(m - 1) * u + 1.0) / den;
  return r * r;
}

/// Fit of the real constant A_m(c) with G_m = A_m * shape, verified at 64
/// further points.
struct MPoleConstant {
  double value = 0.0;
  double max_deviation = 0.0;
  double imag_part = 0.0;
};

inline MPoleConstant mpole_constant_fit(int m, double c, double tol = 1e-11) {
  const auto mdl = DropletModel::of(DropletFamily::m_pole(m, c));
  const cplx w0 = std::polar(0.37, 0.413);
  const cplx A = g_hat(mdl, w0) / mpole_g_shape(m, c, w0);
  MPoleConstant out;
  out.value = A.real();
  out.imag_part = A.imag();
  std::mt19937_64 rng(0x5eed + m);
  std::uniform_real_distribution<double> rad(0.05, 0.95), ang(-pi, pi);
  for (int k = 0; k < 64; ++k) {
    const cplx w = std::polar(rad(rng), ang(rng));
    const cplx g = g_hat(mdl, w);
    out.max_deviation = std::max(out.max_deviation,
                                 std::abs(g - out.value * mpole_g_shape(m, c, w)) / std::max(1.0, std::abs(g)));
  }
  out.max_deviation = std::max(out.max_deviation, std::abs(A.imag()) / std::max(1.0, std::abs(A)));
  if (out.max_deviation > tol)
    throw ClosedFormMismatch("mpole_constant: closed form mismatch", out.max_deviation);
  return out;
}

inline double mpole_constant(int m, double c) { return mpole_constant_fit(m, c).value; }

// ---------------------------------------------------------------------------
// Related maps

/// The sign variant 1/w + c/(1 - c w) - c^2 w of the KSV map.
inline cplx ksv_variant_phi(double c, cplx w) {
  detail::pole_guard(w, w, "ksv_variant_phi: pole");
  detail::pole_guard(1.0 - c * w, w, "ksv_variant_phi: pole");
  return 1.0 / w + c / (1.0 - c * w) - c * c * w;
}

/// McLeod map rotated by a quarter turn: i phi(i w) = 1/w - 2w/3 - w^3/27.
inline cplx mcleod_rotated_phi(cplx w) { return cplx(0.0, 1.0) * phi(DropletFamily::mcleod(), cplx(0.0, 1.0) * w); }

inline cplx mcleod_rotated_phi_prime(cplx w) {
  return -1.0 / (w * w) - 2.0 / 3.0 - w * w / 9.0;
}

/// The McLeod field in the form (3w^2 + 1) / (w (1 + w^2/3)).
inline cplx mcleod_stated_field(cplx w) {
  const cplx den = w * (1.0 + w * w / 3.0);
  detail::pole_guard(den, w, "mcleod_stated_field: pole");
  return (3.0 * w * w + 1.0) / den;
}

inline cplx twopole_general_map(double c, double q, cplx w) {
  return phi(DropletFamily::two_pole_general(c, q), w);
}

/// sup over |w| = 1 of |phi_{c,q} - c^2/q + 2c + phi_KSV|, which is O(q).
inline double q_limit_check(double c, double q, int nodes = 4096) {
  if (!(0.0 < q && q < c && c < 1.0)) throw std::invalid_argument("q_limit_check: need 0 < q < c < 1");
  const auto gen = DropletFamily::two_pole_general(c, q);
  const auto ksv = DropletFamily::ksv(c);
  const double shift = -c * c / q + 2.0 * c;
  double sup = 0.0;
  for (int k = 0; k < nodes; ++k) {
    const cplx w = std::polar(1.0, -pi + 2.0 * pi * k / nodes);
    sup = std::max(sup, std::abs(phi(gen, w) + shift + phi(ksv, w)));
  }
  return sup;
}

}  // namespace droplets
