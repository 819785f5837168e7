#pragma once

// Doubly connected droplets: the prime function of the annulus r < |w| < 1,
// the boundary-positive functions f_AB, Jacobi theta series and numerical
// probes of the candidate map
//   phi'(w) = P(-x e^{-i pi/3} w)^2 P(-x e^{i pi/3} w)^2 / (w P(-x w)^4).

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "droplets/errors.hpp"
#include "droplets/numerics.hpp"

namespace droplets {

struct AnnulusConfig {
  double r = 0.3;
  double x = 0.5;
  double eps = 1e-14;

  void validate() const {
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("AnnulusConfig: r must lie in (0, 1)");
    if (!(x > r && x < 1.0)) throw std::invalid_argument("AnnulusConfig: x must lie in (r, 1)");
    if (!(eps > 0.0)) throw std::invalid_argument("AnnulusConfig: eps must be positive");
  }

  /// Smallest K with r^{2K} (|z| + 1/|z| + 2) < eps.
  int truncation(cplx z) const {
    const double a = std::abs(z);
    const double bound = a + 1.0 / a + 2.0;
    int k = 1;
    double rk = r * r;
    while (rk * bound >= eps && k < 100000) {
      rk *= r * r;
      ++k;
    }
    return k;
  }

  /// Truncation valid for every argument with r^2 <= |z| <= 1/r^2.
  int K() const { return truncation(r * r); }
};

/// P(z) = (1 - z) prod_{k>=1} (1 - r^{2k} z)(1 - r^{2k}/z).
inline cplx prime_P(cplx z, const AnnulusConfig& cfg) {
  if (z == cplx(0.0)) throw PoleError("prime_P: z = 0", z);
  const int K = cfg.truncation(z);
  const double q = cfg.r * cfg.r;
  cplx v = 1.0 - z;
  double qk = 1.0;
  for (int k = 1; k <= K; ++k) {
    qk *= q;
    v *= (1.0 - qk * z) * (1.0 - qk / z);
  }
  return v;
}

struct PrimeFactor {
  cplx A;  // zero
  cplx B;  // pole
};

/// f_AB(z) = P(z/A) P(conj(A) z) / (P(z/B) P(conj(B) z)).
inline cplx f_AB(cplx z, const PrimeFactor& fac, const AnnulusConfig& cfg) {
  if (fac.A == fac.B) return 1.0;
  if (fac.A == cplx(0.0) || fac.B == cplx(0.0)) throw std::invalid_argument("f_AB: A and B must be nonzero");
  const cplx den = prime_P(z / fac.B, cfg) * prime_P(std::conj(fac.B) * z, cfg);
  if (!(std::abs(den) > 1e-300)) throw PoleError("f_AB: pole", z);
  return prime_P(z / fac.A, cfg) * prime_P(std::conj(fac.A) * z, cfg) / den;
}

// ---------------------------------------------------------------------------
// Theta functions, nome q:
//   theta1(v) = 2 sum (-1)^n q^{(n+1/2)^2} sin((2n+1) v)
//   theta2(v) = 2 sum q^{(n+1/2)^2} cos((2n+1) v)

namespace detail {

template <class Term>
cplx theta_series(double q, cplx v, double eps, Term term) {
  if (!(std::abs(q) < 1.0)) throw std::invalid_argument("theta: nome must satisfy |q| < 1");
  if (q == 0.0) return 0.0;
  cplx sum = 0.0;
  const double growth = std::exp(2.0 * std::abs(v.imag()));
  for (int n = 0; n < 100000; ++n) {
    const double h = n + 0.5;
    const cplx t = 2.0 * std::pow(std::abs(q), h * h) * term(n, v);
    sum += t;
    // stop once terms are small and the ratio of successive terms is below one
    const bool decreasing = std::pow(std::abs(q), 2.0 * n + 2.0) * growth < 1.0;
    if (decreasing && std::abs(t) < eps * (std::abs(sum) + 1.0)) break;
  }
  return sum;
}

}  // namespace detail

inline cplx theta1(cplx v, double q, double eps = 1e-16) {
  return detail::theta_series(q, v, eps, [](int n, cplx u) { return (n % 2 ? -1.0 : 1.0) * std::sin(double(2 * n + 1) * u); });
}

inline cplx theta2(cplx v, double q, double eps = 1e-16) {
  return detail::theta_series(q, v, eps, [](int n, cplx u) { return std::cos(double(2 * n + 1) * u); });
}

/// rho(w) = P(w) e^{tau/2} / theta1(i tau / 2, r) with tau = -log w. It is
/// constant in w.
inline cplx theta_ratio(cplx w, const AnnulusConfig& cfg) {
  const cplx tau = -std::log(w);
  const cplx th = theta1(cplx(0.0, 0.5) * tau, cfg.r);
  if (!(std::abs(th) > 1e-300)) throw PoleError("theta_ratio: theta1 vanishes", w);
  return prime_P(w, cfg) * std::exp(0.5 * tau) / th;
}

/// The value of theta_ratio from the product formula for theta1.
inline cplx theta_ratio_exact(double r) {
  double c = 1.0, q = r * r, qk = 1.0;
  for (int k = 1; k < 10000; ++k) {
    qk *= q;
    c *= 1.0 - qk;
    if (qk < 1e-18) break;
  }
  return cplx(0.0, -1.0) / (c * std::pow(r, 0.25));
}

/// max |rho(w)/rho(w0) - 1| over n_samples points on each radius.
inline double theta_prime_consistency(const AnnulusConfig& cfg, const std::vector<double>& radii, int n_samples,
                                      unsigned seed = 11u) {
  if (radii.empty()) throw std::invalid_argument("theta_prime_consistency: no radii");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ang(-pi, pi);
  cplx ref = 0.0;
  double dev = 0.0;
  for (double s : radii)
    for (int k = 0; k < n_samples; ++k) {
      cplx rho;
      for (int tries = 0;; ++tries) {
        const cplx w = std::polar(s, ang(rng));
        if (std::abs(prime_P(w, cfg)) > 1e-8 || tries > 100) {
          rho = theta_ratio(w, cfg);
          break;
        }
      }
      if (ref == cplx(0.0)) ref = rho;
      dev = std::max(dev, std::abs(rho / ref - 1.0));
    }
  return dev;
}

// ---------------------------------------------------------------------------
// Candidate map derivative

struct PhiPrimeForms {
  cplx product;       // prime-function product form
  cplx theta;         // theta form with prefactor e^{+tau} = 1/w
  cplx theta_stated;  // theta form with prefactor e^{-tau}
  cplx quotient;      // e^{tau} [theta1/theta2]^4 of (i/2)(log x - tau)
};

inline cplx annulus_phi_prime_product(cplx w, const AnnulusConfig& cfg) {
  const cplx a = -cfg.x * std::polar(1.0, -pi / 3.0), b = -cfg.x * std::polar(1.0, pi / 3.0);
  const cplx d = prime_P(-cfg.x * w, cfg);
  if (!(std::abs(d) > 1e-300)) throw PoleError("annulus_phi_prime: pole of the product form", w);
  const cplx pa = prime_P(a * w, cfg), pb = prime_P(b * w, cfg);
  const cplx d2 = d * d;
  return pa * pa * pb * pb / (w * d2 * d2);
}

inline PhiPrimeForms annulus_phi_prime(cplx w, const AnnulusConfig& cfg) {
  cfg.validate();
  PhiPrimeForms out;
  out.product = annulus_phi_prime_product(w, cfg);
  const cplx tau = -std::log(w);
  const cplx v = cplx(0.0, 0.5) * tau - cplx(0.0, 0.5) * std::log(cfg.x);
  const cplx den = theta1(v + pi / 2.0, cfg.r);
  if (!(std::abs(den) > 1e-300)) throw PoleError("annulus_phi_prime: pole of the theta form", w);
  const cplx n1 = theta1(v + 2.0 * pi / 3.0, cfg.r), n2 = theta1(v + pi / 3.0, cfg.r);
  const cplx core = n1 * n1 * n2 * n2 / (den * den * den * den);
  out.theta = std::exp(tau) * core;
  out.theta_stated = std::exp(-tau) * core;
  const cplx u = cplx(0.0, 0.5) * (std::log(cfg.x) - tau);
  const cplx t2 = theta2(u, cfg.r);
  if (std::abs(t2) > 1e-300) {
    const cplx qv = theta1(u, cfg.r) / t2;
    out.quotient = std::exp(tau) * qv * qv * qv * qv;
  } else {
    out.quotient = cplx(std::numeric_limits<double>::infinity(), 0.0);
  }
  return out;
}

struct FormAgreement {
  double theta = 0.0;         // max |ratio/ratio0 - 1|, theta form
  double theta_stated = 0.0;  // same for the e^{-tau} prefactor
  double quotient = 0.0;      // same for the theta1/theta2 quotient
  cplx theta_constant;        // product / theta at the first sample
};

/// Constancy of product/theta-form ratios over n points on |w| = s.
inline FormAgreement annulus_form_agreement(const AnnulusConfig& cfg, double s, int n) {
  FormAgreement out;
  cplx r0, s0, q0;
  for (int k = 0; k < n; ++k) {
    const cplx w = std::polar(s, -pi + 2.0 * pi * (k + 0.5) / n);
    const auto f = annulus_phi_prime(w, cfg);
    const cplx rt = f.product / f.theta, rs = f.product / f.theta_stated, rq = f.product / f.quotient;
    if (k == 0) {
      r0 = rt;
      s0 = rs;
      q0 = rq;
      out.theta_constant = rt;
    }
    out.theta = std::max(out.theta, std::abs(rt / r0 - 1.0));
    out.theta_stated = std::max(out.theta_stated, std::abs(rs / s0 - 1.0));
    out.quotient = std::max(out.quotient, std::abs(rq / q0 - 1.0));
  }
  return out;
}

/// Zeros of P(-x w) within the radial window [rmin, rmax]; these are the only
/// poles of the product form.
inline std::vector<cplx> annulus_singularities(const AnnulusConfig& cfg, double rmin, double rmax) {
  std::vector<cplx> out;
  for (int k = -40; k <= 40; ++k) {
    const double m = std::pow(cfg.r, 2.0 * k) / cfg.x;
    if (m >= rmin && m <= rmax) out.push_back(-m);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Periods

struct Period {
  double radius = 0.0;
  cplx period;           // loop integral of phi' over |w| = radius
  cplx log_coefficient;  // (1/2 pi i) loop integral of w^{-1} (w phi')
};

inline std::vector<Period> annulus_periods(const AnnulusConfig& cfg, const std::vector<double>& radii) {
  cfg.validate();
  std::vector<Period> out;
  for (double s : radii) {
    if (!(s > cfg.r && s < 1.0)) throw std::invalid_argument("annulus_periods: radius outside (r, 1)");
    CircleLoop loop{0.0, s, Orientation::counterclockwise, 64};
    Period p;
    p.radius = s;
    p.period = integrate_loop([&](cplx w) { return annulus_phi_prime_product(w, cfg); }, loop);
    p.log_coefficient = integrate_loop([&](cplx w) { return w * annulus_phi_prime_product(w, cfg) / w; }, loop) /
                        cplx(0.0, 2.0 * pi);
    out.push_back(p);
  }
  return out;
}

inline double period_spread(const std::vector<Period>& ps) {
  double d = 0.0;
  for (const auto& a : ps)
    for (const auto& b : ps) d = std::max(d, std::abs(a.period - b.period));
  return d;
}

struct PeriodScanRow {
  double x = 0.0;
  cplx period;
};

struct PeriodScan {
  std::vector<PeriodScanRow> rows;
  std::vector<std::pair<double, double>> sign_changes;  // brackets in x of Im(period)
};

inline PeriodScan annulus_period_scan(double r, const std::vector<double>& xs, double radius = -1.0) {
  PeriodScan out;
  for (double x : xs) {
    AnnulusConfig cfg{r, x};
    const double s = radius > 0.0 ? radius : std::sqrt(r);
    out.rows.push_back({x, annulus_periods(cfg, {s}).front().period});
  }
  for (std::size_t k = 1; k < out.rows.size(); ++k) {
    const double a = out.rows[k - 1].period.imag(), b = out.rows[k].period.imag();
    if ((a < 0.0 && b >= 0.0) || (a > 0.0 && b <= 0.0)) out.sign_changes.push_back({out.rows[k - 1].x, out.rows[k].x});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Boundary traces

struct AnnulusCurve {
  double radius = 0.0;
  std::vector<double> thetas;  // n + 1 nodes over [-pi, pi]
  std::vector<cplx> points;
  std::vector<double> curvature;
  double closure_defect = 0.0;  // |end - start|

  Polyline polyline() const {
    Polyline p;
    p.points = points;
    p.closed = false;
    return p;
  }
};

struct AnnulusTrace {
  AnnulusCurve outer;
  AnnulusCurve inner;
  cplx period;
  bool open_curve = false;
};

namespace detail {

/// phi(s e^{i theta}) - phi(s) at n + 1 uniform nodes on [-pi, pi], from the
/// Laurent coefficients of phi' on the circle. The log term contributes
/// a_{-1} i theta.
inline AnnulusCurve spectral_antiderivative(const AnnulusConfig& cfg, double s, int n) {
  std::vector<cplx> samples(n), coef;
  for (int j = 0; j < n; ++j) samples[j] = annulus_phi_prime_product(std::polar(s, -pi + 2.0 * pi * j / n), cfg);
  Eigen::FFT<double> fft;
  fft.fwd(coef, samples);
  // b_k = coefficient of e^{i k theta}; sampling from -pi contributes (-1)^k
  auto signed_index = [n](int j) { return j < n / 2 ? j : j - n; };
  std::vector<cplx> b(n);
  for (int j = 0; j < n; ++j) {
    const int k = signed_index(j);
    b[j] = coef[j] / double(n) * ((k % 2) ? -1.0 : 1.0);
  }
  b[n / 2] = 0.0;  // Nyquist term
  const int idx_m1 = n - 1;
  const cplx a_m1 = b[idx_m1] * s;  // coefficient of 1/w

  // D_m = s b_{m-1} / m for m != 0, and E_m = i m D_m for the theta derivative
  std::vector<cplx> D(n, 0.0), E(n, 0.0), Dd(n, 0.0);
  for (int j = 0; j < n; ++j) {
    const int k = signed_index(j);
    if (k == -1 || j == n / 2) continue;
    const int m = k + 1;
    const int jm = ((m % n) + n) % n;
    const cplx d = s * b[j] / double(m);
    const double sgn = (m % 2) ? -1.0 : 1.0;
    D[jm] = d * sgn;
    E[jm] = cplx(0.0, double(m)) * d * sgn;
    Dd[jm] = -double(m) * double(m) * d * sgn;
  }
  std::vector<cplx> per, dz, ddz;
  fft.inv(per, D);
  fft.inv(dz, E);
  fft.inv(ddz, Dd);

  AnnulusCurve c;
  c.radius = s;
  c.thetas.resize(n + 1);
  c.points.resize(n + 1);
  c.curvature.resize(n + 1);
  // theta = 0 is node n/2
  const cplx zero_val = per[n / 2] * double(n);
  for (int j = 0; j <= n; ++j) {
    const int jj = j % n;
    const double th = j == n ? pi : -pi + 2.0 * pi * j / n;
    c.thetas[j] = th;
    c.points[j] = per[jj] * double(n) - zero_val + a_m1 * cplx(0.0, th);
    const cplx z1 = dz[jj] * double(n) + cplx(0.0, 1.0) * a_m1;
    const cplx z2 = ddz[jj] * double(n);
    c.curvature[j] = (std::conj(z1) * z2).imag() / std::pow(std::abs(z1), 3.0);
  }
  c.closure_defect = std::abs(c.points[n] - c.points[0]);
  return c;
}

/// Composite Simpson rule for the integral of phi' along the real segment from a to b.
inline cplx radial_simpson(const AnnulusConfig& cfg, double a, double b, int intervals = 4096) {
  const double h = (b - a) / intervals;
  cplx sum = annulus_phi_prime_product(a, cfg) + annulus_phi_prime_product(b, cfg);
  for (int k = 1; k < intervals; ++k) sum += (k % 2 ? 4.0 : 2.0) * annulus_phi_prime_product(a + k * h, cfg);
  return sum * h / 3.0;
}

}  // namespace detail

/// Candidate boundary curves on |w| = 1 and |w| = r, anchored so that
/// phi(1) = 0 and phi(r) = integral of phi' from 1 to r.
inline AnnulusTrace annulus_boundary_trace(const AnnulusConfig& cfg, int n, double closure_tol = 1e-8) {
  cfg.validate();
  if (n < 64 || !is_power_of_two(n)) throw std::invalid_argument("annulus_boundary_trace: n must be a power of two >= 64");
  AnnulusTrace t;
  t.outer = detail::spectral_antiderivative(cfg, 1.0, n);
  t.inner = detail::spectral_antiderivative(cfg, cfg.r, n);
  const cplx anchor = detail::radial_simpson(cfg, 1.0, cfg.r);
  for (auto& p : t.inner.points) p += anchor;
  t.period = annulus_periods(cfg, {std::sqrt(cfg.r)}).front().period;
  t.open_curve = std::abs(t.period) > closure_tol;
  return t;
}

// ---------------------------------------------------------------------------
// Quadratic differential -prod f_{A_i B_i}(w) dw^2 / w^2

struct AnnulusQDReport {
  bool positive = true;
  double max_imag_ratio = 0.0;
  double min_value = std::numeric_limits<double>::infinity();
};

/// On |w| = s the differential equals prod f dtheta^2; checks it is real and
/// positive on both boundary circles.
inline AnnulusQDReport annulus_qd_positivity(const std::vector<PrimeFactor>& factors, const AnnulusConfig& cfg, int n,
                                             double tol = 1e-10) {
  AnnulusQDReport rep;
  for (double s : {1.0, cfg.r})
    for (int k = 0; k < n; ++k) {
      const cplx w = std::polar(s, -pi + 2.0 * pi * (k + 0.5) / n);
      cplx v = 1.0;
      for (const auto& f : factors) v *= f_AB(w, f, cfg);
      const double ratio = std::abs(v.imag()) / std::max(std::abs(v), 1e-300);
      rep.max_imag_ratio = std::max(rep.max_imag_ratio, ratio);
      rep.min_value = std::min(rep.min_value, v.real());
      if (ratio > tol || !(v.real() > 0.0)) rep.positive = false;
    }
  return rep;
}

}  // namespace droplets
