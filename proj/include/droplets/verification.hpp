#pragma once

// Numerical checks of the droplet identities: boundary equation, residue
// cancellation, physicality by monodromy, printed closed forms and the
// quadratic-differential factorisation.

#include <algorithm>
#include <cmath>
#include <complex>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "droplets/errors.hpp"
#include "droplets/families.hpp"
#include "droplets/numerics.hpp"
#include "droplets/qdiff.hpp"

namespace droplets {

// ---------------------------------------------------------------------------
// Boundary equation

struct BoundaryResidual {
  double max_residual = 0.0;
  double sigma = -1.0;  // sign of the tau-term relative to conj(tangent), theta increasing
};

inline BoundaryResidual boundary_residual(const DropletModel& mdl, int n) {
  if (n < 256) throw std::invalid_argument("boundary_residual: n must be >= 256");
  const auto& f = mdl.family;
  auto residual_at = [&](double th, double sigma) {
    const cplx w = std::polar(1.0, th);
    const cplx d = phi_prime(f, w);
    const cplx tangent = cplx(0.0, 1.0) * w * d / std::abs(d);
    return std::abs(g_hat(mdl, w) - mdl.p * std::conj(phi(f, w)) -
                    cplx(0.0, mdl.tau) * sigma * std::conj(tangent));
  };

  std::vector<std::size_t> bad;
  for (int k = 0; k < n; ++k) {
    const cplx w = std::polar(1.0, -pi + 2.0 * pi * k / n);
    if (!(std::abs(phi_prime(f, w)) > 1e-12)) bad.push_back(std::size_t(k));
  }
  if (!bad.empty()) throw DegenerateError("boundary_residual: phi' vanishes on the grid", bad);

  BoundaryResidual r;
  r.sigma = residual_at(pi / 2, 1.0) < residual_at(pi / 2, -1.0) ? 1.0 : -1.0;
  for (int k = 0; k < n; ++k) r.max_residual = std::max(r.max_residual, residual_at(-pi + 2.0 * pi * k / n, r.sigma));
  return r;
}

// ---------------------------------------------------------------------------
// Residue cancellation

struct PoleResidue {
  cplx location;
  double magnitude = 0.0;
  double radius = 0.0;
};

/// |loop integral of G phi'| around each interior pole of S and F. A
/// non-positive radius selects one automatically.
inline std::vector<PoleResidue> residue_cancellation(const DropletModel& mdl, double radius = 0.0) {
  const auto& f = mdl.family;
  std::vector<cplx> others = g_singularities(f);
  for (cplx z : phi_poles(f)) others.push_back(z);
  std::vector<PoleResidue> out;
  for (cplx z0 : interior_poles(f)) {
    double d = std::numeric_limits<double>::infinity();
    for (cplx y : others)
      if (std::abs(y - z0) > 1e-12) d = std::min(d, std::abs(y - z0));
    double rad = radius > 0.0 ? radius : 0.05;
    while (rad >= 0.5 * d) rad *= 0.5;  // shrink away from neighbouring singularities
    if (rad < 1e-6) throw ContourError("residue_cancellation: loop radius below 1e-6", z0);
    CircleLoop loop{z0, rad, Orientation::counterclockwise, 64};
    const cplx v = integrate_loop([&](cplx w) { return g_hat(mdl, w) * phi_prime(f, w); }, loop);
    out.push_back({z0, std::abs(v), rad});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Physicality

enum class Physicality { physical, mathematical };

inline const char* physicality_name(Physicality p) {
  return p == Physicality::physical ? "Physical" : "Mathematical";
}

struct LocatedZero {
  cplx location;
  int multiplicity = 0;  // winding of h around the zero
  double box_size = 0.0;
};

struct PhysicalityResult {
  bool converged = false;
  Physicality verdict = Physicality::physical;
  int outer_winding = 0;
  std::vector<LocatedZero> zeros;
  int retries = 0;
};

struct PhysicalityOptions {
  double outer_radius = 0.999;
  int max_depth = 12;
  int grid = 8;
  int max_retries = 5;
  unsigned seed = 1234u;
  bool jitter_first = true;  // an unjittered grid has lines through w = 0
};

/// h = G'/phi', whose square root must be single-valued in the disc.
inline cplx physicality_h(const DropletModel& mdl, cplx w) {
  return g_hat_prime(mdl, w) / phi_prime(mdl.family, w);
}

namespace detail {

struct Box {
  cplx lo, hi;
  int count;
  int depth;
};

inline int box_winding(const std::function<cplx(cplx)>& h, const Box& b) {
  WindingOptions opt;
  opt.samples = 64;
  return unwrap_phase(h, RectanglePath{b.lo, b.hi}, opt).winding;
}

inline double box_min_modulus(const Box& b) {
  const double x = std::clamp(0.0, b.lo.real(), b.hi.real());
  const double y = std::clamp(0.0, b.lo.imag(), b.hi.imag());
  return std::abs(cplx(x, y));
}

inline double box_max_modulus(const Box& b) {
  const double x = std::max(std::abs(b.lo.real()), std::abs(b.hi.real()));
  const double y = std::max(std::abs(b.lo.imag()), std::abs(b.hi.imag()));
  return std::abs(cplx(x, y));
}

/// Quad-tree search for the zeros of h in |w| < outer.
inline std::vector<LocatedZero> locate_zeros(const std::function<cplx(cplx)>& h, double outer, cplx shift,
                                             int grid, int max_depth) {
  const double half = 1.0 + 2.0 * std::abs(shift);
  const double step = 2.0 * half / grid;
  std::deque<Box> work;
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j) {
      Box b{shift + cplx(-half + i * step, -half + j * step), shift + cplx(-half + (i + 1) * step, -half + (j + 1) * step), 0, 0};
      if (box_min_modulus(b) >= outer) continue;
      b.count = box_winding(h, b);
      work.push_back(b);
    }

  std::vector<LocatedZero> found;
  while (!work.empty()) {
    Box b = work.front();
    work.pop_front();
    const double size = b.hi.real() - b.lo.real();
    // Boxes crossing the circle may pair a zero inside with a pole outside,
    // so they are refined regardless of their count.
    const bool straddles = box_max_modulus(b) > outer && size > 1.0 / 16.0;
    if (b.count == 0 && !straddles) continue;
    if (b.depth >= max_depth) {
      const cplx center = 0.5 * (b.lo + b.hi);
      if (std::abs(center) < outer && b.count != 0) found.push_back({center, b.count, size});
      continue;
    }
    const cplx mid = 0.5 * (b.lo + b.hi);
    const Box kids[4] = {{b.lo, mid, 0, b.depth + 1},
                         {cplx(mid.real(), b.lo.imag()), cplx(b.hi.real(), mid.imag()), 0, b.depth + 1},
                         {cplx(b.lo.real(), mid.imag()), cplx(mid.real(), b.hi.imag()), 0, b.depth + 1},
                         {mid, b.hi, 0, b.depth + 1}};
    int sum = 0;
    for (Box k : kids) {
      if (box_min_modulus(k) >= outer) {
        // Entirely outside: count only for the consistency check.
        sum += box_winding(h, k);
        continue;
      }
      k.count = box_winding(h, k);
      sum += k.count;
      work.push_back(k);
    }
    if (sum != b.count) throw ConvergenceError("locate_zeros: child windings do not add up");
  }
  return found;
}

}  // namespace detail

inline PhysicalityResult physicality(const DropletModel& mdl, const PhysicalityOptions& opt = {}) {
  std::function<cplx(cplx)> h = [&](cplx w) { return physicality_h(mdl, w); };
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> jit(-0.03, 0.03);
  PhysicalityResult res;
  for (int attempt = 0; attempt <= opt.max_retries; ++attempt) {
    const cplx shift = (attempt == 0 && !opt.jitter_first) ? cplx(0.0) : cplx(jit(rng), jit(rng));
    try {
      res.zeros = detail::locate_zeros(h, opt.outer_radius, shift, opt.grid, opt.max_depth);
      res.outer_winding = winding_count(h, CircleLoop{0.0, opt.outer_radius, Orientation::counterclockwise, 256});
      bool returns = res.outer_winding % 2 == 0;
      for (auto& z : res.zeros) {
        // the located box has side box_size; a circle through its corners encloses it
        const double rad = 0.75 * z.box_size;
        z.multiplicity = winding_count(h, CircleLoop{z.location, rad, Orientation::counterclockwise, 64});
        if (z.multiplicity % 2 != 0) returns = false;
      }
      res.verdict = returns ? Physicality::physical : Physicality::mathematical;
      res.converged = true;
      res.retries = attempt;
      return res;
    } catch (const ContourError&) {
    } catch (const PoleError&) {
    } catch (const ConvergenceError&) {
    }
    res.retries = attempt + 1;
  }
  return res;  // converged == false: no verdict
}

// ---------------------------------------------------------------------------
// Printed closed forms

inline double relative_deviation(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

/// Random points in the disc at least `clearance` away from the listed points.
inline std::vector<cplx> disc_samples(int n, const std::vector<cplx>& avoid, unsigned seed,
                                      double rmin = 0.05, double rmax = 0.95, double clearance = 0.05) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> rad(rmin, rmax), ang(-pi, pi);
  std::vector<cplx> out;
  while (int(out.size()) < n) {
    const cplx w = std::polar(rad(rng), ang(rng));
    if (distance_to(avoid, w) >= clearance) out.push_back(w);
  }
  return out;
}

struct CrossCheck {
  std::map<std::string, double> deviations;   // pass/fail against tolerance
  std::map<std::string, double> diagnostics;  // reported only
};

inline CrossCheck closed_form_crosscheck(const DropletModel& mdl, int n_samples, unsigned seed = 99u) {
  const auto& f = mdl.family;
  CrossCheck out;
  const auto pts = disc_samples(n_samples, g_singularities(f), seed);
  auto track = [](std::map<std::string, double>& m, const std::string& k, double v) {
    m[k] = std::max(m.count(k) ? m[k] : 0.0, v);
  };
  switch (f.tag) {
    case FamilyTag::ksv:
      for (cplx w : pts) track(out.deviations, "ksv_g_prime", relative_deviation(ksv_g_prime_closed(f.c, w), -g_hat_prime(mdl, w)));
      break;
    case FamilyTag::two_pole:
      for (cplx w : pts) {
        track(out.deviations, "two_pole_g_hat", relative_deviation(two_pole_g_closed(f.c, w), g_hat(mdl, w)));
        track(out.deviations, "two_pole_sqrt_g_prime",
              relative_deviation(two_pole_sqrt_g_prime_closed(f.c, w), g_hat_prime(mdl, w)));
      }
      break;
    case FamilyTag::m_pole: {
      const auto fit = mpole_constant_fit(f.m, f.c);
      track(out.deviations, "m_pole_constant_fit", fit.max_deviation);
      const double scale = fit.value * (f.m + 1);
      for (cplx w : pts) {
        const cplx lhs = g_hat_prime(mdl, w) / scale;
        track(out.deviations, "m_pole_g_prime_square", relative_deviation(lhs, mpole_g_prime_square(f.m, f.c, w)));
        track(out.diagnostics, "m_pole_g_prime_stated",
              relative_deviation(-lhs, mpole_g_prime_square(f.m, f.c, w, false)));
      }
      break;
    }
    default: break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Quadratic differential match

inline double qd_match(const DropletModel& mdl, int n_samples, unsigned seed = 5u) {
  const auto& f = mdl.family;
  SphereQD q;
  if (f.tag == FamilyTag::ksv) q = ksv_qd(f.c);
  else if (f.tag == FamilyTag::two_pole) q = two_pole_qd(f.c);
  else throw std::invalid_argument("qd_match: ksv or twopole only");
  std::vector<cplx> avoid = field_poles(f);
  for (cplx z : phi_poles(f)) avoid.push_back(z);
  double dev = 0.0;
  for (cplx w : disc_samples(n_samples, avoid, seed)) {
    const cplx fd = field_hat(f, w) * phi_prime(f, w);
    const cplx q0 = eval_qd(q, w);
    dev = std::max(dev, std::abs(fd * fd - q0) / std::abs(q0));
  }
  return dev;
}

// ---------------------------------------------------------------------------
// KSV root cross-report

struct RootCrossReport {
  cplx printed_w_minus;
  double printed_modulus_minus = 0.0;
  double printed_modulus_plus = 0.0;
  double max_match_distance = std::numeric_limits<double>::infinity();
  bool matches = false;
};

/// Compares the located odd zeros of h with the printed roots +-w_-.
inline RootCrossReport ksv_root_report(double c, const PhysicalityResult& ph) {
  RootCrossReport r;
  const auto roots = ksv_w_pm(c);
  r.printed_w_minus = roots[1];
  r.printed_modulus_minus = std::abs(roots[1]);
  r.printed_modulus_plus = std::abs(roots[0]);
  std::vector<cplx> odd;
  for (const auto& z : ph.zeros)
    if (z.multiplicity % 2 != 0) odd.push_back(z.location);
  if (odd.size() != 2) return r;
  double worst = 0.0;
  for (cplx target : {roots[1], -roots[1]}) worst = std::max(worst, distance_to(odd, target));
  r.max_match_distance = worst;
  r.matches = worst < 1e-3;
  return r;
}

// ---------------------------------------------------------------------------
// Report

struct VerificationTolerances {
  double boundary = 1e-10;
  double residue = 1e-12;
  double closed_form = 1e-11;
  double qd = 1e-11;
};

struct VerificationReport {
  std::string family;
  double p = 0.0;
  double tau = 0.0;
  BoundaryResidual boundary;
  std::vector<PoleResidue> residues;
  PhysicalityResult physicality;
  CrossCheck closed_forms;
  double qd_deviation = std::numeric_limits<double>::quiet_NaN();
  std::map<std::string, bool> checks;
  std::vector<std::string> warnings;

  bool all_pass() const {
    for (const auto& [k, v] : checks)
      if (!v) return false;
    return true;
  }
};

inline VerificationReport verify_model(const DropletModel& mdl, int n = 4096, const VerificationTolerances& tol = {},
                                       int n_samples = 256) {
  VerificationReport r;
  r.family = mdl.family.describe();
  r.p = mdl.p;
  r.tau = mdl.tau;
  r.warnings = mdl.family.warnings();
  r.boundary = boundary_residual(mdl, n);
  r.checks["boundary_residual"] = r.boundary.max_residual < tol.boundary;
  r.residues = residue_cancellation(mdl);
  double worst = 0.0;
  for (const auto& x : r.residues) worst = std::max(worst, x.magnitude);
  r.checks["residue_cancellation"] = worst < tol.residue;
  r.physicality = physicality(mdl);
  r.checks["physicality_converged"] = r.physicality.converged;
  r.closed_forms = closed_form_crosscheck(mdl, n_samples);
  for (const auto& [k, v] : r.closed_forms.deviations) r.checks[k] = v < tol.closed_form;
  if (mdl.family.tag == FamilyTag::ksv || mdl.family.tag == FamilyTag::two_pole) {
    r.qd_deviation = qd_match(mdl, 128);
    r.checks["qd_match"] = r.qd_deviation < tol.qd;
  }
  return r;
}

}  // namespace droplets
