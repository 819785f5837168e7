#pragma once

// Sampled boundary curve phi(e^{i theta}) on a uniform grid over [-pi, pi].

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

#include "droplets/curvature.hpp"
#include "droplets/families.hpp"
#include "droplets/numerics.hpp"

namespace droplets {

struct BoundaryTrace {
  std::vector<double> thetas;   // n + 1 nodes, first = -pi, last = pi
  std::vector<cplx> points;
  std::vector<cplx> tangents;   // unit tangent for theta increasing
  std::vector<double> curvature;
  std::vector<std::size_t> degenerate;  // nodes where phi' vanishes

  std::size_t size() const { return points.size(); }

  Polyline polyline() const {
    Polyline p;
    p.points.assign(points.begin(), points.end() - 1);  // drop duplicated end node
    p.closed = true;
    return p;
  }
};

inline BoundaryTrace boundary_trace(const DropletFamily& f, int n, bool with_curvature = true) {
  if (n < 64) throw std::invalid_argument("boundary_trace: n must be >= 64");
  BoundaryTrace t;
  t.thetas.resize(n + 1);
  t.points.resize(n + 1);
  t.tangents.resize(n + 1);
  t.curvature.assign(n + 1, std::numeric_limits<double>::quiet_NaN());
  for (int k = 0; k <= n; ++k) {
    const double th = k == n ? pi : -pi + 2.0 * pi * double(k) / double(n);
    const cplx w = std::polar(1.0, th);
    t.thetas[k] = th;
    t.points[k] = phi(f, w);
    const cplx d = phi_prime(f, w);
    const double a = std::abs(d);
    if (!(a > 1e-12)) {
      t.degenerate.push_back(std::size_t(k));
      t.tangents[k] = 0.0;
      continue;
    }
    t.tangents[k] = cplx(0.0, 1.0) * w * d / a;
    if (with_curvature) t.curvature[k] = curvature_hat(f, w);
  }
  // Flagged nodes get the chord direction so every tangent stays unit.
  for (std::size_t k : t.degenerate) {
    const std::size_t prev = k == 0 ? std::size_t(n - 1) : k - 1;
    const std::size_t next = k == std::size_t(n) ? 1 : k + 1;
    const cplx chord = t.points[next] - t.points[prev];
    t.tangents[k] = std::abs(chord) > 0.0 ? chord / std::abs(chord) : cplx(1.0, 0.0);
  }
  return t;
}

}  // namespace droplets
