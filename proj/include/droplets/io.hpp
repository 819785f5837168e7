#pragma once

// CSV, JSON and SVG writers. Every number goes through format_number so that
// repeated runs give byte-identical output.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "droplets/annulus.hpp"
#include "droplets/families.hpp"
#include "droplets/geometry.hpp"
#include "droplets/qdiff.hpp"
#include "droplets/trace.hpp"
#include "droplets/verification.hpp"

namespace droplets {

inline constexpr const char* version = "1.0.0";

using ojson = nlohmann::ordered_json;

/// 15 significant digits.
inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

/// JSON number rounded to 15 significant digits; NaN and infinities become null.
inline ojson json_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::strtod(format_number(v).c_str(), nullptr);
}

inline ojson json_complex(cplx z) { return ojson{{"re", json_number(z.real())}, {"im", json_number(z.imag())}}; }

// ---------------------------------------------------------------------------
// CSV

inline void write_trace_csv(std::ostream& os, const BoundaryTrace& t) {
  os << "theta,x,y,curvature\n";
  for (std::size_t k = 0; k < t.size(); ++k)
    os << format_number(t.thetas[k]) << ',' << format_number(t.points[k].real()) << ','
       << format_number(t.points[k].imag()) << ',' << format_number(t.curvature[k]) << '\n';
}

/// Same schema with a leading curve label column.
inline void write_annulus_csv(std::ostream& os, const AnnulusTrace& t) {
  os << "curve,theta,x,y,curvature\n";
  for (const auto* c : {&t.outer, &t.inner}) {
    const char* name = c == &t.outer ? "outer" : "inner";
    for (std::size_t k = 0; k < c->points.size(); ++k)
      os << name << ',' << format_number(c->thetas[k]) << ',' << format_number(c->points[k].real()) << ','
         << format_number(c->points[k].imag()) << ',' << format_number(c->curvature[k]) << '\n';
  }
}

inline void write_period_scan_csv(std::ostream& os, const PeriodScan& s) {
  os << "x,re_period,im_period\n";
  for (const auto& row : s.rows)
    os << format_number(row.x) << ',' << format_number(row.period.real()) << ',' << format_number(row.period.imag())
       << '\n';
}

// ---------------------------------------------------------------------------
// JSON

inline ojson to_json(const DropletFamily& f) {
  ojson j{{"family", tag_name(f.tag)}};
  if (f.tag == FamilyTag::m_pole) j["m"] = f.m;
  if (f.tag != FamilyTag::circle && f.tag != FamilyTag::mcleod) j["c"] = json_number(f.c);
  if (f.tag == FamilyTag::two_pole_general) j["q"] = json_number(f.q);
  return j;
}

inline ojson to_json(const SphereQD& q) {
  auto pts = [](const std::vector<QDPoint>& v) {
    ojson a = ojson::array();
    for (const auto& p : v) a.push_back({{"location", json_complex(p.location)}, {"order", p.order}});
    return a;
  };
  return {{"constant", json_number(q.constant)}, {"zeros", pts(q.zeros)}, {"poles", pts(q.poles)}};
}

inline ojson to_json(const ThresholdResult& t) {
  ojson j{{"value", json_number(t.value)}, {"lo", json_number(t.lo)}, {"hi", json_number(t.hi)},
          {"interval", t.interval}, {"method", t.method}, {"evaluations", t.evaluations}};
  j["cross_check"] = json_number(t.cross_check);
  return j;
}

inline ojson to_json(const GeometryReport& g) {
  ojson j = to_json(g.family);
  j["convexity"] = to_json(g.convexity);
  j["univalency"] = to_json(g.univalency);
  j["width"] = json_number(g.width);
  if (!g.stage.empty()) j["stage"] = g.stage;
  return j;
}

inline ojson to_json(const VerificationReport& r, const DropletFamily& f) {
  ojson j = to_json(f);
  j["p"] = json_number(r.p);
  j["tau"] = json_number(r.tau);
  j["boundary_residual"] = {{"max", json_number(r.boundary.max_residual)}, {"sigma", json_number(r.boundary.sigma)}};
  ojson res = ojson::array();
  for (const auto& x : r.residues)
    res.push_back({{"pole", json_complex(x.location)}, {"magnitude", json_number(x.magnitude)}, {"radius", json_number(x.radius)}});
  j["residues"] = res;
  ojson ph{{"converged", r.physicality.converged},
           {"verdict", r.physicality.converged ? physicality_name(r.physicality.verdict) : "undetermined"},
           {"outer_winding", r.physicality.outer_winding},
           {"retries", r.physicality.retries}};
  ojson zs = ojson::array();
  for (const auto& z : r.physicality.zeros) zs.push_back({{"location", json_complex(z.location)}, {"multiplicity", z.multiplicity}});
  ph["zeros"] = zs;
  j["physicality"] = ph;
  ojson cf = ojson::object();
  for (const auto& [k, v] : r.closed_forms.deviations) cf[k] = json_number(v);
  j["closed_forms"] = cf;
  ojson dg = ojson::object();
  for (const auto& [k, v] : r.closed_forms.diagnostics) dg[k] = json_number(v);
  j["diagnostics"] = dg;
  j["qd_deviation"] = json_number(r.qd_deviation);
  ojson checks = ojson::object();
  for (const auto& [k, v] : r.checks) checks[k] = v;
  j["checks"] = checks;
  j["warnings"] = r.warnings;
  j["pass"] = r.all_pass();
  return j;
}

// ---------------------------------------------------------------------------
// SVG

/// Half-width of the fixed square view box for a family.
inline double svg_half_width(FamilyTag tag) {
  switch (tag) {
    case FamilyTag::circle: return 1.5;
    case FamilyTag::mcleod:
    case FamilyTag::ksv:
    case FamilyTag::two_pole: return 2.5;
    default: return 3.5;
  }
}

struct SvgCurve {
  std::vector<cplx> points;
  bool closed = true;
};

inline void write_svg(std::ostream& os, const std::vector<SvgCurve>& curves, double half_width, const std::string& meta) {
  const std::string h = format_number(half_width), w = format_number(2.0 * half_width);
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"600\" height=\"600\" viewBox=\"-" << h << " -" << h << ' ' << w
     << ' ' << w << "\">\n";
  os << "<!-- " << meta << " tool=dropletctl " << version << " -->\n";
  os << "<g transform=\"scale(1,-1)\" fill=\"none\" stroke=\"black\" stroke-width=\"" << format_number(half_width / 300.0)
     << "\">\n";
  for (const auto& c : curves) {
    os << "<path d=\"";
    for (std::size_t k = 0; k < c.points.size(); ++k)
      os << (k ? " L" : "M") << format_number(c.points[k].real()) << ' ' << format_number(c.points[k].imag());
    if (c.closed) os << " Z";
    os << "\"/>\n";
  }
  os << "</g>\n</svg>\n";
}

}  // namespace droplets
