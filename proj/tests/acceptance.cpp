// Acceptance checks, one per criterion. Usage: acceptance [N] [path/to/dropletctl]
// Prints one PASS/FAIL line per criterion run; exit status 0 iff all pass.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "droplets/droplets.hpp"

using namespace droplets;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::vector<DropletFamily> criterion_families() {
  std::vector<DropletFamily> out{DropletFamily::circle(), DropletFamily::mcleod()};
  for (double c : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6}) out.push_back(DropletFamily::ksv(c));
  for (double c : {0.05, 0.1, 0.15, 0.2, 0.25, 0.3}) out.push_back(DropletFamily::two_pole(c));
  for (auto [m, c] : std::vector<std::pair<int, double>>{{2, 0.2}, {3, 0.3}, {4, 0.35}, {5, 0.4}})
    out.push_back(DropletFamily::m_pole(m, c));
  return out;
}

Outcome c01() {
  Outcome o;
  double worst = 0.0;
  for (const auto& f : criterion_families()) {
    const double r = boundary_residual(DropletModel::of(f), 4096).max_residual;
    worst = std::max(worst, r);
    o.require(r < 1e-10, f.describe() + fmt(" residual %.3g", r));
  }
  if (o.pass) o.detail = fmt("max residual %.3g over 4096 nodes", worst);
  return o;
}

Outcome c02() {
  Outcome o;
  double worst = 0.0, weakest = 1e300;
  for (const auto& f : criterion_families()) {
    const auto mdl = DropletModel::of(f);
    for (const auto& r : residue_cancellation(mdl)) {
      worst = std::max(worst, r.magnitude);
      o.require(r.magnitude < 1e-12, f.describe() + fmt(" residue %.3g", r.magnitude));
    }
    for (const auto& r : residue_cancellation(mdl.with_tau(mdl.tau + 0.1))) {
      weakest = std::min(weakest, r.magnitude);
      o.require(r.magnitude > 1e-3, f.describe() + fmt(" perturbed residue only %.3g", r.magnitude));
    }
  }
  if (o.pass) o.detail = fmt("max residue %.3g", worst) + fmt(", min perturbed residue %.3g", weakest);
  return o;
}

Outcome c03() {
  Outcome o;
  const auto kc = convexity_threshold(FamilyTag::ksv);
  const auto ku = univalency_threshold(FamilyTag::ksv);
  const auto tc = convexity_threshold(FamilyTag::two_pole);
  const auto tu = univalency_threshold(FamilyTag::two_pole);
  const auto m3 = univalency_threshold(FamilyTag::m_pole, 3);
  const auto m4 = univalency_threshold(FamilyTag::m_pole, 4);
  o.require(std::abs(kc.value - 0.38196601) <= 1e-8, fmt("ksv convexity %.12f", kc.value));
  o.require(std::abs(ku.value - 0.6180340) <= 1e-5, fmt("ksv univalency %.9f", ku.value));
  // the computed threshold equals the exact root sqrt(6 sqrt 13 - 21)/3 of the curvature numerator
  o.require(std::abs(tc.value - two_pole_convexity_exact) <= 1e-10, fmt("twopole convexity %.12f vs exact root", tc.value));
  o.require(std::abs(tc.value - 0.26526920) <= 1e-8,
            fmt("twopole convexity %.12f", tc.value) + fmt(" differs from 0.26526920 by %.3g (tolerance 1e-8)",
                                                           std::abs(tc.value - 0.26526920)));
  o.require(std::abs(tu.value - 1.0 / 3.0) <= 1e-5, fmt("twopole univalency %.9f", tu.value));
  o.require(std::abs(m3.value - 0.46959) <= 1e-4, fmt("mpole m=3 univalency %.9f", m3.value));
  o.require(std::abs(m4.value - 0.54259) <= 1e-4, fmt("mpole m=4 univalency %.9f", m4.value));
  if (o.pass) o.detail = "all thresholds within tolerance";
  return o;
}

Outcome c04() {
  Outcome o;
  std::vector<std::pair<DropletFamily, Physicality>> cases{{DropletFamily::circle(), Physicality::physical},
                                                           {DropletFamily::mcleod(), Physicality::physical}};
  for (double c : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6}) cases.push_back({DropletFamily::ksv(c), Physicality::mathematical});
  for (double c : {0.05, 0.1, 0.15, 0.2, 0.25, 0.3}) cases.push_back({DropletFamily::two_pole(c), Physicality::physical});
  for (auto [m, c] : std::vector<std::pair<int, double>>{{2, 0.2}, {3, 0.3}, {4, 0.35}, {5, 0.4}, {6, 0.4}})
    cases.push_back({DropletFamily::m_pole(m, c), Physicality::physical});
  int runs = 0;
  for (const auto& [f, want] : cases)
    for (double rad : {0.999, 0.99})
      for (unsigned seed : {1234u, 99u}) {
        PhysicalityOptions opt;
        opt.outer_radius = rad;
        opt.seed = seed;
        const auto r = physicality(DropletModel::of(f), opt);
        ++runs;
        o.require(r.converged, f.describe() + " did not converge");
        o.require(!r.converged || r.verdict == want,
                  f.describe() + " verdict " + physicality_name(r.verdict) + fmt(" at radius %.3f", rad));
      }
  if (o.pass) o.detail = std::to_string(cases.size()) + " families, " + std::to_string(runs) + " radius/jitter runs agree";
  return o;
}

Outcome c05() {
  Outcome o;
  double worst = 0.0;
  for (auto f : {DropletFamily::ksv(0.2), DropletFamily::ksv(0.5), DropletFamily::two_pole(0.1),
                 DropletFamily::two_pole(0.3), DropletFamily::m_pole(2, 0.2), DropletFamily::m_pole(3, 0.3),
                 DropletFamily::m_pole(4, 0.35), DropletFamily::m_pole(5, 0.4)}) {
    const auto cc = closed_form_crosscheck(DropletModel::of(f), 256);
    for (const auto& [k, v] : cc.deviations) {
      worst = std::max(worst, v);
      o.require(v < 1e-11, f.describe() + " " + k + fmt(" %.3g", v));
    }
    if (f.tag == FamilyTag::ksv || f.tag == FamilyTag::two_pole) {
      const double d = curvature_closed_form_deviation(f, 256);
      worst = std::max(worst, d);
      o.require(d < 1e-11, f.describe() + fmt(" curvature closed form %.3g", d));
    }
    const double n = curvature_numeric_deviation(f, 8192);
    o.require(n < 1e-5, f.describe() + fmt(" polyline curvature %.3g", n));
  }
  if (o.pass) o.detail = fmt("max closed-form deviation %.3g", worst);
  return o;
}

Outcome c06() {
  Outcome o;
  double worst = 0.0;
  for (double c : {0.1, 0.3, 0.5}) {
    const double d = qd_match(DropletModel::of(DropletFamily::ksv(c)), 256);
    worst = std::max(worst, d);
    o.require(d < 1e-11, fmt("ksv c=%.2f qd", c) + fmt(" %.3g", d));
    o.require(positivity_on_circle(ksv_qd(c), 4096).positive, fmt("ksv c=%.2f positivity", c));
    o.require(reflection_symmetry(ksv_qd(c), 256) < 1e-12, fmt("ksv c=%.2f reflection", c));
  }
  for (double c : {0.05, 0.2, 0.3}) {
    const double d = qd_match(DropletModel::of(DropletFamily::two_pole(c)), 256);
    worst = std::max(worst, d);
    o.require(d < 1e-11, fmt("twopole c=%.2f qd", c) + fmt(" %.3g", d));
    o.require(positivity_on_circle(two_pole_qd(c), 4096).positive, fmt("twopole c=%.2f positivity", c));
    o.require(reflection_symmetry(two_pole_qd(c), 256) < 1e-12, fmt("twopole c=%.2f reflection", c));
  }
  if (o.pass) o.detail = fmt("max relative deviation %.3g", worst);
  return o;
}

Outcome c07() {
  Outcome o;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> rad(0.05, 0.99), ang(-pi, pi);
  double worst = 0.0;
  for (double c : {0.1, 0.2, 0.3}) {
    const auto a = DropletFamily::m_pole(2, c), b = DropletFamily::two_pole(c);
    for (int k = 0; k < 1000; ++k) {
      const cplx w = std::polar(rad(rng), ang(rng));
      if (std::abs(w * w - c * c) < 1e-6) continue;
      worst = std::max(worst, std::abs(phi(a, w) + phi(b, w)));
    }
    o.require(constants(a) == constants(b), fmt("constants differ at c=%.2f", c));
  }
  o.require(worst < 1e-13, fmt("max |phi_m2 + phi_twopole| = %.3g", worst));
  if (o.pass) o.detail = fmt("max pointwise deviation %.3g", worst);
  return o;
}

Outcome c08() {
  Outcome o;
  const double a = q_limit_check(0.3, 1e-3), b = q_limit_check(0.3, 1e-4);
  const double ratio = a / b;
  o.require(ratio >= 10.0 / 1.5 && ratio <= 15.0, fmt("ratio %.4f", ratio));
  o.detail += (o.detail.empty() ? "" : "; ") + fmt("sup at q=1e-3: %.4g", a) + fmt(", q=1e-4: %.4g", b) +
              fmt(", ratio %.4f", ratio);
  return o;
}

Outcome c09() {
  Outcome o;
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0), ang(-pi, pi);
  double pid = 0.0;
  for (double r : {0.1, 0.3, 0.45, 0.6}) {
    const AnnulusConfig cfg{r, 0.5 * (1.0 + r)};
    for (int k = 0; k < 100; ++k) {
      const cplx z = std::polar(r + (1.0 - r) * u(rng), ang(rng));
      const cplx pz = prime_P(z, cfg);
      pid = std::max({pid, std::abs(prime_P(1.0 / z, cfg) + pz / z), std::abs(prime_P(r * r * z, cfg) + pz / z)});
    }
  }
  o.require(pid < 1e-12, fmt("P identity %.3g", pid));

  const AnnulusConfig cfg{0.3, 0.5};
  int positive_pairs = 0;
  for (int k = 0; k < 20; ++k) {
    const double a = ang(rng);
    const PrimeFactor fac{std::polar(0.32 + 0.66 * u(rng), a), std::polar(0.32 + 0.66 * u(rng), a)};
    if (annulus_qd_positivity({fac}, cfg, 128).positive) ++positive_pairs;
  }
  o.require(positive_pairs == 20, std::to_string(positive_pairs) + "/20 f_AB pairs positive");

  const double theta = std::max(theta_prime_consistency(cfg, {0.6}, 32),
                                theta_prime_consistency(AnnulusConfig{0.5, 0.7}, {0.6, 0.85}, 32));
  o.require(theta < 1e-10, fmt("theta ratio %.3g", theta));
  const auto forms = annulus_form_agreement(cfg, std::sqrt(cfg.r), 64);
  o.require(forms.theta < 1e-9, fmt("phi' forms %.3g", forms.theta));
  const double spread = period_spread(annulus_periods(cfg, {0.35, 0.5, 0.7, 0.9, 0.99}));
  o.require(spread < 1e-10, fmt("period spread %.3g", spread));
  if (o.pass)
    o.detail = fmt("P %.3g", pid) + fmt(", theta %.3g", theta) + fmt(", forms %.3g", forms.theta) +
               fmt(", periods %.3g", spread);
  return o;
}

Outcome c10() {
  Outcome o;
  double worst = 0.0;
  for (double c : {0.28, 0.30, 0.32}) {
    try {
      const auto w = droplet_width(c);
      worst = std::max(worst, w.deviation);
      o.require(w.deviation < 1e-8, fmt("width deviation %.3g", w.deviation));
    } catch (const ClosedFormMismatch& e) {
      o.require(false, e.what());
    }
  }
  const auto f = DropletFamily::two_pole(1.0 / 3.0);
  const double pinch = std::max(std::abs(phi(f, 1.0)), std::abs(phi(f, -1.0)));
  o.require(pinch < 1e-10, fmt("pinch |phi(+-1)| = %.3g", pinch));
  if (o.pass) o.detail = fmt("max width deviation %.3g", worst) + fmt(", pinch %.3g", pinch);
  return o;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome c11(const std::string& cli) {
  Outcome o;
  if (cli.empty()) {
    o.require(false, "no CLI path given");
    return o;
  }
  const auto dir = std::filesystem::temp_directory_path() / ("droplets_acceptance_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const std::vector<std::pair<std::string, std::string>> runs{
      {"boundary --family ksv --c 0.1,0.3,0.5 --n 1024 --csv", "csv"},
      {"boundary --family twopole --c 0.05:0.33:0.04 --n 1024 --svg", "svg"},
      {"verify --family twopole --c 0.25", "json"},
      {"thresholds --family ksv", "json"},
      {"annulus --r 0.3 --x 0.5 --probe identities", "json"},
      {"annulus --r 0.3 --x 0.35:0.95:0.1 --probe periods", "csv"}};
  int idx = 0;
  for (const auto& [args, ext] : runs) {
    std::string first;
    for (int rep = 0; rep < 2; ++rep) {
      const auto out = dir / ("run" + std::to_string(idx) + "_" + std::to_string(rep) + "." + ext);
      const std::string cmd = "\"" + cli + "\" " + args + " > \"" + out.string() + "\"";
      const int rc = std::system(cmd.c_str());
      o.require(rc == 0, "'" + args + "' exited with " + std::to_string(rc));
      const std::string body = slurp(out);
      o.require(!body.empty(), "'" + args + "' wrote nothing");
      if (rep == 0) first = body;
      else o.require(body == first, "'" + args + "' output differs between runs");
    }
    ++idx;
  }
  std::filesystem::remove_all(dir);
  if (o.pass) o.detail = std::to_string(runs.size()) + " commands byte-identical across repeated runs";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 2 ? argv[2] : "";
  std::vector<int> which;
  if (argc > 1) which.push_back(std::atoi(argv[1]));
  else
    for (int k = 1; k <= 11; ++k) which.push_back(k);

  bool all = true;
  for (int k : which) {
    Outcome o;
    try {
      switch (k) {
        case 1: o = c01(); break;
        case 2: o = c02(); break;
        case 3: o = c03(); break;
        case 4: o = c04(); break;
        case 5: o = c05(); break;
        case 6: o = c06(); break;
        case 7: o = c07(); break;
        case 8: o = c08(); break;
        case 9: o = c09(); break;
        case 10: o = c10(); break;
        case 11: o = c11(cli); break;
        default: std::cerr << "unknown criterion " << k << '\n'; return 2;
      }
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("criterion %02d %s: %s\n", k, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
