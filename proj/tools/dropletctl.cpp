// dropletctl: boundary data, verification reports, thresholds and annulus
// probes for the exact droplet families.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "droplets/droplets.hpp"

using namespace droplets;

namespace {

/// "v", "a,b,c" or "lo:hi:step" (inclusive), returned sorted.
std::vector<double> parse_values(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    double lo, hi, step;
    char c1, c2;
    std::istringstream is(text);
    if (!(is >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' || !(step > 0.0) || hi < lo)
      throw CLI::ValidationError("range", "expected lo:hi:step with step > 0, got '" + text + "'");
    const long count = long(std::floor((hi - lo) / step + 1e-9)) + 1;
    for (long k = 0; k < count; ++k) out.push_back(lo + double(k) * step);
  } else {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        std::size_t used = 0;
        out.push_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw CLI::ValidationError("value", "not a number: '" + item + "'");
      }
    }
  }
  if (out.empty()) throw CLI::ValidationError("value", "empty parameter list");
  std::sort(out.begin(), out.end());
  return out;
}

FamilyTag parse_family(const std::string& s) {
  for (FamilyTag t : {FamilyTag::circle, FamilyTag::mcleod, FamilyTag::ksv, FamilyTag::two_pole, FamilyTag::m_pole,
                      FamilyTag::two_pole_general})
    if (s == tag_name(t)) return t;
  throw CLI::ValidationError("family", "unknown family '" + s + "'");
}

DropletFamily make_family(FamilyTag tag, int m, double c, double q) {
  switch (tag) {
    case FamilyTag::circle: return DropletFamily::circle();
    case FamilyTag::mcleod: return DropletFamily::mcleod();
    case FamilyTag::ksv: return DropletFamily::ksv(c);
    case FamilyTag::two_pole: return DropletFamily::two_pole(c);
    case FamilyTag::m_pole: return DropletFamily::m_pole(m, c);
    case FamilyTag::two_pole_general: return DropletFamily::two_pole_general(c, q);
  }
  throw std::logic_error("make_family");
}

bool has_parameter(FamilyTag tag) { return tag != FamilyTag::circle && tag != FamilyTag::mcleod; }

/// Runs fn over values concurrently; results keep the order of values.
template <class T, class Fn>
std::vector<T> sweep(const std::vector<double>& values, Fn fn) {
  std::vector<std::future<T>> jobs;
  for (double v : values) jobs.push_back(std::async(std::launch::async, fn, v));
  std::vector<T> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

/// Key-value overrides from the --config file.
struct RunConfig {
  VerificationTolerances tol;
  int samples = 256;
  std::string output_dir;

  void load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const auto eq = line.find('=');
      auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r"), b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
      };
      if (trim(line).empty()) continue;
      if (eq == std::string::npos) throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key=value");
      const std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
      auto positive = [&](double v) {
        if (!(v > 0.0)) throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + key + " must be positive");
        return v;
      };
      if (key == "boundary_tol") tol.boundary = positive(std::stod(val));
      else if (key == "residue_tol") tol.residue = positive(std::stod(val));
      else if (key == "closed_form_tol") tol.closed_form = positive(std::stod(val));
      else if (key == "qd_tol") tol.qd = positive(std::stod(val));
      else if (key == "samples") samples = int(positive(std::stod(val)));
      else if (key == "output_dir") output_dir = val;
      else throw std::runtime_error(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
};

/// Writes to stdout when path is empty; relative paths go under the output
/// directory (config key, then DROPLETS_OUTPUT_DIR).
void emit(const std::string& path, const RunConfig& rc, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::filesystem::path p(path);
  std::string dir = rc.output_dir;
  if (dir.empty())
    if (const char* env = std::getenv("DROPLETS_OUTPUT_DIR")) dir = env;
  if (p.is_relative() && !dir.empty()) p = std::filesystem::path(dir) / p;
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << content;
  if (!out) throw std::runtime_error("write failed for " + p.string());
}

std::string svg_meta(const std::string& family, const std::string& params) {
  return "family=" + family + " params=" + params;
}

std::string join_values(const std::vector<double>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + format_number(v[k]);
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact electrified droplets: boundary data, verification and thresholds"};
  app.set_version_flag("--version", std::string(version));
  app.require_subcommand(1);

  RunConfig rc;
  std::string config_path;
  app.add_option("--config", config_path, "key=value file with tolerance overrides")->check(CLI::ExistingFile);

  // boundary
  auto* boundary = app.add_subcommand("boundary", "boundary curve as CSV or SVG");
  std::string b_family = "circle", b_c = "0.3", b_out, b_q = "0.001";
  int b_m = 3, b_n = 1024;
  bool b_svg = false, b_csv = false;
  boundary->add_option("--family", b_family, "circle|mcleod|ksv|twopole|mpole|twopole-general");
  boundary->add_option("--c", b_c, "value, list a,b or range lo:hi:step");
  boundary->add_option("--m", b_m, "number of poles (mpole)");
  boundary->add_option("--q", b_q, "second pole (twopole-general)");
  boundary->add_option("--n", b_n, "boundary nodes (power of two)");
  boundary->add_flag("--svg", b_svg, "SVG output");
  boundary->add_flag("--csv", b_csv, "CSV output (default)");
  boundary->add_option("--out", b_out, "output file (stdout when omitted)");

  // verify
  auto* verify = app.add_subcommand("verify", "verification report as JSON");
  std::string v_family = "circle", v_c = "0.3", v_out;
  int v_m = 3, v_n = 4096;
  double v_perturb = 0.0;
  verify->add_option("--family", v_family, "circle|mcleod|ksv|twopole|mpole");
  verify->add_option("--c", v_c, "value, list or range");
  verify->add_option("--m", v_m, "number of poles (mpole)");
  verify->add_option("--n", v_n, "boundary nodes");
  verify->add_option("--perturb-tau", v_perturb, "add to tau before checking");
  verify->add_option("--out", v_out, "output file");

  // thresholds
  auto* thresholds = app.add_subcommand("thresholds", "convexity and univalency thresholds as JSON");
  std::string t_family = "ksv", t_out;
  int t_m = 3;
  thresholds->add_option("--family", t_family, "ksv|twopole|mpole")->required();
  thresholds->add_option("--m", t_m, "number of poles (mpole)");
  thresholds->add_option("--out", t_out, "output file");

  // annulus
  auto* annulus = app.add_subcommand("annulus", "doubly connected probes");
  double a_r = 0.3;
  std::string a_x = "0.5", a_probe = "identities", a_out;
  int a_n = 1024;
  bool a_svg = false;
  annulus->add_option("--r", a_r, "inner radius");
  annulus->add_option("--x", a_x, "pole parameter, value or range");
  annulus->add_option("--probe", a_probe, "identities|periods|trace")
      ->check(CLI::IsMember({"identities", "periods", "trace"}));
  annulus->add_option("--n", a_n, "trace nodes (power of two)");
  annulus->add_flag("--svg", a_svg, "SVG trace output");
  annulus->add_option("--out", a_out, "output file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!config_path.empty()) rc.load(config_path);
    if (!is_power_of_two(rc.samples)) throw std::runtime_error("config: samples must be a power of two");

    if (*boundary) {
      if (b_svg && b_csv) throw std::runtime_error("choose one of --csv and --svg");
      if (!is_power_of_two(b_n) || b_n < 64) throw std::runtime_error("--n must be a power of two >= 64");
      const FamilyTag tag = parse_family(b_family);
      const std::vector<double> cs = has_parameter(tag) ? parse_values(b_c) : std::vector<double>{0.0};
      const double q = parse_values(b_q).front();
      auto traces = sweep<BoundaryTrace>(cs, [&](double c) {
        auto f = make_family(tag, b_m, c, q);
        BoundaryTrace t = boundary_trace(f, b_n, false);
        if (t.degenerate.empty()) {
          for (std::size_t k = 0; k < t.size(); ++k) {
            try {
              t.curvature[k] = curvature_hat(f, t.thetas[k]);
            } catch (const Error&) {
            }
          }
        }
        return t;
      });
      std::ostringstream os;
      std::string flagged;
      for (std::size_t i = 0; i < cs.size(); ++i)
        if (!traces[i].degenerate.empty()) flagged += (flagged.empty() ? "" : ",") + format_number(cs[i]);
      if (b_svg) {
        std::vector<SvgCurve> curves;
        for (const auto& t : traces) curves.push_back({t.polyline().points, true});
        std::string meta = svg_meta(tag_name(tag), has_parameter(tag) ? "c=" + join_values(cs) : "none");
        if (tag == FamilyTag::m_pole) meta += " m=" + std::to_string(b_m);
        if (!flagged.empty()) meta += " degenerate_c=" + flagged;
        write_svg(os, curves, svg_half_width(tag), meta);
      } else if (cs.size() == 1) {
        write_trace_csv(os, traces.front());
      } else {
        os << "c,theta,x,y,curvature\n";
        for (std::size_t i = 0; i < cs.size(); ++i) {
          std::ostringstream one;
          write_trace_csv(one, traces[i]);
          std::istringstream lines(one.str());
          std::string line;
          std::getline(lines, line);  // header
          while (std::getline(lines, line)) os << format_number(cs[i]) << ',' << line << '\n';
        }
      }
      if (!flagged.empty()) std::cerr << "warning: phi' vanishes on the boundary for c = " << flagged << '\n';
      emit(b_out, rc, os.str());
      return 0;
    }

    if (*verify) {
      const FamilyTag tag = parse_family(v_family);
      if (tag == FamilyTag::two_pole_general) throw std::runtime_error("verify: twopole-general has no (p, tau) pair");
      const std::vector<double> cs = has_parameter(tag) ? parse_values(v_c) : std::vector<double>{0.0};
      auto reports = sweep<ojson>(cs, [&](double c) {
        auto f = make_family(tag, v_m, c, 0.0);
        auto mdl = DropletModel::of(f);
        if (v_perturb != 0.0) mdl = mdl.with_tau(mdl.tau + v_perturb);
        return to_json(verify_model(mdl, v_n, rc.tol, rc.samples), f);
      });
      bool pass = true;
      for (const auto& r : reports) pass = pass && r["pass"].get<bool>();
      const ojson doc = reports.size() == 1 ? reports.front() : ojson(reports);
      emit(v_out, rc, doc.dump(2) + "\n");
      return pass ? 0 : 1;
    }

    if (*thresholds) {
      const FamilyTag tag = parse_family(t_family);
      if (tag != FamilyTag::ksv && tag != FamilyTag::two_pole && tag != FamilyTag::m_pole)
        throw std::runtime_error("thresholds: family must be ksv, twopole or mpole");
      auto conv = std::async(std::launch::async, [&] { return convexity_threshold(tag, t_m); });
      auto univ = std::async(std::launch::async, [&] { return univalency_threshold(tag, t_m); });
      ojson doc{{"family", tag_name(tag)}};
      if (tag == FamilyTag::m_pole) doc["m"] = t_m;
      const auto cv = conv.get(), uv = univ.get();
      doc["convexity"] = to_json(cv);
      doc["univalency"] = to_json(uv);
      bool pass = !uv.interval;
      if (std::isfinite(cv.cross_check)) pass = pass && std::abs(cv.value - cv.cross_check) < 1e-8;
      if (tag == FamilyTag::two_pole) {
        ojson widths = ojson::array();
        for (double c : {0.28, 0.30, 0.32}) {
          const auto w = droplet_width(c);
          widths.push_back({{"c", json_number(c)}, {"formula", json_number(w.formula)}, {"trace", json_number(w.trace)},
                            {"deviation", json_number(w.deviation)}});
          pass = pass && w.deviation < 1e-8;
        }
        doc["width"] = widths;
      }
      doc["pass"] = pass;
      emit(t_out, rc, doc.dump(2) + "\n");
      return pass ? 0 : 1;
    }

    if (*annulus) {
      const std::vector<double> xs = parse_values(a_x);
      if (a_probe == "periods") {
        auto parts = sweep<PeriodScan>(xs, [&](double x) { return annulus_period_scan(a_r, {x}); });
        PeriodScan all;
        for (const auto& p : parts) all.rows.push_back(p.rows.front());
        std::ostringstream os;
        write_period_scan_csv(os, all);
        emit(a_out, rc, os.str());
        return 0;
      }
      if (xs.size() != 1) throw std::runtime_error("annulus: --probe " + a_probe + " takes a single x");
      const AnnulusConfig cfg{a_r, xs.front()};
      cfg.validate();
      if (a_probe == "identities") {
        std::mt19937_64 rng(2024);
        std::uniform_real_distribution<double> rad(cfg.r, 1.0), ang(-pi, pi);
        double p_inv = 0.0, p_shift = 0.0;
        for (int k = 0; k < 100; ++k) {
          const cplx z = std::polar(rad(rng), ang(rng));
          const cplx pz = prime_P(z, cfg);
          p_inv = std::max(p_inv, std::abs(prime_P(1.0 / z, cfg) + pz / z));
          p_shift = std::max(p_shift, std::abs(prime_P(cfg.r * cfg.r * z, cfg) + pz / z));
        }
        const double theta_dev = theta_prime_consistency(cfg, {std::sqrt(cfg.r), 0.5 * (1.0 + cfg.r)}, 32);
        const auto forms = annulus_form_agreement(cfg, std::sqrt(cfg.r), 64);
        std::vector<double> radii;
        for (int k = 1; k <= 5; ++k) radii.push_back(cfg.r + (1.0 - cfg.r) * k / 6.0);
        const double spread = period_spread(annulus_periods(cfg, radii));
        ojson sing = ojson::array();
        for (cplx z : annulus_singularities(cfg, cfg.r * cfg.r, 1.0 / (cfg.r * cfg.r))) sing.push_back(json_complex(z));
        ojson doc{{"r", json_number(cfg.r)},
                  {"x", json_number(cfg.x)},
                  {"prime_inversion", json_number(p_inv)},
                  {"prime_shift", json_number(p_shift)},
                  {"theta_ratio_deviation", json_number(theta_dev)},
                  {"theta_ratio", json_complex(theta_ratio(std::sqrt(cfg.r), cfg))},
                  {"phi_prime_theta_form_deviation", json_number(forms.theta)},
                  {"phi_prime_theta_constant", json_complex(forms.theta_constant)},
                  {"phi_prime_stated_prefactor_deviation", json_number(forms.theta_stated)},
                  {"phi_prime_quotient_deviation", json_number(forms.quotient)},
                  {"period_radius_spread", json_number(spread)},
                  {"singularities", sing}};
        const bool pass = p_inv < 1e-12 && p_shift < 1e-12 && theta_dev < 1e-10 && forms.theta < 1e-9 && spread < 1e-10;
        doc["pass"] = pass;
        emit(a_out, rc, doc.dump(2) + "\n");
        return pass ? 0 : 1;
      }
      // trace
      if (!is_power_of_two(a_n) || a_n < 64) throw std::runtime_error("--n must be a power of two >= 64");
      const auto t = annulus_boundary_trace(cfg, a_n);
      std::ostringstream os;
      if (a_svg) {
        double half = 0.0;
        for (const auto* c : {&t.outer, &t.inner})
          for (cplx z : c->points) half = std::max({half, std::abs(z.real()), std::abs(z.imag())});
        half = std::ceil(1.1 * half);
        write_svg(os, {{t.outer.points, false}, {t.inner.points, false}}, half,
                  svg_meta("annulus", "r=" + format_number(cfg.r) + ",x=" + format_number(cfg.x)) +
                      " open_curve=" + (t.open_curve ? "true" : "false"));
      } else {
        write_annulus_csv(os, t);
      }
      if (t.open_curve)
        std::cerr << "note: period " << format_number(t.period.real()) << (t.period.imag() < 0 ? "" : "+")
                  << format_number(t.period.imag()) << "i is nonzero, traces are open curves\n";
      emit(a_out, rc, os.str());
      return 0;
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
