#include "qdlab/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qdlab/families.hpp"
#include "qdlab/json_io.hpp"
#include "qdlab/limit_models.hpp"
#include "qdlab/orbits.hpp"

namespace qdlab {

namespace {

using nlohmann::json;

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string fmt(cplx z) {
  if (z.imag() == 0.0) return fmt(z.real());
  return fmt(z.real()) + (std::signbit(z.imag()) ? "-" : "+") + fmt(std::abs(z.imag())) + "i";
}

// JSON numbers carry the same 10 significant digits as the text output.
double r10(double x) { return std::isfinite(x) ? std::stod(fmt(x)) : x; }
json jc(cplx z) { return json::array({r10(z.real()), r10(z.imag())}); }

std::string read_source(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (s[first] == '{' || s[first] == '[')) return s;
  std::ifstream in(s);
  if (!in) throw Error(ErrorCode::kInvalidArgument, "cannot open input file '" + s + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RationalQD load_qd(const std::string& s) { return qd_from_json(parse_json(read_source(s))); }
Region load_region(const std::string& s) { return region_from_json(parse_json(read_source(s))); }

cplx parse_complex(const std::string& s) {
  std::stringstream ss(s);
  double re = 0.0;
  double im = 0.0;
  char comma = 0;
  if (!(ss >> re)) throw Error(ErrorCode::kInvalidArgument, "bad complex number '" + s + "' (use re,im)");
  if (ss >> comma) {
    if (comma != ',' || !(ss >> im)) throw Error(ErrorCode::kInvalidArgument, "bad complex number '" + s + "'");
  }
  std::string rest;
  if (ss >> rest) throw Error(ErrorCode::kInvalidArgument, "bad complex number '" + s + "'");
  return {re, im};
}

std::vector<int> parse_range(const std::string& s) {
  const auto dots = s.find("..");
  int lo = 0;
  int hi = 0;
  try {
    if (dots == std::string::npos) {
      lo = hi = std::stoi(s);
    } else {
      lo = std::stoi(s.substr(0, dots));
      hi = std::stoi(s.substr(dots + 2));
    }
  } catch (const std::exception&) {
    throw Error(ErrorCode::kInvalidArgument, "bad index range '" + s + "' (use lo..hi)");
  }
  if (hi < lo) throw Error(ErrorCode::kInvalidArgument, "empty index range");
  std::vector<int> out;
  for (int i = lo; i <= hi; ++i) out.push_back(i);
  return out;
}

struct Globals {
  double tol = 1e-4;
  int max_depth = 24;
  int trunc_k = 64;
  double strip_y = 0.0;
  double tail_tol = 1e-6;
  bool json_out = false;
  bool pretty = false;
  std::string out_path;
  long seed = 0;
  std::string strategy = "voronoi";

  QuadratureConfig cfg() const {
    QuadratureConfig c;
    c.rel_tol = tol;
    c.max_depth = max_depth;
    c.strategy = strategy == "quadtree" ? Strategy::kPoleDiskQuadtree : Strategy::kVoronoiLogPolar;
    c.validate();
    return c;
  }
  TruncationPolicy policy() const {
    TruncationPolicy p;
    p.K = trunc_k;
    p.Y = strip_y;
    p.tail_tol = tail_tol;
    p.validate();
    return p;
  }
};

// A result is a list of (key, value) lines plus its JSON form.
class Report {
 public:
  void add(const std::string& key, double v) {
    lines_.push_back(key + "=" + fmt(v));
    j_[key] = r10(v);
  }
  void add(const std::string& key, cplx v) {
    lines_.push_back(key + "=" + fmt(v));
    j_[key] = jc(v);
  }
  void add(const std::string& key, long v) {
    lines_.push_back(key + "=" + std::to_string(v));
    j_[key] = v;
  }
  void add(const std::string& key, const std::string& v) {
    lines_.push_back(key + "=" + v);
    j_[key] = v;
  }
  void add(const std::string& key, bool v) {
    lines_.push_back(key + "=" + (v ? "true" : "false"));
    j_[key] = v;
  }
  void line(const std::string& text) { extra_.push_back(text); }
  json& raw() { return j_; }

  std::string render(const Globals& g) const {
    if (g.json_out) return j_.dump(g.pretty ? 2 : -1) + "\n";
    std::string s;
    for (const auto& l : extra_) s += l + "\n";
    for (const auto& l : lines_) s += l + "\n";
    return s;
  }

 private:
  std::vector<std::string> lines_;
  std::vector<std::string> extra_;
  json j_ = json::object();
};

void add_mass(Report& r, const std::string& key, const MassResult& m) {
  r.add(key, m.value);
  r.add(key + "_error", m.error_estimate);
  r.add(key + "_cells", static_cast<long>(m.cells_evaluated));
}

void emit(const Globals& g, const std::string& text, std::ostream& out) {
  if (g.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(g.out_path);
  if (!f) throw Error(ErrorCode::kInvalidArgument, "cannot write '" + g.out_path + "'");
  f << text;
}

std::string svg_scatter(const RationalQD& q) {
  std::vector<cplx> pts = q.pole_locations();
  for (cplx z : q.zero_locations()) pts.push_back(z);
  double ext = 1e-300;
  cplx mid = 0.0;
  for (cplx z : pts) mid += z;
  if (!pts.empty()) mid /= static_cast<double>(pts.size());
  for (cplx z : pts) ext = std::max(ext, std::max(std::abs(z.real() - mid.real()), std::abs(z.imag() - mid.imag())));
  ext *= 1.2;
  auto px = [&](cplx z) {
    return std::pair<double, double>{250.0 + 230.0 * (z.real() - mid.real()) / ext,
                                     250.0 - 230.0 * (z.imag() - mid.imag()) / ext};
  };
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"500\" height=\"500\" viewBox=\"0 0 500 500\">\n";
  s += "<rect width=\"500\" height=\"500\" fill=\"white\"/>\n";
  s += "<line x1=\"0\" y1=\"250\" x2=\"500\" y2=\"250\" stroke=\"#ccc\"/>\n";
  s += "<line x1=\"250\" y1=\"0\" x2=\"250\" y2=\"500\" stroke=\"#ccc\"/>\n";
  for (const auto& p : q.poles()) {
    const auto [x, y] = px(p.z);
    s += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" fill=\"#c00\" font-size=\"14\" text-anchor=\"middle\" "
         "dominant-baseline=\"middle\">x</text>\n";
  }
  for (const auto& z : q.zeros()) {
    const auto [x, y] = px(z.z);
    s += "<circle cx=\"" + fmt(x) + "\" cy=\"" + fmt(y) + "\" r=\"4\" fill=\"none\" stroke=\"#00c\"/>\n";
  }
  s += "<text x=\"8\" y=\"492\" font-size=\"11\">center " + fmt(mid) + ", half-width " + fmt(ext) + "</text>\n";
  s += "</svg>\n";
  return s;
}

int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::kNoConvergence: return 3;
    case ErrorCode::kInconclusive: return 4;
    default: return 2;
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"qdlab: masses and cosine push-forwards of rational quadratic differentials"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--tol", g.tol, "relative quadrature tolerance")->capture_default_str();
  app.add_option("--max-depth", g.max_depth, "maximum refinement depth")->capture_default_str();
  app.add_option("--trunc-k", g.trunc_k, "preimage index cap for pointwise push-forward densities")
      ->capture_default_str();
  app.add_option("--strip-y", g.strip_y, "strip half-height (0 = from the tail bound)")->capture_default_str();
  app.add_option("--tail-tol", g.tail_tol, "truncation tail tolerance (<= 0 disables the check)")
      ->capture_default_str();
  app.add_option("--strategy", g.strategy, "quadrature strategy")
      ->check(CLI::IsMember({"voronoi", "quadtree"}))
      ->capture_default_str();
  app.add_flag("--json", g.json_out, "machine-readable JSON output");
  app.add_flag("--pretty", g.pretty, "human-readable output (indented with --json)");
  app.add_option("--out", g.out_path, "write the result to this file");
  app.add_option("--seed", g.seed, "seed recorded with the run")->capture_default_str();

  std::string qd_src;
  std::string region_src;
  std::string model_src;

  auto* mass = app.add_subcommand("mass", "mass of a differential on a region (default: the plane)");
  mass->add_option("--qd", qd_src, "differential: JSON file or inline JSON")->required();
  mass->add_option("--region", region_src, "region: JSON file or inline JSON");

  std::string w_src;
  std::string method = "strip";
  auto* push = app.add_subcommand("push", "cosine push-forward: mass, or the density at --w");
  push->add_option("--qd", qd_src, "differential")->required();
  push->add_option("--w", w_src, "evaluate the density at w = re,im");
  push->add_option("--method", method, "mass method")
      ->check(CLI::IsMember({"strip", "wplane", "both"}))
      ->capture_default_str();
  push->add_option("--region", region_src, "restrict the differential to this bounded region first");
  std::string lambda_src = "1";
  push->add_option("--lambda", lambda_src, "map z -> lambda cos z (density only)")->capture_default_str();

  auto* eff = app.add_subcommand("eff", "efficiency ratio ||cos_* q|| / ||q||");
  eff->add_option("--qd", qd_src, "differential")->required();

  std::string family = "ex42";
  std::string range = "1..8";
  std::string schedule = "geometric";
  auto* sweep = app.add_subcommand(
      "sweep", "efficiency sweep over a family; CSV columns: index, mass, pushforward_mass, ratio, "
               "concentration_fraction (mass share in disk(0, 10a) for ex42, disk(center, R3) for ex41), "
               "error_estimate (absolute error of the ratio)");
  sweep->add_option("--family", family, "family")->check(CLI::IsMember({"ex42", "ex41"}))->capture_default_str();
  sweep->add_option("--n", range, "index range lo..hi")->capture_default_str();
  sweep->add_option("--schedule", schedule, "ex42 schedule: geometric (a = 2^-n, b = 3a) or control (a = 0.5)")
      ->check(CLI::IsMember({"geometric", "control"}))
      ->capture_default_str();

  double r_in = 0.0;
  double r_out = 0.0;
  std::string center_src = "0";
  auto* ann = app.add_subcommand("annulus", "round annulus: modulus and dz^2/z^2 mass, or the mass of --qd on it");
  ann->add_option("--r", r_in, "inner radius")->required();
  ann->add_option("--R", r_out, "outer radius")->required();
  ann->add_option("--center", center_src, "center re,im")->capture_default_str();
  ann->add_option("--qd", qd_src, "differential to integrate over the annulus");

  auto* limit = app.add_subcommand("limit", "limit-model tools");
  limit->require_subcommand(1);
  auto* ldetect = limit->add_subcommand("detect", "thick scaling from the tightest pole pair");
  ldetect->add_option("--qd", qd_src, "differential")->required();
  std::string a_src;
  std::string b_src;
  auto* ldist = limit->add_subcommand("distance", "||M^* q - q_model|| (M detected unless --a/--b given)");
  ldist->add_option("--qd", qd_src, "differential q_n")->required();
  ldist->add_option("--model", model_src, "limit model")->required();
  ldist->add_option("--a", a_src, "scaling factor re,im");
  ldist->add_option("--b", b_src, "base point re,im");
  std::string z_src;
  double sn_radius = 0.0;
  auto* lsn = limit->add_subcommand("sn", "S_n(z) at --z, or its sup deviation from z on |z| = --R");
  lsn->add_option("--a", a_src, "a re,im")->required();
  lsn->add_option("--b", b_src, "b re,im")->required();
  lsn->add_option("--z", z_src, "evaluation point re,im");
  lsn->add_option("--R", sn_radius, "radius for the sup deviation");
  double M_required = 1.0;
  auto* lconc = limit->add_subcommand("concentrate", "pole-cluster annulus with modulus >= --M");
  lconc->add_option("--qd", qd_src, "differential")->required();
  lconc->add_option("--M", M_required, "required modulus")->capture_default_str();

  std::string disk_center = "0";
  double disk_radius = 0.0;
  std::vector<std::string> lambdas_src;
  long k_window = 0;
  auto add_mc_options = [&](CLI::App* sub) {
    sub->add_option("--center", disk_center, "disk center re,im")->capture_default_str();
    sub->add_option("--radius", disk_radius, "disk radius")->required();
    sub->add_option("--lambda", lambdas_src, "stage multiplier re,im (repeat per stage)");
    sub->add_option("--k-window", k_window, "always test |k| <= window")->capture_default_str();
  };
  auto* lmc = limit->add_subcommand("mass-condition", "same as the top-level mass-condition");
  add_mc_options(lmc);
  auto* mc = app.add_subcommand("mass-condition", "certify k pi outside every stage image of a disk");
  add_mc_options(mc);

  int preperiod = 0;
  int period = 0;
  int sym_poles = -1;
  int crit_inside = 0;
  auto* portrait = app.add_subcommand("portrait", "postsingular set size, Teichmuller dimension, orbit diagram");
  portrait->add_option("--preperiod", preperiod, "steps from the critical point into the cycle")->required();
  portrait->add_option("--period", period, "cycle length")->required();
  portrait->add_option("--sym-poles", sym_poles, "also run the counting table with this many cos-symmetric poles");
  portrait->add_option("--crit-inside", crit_inside, "critical values inside the disk (0, 1, 2)")
      ->capture_default_str();

  auto* plot = app.add_subcommand("plot", "SVG scatter of poles (x) and zeros (o); written to --out");
  plot->add_option("--qd", qd_src, "differential")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    Report r;
    const QuadratureConfig cfg = g.cfg();
    const TruncationPolicy pol = g.policy();

    if (*mass) {
      const RationalQD q = load_qd(qd_src);
      const Region region = region_src.empty() ? Region::plane() : load_region(region_src);
      const MassResult m = mass_on_region(q, region, cfg);
      if (!g.json_out) {
        emit(g, fmt(m.value) + " ± " + fmt(m.error_estimate) + "\n", out);
        return 0;
      }
      add_mass(r, "mass", m);
    } else if (*push) {
      const RationalQD q = load_qd(qd_src);
      if (!w_src.empty()) {
        const cplx w = parse_complex(w_src);
        const CosineMap f(parse_complex(lambda_src));
        const DensityResult d = pushforward_density(f, q, w, pol);
        r.add("density", d.value);
        r.add("tail_bound", d.tail_bound);
        r.add("K_used", static_cast<long>(d.K_used));
        if (q.sphere_integrable()) {
          r.add("density_closed_form", CosPushforward(q).density(w / f.lambda) / (f.lambda * f.lambda));
        }
      } else if (!region_src.empty()) {
        add_mass(r, "pushforward_mass", restricted_cos_pushforward_mass(q, load_region(region_src), cfg, pol));
      } else {
        if (method != "wplane") add_mass(r, "pushforward_mass", cos_pushforward_mass(q, cfg, pol));
        if (method != "strip") {
          add_mass(r, "pushforward_mass_wplane", cos_pushforward_mass(q, cfg, pol, PushforwardMethod::kWPlane));
        }
      }
    } else if (*eff) {
      const EfficiencyReport e = efficiency_report(load_qd(qd_src), cfg, pol);
      r.add("mass", e.mass);
      r.add("pushforward_mass", e.pushforward_mass);
      r.add("ratio", e.ratio);
      r.add("ratio_error", e.ratio_error);
    } else if (*sweep) {
      const auto idx = parse_range(range);
      std::vector<SweepRow> rows;
      if (family == "ex42") {
        auto params = [&](int n) {
          return schedule == "control" ? Example42Params::control(n) : Example42Params::geometric(n);
        };
        rows = efficiency_sweep([&](int n) { return example42_build(params(n), cfg); }, idx, cfg, pol,
                                [&](int n) { return std::optional<Region>(Region::disk(0.0, 10.0 * params(n).a)); });
      } else {
        auto params = [](int n) {
          Example41Params p;
          p.n = n;
          return p;
        };
        rows = efficiency_sweep([&](int n) { return example41_build(params(n), cfg); }, idx, cfg, pol, [&](int n) {
          const Example41Params p = params(n);
          return std::optional<Region>(Region::disk(p.cluster_center, p.R3()));
        });
      }
      for (const auto& row : rows) {
        if (!row.error.empty()) err << "row " << row.index << ": " << row.error << "\n";
      }
      if (!g.json_out) {
        emit(g, sweep_csv(rows), out);
        return 0;
      }
      json arr = json::array();
      for (const auto& row : rows) {
        json jr = {{"index", row.index},
                   {"mass", r10(row.mass)},
                   {"pushforward_mass", r10(row.pushforward_mass)},
                   {"ratio", r10(row.ratio)},
                   {"concentration_fraction", r10(row.concentration_fraction)},
                   {"error_estimate", r10(row.error_estimate)}};
        if (!row.error.empty()) jr["error"] = row.error;
        arr.push_back(jr);
      }
      r.raw()["rows"] = arr;
    } else if (*ann) {
      r.add("modulus", annulus_modulus(r_in, r_out));
      if (qd_src.empty()) {
        r.add("log_mass", annulus_log_mass(r_in, r_out));
      } else {
        add_mass(r, "mass", mass_on_region(load_qd(qd_src), Region::annulus(parse_complex(center_src), r_in, r_out), cfg));
      }
    } else if (*limit) {
      if (*ldetect) {
        const ThickScaling t = detect_thick_scaling(load_qd(qd_src));
        r.add("a", t.M.a);
        r.add("b", t.M.b);
      } else if (*ldist) {
        const RationalQD q = load_qd(qd_src);
        AffineMap M;
        if (a_src.empty() != b_src.empty()) throw Error(ErrorCode::kInvalidArgument, "give both --a and --b or neither");
        M = a_src.empty() ? detect_thick_scaling(q).M : AffineMap(parse_complex(a_src), parse_complex(b_src));
        r.add("a", M.a);
        r.add("b", M.b);
        add_mass(r, "distance", limit_model_distance(q, M, load_qd(model_src), cfg));
      } else if (*lsn) {
        const cplx a = parse_complex(a_src);
        const cplx b = parse_complex(b_src);
        if (z_src.empty() && !(sn_radius > 0.0)) throw Error(ErrorCode::kInvalidArgument, "give --z or --R");
        if (!z_src.empty()) r.add("S", s_n_eval(a, b, parse_complex(z_src)));
        if (sn_radius > 0.0) r.add("sup_deviation", s_n_sup_deviation(a, b, sn_radius));
      } else if (*lconc) {
        const auto c = find_concentration_annulus(load_qd(qd_src), M_required);
        r.add("found", c.has_value());
        if (c) {
          r.add("center", c->center);
          r.add("inner_radius", c->inner_radius);
          r.add("outer_radius", c->outer_radius);
          r.add("modulus", c->modulus);
          r.add("poles_inside", static_cast<long>(c->poles_inside.size()));
        }
      }
    }

    if (*mc || *lmc) {
      std::vector<cplx> lambdas;
      for (const auto& s : lambdas_src) lambdas.push_back(parse_complex(s));
      const MassConditionResult res = mass_condition_check(parse_complex(disk_center), disk_radius, lambdas, k_window);
      r.add("holds", res.holds);
      if (!res.holds) {
        r.add("stage", static_cast<long>(res.stage));
        r.add("k", static_cast<long>(res.k));
        r.add("marginal", res.marginal);
      }
    } else if (*portrait) {
      const OrbitPortrait p = validate_portrait(preperiod, period);
      const int n = p.postsingular_size();
      const int dim = teich_dimension(p);
      r.line("|P_f|=" + std::to_string(n) + " dim=" + std::to_string(dim));
      r.line(orbit_diagram(p));
      r.raw()["postsingular_size"] = n;
      r.raw()["dimension"] = dim;
      r.raw()["orbit"] = orbit_diagram(p);
      if (sym_poles >= 0) {
        const FeasibilityVerdict v = counting_feasibility(sym_poles, crit_inside);
        const std::string verdict = v.verdict == Feasibility::kInfeasible ? "Infeasible" : "Indeterminate";
        r.add("feasibility", verdict);
        r.add("reason", v.reason);
      }
    } else if (*plot) {
      const std::string svg = svg_scatter(load_qd(qd_src));
      if (g.json_out) {
        r.raw()["svg"] = svg;
      } else {
        emit(g, svg, out);
        return 0;
      }
    }

    emit(g, r.render(g), out);
    return 0;
  } catch (const Error& e) {
    err << "qdlab: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    err << "qdlab: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace qdlab
