#include "qdlab/families.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "qdlab/polynomial.hpp"

namespace qdlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

RationalQD normalize(const RationalQD& q, double target, const QuadratureConfig& cfg) {
  const double m = total_mass(q, cfg).value;
  if (!(m > cfg.abs_floor)) throw Error(ErrorCode::kZeroMass, "family member has no mass");
  return q.scaled(target / m);
}

bool same_double(cplx x, cplx y) { return std::abs(x - y) <= kIdentityTol * std::max(1.0, std::abs(x)); }

}  // namespace

void Example42Params::validate() const {
  if (!(a > 0.0) || !std::isfinite(b)) throw Error(ErrorCode::kInvalidArgument, "need a > 0");
  if (a == b) throw Error(ErrorCode::kPoleCollision, "a = b merges the symmetric poles");
  if (!(b > a)) throw Error(ErrorCode::kInvalidArgument, "need b > a");
  if (a == 1.0 || b == 1.0) throw Error(ErrorCode::kPoleCollision, "a symmetric pole collides with the pole at 1");
  if (p_coeffs[2] == 0.0) throw Error(ErrorCode::kInvalidArgument, "numerator must have degree exactly 2");
  if (!(target_mass > 0.0)) throw Error(ErrorCode::kInvalidArgument, "target mass must be positive");
}

Example42Params Example42Params::geometric(int n) {
  Example42Params p;
  p.a = std::ldexp(1.0, -n);
  p.b = 3.0 * p.a;
  return p;
}

Example42Params Example42Params::control(int /*n*/) { return Example42Params{}; }

RationalQD example42_build(const Example42Params& params, const QuadratureConfig& cfg) {
  params.validate();
  const Polynomial p({params.p_coeffs[0], params.p_coeffs[1], params.p_coeffs[2]});
  const std::vector<cplx> poles{params.a, -params.a, params.b, -params.b, 1.0};
  const auto roots = p.roots();
  for (cplx pole : poles) {
    for (cplx z : roots) {
      if (same_double(z, pole)) throw Error(ErrorCode::kPoleCollision, "numerator vanishes at a pole");
    }
  }
  std::vector<DivisorPoint> zs;
  for (cplx z : roots) zs.push_back({z, 1});
  std::vector<DivisorPoint> ps;
  for (cplx z : poles) ps.push_back({z, 1});
  return normalize(RationalQD(params.p_coeffs[2], zs, ps), params.target_mass, cfg);
}

void Example41Params::validate() const {
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "the clustered family needs n >= 2");
  if (cluster_center == 0.0) throw Error(ErrorCode::kPoleCollision, "cluster centre collides with the pole at 0");
  if (!(target_mass > 0.0)) throw Error(ErrorCode::kInvalidArgument, "target mass must be positive");
}

double Example41Params::log_R1() const { return -kTwoPi * n * n; }
double Example41Params::log_R2() const { return -kTwoPi * n * (n - 1.0); }
double Example41Params::log_R3() const { return -kTwoPi * n; }
double Example41Params::R1() const { return std::exp(log_R1()); }
double Example41Params::R2() const { return std::exp(log_R2()); }
double Example41Params::R3() const { return std::exp(log_R3()); }

RationalQD example41_build(const Example41Params& params, const QuadratureConfig& cfg) {
  params.validate();
  const cplx c = params.cluster_center;
  const double r1 = params.R1();
  const double r2 = params.R2();
  if (params.R3() >= std::abs(c)) throw Error(ErrorCode::kPoleCollision, "cluster reaches the pole at 0");
  const std::vector<double> offsets{0.5 * r1, -0.5 * r1, r2, -r2};
  std::vector<DivisorPoint> ps{{0.0, 1}};
  for (double d : offsets) {
    const cplx z = c + d;
    // the stored location must still resolve the offset
    if (!(std::abs((z - c) - d) <= 1e-3 * std::abs(d))) {
      throw Error(ErrorCode::kPoleCollision, "cluster offsets are below double resolution at this centre");
    }
    ps.push_back({z, 1});
  }
  const std::vector<DivisorPoint> zs{{c + cplx(0.0, r1), 1}, {c - cplx(0.0, r1), 1}};
  return normalize(RationalQD(1.0, zs, ps, 0.0), params.target_mass, cfg);
}

std::vector<SweepRow> efficiency_sweep(const FamilyGenerator& family, const std::vector<int>& indices,
                                       const QuadratureConfig& cfg, const TruncationPolicy& policy,
                                       const ConcentrationRegion& concentration) {
  std::vector<SweepRow> rows;
  for (int idx : indices) {
    SweepRow row;
    row.index = idx;
    try {
      const RationalQD q = family(idx);
      const EfficiencyReport rep = efficiency_report(q, cfg, policy);
      row.mass = rep.mass;
      row.pushforward_mass = rep.pushforward_mass;
      row.ratio = rep.ratio;
      row.error_estimate = rep.ratio_error;
      row.concentration_fraction = kNaN;
      if (concentration) {
        if (auto region = concentration(idx)) {
          row.concentration_fraction = mass_on_region(q, *region, cfg).value / rep.mass;
        }
      }
    } catch (const Error& e) {
      row.mass = row.pushforward_mass = row.ratio = row.concentration_fraction = row.error_estimate = kNaN;
      row.error = e.what();
    }
    rows.push_back(row);
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "index,mass,pushforward_mass,ratio,concentration_fraction,error_estimate\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%.10g,%.10g,%.10g,%.10g,%.10g\n", r.index, r.mass, r.pushforward_mass, r.ratio,
                  r.concentration_fraction, r.error_estimate);
    out += buf;
  }
  return out;
}

}  // namespace qdlab
