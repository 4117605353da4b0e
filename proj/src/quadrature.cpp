#include "qdlab/quadrature.hpp"

#include <cmath>

namespace qdlab {

namespace {

void check_integrable(const RationalQD& q, const Region& region) {
  for (const auto& p : q.poles()) {
    if (p.mult >= 2 && region.contains(p.z)) {
      throw Error(ErrorCode::kNonIntegrable, "pole of multiplicity >= 2 inside the region");
    }
  }
  if (!region.bounded() && q.degree_at_infinity() < -1) {
    throw Error(ErrorCode::kNonIntegrable, "unbounded region and infinity is not a simple pole");
  }
}

void check_radii(double r, double R) {
  if (!(r > 0.0) || !(R > r) || !std::isfinite(R)) {
    throw Error(ErrorCode::kBadRadii, "need 0 < r < R");
  }
}

}  // namespace

MassResult scale_result(MassResult r, double factor) {
  r.value *= factor;
  r.error_estimate *= factor;
  return r;
}

MassResult mass_on_region(const RationalQD& q, const Region& region, const QuadratureConfig& cfg) {
  check_integrable(q, region);
  // Integrate the monic density so that c q costs exactly |c| times the mass
  // of q, independent of refinement decisions.
  const RationalQD u = q.monic();
  IntegrationProblem problem;
  problem.density = [&u](cplx base, cplx offset) { return std::abs(u.eval_offset(base, offset)); };
  problem.domain = region;
  problem.singular_points = q.pole_locations();
  QuadratureConfig c = cfg;
  const double L = std::abs(q.leading());
  c.abs_floor = cfg.abs_floor / L;
  return scale_result(integrate(problem, c), L);
}

MassResult total_mass(const RationalQD& q, const QuadratureConfig& cfg) {
  return mass_on_region(q, Region::plane(), cfg);
}

double annulus_log_mass(double r, double R) {
  check_radii(r, R);
  return kTwoPi * std::log(R / r);
}

double annulus_modulus(double r, double R) {
  check_radii(r, R);
  return std::log(R / r) / kTwoPi;
}

double annulus_modulus_from_logs(double log_r, double log_R) {
  if (!(log_R > log_r)) throw Error(ErrorCode::kBadRadii, "need r < R");
  return (log_R - log_r) / kTwoPi;
}

std::vector<double> mass_fraction_profile(const RationalQD& q, cplx center, const std::vector<double>& radii,
                                          const QuadratureConfig& cfg) {
  if (radii.empty()) throw Error(ErrorCode::kInvalidArgument, "no radii given");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0) || (i > 0 && !(radii[i] > radii[i - 1]))) {
      throw Error(ErrorCode::kInvalidArgument, "radii must be positive and strictly increasing");
    }
  }
  const double total = total_mass(q, cfg).value;
  if (!(total > cfg.abs_floor)) throw Error(ErrorCode::kZeroMass, "differential has no mass");

  // Masses of the successive shells, accumulated so the profile is
  // nondecreasing by construction.
  std::vector<double> out;
  double acc = 0.0;
  double inner = 0.0;
  for (double r : radii) {
    const Region shell = inner > 0.0 ? Region::annulus(center, inner, r) : Region::disk(center, r);
    acc += mass_on_region(q, shell, cfg).value;
    out.push_back(acc / total);
    inner = r;
  }
  return out;
}

MassResult difference_mass(const RationalQD& q1, const RationalQD& q2, double scale,
                           const QuadratureConfig& cfg) {
  if (!q1.sphere_integrable() || !q2.sphere_integrable()) {
    throw Error(ErrorCode::kNonIntegrable, "difference mass needs sphere-integrable differentials");
  }
  IntegrationProblem problem;
  problem.density = [&](cplx base, cplx offset) {
    return std::abs(q1.eval_offset(base, offset) - q2.eval_offset(base, offset));
  };
  problem.singular_points = q1.pole_locations();
  for (cplx p : q2.pole_locations()) problem.singular_points.push_back(p);
  problem.scale = scale;
  return integrate(problem, cfg);
}

}  // namespace qdlab
