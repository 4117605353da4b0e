#pragma once

#include <vector>

#include "qdlab/integrator.hpp"
#include "qdlab/qd.hpp"
#include "qdlab/region.hpp"

namespace qdlab {

/// L1 mass of q over the region: the integral of |q(z)| dA(z).
///
/// Throws NonIntegrable when a pole of multiplicity >= 2 lies in the closed
/// region, or when the region is unbounded and infinity is worse than a
/// simple pole.
MassResult mass_on_region(const RationalQD& q, const Region& region, const QuadratureConfig& cfg = {});

/// value and error multiplied by a positive factor.
MassResult scale_result(MassResult r, double factor);

/// Total mass over the plane.
MassResult total_mass(const RationalQD& q, const QuadratureConfig& cfg = {});

/// Mass of dz^2/z^2 on A(r, R): 2 pi ln(R / r).
double annulus_log_mass(double r, double R);

/// Modulus of the round annulus A(r, R): ln(R / r) / (2 pi).
double annulus_modulus(double r, double R);

/// Same modulus from log-radii, for radii that underflow a double.
double annulus_modulus_from_logs(double log_r, double log_R);

/// Cumulative fractions mass(disk(center, radius)) / mass(plane).
std::vector<double> mass_fraction_profile(const RationalQD& q, cplx center, const std::vector<double>& radii,
                                          const QuadratureConfig& cfg = {});

/// Mass of the pointwise difference q1 - q2 over the plane, with the error
/// target measured against `scale` (e.g. the mass of one of them).
MassResult difference_mass(const RationalQD& q1, const RationalQD& q2, double scale,
                           const QuadratureConfig& cfg = {});

}  // namespace qdlab
