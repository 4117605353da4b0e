#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qdlab/pushforward.hpp"

namespace qdlab {

/// p(z) / ((z^2 - a^2)(z^2 - b^2)(z - 1)) dz^2, normalised to target_mass.
struct Example42Params {
  double a = 0.5;
  double b = 1.5;
  /// Ascending coefficients of the quadratic numerator; default z^2 + 1.
  std::array<cplx, 3> p_coeffs{cplx(1.0), cplx(0.0), cplx(1.0)};
  double target_mass = 4.0;

  void validate() const;

  /// a = 2^-n, b = 3a.
  static Example42Params geometric(int n);
  /// a = 0.5, b = 1.5 for every n.
  static Example42Params control(int n);
};

RationalQD example42_build(const Example42Params& params, const QuadratureConfig& cfg = {});

/// Cluster of four poles near `cluster_center` separated by annuli with
/// radii R1 = e^{-2 pi n^2}, R2 = e^{-2 pi n (n-1)}, R3 = e^{-2 pi n}.
struct Example41Params {
  int n = 2;
  cplx cluster_center{1.0};
  double target_mass = 4.0;

  void validate() const;

  double log_R1() const;
  double log_R2() const;
  double log_R3() const;
  /// exp of the logs above; 0 once they underflow.
  double R1() const;
  double R2() const;
  double R3() const;
};

/// Poles at 0, c +- R1/2, c +- R2 (and a simple pole at infinity); zeros at
/// c +- i R1. Throws PoleCollision when the offsets vanish against the
/// cluster centre in double precision.
RationalQD example41_build(const Example41Params& params, const QuadratureConfig& cfg = {});

struct SweepRow {
  int index = 0;
  double mass = 0.0;
  double pushforward_mass = 0.0;
  double ratio = 0.0;
  /// Mass fraction in the concentration region; NaN without one.
  double concentration_fraction = 0.0;
  /// Absolute error estimate on the ratio.
  double error_estimate = 0.0;
  /// Empty on success; otherwise "<code>: <message>" and the numbers are NaN.
  std::string error;
};

using FamilyGenerator = std::function<RationalQD(int index)>;
using ConcentrationRegion = std::function<std::optional<Region>(int index)>;

/// One row per index, in index order. Member failures become row errors.
std::vector<SweepRow> efficiency_sweep(const FamilyGenerator& family, const std::vector<int>& indices,
                                       const QuadratureConfig& cfg = {}, const TruncationPolicy& policy = {},
                                       const ConcentrationRegion& concentration = nullptr);

/// CSV with header index,mass,pushforward_mass,ratio,concentration_fraction,error_estimate.
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace qdlab
