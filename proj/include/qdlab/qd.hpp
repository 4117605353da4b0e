#pragma once

#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include "qdlab/error.hpp"

namespace qdlab {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Default absolute distance under which two divisor points are identified.
inline constexpr double kIdentityTol = 1e-12;

/// A point of a divisor together with its (positive) multiplicity.
struct DivisorPoint {
  cplx z;
  int mult = 1;
};

/// A meromorphic quadratic differential q(z) dz^2 on the sphere with rational
/// density
///
///     q(z) = leading * prod (z - z_i)^{m_i} / prod (z - p_j)^{n_j}.
///
/// Zeros and poles are stored with explicit multiplicities. Construction merges
/// repeated locations and cancels zero/pole pairs closer than the identity
/// tolerance, so the stored divisors never share a point.
class RationalQD {
 public:
  RationalQD() = default;
  RationalQD(cplx leading, std::vector<DivisorPoint> zeros, std::vector<DivisorPoint> poles,
             double identity_tol = kIdentityTol);

  /// c * dz^2 / z^2.
  static RationalQD log_differential(cplx c = 1.0, cplx center = 0.0);

  cplx leading() const { return leading_; }
  std::span<const DivisorPoint> zeros() const { return zeros_; }
  std::span<const DivisorPoint> poles() const { return poles_; }

  int zero_degree() const;
  int pole_degree() const;

  /// Order of q at infinity in the chart w = 1/z; -1 is a simple pole.
  int degree_at_infinity() const { return pole_degree() - zero_degree() - 4; }

  bool finite_poles_simple() const;

  /// True iff every finite pole is simple and infinity is at worst a simple pole.
  bool sphere_integrable() const { return finite_poles_simple() && degree_at_infinity() >= -1; }

  /// Pointwise density. Throws EvalAtPole when z equals a pole exactly.
  cplx eval(cplx z) const;

  /// Density at base + offset with each factor formed as (base - a) + offset.
  /// When base sits on or next to a clustered divisor the differences
  /// base - a are exact, so tiny offsets keep full relative precision.
  /// Returns infinity at a pole instead of throwing.
  cplx eval_offset(cplx base, cplx offset) const;

  RationalQD scaled(cplx c) const;
  /// Same divisor with leading coefficient exactly 1.
  RationalQD monic() const;

  /// Residues c_j of q = sum c_j / (z - p_j); requires simple finite poles and
  /// a density vanishing at infinity (degree_at_infinity >= -3).
  std::vector<cplx> residues() const;

  std::vector<cplx> pole_locations() const;
  std::vector<cplx> zero_locations() const;

 private:
  cplx leading_{1.0};
  std::vector<DivisorPoint> zeros_;
  std::vector<DivisorPoint> poles_;
};

/// z -> a z + b with a != 0.
struct AffineMap {
  cplx a{1.0};
  cplx b{0.0};

  AffineMap() = default;
  AffineMap(cplx a_, cplx b_);

  static AffineMap identity() { return {}; }

  cplx operator()(cplx z) const { return a * z + b; }
  AffineMap inverse() const;
};

/// (f o g)(z) = f(g(z)).
AffineMap compose(const AffineMap& f, const AffineMap& g);

/// (M^* q)(z) = a^2 q(a z + b).
RationalQD affine_pullback(const RationalQD& q, const AffineMap& m);

/// M_* q = (M^{-1})^* q.
RationalQD affine_pushforward(const RationalQD& q, const AffineMap& m);

/// The same differential written in the chart w = 1/z: q(1/w) / w^4.
RationalQD inversion_chart(const RationalQD& q);

struct CosSymmetricPair {
  long k = 0;
  cplx z0;
};

/// Pairs of poles p, p' with |p + p' - 2k pi| < tol, i.e. p = k pi + z0 and
/// p' = k pi - z0. Pairing is greedy nearest-first; ties go to list order.
std::vector<CosSymmetricPair> detect_cos_symmetric_pairs(std::span<const cplx> poles, double tol);

}  // namespace qdlab
