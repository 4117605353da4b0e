#pragma once

#include <functional>
#include <vector>

#include "qdlab/polynomial.hpp"
#include "qdlab/quadrature.hpp"

namespace qdlab {

/// z -> lambda cos z.
struct CosineMap {
  cplx lambda{1.0};

  CosineMap() = default;
  explicit CosineMap(cplx l);

  cplx operator()(cplx z) const { return lambda * std::cos(z); }
};

struct TruncationPolicy {
  /// Largest preimage index |k| summed by the pointwise density.
  int K = 64;
  /// Strip half-height for the strip mass method; <= 0 picks it from the
  /// exponential tail bound.
  double Y = 0.0;
  /// Tail tolerance. For pointwise densities the bound must satisfy
  /// tail <= tail_tol * max(1, |value|); for strip masses
  /// tail <= tail_tol * |leading coefficient|.
  /// A value <= 0 disables the check.
  double tail_tol = 1e-6;

  void validate() const;
};

struct PreimageSet {
  std::vector<cplx> points;
  /// w = +-1: the two signs of arccos coincide.
  bool degenerate = false;
};

/// {+-arccos(w) + 2 pi k : |k| <= K}, principal arccos, duplicates removed,
/// sorted by real part.
PreimageSet cos_preimages(cplx w, int K);

struct DensityResult {
  cplx value;
  /// Rigorous bound on the neglected terms |k| > K_used.
  double tail_bound = 0.0;
  int K_used = 0;
};

/// (cos_* q)(w) = 1/(1 - w^2) * sum_k [q(2 pi k + arccos w) + q(2 pi k - arccos w)],
/// truncated at the smallest K <= policy.K whose cubic-decay tail bound meets
/// the tolerance.
DensityResult cos_pushforward_density(const RationalQD& q, cplx w, const TruncationPolicy& policy = {});

/// (C_lambda)_* q (w) = lambda^-2 (cos_* q)(w / lambda).
DensityResult pushforward_density(const CosineMap& f, const RationalQD& q, cplx w,
                                  const TruncationPolicy& policy = {});

/// Closed form of the cosine push-forward of a sphere-integrable differential.
///
/// With the partial fractions q = sum c_j / (z - p_j) (sum c_j = sum c_j p_j = 0),
/// the periodisation sum_k q(z + 2 pi k) equals (1/2) sum c_j cot((z - p_j)/2),
/// and the push-forward density is
///
///     (cos_* q)(w) = 1/(1 - w^2) * sum_j c_j sin(p_j) / (cos(p_j) - w).
class CosPushforward {
 public:
  explicit CosPushforward(const RationalQD& q);

  /// sum over k in Z of q(z + 2 pi k).
  cplx periodized(cplx z) const;

  /// sum over k of q(z + 2 pi k) + q(-z + 2 pi k) at z = base + offset. Its
  /// modulus integrated over the fundamental strip 0 <= Re z <= pi is the
  /// push-forward mass.
  cplx strip_density(cplx base, cplx offset = 0.0) const;

  /// (cos_* q)(w) at w = base + offset.
  cplx density(cplx base, cplx offset = 0.0) const;

  /// Points of the fundamental strip congruent to a pole under z -> +-z + 2 pi k.
  std::vector<cplx> strip_singularities() const;

  /// cos(p_j) and +-1.
  std::vector<cplx> w_singularities() const;

  /// Bound on the strip-density mass outside |Im z| <= Y (infinite when Y
  /// does not clear the poles).
  double strip_tail_bound(double Y) const;

  /// Smallest convenient Y with strip_tail_bound(Y) <= tol.
  double strip_height_for(double tol) const;

 private:
  std::vector<cplx> poles_;
  std::vector<cplx> residues_;
  std::vector<cplx> cos_poles_;
  std::vector<cplx> sin_weights_;
};

enum class PushforwardMethod { kStrip, kWPlane };

/// ||cos_* q|| over the plane. The strip method integrates the periodised
/// density over the fundamental strip; the w-plane method integrates the
/// closed-form density directly. The strip tail bound is added to the error
/// estimate.
MassResult cos_pushforward_mass(const RationalQD& q, const QuadratureConfig& cfg = {},
                                const TruncationPolicy& policy = {},
                                PushforwardMethod method = PushforwardMethod::kStrip);

/// Mass of cos_*(q restricted to a bounded region). At a strip point z only
/// preimages sigma z + 2 pi k lying in the region contribute.
MassResult restricted_cos_pushforward_mass(const RationalQD& q, const Region& region,
                                           const QuadratureConfig& cfg = {},
                                           const TruncationPolicy& policy = {});

struct EfficiencyReport {
  double mass = 0.0;
  double pushforward_mass = 0.0;
  double ratio = 0.0;
  /// Propagated absolute error on the ratio.
  double ratio_error = 0.0;
};

EfficiencyReport efficiency_report(const RationalQD& q, const QuadratureConfig& cfg = {},
                                   const TruncationPolicy& policy = {});

/// ||cos_* q|| / ||q||.
double efficiency_ratio(const RationalQD& q, const QuadratureConfig& cfg = {},
                        const TruncationPolicy& policy = {});

using ComplexDensity = std::function<cplx(cplx)>;

/// (Q_* q)(w) = sum over Q(z) = w of q(z) / Q'(z)^2, deg Q in {1, 2, 3}.
cplx poly_pushforward_density(const Polynomial& Q, const ComplexDensity& density, cplx w);
cplx poly_pushforward_density(const Polynomial& Q, const RationalQD& q, cplx w);

/// max over samples of |cos(a z) - Q(cos z)| / max(1, e^{a |Im z|}).
double semiconjugacy_residual(int a, const std::vector<cplx>& samples);
double semiconjugacy_residual(int a, const Polynomial& Q, const std::vector<cplx>& samples);

/// g_* q for g(z) = 1 - z^2/2: (q(s) + q(-s)) / (2 - 2w) with s = sqrt(2 - 2w).
cplx quadratic_model_pushforward(const RationalQD& q, cplx w);

}  // namespace qdlab
