#pragma once

#include <optional>
#include <vector>

#include "qdlab/quadrature.hpp"

namespace qdlab {

/// M(z) = a z + b with b a pole of the source differential.
struct ThickScaling {
  AffineMap M;
};

/// c dz^2 / (z - center)^2 on A(center, r, R).
struct ThinModel {
  cplx center{0.0};
  double r = 0.0;
  double R = 0.0;
  cplx c{1.0};
};

struct ConcentrationResult {
  cplx center{0.0};
  double inner_radius = 0.0;
  double outer_radius = 0.0;
  double modulus = 0.0;
  std::vector<cplx> poles_inside;
};

/// Tightest pair of finite poles (ties broken lexicographically by (Re, Im));
/// b is the lexicographically smaller pole of the pair, a the pair distance.
ThickScaling detect_thick_scaling(const RationalQD& q);

/// ||M^* q_n - q_model|| with the error target taken relative to ||q_model||.
MassResult limit_model_distance(const RationalQD& q_n, const AffineMap& M, const RationalQD& q_model,
                                const QuadratureConfig& cfg = {});

/// z -> -a sin(b) z + cos(b).
AffineMap hat_scaling(cplx a, cplx b);

/// (cos(a z + b) - cos(b)) / (-a sin(b)).
cplx s_n_eval(cplx a, cplx b, cplx z);

/// max over 256 points of |z| = R of |S(z) - z|.
double s_n_sup_deviation(cplx a, cplx b, double R);

/// Image annulus about cos(b) with radii |sin b| r and |sin b| R_star.
ThinModel thin_image_annulus(double r, double R_star, cplx b);

/// Smallest R* on a grid of 64 points per decade in (r, R] with
/// mass(A(r, R*)) >= (1 - delta) mass(A(r, R)).
double choose_inner_radius(const RationalQD& q, const ThinModel& model, double delta,
                           const QuadratureConfig& cfg = {});

/// Walks single-linkage pole clusters from the tightest up. For each cluster
/// the inner radius is 1.5 times its radius about the centroid and the outer
/// radius stops at the nearest other pole (or the chart boundary
/// 2 max|p| + 1). Returns the first annulus with modulus >= M_required.
std::optional<ConcentrationResult> find_concentration_annulus(const RationalQD& q, double M_required);

struct MassConditionResult {
  bool holds = true;
  /// Stage s and integer k of a violating k pi (when !holds).
  int stage = -1;
  long k = 0;
  /// The witness only lies within the sampling safety margin of the image.
  bool marginal = false;
};

/// Checks k pi not in C_{lambda_s} o ... o C_{lambda_1}(D) for s = 0..m.
/// Boundary images are sampled (1024 points, refined x4 up to 65536) and
/// candidates are decided by winding number once they clear the margin
/// L_s * (2 pi r / N), where L_s bounds the stage derivative along arcs.
/// k_window > 0 adds |k| <= k_window to the candidates read off the image box.
MassConditionResult mass_condition_check(cplx center, double radius, const std::vector<cplx>& lambdas,
                                         long k_window = 0);

/// pi / ln(3 + 2 sqrt 2) * k * e^{k d0}.
double modulus_bound(int k, double d0);

}  // namespace qdlab
