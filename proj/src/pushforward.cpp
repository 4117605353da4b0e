#include "qdlab/pushforward.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qdlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const cplx kI{0.0, 1.0};

// cot(u) - kappa for kappa = -i (upper half plane limit) or +i (lower), in a
// form that stays accurate when |Im u| is large.
cplx cot_minus(cplx u, bool upper) {
  if (u.imag() >= 0.0) {
    const cplx E = std::exp(2.0 * kI * u);
    return upper ? 2.0 * kI * E / (E - 1.0) : 2.0 * kI / (E - 1.0);
  }
  const cplx F = std::exp(-2.0 * kI * u);
  return upper ? 2.0 * kI / (1.0 - F) : 2.0 * kI * F / (1.0 - F);
}

// d reduced by a multiple of 2 pi so that |Re d| <= pi.
cplx reduce_2pi(cplx d) {
  const double k = std::round(d.real() / kTwoPi);
  return k == 0.0 ? d : d - kTwoPi * k;
}

bool hits_pole(const RationalQD& q, cplx z) {
  for (const auto& p : q.poles()) {
    if (std::abs(z - p.z) <= kIdentityTol * std::max(1.0, std::abs(p.z))) return true;
  }
  return false;
}

// Bound on |sum over |k| > K of q(2 pi k +- a)| for a sphere-integrable q.
// With q = sum c_j / (z - p_j), sum c_j = sum c_j p_j = 0, so
//   q(z) = A / z^3 + sum c_j p_j^3 / (z^3 (z - p_j)),
// the odd A / z^3 part cancels between k and -k, and the remainder is
// at most B / (|z|^3 (|z| - P)).
struct TailModel {
  bool integrable = false;
  // integrable case
  double B = 0.0;
  double P = 0.0;
  // generic cubic decay: |q(z)| <= C / |z|^3 for |z| >= R
  double C = kInf;
  double R = kInf;

  explicit TailModel(const RationalQD& q) {
    if (q.sphere_integrable()) {
      integrable = true;
      const auto poles = q.pole_locations();
      const auto res = q.residues();
      for (std::size_t j = 0; j < poles.size(); ++j) {
        B += std::abs(res[j]) * std::pow(std::abs(poles[j]), 3);
        P = std::max(P, std::abs(poles[j]));
      }
      return;
    }
    const int excess = q.pole_degree() - q.zero_degree();
    if (excess < 3) return;
    double rmax = 0.0;
    for (const auto& z : q.zeros()) rmax = std::max(rmax, std::abs(z.z));
    for (const auto& p : q.poles()) rmax = std::max(rmax, std::abs(p.z));
    R = std::max(2.0 * rmax, 1.0);
    double c = std::abs(q.leading());
    for (const auto& z : q.zeros()) c *= std::pow(1.0 + std::abs(z.z) / R, z.mult);
    for (const auto& p : q.poles()) c /= std::pow(1.0 - std::abs(p.z) / R, p.mult);
    C = c * std::pow(R, 3 - excess);
  }

  double bound(int K, double abs_a) const {
    const double m = kTwoPi * (K + 1) - abs_a;
    if (integrable) {
      if (B == 0.0) return 0.0;
      if (!(m > P)) return kInf;
      return 4.0 * B / (1.0 - P / m) * (1.0 / std::pow(m, 4) + 1.0 / (6.0 * kPi * std::pow(m, 3)));
    }
    if (!(m >= R)) return kInf;
    return 4.0 * C * (1.0 / std::pow(m, 3) + 1.0 / (4.0 * kPi * m * m));
  }
};

}  // namespace

CosineMap::CosineMap(cplx l) : lambda(l) {
  if (l == 0.0) throw Error(ErrorCode::kInvalidArgument, "cosine map needs lambda != 0");
}

void TruncationPolicy::validate() const {
  if (K < 1) throw Error(ErrorCode::kInvalidArgument, "truncation K must be >= 1");
  if (!std::isfinite(Y) || !std::isfinite(tail_tol)) {
    throw Error(ErrorCode::kInvalidArgument, "truncation parameters must be finite");
  }
}

PreimageSet cos_preimages(cplx w, int K) {
  if (K < 0) throw Error(ErrorCode::kInvalidArgument, "K must be nonnegative");
  PreimageSet out;
  out.degenerate = (w == cplx(1.0) || w == cplx(-1.0));
  const cplx a = std::acos(w);
  std::vector<cplx> pts;
  for (int k = -K; k <= K; ++k) {
    pts.push_back(kTwoPi * k + a);
    pts.push_back(kTwoPi * k - a);
  }
  std::sort(pts.begin(), pts.end(), [](cplx x, cplx y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  for (cplx z : pts) {
    if (!out.points.empty() && std::abs(z - out.points.back()) <= kIdentityTol * std::max(1.0, std::abs(z))) {
      continue;
    }
    out.points.push_back(z);
  }
  return out;
}

DensityResult cos_pushforward_density(const RationalQD& q, cplx w, const TruncationPolicy& policy) {
  if (policy.K < 0) throw Error(ErrorCode::kInvalidArgument, "truncation K must be nonnegative");
  if (w == cplx(1.0) || w == cplx(-1.0)) {
    throw Error(ErrorCode::kCriticalValue, "w = +-1 is a critical value of cos");
  }
  const cplx a = std::acos(w);
  const cplx jac = 1.0 / ((1.0 - w) * (1.0 + w));
  const TailModel tail(q);
  const bool check = policy.tail_tol > 0.0;

  auto term = [&](cplx z) {
    if (hits_pole(q, z)) throw Error(ErrorCode::kPoleImage, "a preimage of w is a pole");
    return q.eval(z);
  };

  CompensatedSum re;
  CompensatedSum im;
  auto add = [&](cplx v) {
    re.add(v.real());
    im.add(v.imag());
  };
  add(term(a));
  add(term(-a));

  DensityResult out;
  for (int K = 0;; ++K) {
    if (K > 0) {
      add(term(kTwoPi * K + a));
      add(term(kTwoPi * K - a));
      add(term(-kTwoPi * K + a));
      add(term(-kTwoPi * K - a));
    }
    out.value = cplx(re.value(), im.value()) * jac;
    out.tail_bound = tail.bound(K, std::abs(a)) * std::abs(jac);
    out.K_used = K;
    if (check && out.tail_bound <= policy.tail_tol * std::max(1.0, std::abs(out.value))) return out;
    if (K >= policy.K) break;
  }
  if (check) throw Error(ErrorCode::kTailTooLarge, "truncation tail bound exceeds tolerance at the configured K");
  return out;
}

DensityResult pushforward_density(const CosineMap& f, const RationalQD& q, cplx w, const TruncationPolicy& policy) {
  DensityResult r = cos_pushforward_density(q, w / f.lambda, policy);
  const cplx s = 1.0 / (f.lambda * f.lambda);
  r.value *= s;
  r.tail_bound *= std::abs(s);
  return r;
}

CosPushforward::CosPushforward(const RationalQD& q) {
  if (!q.sphere_integrable()) {
    throw Error(ErrorCode::kNonIntegrable, "cosine push-forward needs a sphere-integrable differential");
  }
  poles_ = q.pole_locations();
  residues_ = q.residues();
  for (cplx p : poles_) {
    cos_poles_.push_back(std::cos(p));
    sin_weights_.push_back(std::sin(p));
  }
  for (std::size_t j = 0; j < poles_.size(); ++j) sin_weights_[j] *= residues_[j];
}

cplx CosPushforward::periodized(cplx z) const {
  const bool upper = z.imag() >= 0.0;
  const cplx kappa = upper ? -kI : kI;
  cplx s = 0.0;
  for (std::size_t j = 0; j < poles_.size(); ++j) {
    s += residues_[j] * (cot_minus(0.5 * reduce_2pi(z - poles_[j]), upper) + kappa);
  }
  return 0.5 * s;
}

cplx CosPushforward::strip_density(cplx base, cplx offset) const {
  const bool upper = (base + offset).imag() >= 0.0;
  cplx s = 0.0;
  for (std::size_t j = 0; j < poles_.size(); ++j) {
    const cplx u1 = 0.5 * (reduce_2pi(base - poles_[j]) + offset);
    const cplx u2 = 0.5 * (reduce_2pi(base + poles_[j]) + offset);
    s += residues_[j] * (cot_minus(u1, upper) - cot_minus(u2, upper));
  }
  return 0.5 * s;
}

cplx CosPushforward::density(cplx base, cplx offset) const {
  cplx s = 0.0;
  for (std::size_t j = 0; j < poles_.size(); ++j) {
    s += sin_weights_[j] / ((cos_poles_[j] - base) - offset);
  }
  return s / (((1.0 - base) - offset) * ((1.0 + base) + offset));
}

std::vector<cplx> CosPushforward::strip_singularities() const {
  std::vector<cplx> out;
  for (cplx p : poles_) {
    for (double sigma : {1.0, -1.0}) {
      const cplx z0 = sigma * p;
      const double k = std::floor(z0.real() / kTwoPi);
      for (double dk : {-1.0, 0.0, 1.0}) {
        const cplx z = z0 - kTwoPi * (k + dk);
        if (z.real() >= -1e-9 && z.real() <= kPi + 1e-9) out.push_back(z);
      }
    }
  }
  return out;
}

std::vector<cplx> CosPushforward::w_singularities() const {
  std::vector<cplx> out = cos_poles_;
  out.push_back(1.0);
  out.push_back(-1.0);
  return out;
}

double CosPushforward::strip_tail_bound(double Y) const {
  double M = 0.0;
  for (cplx p : poles_) M = std::max(M, std::abs(p.imag()));
  if (!(Y > M)) return kInf;
  double s = 0.0;
  for (std::size_t j = 0; j < poles_.size(); ++j) {
    const double y = poles_[j].imag();
    s += std::abs(residues_[j]) * (std::exp(y - Y) + std::exp(-y - Y));
  }
  return kTwoPi * s / (1.0 - std::exp(-(Y - M)));
}

double CosPushforward::strip_height_for(double tol) const {
  double M = 0.0;
  for (cplx p : poles_) M = std::max(M, std::abs(p.imag()));
  double s = 0.0;
  for (std::size_t j = 0; j < poles_.size(); ++j) {
    const double y = poles_[j].imag();
    s += std::abs(residues_[j]) * (std::exp(y - M) + std::exp(-y - M));
  }
  const double t = std::log(kTwoPi * s / ((1.0 - std::exp(-1.0)) * tol));
  return M + std::max(1.0, t) + 0.5;
}

MassResult cos_pushforward_mass(const RationalQD& q, const QuadratureConfig& cfg, const TruncationPolicy& policy,
                                PushforwardMethod method) {
  cfg.validate();
  const CosPushforward cp(q.monic());
  const double L = std::abs(q.leading());
  QuadratureConfig c = cfg;
  c.abs_floor = cfg.abs_floor / L;
  IntegrationProblem problem;
  if (method == PushforwardMethod::kWPlane) {
    problem.density = [&cp](cplx base, cplx offset) { return std::abs(cp.density(base, offset)); };
    problem.singular_points = cp.w_singularities();
    return scale_result(integrate(problem, c), L);
  }

  double Y = policy.Y;
  double tail = 0.0;
  if (Y > 0.0) {
    tail = L * cp.strip_tail_bound(Y);
    if (policy.tail_tol > 0.0 && !(tail <= policy.tail_tol * L)) {
      throw Error(ErrorCode::kTailTooLarge, "strip tail bound exceeds tolerance at the configured height");
    }
  } else {
    // tolerance relative to |leading| keeps the strip independent of scaling
    Y = cp.strip_height_for(policy.tail_tol > 0.0 ? policy.tail_tol : 1e-12);
    tail = L * cp.strip_tail_bound(Y);
  }
  problem.density = [&cp](cplx base, cplx offset) { return std::abs(cp.strip_density(base, offset)); };
  problem.domain = Region::halfstrip(Y);
  problem.singular_points = cp.strip_singularities();
  MassResult r = scale_result(integrate(problem, c), L);
  r.error_estimate += tail;
  return r;
}

MassResult restricted_cos_pushforward_mass(const RationalQD& q, const Region& region, const QuadratureConfig& cfg,
                                           const TruncationPolicy& policy) {
  (void)policy;
  cfg.validate();
  const auto box = region.bbox();
  if (!box) throw Error(ErrorCode::kInvalidArgument, "restricted push-forward needs a bounded region");
  for (const auto& p : q.poles()) {
    if (p.mult >= 2 && region.contains(p.z)) {
      throw Error(ErrorCode::kNonIntegrable, "pole of multiplicity >= 2 inside the region");
    }
  }
  if (box->xmin > box->xmax || box->ymin > box->ymax) return {};

  struct Term {
    double sigma;
    double shift;
    Region piece;
  };
  std::vector<Term> terms;
  const double Y = std::max(std::abs(box->ymin), std::abs(box->ymax)) + 1.0;
  const Region strip = Region::halfstrip(Y);
  const long k0 = static_cast<long>(std::floor((box->xmin - kPi) / kTwoPi)) - 1;
  const long k1 = static_cast<long>(std::ceil(box->xmax / kTwoPi)) + 1;
  for (double sigma : {1.0, -1.0}) {
    for (long k = k0; k <= k1; ++k) {
      const double shift = kTwoPi * static_cast<double>(k);
      // preimage zeta = sigma z + shift lies in the region iff z lies in piece
      const Region piece = region.transformed(AffineMap(sigma, -sigma * shift));
      const auto pb = piece.bbox();
      if (!pb || pb->xmax < 0.0 || pb->xmin > kPi || pb->xmin > pb->xmax) continue;
      terms.push_back({sigma, shift, piece});
    }
  }
  if (terms.empty()) return {};

  Region pieces = terms.front().piece;
  for (std::size_t i = 1; i < terms.size(); ++i) pieces = Region::unite(pieces, terms[i].piece);

  IntegrationProblem problem;
  problem.domain = Region::intersection(strip, pieces);
  for (const auto& t : terms) problem.breaks.push_back(t.piece);
  const RationalQD u = q.monic();
  const double L = std::abs(q.leading());
  QuadratureConfig c = cfg;
  c.abs_floor = cfg.abs_floor / L;
  problem.density = [&u, &terms](cplx base, cplx offset) {
    const cplx z = base + offset;
    cplx s = 0.0;
    for (const auto& t : terms) {
      if (t.piece.contains(z)) s += u.eval_offset(t.sigma * base + t.shift, t.sigma * offset);
    }
    return std::abs(s);
  };
  for (cplx p : q.pole_locations()) {
    if (!region.contains(p)) continue;
    for (const auto& t : terms) {
      const cplx z = t.sigma * (p - t.shift);
      if (z.real() >= -1e-9 && z.real() <= kPi + 1e-9) problem.singular_points.push_back(z);
    }
  }
  return scale_result(integrate(problem, c), L);
}

EfficiencyReport efficiency_report(const RationalQD& q, const QuadratureConfig& cfg, const TruncationPolicy& policy) {
  const MassResult m = total_mass(q, cfg);
  if (!(m.value > cfg.abs_floor)) throw Error(ErrorCode::kZeroMass, "differential has no mass");
  const MassResult pf = cos_pushforward_mass(q, cfg, policy);
  EfficiencyReport r;
  r.mass = m.value;
  r.pushforward_mass = pf.value;
  r.ratio = pf.value / m.value;
  r.ratio_error = r.ratio * (m.error_estimate / m.value + pf.error_estimate / std::max(pf.value, cfg.abs_floor));
  return r;
}

double efficiency_ratio(const RationalQD& q, const QuadratureConfig& cfg, const TruncationPolicy& policy) {
  return efficiency_report(q, cfg, policy).ratio;
}

namespace {

void check_poly(const Polynomial& Q, cplx w) {
  if (Q.degree() < 1 || Q.degree() > 3) {
    throw Error(ErrorCode::kInvalidArgument, "polynomial push-forward supports degree 1..3");
  }
  if (Q.degree() >= 2) {
    for (cplx c : Q.derivative().roots()) {
      if (std::abs(Q(c) - w) <= 1e-12 * std::max(1.0, std::abs(w))) {
        throw Error(ErrorCode::kCriticalValue, "w is a critical value of the polynomial");
      }
    }
  }
}

}  // namespace

cplx poly_pushforward_density(const Polynomial& Q, const ComplexDensity& density, cplx w) {
  check_poly(Q, w);
  const Polynomial dQ = Q.derivative();
  cplx s = 0.0;
  for (cplx z : Q.solve(w)) {
    const cplx d = dQ(z);
    try {
      s += density(z) / (d * d);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kEvalAtPole) throw Error(ErrorCode::kPoleImage, "a preimage of w is a pole");
      throw;
    }
  }
  return s;
}

cplx poly_pushforward_density(const Polynomial& Q, const RationalQD& q, cplx w) {
  check_poly(Q, w);
  for (cplx z : Q.solve(w)) {
    if (hits_pole(q, z)) throw Error(ErrorCode::kPoleImage, "a preimage of w is a pole");
  }
  return poly_pushforward_density(Q, [&q](cplx z) { return q.eval(z); }, w);
}

double semiconjugacy_residual(int a, const Polynomial& Q, const std::vector<cplx>& samples) {
  double worst = 0.0;
  for (cplx z : samples) {
    const double r = std::abs(std::cos(static_cast<double>(a) * z) - Q(std::cos(z)));
    const double scale = std::max(1.0, std::exp(a * std::abs(z.imag())));
    worst = std::max(worst, r / scale);
  }
  return worst;
}

double semiconjugacy_residual(int a, const std::vector<cplx>& samples) {
  return semiconjugacy_residual(a, Polynomial::chebyshev(a), samples);
}

cplx quadratic_model_pushforward(const RationalQD& q, cplx w) {
  if (w == cplx(1.0)) throw Error(ErrorCode::kCriticalValue, "w = 1 is the critical value of the model");
  const cplx s = std::sqrt(2.0 - 2.0 * w);
  if (hits_pole(q, s) || hits_pole(q, -s)) throw Error(ErrorCode::kPoleImage, "a preimage of w is a pole");
  return (q.eval(s) + q.eval(-s)) / (2.0 - 2.0 * w);
}

}  // namespace qdlab
