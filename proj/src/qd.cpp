#include "qdlab/qd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

namespace qdlab {

namespace {

std::vector<DivisorPoint> merge_points(std::vector<DivisorPoint> pts, double tol) {
  std::vector<DivisorPoint> out;
  for (const auto& p : pts) {
    if (p.mult <= 0) {
      throw Error(ErrorCode::kInvalidArgument, "divisor multiplicities must be positive");
    }
    if (!std::isfinite(p.z.real()) || !std::isfinite(p.z.imag())) {
      throw Error(ErrorCode::kInvalidArgument, "divisor locations must be finite");
    }
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const DivisorPoint& o) { return std::abs(o.z - p.z) <= tol; });
    if (it == out.end()) {
      out.push_back(p);
    } else {
      it->mult += p.mult;
    }
  }
  return out;
}

}  // namespace

RationalQD::RationalQD(cplx leading, std::vector<DivisorPoint> zeros,
                       std::vector<DivisorPoint> poles, double identity_tol)
    : leading_(leading) {
  if (leading == cplx(0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "leading coefficient must be nonzero");
  }
  zeros = merge_points(std::move(zeros), identity_tol);
  poles = merge_points(std::move(poles), identity_tol);

  // Cancel common factors; the surviving point keeps the location it had in
  // the divisor with the larger multiplicity.
  for (auto& z : zeros) {
    for (auto& p : poles) {
      if (z.mult > 0 && p.mult > 0 && std::abs(z.z - p.z) <= identity_tol) {
        const int common = std::min(z.mult, p.mult);
        z.mult -= common;
        p.mult -= common;
      }
    }
  }
  for (const auto& z : zeros) {
    if (z.mult > 0) zeros_.push_back(z);
  }
  for (const auto& p : poles) {
    if (p.mult > 0) poles_.push_back(p);
  }
}

RationalQD RationalQD::log_differential(cplx c, cplx center) {
  return RationalQD(c, {}, {{center, 2}});
}

int RationalQD::zero_degree() const {
  int d = 0;
  for (const auto& z : zeros_) d += z.mult;
  return d;
}

int RationalQD::pole_degree() const {
  int d = 0;
  for (const auto& p : poles_) d += p.mult;
  return d;
}

bool RationalQD::finite_poles_simple() const {
  return std::all_of(poles_.begin(), poles_.end(), [](const DivisorPoint& p) { return p.mult == 1; });
}

cplx RationalQD::eval(cplx z) const {
  for (const auto& p : poles_) {
    if (z == p.z) throw Error(ErrorCode::kEvalAtPole, "density evaluated at a pole");
  }
  return eval_offset(z, 0.0);
}

cplx RationalQD::eval_offset(cplx base, cplx offset) const {
  cplx num = leading_;
  cplx den = 1.0;
  for (const auto& z : zeros_) {
    const cplx f = (base - z.z) + offset;
    for (int m = 0; m < z.mult; ++m) num *= f;
  }
  for (const auto& p : poles_) {
    const cplx f = (base - p.z) + offset;
    for (int m = 0; m < p.mult; ++m) den *= f;
  }
  if (den == cplx(0.0)) {
    const double inf = std::numeric_limits<double>::infinity();
    return {inf, inf};
  }
  return num / den;
}

RationalQD RationalQD::scaled(cplx c) const {
  RationalQD out = *this;
  out.leading_ *= c;
  if (out.leading_ == cplx(0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "scaling by zero");
  }
  return out;
}

RationalQD RationalQD::monic() const {
  RationalQD out = *this;
  out.leading_ = 1.0;
  return out;
}

std::vector<cplx> RationalQD::residues() const {
  if (!finite_poles_simple()) {
    throw Error(ErrorCode::kNonIntegrable, "residue expansion needs simple finite poles");
  }
  if (zero_degree() >= pole_degree()) {
    throw Error(ErrorCode::kInvalidArgument, "density does not vanish at infinity");
  }
  std::vector<cplx> out;
  out.reserve(poles_.size());
  for (std::size_t j = 0; j < poles_.size(); ++j) {
    const cplx pj = poles_[j].z;
    cplx r = leading_;
    for (const auto& z : zeros_) {
      for (int m = 0; m < z.mult; ++m) r *= (pj - z.z);
    }
    for (std::size_t l = 0; l < poles_.size(); ++l) {
      if (l != j) r /= (pj - poles_[l].z);
    }
    out.push_back(r);
  }
  return out;
}

std::vector<cplx> RationalQD::pole_locations() const {
  std::vector<cplx> out;
  for (const auto& p : poles_) out.push_back(p.z);
  return out;
}

std::vector<cplx> RationalQD::zero_locations() const {
  std::vector<cplx> out;
  for (const auto& z : zeros_) out.push_back(z.z);
  return out;
}

AffineMap::AffineMap(cplx a_, cplx b_) : a(a_), b(b_) {
  if (a == cplx(0.0)) throw Error(ErrorCode::kInvalidArgument, "affine map needs a != 0");
}

AffineMap AffineMap::inverse() const { return AffineMap(1.0 / a, -b / a); }

AffineMap compose(const AffineMap& f, const AffineMap& g) {
  return AffineMap(f.a * g.a, f.a * g.b + f.b);
}

RationalQD affine_pullback(const RationalQD& q, const AffineMap& m) {
  const AffineMap inv = m.inverse();
  std::vector<DivisorPoint> zeros;
  std::vector<DivisorPoint> poles;
  for (const auto& z : q.zeros()) zeros.push_back({inv(z.z), z.mult});
  for (const auto& p : q.poles()) poles.push_back({inv(p.z), p.mult});
  const int exponent = 2 + q.zero_degree() - q.pole_degree();
  return RationalQD(q.leading() * std::pow(m.a, exponent), std::move(zeros), std::move(poles), 0.0);
}

RationalQD affine_pushforward(const RationalQD& q, const AffineMap& m) {
  return affine_pullback(q, m.inverse());
}

RationalQD inversion_chart(const RationalQD& q) {
  // z - a = -a (w - 1/a) / w for a != 0, and z = 1/w for a = 0; the factor
  // dz^2 = dw^2 / w^4 contributes w^-4.
  cplx leading = q.leading();
  int w_power = -4;
  std::vector<DivisorPoint> zeros;
  std::vector<DivisorPoint> poles;
  for (const auto& z : q.zeros()) {
    w_power -= z.mult;
    if (z.z != cplx(0.0)) {
      leading *= std::pow(-z.z, z.mult);
      zeros.push_back({1.0 / z.z, z.mult});
    }
  }
  for (const auto& p : q.poles()) {
    w_power += p.mult;
    if (p.z != cplx(0.0)) {
      leading /= std::pow(-p.z, p.mult);
      poles.push_back({1.0 / p.z, p.mult});
    }
  }
  if (w_power > 0) zeros.push_back({0.0, w_power});
  if (w_power < 0) poles.push_back({0.0, -w_power});
  return RationalQD(leading, std::move(zeros), std::move(poles), 0.0);
}

std::vector<CosSymmetricPair> detect_cos_symmetric_pairs(std::span<const cplx> poles, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::kInvalidArgument, "tolerance must be positive");

  struct Candidate {
    double deviation;
    std::size_t i;
    std::size_t j;
    long k;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < poles.size(); ++i) {
    for (std::size_t j = i + 1; j < poles.size(); ++j) {
      const cplx s = poles[i] + poles[j];
      const long k = std::lround(s.real() / kTwoPi);
      const double dev = std::abs(s - cplx(kTwoPi * static_cast<double>(k), 0.0));
      if (dev < tol) candidates.push_back({dev, i, j, k});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& x, const Candidate& y) {
    return std::tie(x.deviation, x.i, x.j) < std::tie(y.deviation, y.i, y.j);
  });

  std::vector<bool> used(poles.size(), false);
  std::vector<CosSymmetricPair> out;
  for (const auto& c : candidates) {
    if (used[c.i] || used[c.j]) continue;
    used[c.i] = used[c.j] = true;
    out.push_back({c.k, poles[c.i] - cplx(kPi * static_cast<double>(c.k), 0.0)});
  }
  return out;
}

}  // namespace qdlab
