#include "qdlab/polynomial.hpp"

#include <cmath>

namespace qdlab {

namespace {

// Stable quadratic a z^2 + b z + c = 0 (a != 0): avoid subtracting nearly
// equal quantities by choosing the sign of the square root.
std::vector<cplx> solve_quadratic(cplx a, cplx b, cplx c) {
  const cplx disc = std::sqrt(b * b - 4.0 * a * c);
  const cplx s = (std::real(std::conj(b) * disc) >= 0.0) ? disc : -disc;
  const cplx t = -0.5 * (b + s);
  if (t == cplx(0.0)) return {0.0, 0.0};
  return {t / a, c / t};
}

std::vector<cplx> solve_cubic(cplx a, cplx b, cplx c, cplx d) {
  // Normalise to z^3 + B z^2 + C z + D and depress with z = y - B/3.
  const cplx B = b / a;
  const cplx C = c / a;
  const cplx D = d / a;
  const cplx p = C - B * B / 3.0;
  const cplx q = 2.0 * B * B * B / 27.0 - B * C / 3.0 + D;
  const cplx shift = -B / 3.0;

  const cplx disc = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
  cplx u3 = -q / 2.0 + disc;
  if (std::abs(-q / 2.0 - disc) > std::abs(u3)) u3 = -q / 2.0 - disc;

  std::vector<cplx> out;
  if (u3 == cplx(0.0)) {
    // p = q = 0: triple root.
    return {shift, shift, shift};
  }
  const cplx u = std::pow(u3, 1.0 / 3.0);
  const cplx omega(-0.5, std::sqrt(3.0) / 2.0);
  cplx uk = u;
  for (int k = 0; k < 3; ++k) {
    out.push_back(uk - p / (3.0 * uk) + shift);
    uk *= omega;
  }
  return out;
}

}  // namespace

Polynomial::Polynomial(std::vector<cplx> ascending) : coeffs_(std::move(ascending)) {
  while (coeffs_.size() > 1 && coeffs_.back() == cplx(0.0)) coeffs_.pop_back();
  if (coeffs_.empty()) coeffs_.push_back(0.0);
}

Polynomial Polynomial::chebyshev(int a) {
  switch (a) {
    case 2: return Polynomial({-1.0, 0.0, 2.0});
    case 3: return Polynomial({0.0, -3.0, 0.0, 4.0});
    default: throw Error(ErrorCode::kInvalidArgument, "semiconjugacy degree must be 2 or 3");
  }
}

cplx Polynomial::operator()(cplx z) const {
  cplx acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return Polynomial({0.0});
  std::vector<cplx> d;
  for (std::size_t i = 1; i < coeffs_.size(); ++i) d.push_back(static_cast<double>(i) * coeffs_[i]);
  return Polynomial(std::move(d));
}

std::vector<cplx> Polynomial::solve(cplx w) const {
  std::vector<cplx> c = coeffs_;
  c[0] -= w;
  std::vector<cplx> out;
  switch (degree()) {
    case 1: out = {-c[0] / c[1]}; break;
    case 2: out = solve_quadratic(c[2], c[1], c[0]); break;
    case 3: out = solve_cubic(c[3], c[2], c[1], c[0]); break;
    default: throw Error(ErrorCode::kInvalidArgument, "root finding supports degree 1..3");
  }
  const Polynomial dp = derivative();
  for (auto& z : out) {
    for (int it = 0; it < 2; ++it) {
      const cplx f = (*this)(z)-w;
      const cplx fp = dp(z);
      if (fp == cplx(0.0)) break;
      const cplx step = f / fp;
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
      z -= step;
    }
  }
  return out;
}

}  // namespace qdlab
