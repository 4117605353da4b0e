#pragma once

#include <random>

#include "qdlab/qd.hpp"

namespace qdtest {

using qdlab::cplx;

inline cplx random_point(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> u(-radius, radius);
  for (;;) {
    const cplx z(u(rng), u(rng));
    if (std::abs(z) <= radius) return z;
  }
}

// Points in a disk that keep at least `sep` from each other and from `avoid`.
inline std::vector<cplx> separated_points(std::mt19937_64& rng, int n, double radius, double sep,
                                          const std::vector<cplx>& avoid = {}) {
  std::vector<cplx> out;
  while (static_cast<int>(out.size()) < n) {
    const cplx z = random_point(rng, radius);
    bool ok = true;
    for (cplx w : out) ok = ok && std::abs(z - w) >= sep;
    for (cplx w : avoid) ok = ok && std::abs(z - w) >= sep;
    if (ok) out.push_back(z);
  }
  return out;
}

/// Random differential with `poles` simple finite poles and poles - 3 zeros
/// (so infinity is a simple pole).
inline qdlab::RationalQD random_integrable(std::mt19937_64& rng, int poles, double radius = 2.0) {
  const auto ps = separated_points(rng, poles, radius, 0.1);
  const auto zs = separated_points(rng, poles - 3, radius, 0.1, ps);
  std::vector<qdlab::DivisorPoint> P;
  std::vector<qdlab::DivisorPoint> Z;
  for (cplx p : ps) P.push_back({p, 1});
  for (cplx z : zs) Z.push_back({z, 1});
  std::uniform_real_distribution<double> arg(0.0, qdlab::kTwoPi);
  std::uniform_real_distribution<double> mod(0.5, 2.0);
  return qdlab::RationalQD(std::polar(mod(rng), arg(rng)), Z, P);
}

inline double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace qdtest
