#pragma once

#include <vector>

#include "qdlab/qd.hpp"

namespace qdlab {

/// Complex polynomial with coefficients in ascending order: c[0] + c[1] z + ...
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<cplx> ascending);

  /// 2 w^2 - 1 (a = 2) or 4 w^3 - 3 w (a = 3): cos(a z) = Q_a(cos z).
  static Polynomial chebyshev(int a);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<cplx>& coeffs() const { return coeffs_; }

  cplx operator()(cplx z) const;
  Polynomial derivative() const;

  /// Roots of Q(z) = w with multiplicity, for degree 1..3. Closed forms
  /// (quadratic formula, Cardano) followed by two Newton polishing steps.
  std::vector<cplx> solve(cplx w) const;

  /// Roots of the polynomial itself (degree 1..3).
  std::vector<cplx> roots() const { return solve(0.0); }

 private:
  std::vector<cplx> coeffs_;
};

}  // namespace qdlab
