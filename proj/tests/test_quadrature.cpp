#include <doctest.h>

#include "qdlab/quadrature.hpp"
#include "support.hpp"

using namespace qdlab;

namespace {

RationalQD three_poles() { return RationalQD(1.0, {}, {{0.0, 1}, {1.0, 1}, {-1.0, 1}}); }

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::kInvalidArgument;
}

}  // namespace

TEST_CASE("annulus closed forms") {
  const RationalQD q = RationalQD::log_differential();
  const MassResult m = mass_on_region(q, Region::annulus(0.0, 1.0, 3.0));
  CHECK(std::abs(m.value - kTwoPi * std::log(3.0)) <= 1e-4 * kTwoPi * std::log(3.0));
  CHECK(std::abs(mass_on_region(q, Region::annulus(0.0, 1.0, std::exp(1.0))).value - kTwoPi) < 1e-4 * kTwoPi);
  CHECK(annulus_log_mass(1.0, 3.0) == doctest::Approx(kTwoPi * std::log(3.0)).epsilon(1e-15));
  CHECK(annulus_log_mass(2.0, 2.0 * std::exp(1.0)) == doctest::Approx(kTwoPi).epsilon(1e-15));
  CHECK(code_of([] { annulus_log_mass(2.0, 2.0); }) == ErrorCode::kBadRadii);
  CHECK(code_of([] { annulus_modulus(0.0, 2.0); }) == ErrorCode::kBadRadii);

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> lr(-3.0, 3.0);
  for (int t = 0; t < 20; ++t) {
    double r = std::exp(lr(rng));
    double R = std::exp(lr(rng));
    if (r > R) std::swap(r, R);
    if (R / r < 1.01) R = 1.5 * r;
    const cplx c = qdtest::random_point(rng, 2.0);
    const MassResult mm = mass_on_region(RationalQD::log_differential(1.0, c), Region::annulus(c, r, R));
    CHECK(std::abs(mm.value - annulus_log_mass(r, R)) <= 1e-4 * annulus_log_mass(r, R));
  }
}

TEST_CASE("annulus moduli of the cluster radii") {
  for (int n = 2; n <= 5; ++n) {
    CHECK(annulus_modulus(std::exp(-kTwoPi * n), 1.0) == doctest::Approx(n).epsilon(1e-12));
    if (n >= 3) {
      CHECK(annulus_modulus(std::exp(-kTwoPi * n * (n - 1)), std::exp(-kTwoPi * n)) ==
            doctest::Approx(n * (n - 2)).epsilon(1e-9));
    }
    CHECK(annulus_modulus_from_logs(-kTwoPi * n * n, -kTwoPi * n * (n - 1)) == doctest::Approx(n).epsilon(1e-12));
  }
  CHECK(annulus_modulus(1.0, std::exp(kTwoPi)) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("two strategies agree on the plane") {
  QuadratureConfig a;
  QuadratureConfig b;
  b.strategy = Strategy::kPoleDiskQuadtree;
  const MassResult ma = total_mass(three_poles(), a);
  const MassResult mb = total_mass(three_poles(), b);
  CHECK(std::abs(ma.value - mb.value) <= 2.0 * a.rel_tol * ma.value);
  CHECK(ma.error_estimate <= a.rel_tol * ma.value);

  std::mt19937_64 rng(4);
  for (int t = 0; t < 3; ++t) {
    const RationalQD q = qdtest::random_integrable(rng, 5);
    const double va = total_mass(q, a).value;
    const double vb = total_mass(q, b).value;
    CHECK(std::abs(va - vb) <= 2.0 * a.rel_tol * va);
  }
}

TEST_CASE("integrability errors") {
  CHECK(code_of([] { total_mass(RationalQD::log_differential()); }) == ErrorCode::kNonIntegrable);
  CHECK(code_of([] { mass_on_region(RationalQD::log_differential(), Region::disk(0.0, 1.0)); }) ==
        ErrorCode::kNonIntegrable);
  // a double pole on the closed boundary counts as inside
  CHECK(code_of([] { mass_on_region(RationalQD::log_differential(1.0, 1.0), Region::disk(0.0, 1.0)); }) ==
        ErrorCode::kNonIntegrable);
  QuadratureConfig tiny;
  tiny.max_cells = 20;
  tiny.rel_tol = 1e-12;
  CHECK(code_of([&] { total_mass(three_poles(), tiny); }) == ErrorCode::kNoConvergence);
}

TEST_CASE("additivity, monotonicity and chart consistency") {
  const RationalQD q = three_poles();
  const MassResult inner = mass_on_region(q, Region::disk(0.2, 1.3));
  const MassResult ring = mass_on_region(q, Region::annulus(0.2, 1.3, 2.5));
  const MassResult both = mass_on_region(q, Region::disk(0.2, 2.5));
  const double err = inner.error_estimate + ring.error_estimate + both.error_estimate;
  CHECK(std::abs(inner.value + ring.value - both.value) <= err + 1e-12);
  CHECK(inner.value <= both.value + err);

  const double R = 2.0;
  const MassResult outside = mass_on_region(q, Region::complement(Region::disk(0.0, R)));
  const MassResult chart = mass_on_region(inversion_chart(q), Region::disk(0.0, 1.0 / R));
  CHECK(std::abs(outside.value - chart.value) <= 2e-4 * chart.value);

  const MassResult plane = total_mass(q);
  CHECK(std::abs(both.value + mass_on_region(q, Region::complement(Region::disk(0.2, 2.5))).value - plane.value) <=
        2e-4 * plane.value);
}

TEST_CASE("affine change of variables preserves mass") {
  std::mt19937_64 rng(8);
  const RationalQD q = qdtest::random_integrable(rng, 6);
  const double m = total_mass(q).value;
  for (cplx a : {cplx(3.0, 1.0), cplx(1e-3, 0.0), cplx(0.0, -50.0)}) {
    const double ma = total_mass(affine_pullback(q, AffineMap(a, cplx(0.3, -0.7)))).value;
    CHECK(std::abs(ma - m) <= 2e-4 * m);
  }
}

TEST_CASE("mass fraction profile") {
  const RationalQD q = three_poles();
  const auto f = mass_fraction_profile(q, 0.0, {0.5, 1.0, 2.0, 100.0, 1e6});
  REQUIRE(f.size() == 5);
  for (std::size_t i = 1; i < f.size(); ++i) CHECK(f[i] >= f[i - 1]);
  CHECK(f.back() == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(f.back() <= 1.0 + 2e-4);
  CHECK(code_of([&] { mass_fraction_profile(q, 0.0, {1.0, 1.0}); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("results do not depend on the worker count") {
  QuadratureConfig one;
  one.threads = 1;
  QuadratureConfig three;
  three.threads = 3;
  std::mt19937_64 rng(2);
  const RationalQD q = qdtest::random_integrable(rng, 7);
  const MassResult a = total_mass(q, one);
  const MassResult b = total_mass(q, three);
  CHECK(a.value == b.value);
  CHECK(a.error_estimate == b.error_estimate);
  CHECK(a.cells_evaluated == b.cells_evaluated);
}

TEST_CASE("difference mass") {
  const RationalQD q = three_poles();
  CHECK(difference_mass(q, q, 1.0).value == 0.0);
  const double m = total_mass(q).value;
  const MassResult d = difference_mass(q, q.scaled(1.5), m);
  CHECK(std::abs(d.value - 0.5 * m) <= 3e-4 * m);
}
