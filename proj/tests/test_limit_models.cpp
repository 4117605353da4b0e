#include <doctest.h>

#include "qdlab/families.hpp"
#include "qdlab/limit_models.hpp"
#include "support.hpp"

using namespace qdlab;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::kInvalidArgument;
}

RationalQD model() { return RationalQD(1.0, {}, {{0.0, 1}, {1.0, 1}, {3.0, 1}}); }

}  // namespace

TEST_CASE("thick scaling detection") {
  for (int n = 1; n <= 12; ++n) {
    const double a = std::ldexp(1.0, -n);
    const RationalQD q = affine_pushforward(model(), AffineMap(a, 1.0));
    const ThickScaling t = detect_thick_scaling(q);
    CHECK(std::abs(t.M.b - 1.0) <= a);
    CHECK(std::abs(t.M.a) >= a / 2.0);
    CHECK(std::abs(t.M.a) <= 2.0 * a);
  }
  CHECK(code_of([] { detect_thick_scaling(RationalQD(1.0, {}, {{0.0, 3}})); }) == ErrorCode::kTooFewPoles);
  const RationalQD ex = example42_build(Example42Params::geometric(12));
  const ThickScaling t = detect_thick_scaling(ex);
  CHECK(std::abs(t.M.b) <= 3.0 * std::ldexp(1.0, -12) * 1.0000001);
}

TEST_CASE("limit model distance") {
  const AffineMap M(0.25, 1.0);
  const RationalQD qn = affine_pushforward(model(), M);
  CHECK(limit_model_distance(qn, M, model()).value <= 1e-4 * total_mass(model()).value);

  double prev = 1e300;
  for (double delta : {0.1, 0.03, 0.01}) {
    const RationalQD pert = RationalQD(1.0, {}, {{0.0, 1}, {1.0 + delta, 1}, {3.0, 1}});
    const double d = limit_model_distance(affine_pushforward(pert, M), M, model()).value;
    CHECK(d > 0.0);
    CHECK(d < prev);
    prev = d;
  }
}

TEST_CASE("hat scaling and S_n") {
  const AffineMap h = hat_scaling(1.0, kPi / 2.0);
  CHECK(std::abs(h.a + 1.0) < 1e-15);
  CHECK(std::abs(h.b) < 1e-15);
  CHECK(code_of([] { hat_scaling(1.0, 0.0); }) == ErrorCode::kDegenerateAtCritical);
  CHECK(code_of([] { s_n_eval(0.1, kPi, 1.0); }) == ErrorCode::kDegenerateAtCritical);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 10; ++i) {
    const cplx a = qdtest::random_point(rng, 1.0);
    const cplx b = qdtest::random_point(rng, 3.0);
    CHECK(std::abs(hat_scaling(a, b)(0.0) - std::cos(b)) < 1e-15);
    // S_n is the normalised deviation of cos o M from its base value
    const cplx z = qdtest::random_point(rng, 1.0);
    const cplx direct = (std::cos(a * z + b) - std::cos(b)) / (-a * std::sin(b));
    CHECK(std::abs(s_n_eval(a, b, z) - direct) < 1e-10 * (1.0 + std::abs(direct)));
  }
  CHECK(std::abs(s_n_eval(0.1, kPi / 2.0, 1.0) - std::sin(0.1) / 0.1) < 1e-12);
  CHECK(std::abs(s_n_eval(1e-9, 1.0, cplx(0.3, 0.4)) - cplx(0.3, 0.4)) < 1e-8);

  // critical points of S_n at (k pi - b) / a
  const cplx a(0.3, 0.1);
  const cplx b(0.7, 0.0);
  for (int k = -2; k <= 2; ++k) {
    const cplx c = (kPi * k - b) / a;
    CHECK(std::abs(-a * std::sin(a * c + b) / (-a * std::sin(b))) < 1e-12);
  }

  double prev = 1e300;
  for (int n = 1; n <= 12; ++n) {
    const double d = s_n_sup_deviation(std::ldexp(1.0, -n), 1.0, 1.0);
    CHECK(d < prev);
    prev = d;
  }
}

TEST_CASE("thin image annulus") {
  const ThinModel m = thin_image_annulus(0.1, 0.5, kPi / 2.0);
  CHECK(std::abs(m.center) < 1e-15);
  CHECK(m.r == doctest::Approx(0.1));
  CHECK(m.R == doctest::Approx(0.5));
  const ThinModel g = thin_image_annulus(0.01, 0.7, cplx(0.4, 0.9));
  CHECK(annulus_modulus(g.r, g.R) == doctest::Approx(annulus_modulus(0.01, 0.7)).epsilon(1e-14));
  CHECK(code_of([] { thin_image_annulus(0.1, 0.5, 0.0); }) == ErrorCode::kDegenerateAtCritical);
  CHECK(code_of([] { thin_image_annulus(0.5, 0.1, 1.0); }) == ErrorCode::kBadRadii);
}

TEST_CASE("inner radius choice") {
  const RationalQD q = RationalQD::log_differential();
  ThinModel m;
  m.r = 1e-3;
  m.R = 1.0;
  const double step = std::pow(10.0, 1.0 / 64.0);
  CHECK(choose_inner_radius(q, m, 1.0) == doctest::Approx(m.r * step).epsilon(1e-12));
  for (double delta : {0.25, 0.5, 0.9}) {
    const double expect = m.r * std::pow(m.R / m.r, 1.0 - delta);
    const double got = choose_inner_radius(q, m, delta);
    CHECK(got >= expect / step / 1.0001);
    CHECK(got <= expect * step * 1.0001);
  }
  CHECK(code_of([&] { choose_inner_radius(q, m, 0.0); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("concentration annulus search") {
  Example42Params p;
  p.a = 1e-6;
  p.b = 3e-6;
  const RationalQD q = example42_build(p);
  const auto c = find_concentration_annulus(q, 1.0);
  REQUIRE(c.has_value());
  CHECK(c->poles_inside.size() == 4);
  CHECK(std::abs(c->center) < 1e-12);
  CHECK(c->modulus == doctest::Approx(std::log(1.0 / 4.5e-6) / kTwoPi).epsilon(1e-9));

  const RationalQD eq(1.0, {}, {{0.0, 1}, {1.0, 1}, {2.0, 1}});
  CHECK_FALSE(find_concentration_annulus(eq, 10.0).has_value());
  CHECK(code_of([] { find_concentration_annulus(RationalQD(1.0, {}, {{0.0, 3}}), 1.0); }) ==
        ErrorCode::kTooFewPoles);

  std::mt19937_64 rng(19);
  for (int t = 0; t < 30; ++t) {
    const RationalQD r = qdtest::random_integrable(rng, 7);
    const auto res = find_concentration_annulus(r, 0.05);
    if (!res) continue;
    CHECK(res->poles_inside.size() >= 2);
    CHECK(res->modulus >= 0.05);
    CHECK(res->modulus == doctest::Approx(std::log(res->outer_radius / res->inner_radius) / kTwoPi));
    for (cplx z : r.pole_locations()) {
      const double d = std::abs(z - res->center);
      CHECK_FALSE((d > res->inner_radius && d < res->outer_radius));
    }
  }
}

TEST_CASE("mass condition examples") {
  const auto r0 = mass_condition_check(0.0, 0.1, {cplx(2.0, 1.0)});
  CHECK_FALSE(r0.holds);
  CHECK(r0.stage == 0);
  CHECK(r0.k == 0);
  CHECK_FALSE(r0.marginal);

  const auto r1 = mass_condition_check(kPi / 2.0, 1.0, {cplx(0.7, -0.3)});
  CHECK_FALSE(r1.holds);
  CHECK(r1.stage == 1);
  CHECK(r1.k == 0);

  CHECK(mass_condition_check(cplx(0.0, 1.0), 0.05, {1.0}).holds);
  CHECK(code_of([] { mass_condition_check(0.0, 0.0, {}); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([] { mass_condition_check(1.0, 0.1, {0.0}); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("mass condition is monotone in the disk") {
  std::mt19937_64 rng(23);
  int held = 0;
  for (int t = 0; t < 40; ++t) {
    const cplx c = qdtest::random_point(rng, 3.0);
    const double r = std::uniform_real_distribution<double>(0.02, 0.6)(rng);
    const std::vector<cplx> lambdas{qdtest::random_point(rng, 2.0), qdtest::random_point(rng, 2.0)};
    MassConditionResult outer;
    try {
      outer = mass_condition_check(c, r, lambdas);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kInconclusive) continue;
      throw;
    }
    if (!outer.holds) continue;
    ++held;
    const cplx c2 = c + 0.3 * r * std::polar(1.0, 0.7 * t);
    CHECK(mass_condition_check(c2, 0.5 * r, lambdas).holds);
  }
  CHECK(held > 0);
}

TEST_CASE("modulus bound") {
  CHECK(modulus_bound(1, 0.0) == doctest::Approx(1.78222).epsilon(1e-5));
  CHECK(modulus_bound(2, 0.0) == doctest::Approx(2.0 * modulus_bound(1, 0.0)).epsilon(1e-15));
  CHECK(modulus_bound(2, 0.5) >= modulus_bound(2, 0.0));
  CHECK(modulus_bound(3, 0.5) >= modulus_bound(2, 0.5));
  CHECK(code_of([] { modulus_bound(0, 0.0); }) == ErrorCode::kInvalidArgument);
}
