#include <doctest.h>

#include "qdlab/pushforward.hpp"
#include "support.hpp"

using namespace qdlab;
using qdtest::rel;

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

TruncationPolicy fixed_k(int K) {
  TruncationPolicy p;
  p.K = K;
  p.tail_tol = 0.0;
  return p;
}

RationalQD ex42_member() {
  return RationalQD(1.0, {{cplx(0, 1), 1}, {cplx(0, -1), 1}}, {{0.5, 1}, {-0.5, 1}, {1.5, 1}, {-1.5, 1}, {1.0, 1}});
}

}  // namespace

TEST_CASE("cosine preimages") {
  const auto one = cos_preimages(1.0, 1);
  CHECK(one.degenerate);
  REQUIRE(one.points.size() == 3);
  CHECK(std::abs(one.points[0] + kTwoPi) < 1e-12);
  CHECK(std::abs(one.points[1]) < 1e-12);
  CHECK(std::abs(one.points[2] - kTwoPi) < 1e-12);

  const auto minus = cos_preimages(-1.0, 0);
  CHECK(minus.degenerate);
  CHECK(minus.points.size() == 2);

  const cplx w(0.3, -1.2);
  const auto g = cos_preimages(w, 3);
  CHECK_FALSE(g.degenerate);
  CHECK(g.points.size() == 14);
  for (cplx z : g.points) CHECK(std::abs(std::cos(z) - w) < 1e-12);
  for (std::size_t i = 1; i < g.points.size(); ++i) CHECK(g.points[i - 1].real() <= g.points[i].real());
}

TEST_CASE("truncated density examples") {
  const RationalQD cube(1.0, {}, {{0.0, 3}});
  CHECK(std::abs(cos_pushforward_density(cube, 0.0, fixed_k(0)).value) == 0.0);

  // hand-rolled sum over the 10 preimages for K = 2
  const cplx w = 0.5;
  const double a = std::acos(0.5);
  cplx direct = 0.0;
  for (int k = -2; k <= 2; ++k) {
    for (double s : {1.0, -1.0}) {
      const double z = kTwoPi * k + s * a;
      direct += 1.0 / (z * z * z);
    }
  }
  direct /= (1.0 - w * w);
  const DensityResult d = cos_pushforward_density(cube, w, fixed_k(2));
  // odd density, symmetric preimage set: both sides vanish up to rounding
  CHECK(std::abs(d.value - direct) <= 1e-15);
  CHECK(d.K_used == 2);

  const RationalQD shifted(1.0, {}, {{0.3, 3}});
  cplx direct2 = 0.0;
  for (int k = -2; k <= 2; ++k) {
    for (double s : {1.0, -1.0}) {
      const double z = kTwoPi * k + s * a - 0.3;
      direct2 += 1.0 / (z * z * z);
    }
  }
  direct2 /= (1.0 - w * w);
  CHECK(rel(cos_pushforward_density(shifted, w, fixed_k(2)).value, direct2) < 1e-13);

  CHECK(code_of([&] { cos_pushforward_density(cube, 0.5, []{ TruncationPolicy p; p.K = 2; return p; }()); }) ==
        ErrorCode::kTailTooLarge);
  CHECK(code_of([&] { cos_pushforward_density(cube, 1.0); }) == ErrorCode::kCriticalValue);
  CHECK(code_of([&] { cos_pushforward_density(cube, -1.0); }) == ErrorCode::kCriticalValue);
  const RationalQD hit(1.0, {}, {{std::acos(0.3) + kTwoPi, 1}, {0.0, 1}, {5.0, 1}});
  CHECK(code_of([&] { cos_pushforward_density(hit, 0.3, fixed_k(3)); }) == ErrorCode::kPoleImage);
}

TEST_CASE("truncation error stays inside the reported tail bound") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 10; ++t) {
    const RationalQD q = qdtest::random_integrable(rng, 5);
    const CosPushforward cp(q);
    for (int i = 0; i < 10; ++i) {
      const cplx w = qdtest::random_point(rng, 3.0);
      TruncationPolicy p;
      p.K = 400;
      const DensityResult d = cos_pushforward_density(q, w, p);
      CHECK(d.tail_bound <= p.tail_tol * std::max(1.0, std::abs(d.value)));
      CHECK(std::abs(d.value - cp.density(w)) <= d.tail_bound + 1e-12 * std::abs(d.value));
      // exact closed form against a long direct sum
      const DensityResult longsum = cos_pushforward_density(q, w, fixed_k(20000));
      CHECK(rel(longsum.value, cp.density(w)) < 1e-7);
    }
  }
}

TEST_CASE("strip density equals the periodised preimage sum") {
  std::mt19937_64 rng(12);
  const RationalQD q = qdtest::random_integrable(rng, 6);
  const CosPushforward cp(q);
  for (int i = 0; i < 20; ++i) {
    const cplx z = cplx(std::uniform_real_distribution<double>(0.0, kPi)(rng),
                        std::uniform_real_distribution<double>(-4.0, 4.0)(rng));
    cplx direct = 0.0;
    for (int k = -20000; k <= 20000; ++k) direct += q.eval(z + kTwoPi * k) + q.eval(-z + kTwoPi * k);
    CHECK(std::abs(cp.strip_density(z) - direct) <= 1e-7 * (1.0 + std::abs(direct)));
    // the strip density is the w-density times the Jacobian sin^2 z
    const cplx s = std::sin(z);
    CHECK(rel(cp.strip_density(z), cp.density(std::cos(z)) * s * s) < 1e-10);
  }
  // far up the strip the closed form stays finite and decays
  CHECK(std::abs(cp.strip_density(cplx(1.0, 700.0))) < 1e-200);
}

TEST_CASE("lambda conjugation") {
  std::mt19937_64 rng(17);
  const RationalQD q = qdtest::random_integrable(rng, 5);
  const CosineMap f(cplx(1.5, -0.4));
  const cplx w(0.7, 0.3);
  const DensityResult d = pushforward_density(f, q, w, fixed_k(3000));
  // oracle: sum over lambda cos z = w of q(z) / (lambda sin z)^2
  cplx direct = 0.0;
  for (cplx z : cos_preimages(w / f.lambda, 3000).points) {
    const cplx der = f.lambda * std::sin(z);
    direct += q.eval(z) / (der * der);
  }
  CHECK(rel(d.value, direct) < 1e-10);
  CHECK(code_of([&] { pushforward_density(f, q, f.lambda); }) == ErrorCode::kCriticalValue);
}

TEST_CASE("commutation with the degree-three semiconjugacy") {
  std::mt19937_64 rng(5);
  const RationalQD q = qdtest::random_integrable(rng, 5);
  const RationalQD q3 = affine_pushforward(q, AffineMap(3.0, 0.0));
  const CosPushforward lhs(q3);
  const CosPushforward inner(q);
  const Polynomial Q3 = Polynomial::chebyshev(3);
  for (int i = 0; i < 30; ++i) {
    const cplx w = qdtest::random_point(rng, 2.0);
    const cplx r = poly_pushforward_density(Q3, [&](cplx u) { return inner.density(u); }, w);
    CHECK(rel(lhs.density(w), r) < 1e-8);
  }
}

TEST_CASE("push-forward masses") {
  const RationalQD q = ex42_member();
  const MassResult m = total_mass(q);
  const MassResult s = cos_pushforward_mass(q);
  const MassResult w = cos_pushforward_mass(q, {}, {}, PushforwardMethod::kWPlane);
  CHECK(s.value <= m.value + m.error_estimate + s.error_estimate);
  CHECK(std::abs(s.value - w.value) <= 3e-4 * w.value);

  const MassResult sc = cos_pushforward_mass(q.scaled(cplx(0.0, -2.5)));
  CHECK(rel(sc.value, 2.5 * s.value) < 1e-12);

  CHECK(code_of([] { cos_pushforward_mass(RationalQD::log_differential()); }) == ErrorCode::kNonIntegrable);
  TruncationPolicy low;
  low.Y = 1.0;
  CHECK(code_of([&] { cos_pushforward_mass(q, {}, low); }) == ErrorCode::kTailTooLarge);

  std::mt19937_64 rng(44);
  for (int t = 0; t < 3; ++t) {
    const RationalQD r = qdtest::random_integrable(rng, 6);
    const double a = cos_pushforward_mass(r).value;
    const double b = cos_pushforward_mass(r, {}, {}, PushforwardMethod::kWPlane).value;
    CHECK(std::abs(a - b) <= 3e-4 * b);
  }
}

TEST_CASE("restricted push-forward") {
  const RationalQD q = ex42_member();
  const double full = cos_pushforward_mass(q).value;
  const Region big = Region::disk(0.0, 400.0);
  const MassResult r = restricted_cos_pushforward_mass(q, big);
  const double rest = mass_on_region(q, Region::complement(big)).value;
  // the part of q outside the disk carries at most `rest` of push-forward mass
  CHECK(std::abs(r.value - full) <= rest + 3e-4 * full);

  const Region d = Region::disk(0.0, 0.8);
  CHECK(restricted_cos_pushforward_mass(q, d).value <= mass_on_region(q, d).value * (1.0 + 3e-4));

  const Region nothing = Region::intersection(Region::disk(0.0, 1.0), Region::disk(5.0, 1.0));
  CHECK(restricted_cos_pushforward_mass(q, nothing).value == 0.0);
  CHECK(code_of([&] { restricted_cos_pushforward_mass(q, Region::plane()); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([&] { restricted_cos_pushforward_mass(RationalQD::log_differential(), d); }) ==
        ErrorCode::kNonIntegrable);

  // a region inside one fundamental half-strip maps injectively: mass is kept
  const Region inj = Region::annulus(cplx(1.5, 0.5), 0.1, 0.5);
  const RationalQD log = RationalQD::log_differential(1.0, cplx(1.5, 0.5));
  const double a = restricted_cos_pushforward_mass(log, inj).value;
  CHECK(std::abs(a - annulus_log_mass(0.1, 0.5)) <= 3e-4 * a);
}

TEST_CASE("efficiency ratio") {
  const EfficiencyReport e = efficiency_report(ex42_member());
  CHECK(e.ratio > 0.0);
  CHECK(e.ratio < 1.0);
  CHECK(e.ratio_error > 0.0);
  CHECK(efficiency_ratio(ex42_member()) == e.ratio);
}

TEST_CASE("polynomial push-forwards") {
  std::mt19937_64 rng(6);
  const RationalQD q = qdtest::random_integrable(rng, 5);
  const Polynomial g({1.0, 0.0, -0.5});
  for (int i = 0; i < 20; ++i) {
    const cplx w = qdtest::random_point(rng, 2.0);
    CHECK(rel(quadratic_model_pushforward(q, w), poly_pushforward_density(g, q, w)) < 1e-12);
  }
  CHECK(code_of([&] { quadratic_model_pushforward(q, 1.0); }) == ErrorCode::kCriticalValue);
  CHECK(code_of([&] { poly_pushforward_density(g, q, 1.0); }) == ErrorCode::kCriticalValue);
  CHECK(code_of([&] { poly_pushforward_density(Polynomial::chebyshev(3), q, 1.0); }) == ErrorCode::kCriticalValue);
  const RationalQD hit(1.0, {}, {{std::sqrt(2.0 - 2.0 * 0.4), 1}, {3.0, 1}, {-3.0, 1}});
  CHECK(code_of([&] { quadratic_model_pushforward(hit, 0.4); }) == ErrorCode::kPoleImage);
  CHECK(code_of([&] { poly_pushforward_density(g, hit, 0.4); }) == ErrorCode::kPoleImage);
}

TEST_CASE("semiconjugacy residuals") {
  std::mt19937_64 rng(10);
  std::vector<cplx> pts;
  for (int i = 0; i < 500; ++i) pts.push_back(qdtest::random_point(rng, 10.0));
  CHECK(semiconjugacy_residual(2, pts) <= 1e-10);
  CHECK(semiconjugacy_residual(3, pts) <= 1e-10);
  CHECK(semiconjugacy_residual(2, Polynomial::chebyshev(3), pts) > 1e-3);
  CHECK(code_of([&] { semiconjugacy_residual(4, pts); }) == ErrorCode::kInvalidArgument);
}
