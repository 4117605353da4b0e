#include "qdlab/limit_models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace qdlab {

namespace {

bool lex_less(cplx x, cplx y) { return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag(); }

std::vector<cplx> sorted_poles(const RationalQD& q) {
  auto p = q.pole_locations();
  std::sort(p.begin(), p.end(), lex_less);
  return p;
}

struct Pair {
  double d;
  std::size_t i;
  std::size_t j;
};

// All pairs of the (lexicographically sorted) points by distance, ties by index.
std::vector<Pair> sorted_pairs(const std::vector<cplx>& p) {
  std::vector<Pair> pairs;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) pairs.push_back({std::abs(p[i] - p[j]), i, j});
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) {
    if (x.d != y.d) return x.d < y.d;
    if (x.i != y.i) return x.i < y.i;
    return x.j < y.j;
  });
  return pairs;
}

void check_not_critical(cplx b) {
  if (std::abs(std::sin(b)) <= kIdentityTol) {
    throw Error(ErrorCode::kDegenerateAtCritical, "b is a critical point of cos");
  }
}

}  // namespace

ThickScaling detect_thick_scaling(const RationalQD& q) {
  const auto p = sorted_poles(q);
  if (p.size() < 2) throw Error(ErrorCode::kTooFewPoles, "need at least two finite poles");
  const Pair best = sorted_pairs(p).front();
  return {AffineMap(best.d, p[best.i])};
}

MassResult limit_model_distance(const RationalQD& q_n, const AffineMap& M, const RationalQD& q_model,
                                const QuadratureConfig& cfg) {
  const double scale = total_mass(q_model, cfg).value;
  return difference_mass(affine_pullback(q_n, M), q_model, scale, cfg);
}

AffineMap hat_scaling(cplx a, cplx b) {
  check_not_critical(b);
  if (a == 0.0) throw Error(ErrorCode::kInvalidArgument, "scaling factor must be nonzero");
  return AffineMap(-a * std::sin(b), std::cos(b));
}

cplx s_n_eval(cplx a, cplx b, cplx z) {
  check_not_critical(b);
  if (a == 0.0) throw Error(ErrorCode::kInvalidArgument, "scaling factor must be nonzero");
  // cos(az + b) - cos(b) = -2 sin(b + az/2) sin(az/2)
  return 2.0 * std::sin(b + 0.5 * a * z) * std::sin(0.5 * a * z) / (a * std::sin(b));
}

double s_n_sup_deviation(cplx a, cplx b, double R) {
  if (!(R > 0.0)) throw Error(ErrorCode::kInvalidArgument, "radius must be positive");
  constexpr int kSamples = 256;
  double worst = 0.0;
  for (int i = 0; i < kSamples; ++i) {
    const cplx z = std::polar(R, kTwoPi * i / kSamples);
    worst = std::max(worst, std::abs(s_n_eval(a, b, z) - z));
  }
  return worst;
}

ThinModel thin_image_annulus(double r, double R_star, cplx b) {
  check_not_critical(b);
  if (!(r > 0.0) || !(R_star > r) || !std::isfinite(R_star)) throw Error(ErrorCode::kBadRadii, "need 0 < r < R*");
  const double s = std::abs(std::sin(b));
  ThinModel m;
  m.center = std::cos(b);
  m.r = s * r;
  m.R = s * R_star;
  return m;
}

double choose_inner_radius(const RationalQD& q, const ThinModel& model, double delta, const QuadratureConfig& cfg) {
  if (!(delta > 0.0 && delta <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "delta must lie in (0, 1]");
  if (!(model.r > 0.0) || !(model.R > model.r)) throw Error(ErrorCode::kBadRadii, "need 0 < r < R");
  constexpr double kPerDecade = 64.0;
  std::vector<double> grid;
  for (int i = 1;; ++i) {
    const double x = model.r * std::pow(10.0, i / kPerDecade);
    if (x >= model.R) break;
    grid.push_back(x);
  }
  grid.push_back(model.R);
  const double total = mass_on_region(q, Region::annulus(model.center, model.r, model.R), cfg).value;
  const double target = (1.0 - delta) * total;
  // cumulative mass is nondecreasing in R*, so the first qualifying grid
  // point can be found by bisection
  std::size_t lo = 0;
  std::size_t hi = grid.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    const double m = mass_on_region(q, Region::annulus(model.center, model.r, grid[mid]), cfg).value;
    if (m >= target) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return grid[lo];
}

std::optional<ConcentrationResult> find_concentration_annulus(const RationalQD& q, double M_required) {
  if (!(M_required > 0.0)) throw Error(ErrorCode::kInvalidArgument, "required modulus must be positive");
  const auto p = sorted_poles(q);
  if (p.size() < 2) throw Error(ErrorCode::kTooFewPoles, "need at least two finite poles");
  double pmax = 0.0;
  for (cplx z : p) pmax = std::max(pmax, std::abs(z));
  const double chart = 2.0 * pmax + 1.0;

  std::vector<std::size_t> parent(p.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::vector<std::vector<std::size_t>> members(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) members[i] = {i};
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };

  for (const Pair& pr : sorted_pairs(p)) {
    std::size_t ri = find(pr.i);
    std::size_t rj = find(pr.j);
    if (ri == rj) continue;
    if (rj < ri) std::swap(ri, rj);
    parent[rj] = ri;
    members[ri].insert(members[ri].end(), members[rj].begin(), members[rj].end());
    members[rj].clear();
    auto& cl = members[ri];
    std::sort(cl.begin(), cl.end());

    cplx center = 0.0;
    for (std::size_t m : cl) center += p[m];
    center /= static_cast<double>(cl.size());
    double rho = 0.0;
    for (std::size_t m : cl) rho = std::max(rho, std::abs(p[m] - center));
    const double inner = 1.5 * rho;
    double outer = chart - std::abs(center);
    std::size_t k = 0;
    for (std::size_t m = 0; m < p.size(); ++m) {
      if (k < cl.size() && cl[k] == m) {
        ++k;
        continue;
      }
      outer = std::min(outer, std::abs(p[m] - center));
    }
    if (!(inner > 0.0) || !(outer > inner)) continue;
    const double modulus = std::log(outer / inner) / kTwoPi;
    if (modulus >= M_required) {
      ConcentrationResult res;
      res.center = center;
      res.inner_radius = inner;
      res.outer_radius = outer;
      res.modulus = modulus;
      for (std::size_t m : cl) res.poles_inside.push_back(p[m]);
      return res;
    }
  }
  return std::nullopt;
}

namespace {

enum class StageVerdict { kClear, kViolated, kMarginal };

struct StageOutcome {
  StageVerdict verdict = StageVerdict::kClear;
  long k = 0;
};

int winding(const std::vector<cplx>& curve, cplx w) {
  double total = 0.0;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const cplx a = curve[i] - w;
    const cplx b = curve[(i + 1) % curve.size()] - w;
    total += std::arg(b / a);
  }
  return static_cast<int>(std::lround(total / kTwoPi));
}

StageOutcome check_stage(const std::vector<cplx>& vals, double margin, long k_window) {
  double xmin = vals[0].real(), xmax = xmin, ymin = vals[0].imag(), ymax = ymin;
  for (cplx v : vals) {
    xmin = std::min(xmin, v.real());
    xmax = std::max(xmax, v.real());
    ymin = std::min(ymin, v.imag());
    ymax = std::max(ymax, v.imag());
  }
  std::vector<long> ks;
  if (ymin - margin <= 0.0 && ymax + margin >= 0.0) {
    const double k0 = std::ceil((xmin - margin) / kPi);
    const double k1 = std::floor((xmax + margin) / kPi);
    if (k1 - k0 > 1e6) throw Error(ErrorCode::kInconclusive, "stage image too large to test");
    for (double k = k0; k <= k1; k += 1.0) ks.push_back(static_cast<long>(k));
  }
  for (long k = -k_window; k <= k_window; ++k) {
    if (std::find(ks.begin(), ks.end(), k) == ks.end()) ks.push_back(k);
  }
  std::sort(ks.begin(), ks.end());

  StageOutcome out;
  bool marginal = false;
  long marginal_k = 0;
  for (long k : ks) {
    const cplx w(kPi * static_cast<double>(k), 0.0);
    double dmin = std::numeric_limits<double>::infinity();
    for (cplx v : vals) dmin = std::min(dmin, std::abs(v - w));
    if (!(dmin > margin)) {
      if (!marginal) marginal_k = k;
      marginal = true;
      continue;
    }
    if (winding(vals, w) != 0) return {StageVerdict::kViolated, k};
  }
  if (marginal) return {StageVerdict::kMarginal, marginal_k};
  return out;
}

}  // namespace

MassConditionResult mass_condition_check(cplx center, double radius, const std::vector<cplx>& lambdas,
                                         long k_window) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw Error(ErrorCode::kInvalidArgument, "disk radius must be positive");
  for (cplx l : lambdas) {
    if (l == 0.0) throw Error(ErrorCode::kInvalidArgument, "lambdas must be nonzero");
  }
  if (k_window < 0) throw Error(ErrorCode::kInvalidArgument, "k window must be nonnegative");

  constexpr int kBaseSamples = 1024;
  constexpr int kRefinements = 3;
  for (int level = 0; level <= kRefinements; ++level) {
    const int N = kBaseSamples << (2 * level);
    const double step = kTwoPi * radius / N;
    std::vector<cplx> vals(N);
    for (int i = 0; i < N; ++i) vals[i] = center + std::polar(radius, kTwoPi * i / N);

    double lip = 1.0;
    bool retry = false;
    MassConditionResult marginal_result;
    bool have_marginal = false;
    for (std::size_t s = 0; s <= lambdas.size(); ++s) {
      if (s > 0) {
        double ymax = 0.0;
        for (cplx v : vals) ymax = std::max(ymax, std::abs(v.imag()));
        lip *= std::abs(lambdas[s - 1]) * std::cosh(ymax + lip * step);
        for (cplx& v : vals) v = lambdas[s - 1] * std::cos(v);
      }
      const double margin = lip * step;
      for (cplx v : vals) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
          throw Error(ErrorCode::kInconclusive, "stage image overflows");
        }
      }
      if (!std::isfinite(margin)) throw Error(ErrorCode::kInconclusive, "derivative bound overflows");
      const StageOutcome o = check_stage(vals, margin, k_window);
      if (o.verdict == StageVerdict::kViolated) return {false, static_cast<int>(s), o.k, false};
      if (o.verdict == StageVerdict::kMarginal) {
        retry = true;
        if (!have_marginal) marginal_result = {false, static_cast<int>(s), o.k, true};
        have_marginal = true;
      }
    }
    if (!retry) return {};
    if (level == kRefinements) return marginal_result;
  }
  return {};
}

double modulus_bound(int k, double d0) {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  if (!(d0 >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "d0 must be nonnegative");
  return kPi / std::log(3.0 + 2.0 * std::sqrt(2.0)) * k * std::exp(k * d0);
}

}  // namespace qdlab
