#include "qdlab/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <tuple>

namespace qdlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxPathDepth = 30;

// Log-polar patches stop this many e-folds below the nearest-neighbour
// distance. For a simple pole the dropped disk carries about
// 2 pi |res| d e^-30 of mass.
constexpr double kSingularDecades = 30.0;
constexpr double kRegularDecades = 12.0;
constexpr double kLogRootLength = 1.5;
constexpr int kAngularRoots = 8;

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussRule make_gauss_legendre(int n) {
  GaussRule g;
  g.nodes.resize(n);
  g.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    g.nodes[i] = x;
    g.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return g;
}

const GaussRule& gauss_rule(int n) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_gauss_legendre(n)).first;
  return it->second;
}

enum class PatchType { kLogPolar, kInvertedPolar, kLinearPolar, kCartesian };

struct Patch {
  PatchType type;
  cplx base{0.0};
  // Linear polar: outer radius of the pole disk.
  double limit = kInf;
  // Log polar: offsets to every other site (Voronoi half planes).
  std::vector<cplx> neighbours;
  double r_out = kInf;
  // Cartesian: excluded pole disks.
  std::vector<std::pair<cplx, double>> holes;
};

struct Cell {
  std::uint32_t patch = 0;
  std::uint32_t root = 0;
  std::uint64_t path = 0;
  int depth = 0;
  double ua = 0, ub = 0, va = 0, vb = 0;
  double coarse = 0.0;
  double fine[4] = {0, 0, 0, 0};
  double err = 0.0;

  double fine_total() const { return (fine[0] + fine[1]) + (fine[2] + fine[3]); }

  std::uint64_t aligned_path() const { return path << (2 * (kMaxPathDepth - depth)); }

  void child_rect(int c, double& cua, double& cub, double& cva, double& cvb) const {
    const double um = 0.5 * (ua + ub);
    const double vm = 0.5 * (va + vb);
    cua = (c & 1) ? um : ua;
    cub = (c & 1) ? ub : um;
    cva = (c & 2) ? vm : va;
    cvb = (c & 2) ? vb : vm;
  }
};

bool key_less(const Cell& a, const Cell& b) {
  return std::make_tuple(a.patch, a.root, a.aligned_path()) <
         std::make_tuple(b.patch, b.root, b.aligned_path());
}

class Engine {
 public:
  Engine(const IntegrationProblem& problem, const QuadratureConfig& cfg)
      : problem_(problem), cfg_(cfg), rule_(gauss_rule(cfg.gauss_order)) {}

  MassResult run();

 private:
  void build_voronoi();
  void build_pole_disks();
  void add_exterior(double r_out);
  void add_roots(std::uint32_t patch, double u0, double u1, int nu, double v0, double v1, int nv);

  // Allowed parameter intervals along the line of outer coordinate u, in the
  // patch's inner coordinate, sorted and split at break crossings.
  std::vector<Interval> line_pieces(const Patch& p, double u, cplx& origin, cplx& dir) const;
  double rule(const Patch& p, double ua, double ub, double va, double vb) const;
  void evaluate(Cell& c) const;

  const IntegrationProblem& problem_;
  const QuadratureConfig& cfg_;
  const GaussRule& rule_;
  std::vector<Patch> patches_;
  std::vector<Cell> leaves_;
};

std::vector<Interval> Engine::line_pieces(const Patch& p, double u, cplx& origin, cplx& dir) const {
  IntervalSet lambda;
  if (p.type == PatchType::kCartesian) {
    origin = cplx(u, 0.0);
    dir = cplx(0.0, 1.0);
    lambda = problem_.domain.clip_line(origin, dir);
    lambda = intersect(lambda, Region::disk(0.0, p.r_out).clip_line(origin, dir));
    for (const auto& [c, r] : p.holes) {
      lambda = intersect(lambda, complement(Region::disk(c, r).clip_line(origin, dir)));
    }
  } else {
    origin = p.base;
    dir = std::polar(1.0, u);
    lambda = intersect(problem_.domain.clip_line(origin, dir), {{0.0, kInf}});
    switch (p.type) {
      case PatchType::kLogPolar: {
        double reach = kInf;
        for (const cplx& d : p.neighbours) {
          const double proj = std::real(dir * std::conj(d));
          if (proj > 0.0) reach = std::min(reach, std::norm(d) / (2.0 * proj));
        }
        lambda = intersect(lambda, {{0.0, reach}});
        lambda = intersect(lambda, Region::disk(0.0, p.r_out).clip_line(origin, dir));
        break;
      }
      case PatchType::kInvertedPolar: lambda = intersect(lambda, {{p.r_out, kInf}}); break;
      case PatchType::kLinearPolar: lambda = intersect(lambda, {{0.0, p.limit}}); break;
      case PatchType::kCartesian: break;
    }
  }
  if (lambda.empty()) return {};

  std::vector<double> cuts;
  for (const Region& br : problem_.breaks) {
    for (const Interval& iv : br.clip_line(origin, dir)) {
      cuts.push_back(iv.lo);
      cuts.push_back(iv.hi);
    }
  }

  auto to_v = [&](double l) {
    switch (p.type) {
      case PatchType::kLogPolar: return l <= 0.0 ? -kInf : std::log(l);
      case PatchType::kInvertedPolar: return std::isinf(l) ? 0.0 : 1.0 / l;
      default: return l;
    }
  };

  std::vector<Interval> out;
  for (const Interval& iv : lambda) {
    double a = to_v(iv.lo);
    double b = to_v(iv.hi);
    if (a > b) std::swap(a, b);
    std::vector<double> inner;
    for (double c : cuts) {
      if (c > iv.lo && c < iv.hi) inner.push_back(to_v(c));
    }
    std::sort(inner.begin(), inner.end());
    double lo = a;
    for (double c : inner) {
      if (c > lo) {
        out.push_back({lo, c});
        lo = c;
      }
    }
    out.push_back({lo, b});
  }
  std::sort(out.begin(), out.end(), [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
  return out;
}

double Engine::rule(const Patch& p, double ua, double ub, double va, double vb) const {
  const int n = static_cast<int>(rule_.nodes.size());
  const double uh = 0.5 * (ub - ua);
  const double um = 0.5 * (ub + ua);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = um + uh * rule_.nodes[i];
    cplx origin;
    cplx dir;
    const auto pieces = line_pieces(p, u, origin, dir);
    double line = 0.0;
    for (const Interval& iv : pieces) {
      const double lo = std::max(iv.lo, va);
      const double hi = std::min(iv.hi, vb);
      if (!(hi > lo)) continue;
      const double vh = 0.5 * (hi - lo);
      const double vm = 0.5 * (hi + lo);
      double seg = 0.0;
      for (int j = 0; j < n; ++j) {
        const double v = vm + vh * rule_.nodes[j];
        double f = 0.0;
        switch (p.type) {
          case PatchType::kLogPolar: {
            const double rho = std::exp(v);
            f = problem_.density(p.base, rho * dir) * rho * rho;
            break;
          }
          case PatchType::kInvertedPolar: {
            const double rho = 1.0 / v;
            f = problem_.density(p.base, rho * dir) * rho * rho * rho;
            break;
          }
          case PatchType::kLinearPolar: f = problem_.density(p.base, v * dir) * v; break;
          case PatchType::kCartesian: f = problem_.density(0.0, origin + v * dir); break;
        }
        if (!std::isfinite(f)) {
          throw Error(ErrorCode::kNonIntegrable, "density is not finite at a quadrature node");
        }
        seg += rule_.weights[j] * f;
      }
      line += vh * seg;
    }
    total += rule_.weights[i] * line;
  }
  return uh * total;
}

void Engine::evaluate(Cell& c) const {
  const Patch& p = patches_[c.patch];
  for (int k = 0; k < 4; ++k) {
    double a, b, lo, hi;
    c.child_rect(k, a, b, lo, hi);
    c.fine[k] = rule(p, a, b, lo, hi);
  }
  c.err = std::abs(c.fine_total() - c.coarse);
}

void Engine::add_roots(std::uint32_t patch, double u0, double u1, int nu, double v0, double v1, int nv) {
  std::uint32_t root = 0;
  for (int i = 0; i < nu; ++i) {
    for (int j = 0; j < nv; ++j) {
      Cell c;
      c.patch = patch;
      c.root = root++;
      c.ua = u0 + (u1 - u0) * i / nu;
      c.ub = u0 + (u1 - u0) * (i + 1) / nu;
      c.va = v0 + (v1 - v0) * j / nv;
      c.vb = v0 + (v1 - v0) * (j + 1) / nv;
      leaves_.push_back(c);
    }
  }
}

void Engine::add_exterior(double r_out) {
  Patch p;
  p.type = PatchType::kInvertedPolar;
  p.r_out = r_out;
  patches_.push_back(p);
  add_roots(static_cast<std::uint32_t>(patches_.size() - 1), 0.0, kTwoPi, kAngularRoots, 0.0,
            1.0 / r_out, 4);
}

namespace {

struct Site {
  cplx z;
  bool singular;
};

std::vector<Site> collect_sites(const IntegrationProblem& problem) {
  std::vector<Site> raw;
  for (cplx p : problem.singular_points) raw.push_back({p, true});
  for (cplx p : problem.anchor_points) raw.push_back({p, false});
  std::vector<cplx> centers;
  problem.domain.collect_centers(centers);
  for (const Region& br : problem.breaks) br.collect_centers(centers);
  for (cplx p : centers) raw.push_back({p, false});

  std::vector<Site> sites;
  for (const Site& s : raw) {
    auto it = std::find_if(sites.begin(), sites.end(), [&](const Site& o) {
      return std::abs(o.z - s.z) <= 1e-14 * std::max(1.0, std::abs(s.z));
    });
    if (it == sites.end()) {
      sites.push_back(s);
    } else {
      it->singular = it->singular || s.singular;
    }
  }
  if (sites.empty()) sites.push_back({0.0, false});
  return sites;
}

double bounded_radius(const Box& b) {
  double r = 0.0;
  for (double x : {b.xmin, b.xmax}) {
    for (double y : {b.ymin, b.ymax}) r = std::max(r, std::abs(cplx(x, y)));
  }
  return r;
}

}  // namespace

void Engine::build_voronoi() {
  const auto sites = collect_sites(problem_);
  const auto box = problem_.domain.bbox();
  double r_out;
  if (box) {
    r_out = bounded_radius(*box) * (1.0 + 1e-12);
  } else {
    double m = 0.0;
    for (const Site& s : sites) m = std::max(m, std::abs(s.z));
    r_out = 2.0 * m + 1.0;
  }
  if (!(r_out > 0.0)) r_out = 1.0;

  for (std::size_t i = 0; i < sites.size(); ++i) {
    Patch p;
    p.type = PatchType::kLogPolar;
    p.base = sites[i].z;
    p.r_out = r_out;
    double nearest = kInf;
    for (std::size_t j = 0; j < sites.size(); ++j) {
      if (j == i) continue;
      const cplx d = sites[j].z - sites[i].z;
      p.neighbours.push_back(d);
      nearest = std::min(nearest, std::abs(d));
    }
    if (!std::isfinite(nearest)) nearest = r_out;
    const double reach = r_out + std::abs(sites[i].z);
    const double t_hi = std::log(reach);
    const double t_lo =
        std::min(std::log(nearest), t_hi) - (sites[i].singular ? kSingularDecades : kRegularDecades);
    patches_.push_back(std::move(p));
    const int nt = std::max(1, static_cast<int>(std::ceil((t_hi - t_lo) / kLogRootLength)));
    add_roots(static_cast<std::uint32_t>(patches_.size() - 1), 0.0, kTwoPi, kAngularRoots, t_lo, t_hi, nt);
  }
  if (!box) add_exterior(r_out);
}

void Engine::build_pole_disks() {
  const auto& poles = problem_.singular_points;
  double dmin = kInf;
  for (std::size_t i = 0; i < poles.size(); ++i) {
    for (std::size_t j = i + 1; j < poles.size(); ++j) dmin = std::min(dmin, std::abs(poles[i] - poles[j]));
  }
  const double radius = std::min(0.5, cfg_.pole_disk_factor * 0.5 * dmin);
  if (!(radius > 0.0)) throw Error(ErrorCode::kInvalidArgument, "coincident singular points");

  const auto box = problem_.domain.bbox();
  double r_out;
  Box square;
  if (box) {
    r_out = bounded_radius(*box) * (1.0 + 1e-12);
    square = *box;
  } else {
    double m = 0.0;
    for (cplx p : poles) m = std::max(m, std::abs(p) + radius);
    r_out = 2.0 * m + 1.0;
    square = Box{-r_out, r_out, -r_out, r_out};
  }
  if (!(r_out > 0.0)) r_out = 1.0;

  for (cplx pole : poles) {
    Patch p;
    p.type = PatchType::kLinearPolar;
    p.base = pole;
    p.limit = radius;
    patches_.push_back(p);
    add_roots(static_cast<std::uint32_t>(patches_.size() - 1), 0.0, kTwoPi, kAngularRoots, 0.0, radius, 2);
  }
  Patch cart;
  cart.type = PatchType::kCartesian;
  cart.r_out = r_out;
  for (cplx pole : poles) cart.holes.emplace_back(pole, radius);
  patches_.push_back(std::move(cart));
  // The inner coordinate of a Cartesian cell is y, the outer x.
  add_roots(static_cast<std::uint32_t>(patches_.size() - 1), square.xmin, square.xmax, 4, square.ymin,
            square.ymax, 4);
  if (!box) add_exterior(r_out);
}

MassResult Engine::run() {
  if (cfg_.strategy == Strategy::kVoronoiLogPolar) {
    build_voronoi();
  } else {
    build_pole_disks();
  }

  const int workers = worker_count(cfg_);
  std::int64_t evaluated = 0;

  parallel_for(leaves_.size(), workers, [&](std::size_t i) {
    Cell& c = leaves_[i];
    c.coarse = rule(patches_[c.patch], c.ua, c.ub, c.va, c.vb);
    evaluate(c);
  });
  evaluated += static_cast<std::int64_t>(5 * leaves_.size());

  for (;;) {
    CompensatedSum total;
    CompensatedSum err;
    for (const Cell& c : leaves_) {
      total.add(c.fine_total());
      err.add(c.err);
    }
    const double ref = problem_.scale > 0.0 ? problem_.scale : std::abs(total.value());
    const double target = std::max(cfg_.rel_tol * ref, cfg_.abs_floor);
    const double e = err.value();
    if (e <= target) break;

    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < leaves_.size(); ++i) {
      if (leaves_[i].depth < cfg_.max_depth && leaves_[i].err > 0.0) order.push_back(i);
    }
    if (order.empty()) {
      throw Error(ErrorCode::kNoConvergence, "maximum depth reached with error estimate " +
                                                 std::to_string(e) + " above target " +
                                                 std::to_string(target));
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (leaves_[a].err != leaves_[b].err) return leaves_[a].err > leaves_[b].err;
      return key_less(leaves_[a], leaves_[b]);
    });
    const double wanted = e - 0.5 * target;
    double picked = 0.0;
    std::size_t count = 0;
    while (count < order.size() && picked < wanted) picked += leaves_[order[count++]].err;

    std::vector<bool> refine(leaves_.size(), false);
    for (std::size_t i = 0; i < count; ++i) refine[order[i]] = true;

    std::vector<Cell> next;
    next.reserve(leaves_.size() + 3 * count);
    std::vector<std::size_t> fresh;
    for (std::size_t i = 0; i < leaves_.size(); ++i) {
      const Cell& parent = leaves_[i];
      if (!refine[i]) {
        next.push_back(parent);
        continue;
      }
      for (int k = 0; k < 4; ++k) {
        Cell child;
        child.patch = parent.patch;
        child.root = parent.root;
        child.depth = parent.depth + 1;
        child.path = (parent.path << 2) | static_cast<std::uint64_t>(k);
        parent.child_rect(k, child.ua, child.ub, child.va, child.vb);
        child.coarse = parent.fine[k];
        fresh.push_back(next.size());
        next.push_back(child);
      }
    }
    leaves_ = std::move(next);
    if (leaves_.size() > cfg_.max_cells) {
      throw Error(ErrorCode::kNoConvergence, "cell budget exhausted with error estimate " + std::to_string(e));
    }
    parallel_for(fresh.size(), workers, [&](std::size_t i) { evaluate(leaves_[fresh[i]]); });
    evaluated += static_cast<std::int64_t>(4 * fresh.size());
  }

  std::sort(leaves_.begin(), leaves_.end(), key_less);
  CompensatedSum total;
  CompensatedSum err;
  for (const Cell& c : leaves_) {
    total.add(c.fine_total());
    err.add(c.err);
  }
  return MassResult{std::max(0.0, total.value()), err.value(), evaluated};
}

}  // namespace

void QuadratureConfig::validate() const {
  if (!(rel_tol > 0.0)) throw Error(ErrorCode::kInvalidArgument, "rel_tol must be positive");
  if (!(abs_floor >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "abs_floor must be nonnegative");
  if (max_depth < 1 || max_depth > kMaxPathDepth) {
    throw Error(ErrorCode::kInvalidArgument, "max_depth must lie in [1, 30]");
  }
  if (!(pole_disk_factor > 0.0 && pole_disk_factor <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "pole_disk_factor must lie in (0, 1]");
  }
  if (gauss_order < 1 || gauss_order > 64) {
    throw Error(ErrorCode::kInvalidArgument, "gauss_order must lie in [1, 64]");
  }
}

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    comp_ += (sum_ - t) + x;
  } else {
    comp_ += (x - t) + sum_;
  }
  sum_ = t;
}

int worker_count(const QuadratureConfig& cfg) {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw <= 0) hw = 1;
  if (cfg.threads > 0) return cfg.threads;
  if (const char* env = std::getenv("QDLAB_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return std::min(v, hw);
  }
  return hw;
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
  if (workers <= 1 || n < 64) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
  std::vector<std::exception_ptr> errors(w);
  std::vector<std::thread> pool;
  pool.reserve(w);
  for (std::size_t t = 0; t < w; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t * n / w; i < (t + 1) * n / w; ++i) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

MassResult integrate(const IntegrationProblem& problem, const QuadratureConfig& cfg) {
  cfg.validate();
  if (!problem.density) throw Error(ErrorCode::kInvalidArgument, "missing density");
  Engine engine(problem, cfg);
  return engine.run();
}

}  // namespace qdlab
