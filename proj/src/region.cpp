#include "qdlab/region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qdlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

IntervalSet full_line() { return {{-kInf, kInf}}; }

IntervalSet clip_disk(cplx origin, cplx dir, cplx center, double radius) {
  const cplx d = origin - center;
  const double beta = std::real(std::conj(dir) * d);
  const double gamma = std::norm(d) - radius * radius;
  const double disc = beta * beta - gamma;
  if (disc < 0.0) return {};
  const double s = std::sqrt(disc);
  return {{-beta - s, -beta + s}};
}

IntervalSet clip_convex(cplx origin, cplx dir, const std::vector<cplx>& v) {
  double lo = -kInf;
  double hi = kInf;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const cplx e = v[(i + 1) % v.size()] - v[i];
    const double f0 = cross(e, origin - v[i]);
    const double f1 = cross(e, dir);
    if (f1 == 0.0) {
      if (f0 < 0.0) return {};
      continue;
    }
    const double root = -f0 / f1;
    if (f1 > 0.0) {
      lo = std::max(lo, root);
    } else {
      hi = std::min(hi, root);
    }
    if (lo > hi) return {};
  }
  return {{lo, hi}};
}

std::vector<cplx> strip_vertices(double Y) {
  return {cplx(0.0, -Y), cplx(kPi, -Y), cplx(kPi, Y), cplx(0.0, Y)};
}

}  // namespace

IntervalSet intersect(const IntervalSet& a, const IntervalSet& b) {
  IntervalSet out;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    const double lo = std::max(a[i].lo, b[j].lo);
    const double hi = std::min(a[i].hi, b[j].hi);
    if (lo <= hi) out.push_back({lo, hi});
    if (a[i].hi < b[j].hi) {
      ++i;
    } else {
      ++j;
    }
  }
  return out;
}

IntervalSet unite(const IntervalSet& a, const IntervalSet& b) {
  IntervalSet all = a;
  all.insert(all.end(), b.begin(), b.end());
  std::sort(all.begin(), all.end(), [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
  IntervalSet out;
  for (const auto& iv : all) {
    if (!out.empty() && iv.lo <= out.back().hi) {
      out.back().hi = std::max(out.back().hi, iv.hi);
    } else {
      out.push_back(iv);
    }
  }
  return out;
}

IntervalSet complement(const IntervalSet& a) {
  IntervalSet out;
  double cursor = -kInf;
  for (const auto& iv : a) {
    if (iv.lo > cursor) out.push_back({cursor, iv.lo});
    cursor = iv.hi;
  }
  if (cursor < kInf) out.push_back({cursor, kInf});
  return out;
}

struct Region::Node {
  Kind kind;
  cplx center{0.0};
  double r = 0.0;
  double R = 0.0;
  std::vector<cplx> vertices;
  std::optional<Region> left;
  std::optional<Region> right;
};

Region Region::disk(cplx center, double radius) {
  if (!(radius >= 0.0)) throw Error(ErrorCode::kBadRadii, "disk radius must be nonnegative");
  auto n = std::make_shared<Node>();
  n->kind = Kind::kDisk;
  n->center = center;
  n->R = radius;
  return Region(std::move(n));
}

Region Region::annulus(cplx center, double r, double R) {
  if (!(r >= 0.0) || !(r < R)) throw Error(ErrorCode::kBadRadii, "annulus needs 0 <= r < R");
  auto n = std::make_shared<Node>();
  n->kind = Kind::kAnnulus;
  n->center = center;
  n->r = r;
  n->R = R;
  return Region(std::move(n));
}

Region Region::plane() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kPlane;
  return Region(std::move(n));
}

Region Region::empty() { return complement(plane()); }

Region Region::halfstrip(double Y) {
  if (!(Y > 0.0)) throw Error(ErrorCode::kInvalidArgument, "strip height must be positive");
  auto n = std::make_shared<Node>();
  n->kind = Kind::kHalfStrip;
  n->R = Y;
  n->vertices = strip_vertices(Y);
  return Region(std::move(n));
}

Region Region::polygon(std::vector<cplx> vertices) {
  if (vertices.size() < 3) throw Error(ErrorCode::kInvalidArgument, "polygon needs 3 vertices");
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const cplx a = vertices[i];
    const cplx b = vertices[(i + 1) % vertices.size()];
    const cplx c = vertices[(i + 2) % vertices.size()];
    if (cross(b - a, c - b) < 0.0) {
      throw Error(ErrorCode::kInvalidArgument, "polygon must be convex and counter-clockwise");
    }
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::kPolygon;
  n->vertices = std::move(vertices);
  return Region(std::move(n));
}

Region Region::complement(const Region& r) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kComplement;
  n->left = r;
  return Region(std::move(n));
}

Region Region::intersection(const Region& a, const Region& b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kIntersection;
  n->left = a;
  n->right = b;
  return Region(std::move(n));
}

Region Region::unite(const Region& a, const Region& b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kUnion;
  n->left = a;
  n->right = b;
  return Region(std::move(n));
}

Region::Kind Region::kind() const { return node_->kind; }
cplx Region::center() const { return node_->center; }
double Region::inner_radius() const { return node_->r; }
double Region::outer_radius() const { return node_->R; }
double Region::strip_height() const { return node_->R; }
const std::vector<cplx>& Region::vertices() const { return node_->vertices; }
const Region& Region::left() const { return *node_->left; }
const Region& Region::right() const { return *node_->right; }

bool Region::contains(cplx z) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::kDisk: return std::abs(z - n.center) <= n.R;
    case Kind::kAnnulus: {
      const double d = std::abs(z - n.center);
      return d >= n.r && d <= n.R;
    }
    case Kind::kPlane: return true;
    case Kind::kComplement: return !n.left->contains(z);
    case Kind::kIntersection: return n.left->contains(z) && n.right->contains(z);
    case Kind::kUnion: return n.left->contains(z) || n.right->contains(z);
    case Kind::kPolygon:
    case Kind::kHalfStrip:
      for (std::size_t i = 0; i < n.vertices.size(); ++i) {
        const cplx e = n.vertices[(i + 1) % n.vertices.size()] - n.vertices[i];
        if (cross(e, z - n.vertices[i]) < 0.0) return false;
      }
      return true;
  }
  return false;
}

bool Region::bounded() const { return bbox().has_value(); }

std::optional<Box> Region::bbox() const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::kDisk:
    case Kind::kAnnulus:
      return Box{n.center.real() - n.R, n.center.real() + n.R, n.center.imag() - n.R,
                 n.center.imag() + n.R};
    case Kind::kPlane:
    case Kind::kComplement: return std::nullopt;
    case Kind::kPolygon:
    case Kind::kHalfStrip: {
      Box b{kInf, -kInf, kInf, -kInf};
      for (const auto& v : n.vertices) {
        b.xmin = std::min(b.xmin, v.real());
        b.xmax = std::max(b.xmax, v.real());
        b.ymin = std::min(b.ymin, v.imag());
        b.ymax = std::max(b.ymax, v.imag());
      }
      return b;
    }
    case Kind::kIntersection: {
      const auto a = n.left->bbox();
      const auto b = n.right->bbox();
      if (!a) return b;
      if (!b) return a;
      return Box{std::max(a->xmin, b->xmin), std::min(a->xmax, b->xmax), std::max(a->ymin, b->ymin),
                 std::min(a->ymax, b->ymax)};
    }
    case Kind::kUnion: {
      const auto a = n.left->bbox();
      const auto b = n.right->bbox();
      if (!a || !b) return std::nullopt;
      return Box{std::min(a->xmin, b->xmin), std::max(a->xmax, b->xmax), std::min(a->ymin, b->ymin),
                 std::max(a->ymax, b->ymax)};
    }
  }
  return std::nullopt;
}

IntervalSet Region::clip_line(cplx origin, cplx dir) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::kDisk: return clip_disk(origin, dir, n.center, n.R);
    case Kind::kAnnulus: {
      IntervalSet outer = clip_disk(origin, dir, n.center, n.R);
      if (n.r <= 0.0) return outer;
      return intersect(outer, qdlab::complement(clip_disk(origin, dir, n.center, n.r)));
    }
    case Kind::kPlane: return full_line();
    case Kind::kComplement: return qdlab::complement(n.left->clip_line(origin, dir));
    case Kind::kIntersection:
      return intersect(n.left->clip_line(origin, dir), n.right->clip_line(origin, dir));
    case Kind::kUnion: return qdlab::unite(n.left->clip_line(origin, dir), n.right->clip_line(origin, dir));
    case Kind::kPolygon:
    case Kind::kHalfStrip: return clip_convex(origin, dir, n.vertices);
  }
  return {};
}

Region Region::transformed(const AffineMap& m) const {
  const Node& n = *node_;
  const double s = std::abs(m.a);
  switch (n.kind) {
    case Kind::kDisk: return disk(m(n.center), s * n.R);
    case Kind::kAnnulus: return annulus(m(n.center), s * n.r, s * n.R);
    case Kind::kPlane: return plane();
    case Kind::kComplement: return complement(n.left->transformed(m));
    case Kind::kIntersection: return intersection(n.left->transformed(m), n.right->transformed(m));
    case Kind::kUnion: return unite(n.left->transformed(m), n.right->transformed(m));
    case Kind::kPolygon:
    case Kind::kHalfStrip: {
      std::vector<cplx> v;
      for (const auto& p : n.vertices) v.push_back(m(p));
      return polygon(std::move(v));
    }
  }
  return *this;
}

void Region::collect_centers(std::vector<cplx>& out) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::kDisk:
    case Kind::kAnnulus: out.push_back(n.center); break;
    case Kind::kPlane: break;
    case Kind::kComplement: n.left->collect_centers(out); break;
    case Kind::kIntersection:
    case Kind::kUnion:
      n.left->collect_centers(out);
      n.right->collect_centers(out);
      break;
    case Kind::kPolygon:
    case Kind::kHalfStrip: {
      cplx c = 0.0;
      for (const auto& v : n.vertices) c += v;
      out.push_back(c / static_cast<double>(n.vertices.size()));
      break;
    }
  }
}

}  // namespace qdlab
