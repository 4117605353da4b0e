#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "qdlab/qd.hpp"

namespace qdlab {

/// Closed interval of a line parameter; either end may be infinite.
struct Interval {
  double lo;
  double hi;
};

/// Sorted, pairwise disjoint intervals.
using IntervalSet = std::vector<Interval>;

IntervalSet intersect(const IntervalSet& a, const IntervalSet& b);
IntervalSet unite(const IntervalSet& a, const IntervalSet& b);
IntervalSet complement(const IntervalSet& a);

struct Box {
  double xmin;
  double xmax;
  double ymin;
  double ymax;
};

/// A measurable subset of the plane built from disks, round annuli, convex
/// polygons and the half strip {0 <= Re z <= pi, |Im z| <= Y}, closed under
/// complement, intersection and union. Regions are immutable values that
/// share their subtrees.
///
/// The integrators only ever ask a region one question: which parameters
/// lambda put origin + lambda * dir inside it. Every variant answers that in
/// closed form, so curved boundaries never have to be resolved by refinement.
class Region {
 public:
  enum class Kind { kDisk, kAnnulus, kPlane, kComplement, kIntersection, kUnion, kPolygon, kHalfStrip };

  static Region disk(cplx center, double radius);
  static Region annulus(cplx center, double r, double R);
  static Region plane();
  static Region empty();
  static Region halfstrip(double Y);
  /// Convex polygon with counter-clockwise vertices.
  static Region polygon(std::vector<cplx> vertices);
  static Region complement(const Region& r);
  static Region intersection(const Region& a, const Region& b);
  static Region unite(const Region& a, const Region& b);

  Kind kind() const;
  cplx center() const;
  double inner_radius() const;
  double outer_radius() const;
  double strip_height() const;
  const std::vector<cplx>& vertices() const;
  const Region& left() const;
  const Region& right() const;

  /// Closed membership.
  bool contains(cplx z) const;

  /// Structural boundedness. Conservative: complements count as unbounded.
  bool bounded() const;

  /// Axis-aligned box containing the region, if bounded.
  std::optional<Box> bbox() const;

  /// {lambda : origin + lambda * dir in region}; dir must have unit length.
  IntervalSet clip_line(cplx origin, cplx dir) const;

  /// The image M(region).
  Region transformed(const AffineMap& m) const;

  /// Centers of the disks/annuli and polygon centroids in the region tree.
  void collect_centers(std::vector<cplx>& out) const;

 private:
  struct Node;
  explicit Region(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

}  // namespace qdlab
