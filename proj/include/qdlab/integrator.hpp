#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "qdlab/region.hpp"

namespace qdlab {

/// How the plane is cut into patches before adaptive refinement.
enum class Strategy {
  /// Each singular point (and each region center) owns its Voronoi cell,
  /// integrated in log-polar coordinates about it; |z| > R_out goes through
  /// the chart w = 1/z. Handles clustered configurations at any scale.
  kVoronoiLogPolar,
  /// Small disks about each singular point in plain polar coordinates, the
  /// chart w = 1/z outside R_out, and a Cartesian quadtree for the rest.
  kPoleDiskQuadtree,
};

struct QuadratureConfig {
  double rel_tol = 1e-4;
  double abs_floor = 1e-12;
  int max_depth = 24;
  /// Pole-disk radius = factor * (half the minimum pairwise pole distance),
  /// capped at 0.5. Used by kPoleDiskQuadtree.
  double pole_disk_factor = 0.5;
  int gauss_order = 8;
  Strategy strategy = Strategy::kVoronoiLogPolar;
  /// Upper bound on live cells before giving up with NoConvergence.
  std::size_t max_cells = 2'000'000;
  /// Worker cap; 0 reads QDLAB_THREADS, falling back to the hardware count.
  int threads = 0;

  void validate() const;
};

struct MassResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::int64_t cells_evaluated = 0;
};

/// Nonnegative integrand evaluated at base + offset; see RationalQD::eval_offset
/// for why the point is split in two.
using PointDensity = std::function<double(cplx base, cplx offset)>;

struct IntegrationProblem {
  PointDensity density;
  Region domain = Region::plane();
  /// Curves (region boundaries) across which the density may jump.
  std::vector<Region> breaks;
  /// Points where the density may be unbounded (at worst like 1/|z - p|).
  std::vector<cplx> singular_points;
  /// Additional points to centre patches on, e.g. where mass concentrates.
  std::vector<cplx> anchor_points;
  /// Tolerance reference: the target error is rel_tol * scale when scale > 0,
  /// rel_tol * |value| otherwise.
  double scale = 0.0;
};

/// Adaptive integral of the density over the domain (with respect to area).
///
/// Cells are refined where the difference between a cell's tensor Gauss rule
/// and the sum of its four children's rules is largest until the summed
/// differences drop below the target. Inside a cell only the outer coordinate
/// is sampled; along each sampled line the domain and break curves are
/// clipped exactly and the inner Gauss rule is applied on each piece.
///
/// Deterministic: cell values depend only on the cell, any worker schedule
/// fills the same table, and the final sum runs serially in Morton order with
/// compensated summation.
MassResult integrate(const IntegrationProblem& problem, const QuadratureConfig& cfg);

/// Kahan-Babuska (Neumaier) compensated accumulator.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Worker count honouring cfg.threads and QDLAB_THREADS.
int worker_count(const QuadratureConfig& cfg);

/// Runs fn(i) for i in [0, n) over up to `workers` threads with static chunks.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

}  // namespace qdlab
