#pragma once

#include <string>
#include <vector>

namespace qdlab {

/// Merged critical orbit of a postsingularly finite cosine map. The preperiod
/// counts steps from the critical point until the orbit enters its cycle.
struct OrbitPortrait {
  int preperiod = 2;
  int period = 1;

  /// |P_f| = |orbit of the critical value| + |{y1, infinity}|.
  int postsingular_size() const { return preperiod + period + 1; }
};

OrbitPortrait validate_portrait(int preperiod, int period);

/// |P_f| by walking the orbit explicitly (cross-check for the closed form).
int enumerate_postsingular_size(const OrbitPortrait& p);

/// Orbit labels x1, x2, ... of the critical value in visiting order.
std::vector<std::string> orbit_labels(const OrbitPortrait& p);

/// e.g. "c -> x1 -> x2 -> x2  (cycle length 1)".
std::string orbit_diagram(const OrbitPortrait& p);

/// |P_f| - 3.
int teich_dimension(const OrbitPortrait& p);

enum class Feasibility { kInfeasible, kIndeterminate };

struct FeasibilityVerdict {
  Feasibility verdict = Feasibility::kIndeterminate;
  std::string reason;
};

FeasibilityVerdict counting_feasibility(int sym_poles_in_disk, int crit_values_inside);

}  // namespace qdlab
