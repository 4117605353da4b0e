#include "qdlab/orbits.hpp"

#include <set>

#include "qdlab/error.hpp"

namespace qdlab {

namespace {

// Successor in the orbit c = o_0 -> o_1 -> ... with o_{pre + per} = o_pre.
int successor(const OrbitPortrait& p, int i) {
  const int next = i + 1;
  return next == p.preperiod + p.period ? p.preperiod : next;
}

}  // namespace

OrbitPortrait validate_portrait(int preperiod, int period) {
  if (preperiod < 2) {
    throw Error(ErrorCode::kNotStrictlyPreperiodic, "preperiod must be >= 2 so the critical value is not periodic");
  }
  if (period < 1) throw Error(ErrorCode::kBadPeriod, "period must be >= 1");
  return {preperiod, period};
}

int enumerate_postsingular_size(const OrbitPortrait& p) {
  std::set<int> seen;
  for (int i = 1; seen.insert(i).second; i = successor(p, i)) {
  }
  return static_cast<int>(seen.size()) + 2;
}

std::vector<std::string> orbit_labels(const OrbitPortrait& p) {
  std::vector<std::string> out;
  std::set<int> seen;
  for (int i = 1; seen.insert(i).second; i = successor(p, i)) out.push_back("x" + std::to_string(i));
  return out;
}

std::string orbit_diagram(const OrbitPortrait& p) {
  std::string s = "c";
  for (const auto& label : orbit_labels(p)) s += " -> " + label;
  s += " -> x" + std::to_string(p.preperiod) + "  (cycle length " + std::to_string(p.period) + ")";
  return s;
}

int teich_dimension(const OrbitPortrait& p) {
  const int n = p.postsingular_size();
  if (n <= 3) throw Error(ErrorCode::kTooSmall, "need |P_f| > 3");
  return n - 3;
}

FeasibilityVerdict counting_feasibility(int sym_poles_in_disk, int crit_values_inside) {
  if (sym_poles_in_disk < 0) throw Error(ErrorCode::kInvalidArgument, "pole count must be nonnegative");
  if (sym_poles_in_disk % 2 != 0) throw Error(ErrorCode::kOddCount, "cos-symmetric poles come in pairs");
  if (crit_values_inside < 0 || crit_values_inside > 2) {
    throw Error(ErrorCode::kInvalidArgument, "critical values inside must be 0, 1 or 2");
  }
  if (sym_poles_in_disk >= 6) {
    return {Feasibility::kInfeasible, "at least six cos-symmetric poles in the disk"};
  }
  if (sym_poles_in_disk >= 4 && crit_values_inside == 0) {
    return {Feasibility::kInfeasible,
            "four or more non-critical-value points of P_f would map to two points of P_f"};
  }
  if (sym_poles_in_disk >= 4 && crit_values_inside == 1) {
    return {Feasibility::kInfeasible, "three or more non-critical-value points of P_f would be needed"};
  }
  return {Feasibility::kIndeterminate, "no unconditional obstruction applies"};
}

}  // namespace qdlab
