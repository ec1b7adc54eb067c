#pragma once

#include <vector>

#include "sproc/linrat/rational.hpp"

namespace sproc {

/// Standard form   minimize <cost, z>  s.t.  E z = rhs,  z >= 0.
/// `rows` holds E row by row; every row has `cost.size()` entries.
struct StandardLp {
  std::vector<RVec> rows;
  RVec rhs;
  RVec cost;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

const char* to_string(LpStatus s);

/// Result of the two-phase simplex. Which certificate fields are populated
/// depends on the status:
///   Optimal    z (primal), value, dual y with E^T y <= cost and <rhs, y> = value
///   Infeasible farkas w with E^T w >= 0 and <rhs, w> < 0
///   Unbounded  z (a feasible point) and ray d >= 0 with E d = 0, <cost, d> < 0
struct StandardOutcome {
  LpStatus status = LpStatus::Infeasible;
  RVec z;
  Rational value;
  RVec dual;
  RVec farkas;
  RVec ray;
  int pivots = 0;
};

/// Exact two-phase tableau simplex with Bland's rule (cycle free, deterministic).
StandardOutcome solve_standard(const StandardLp& lp);

}  // namespace sproc
