#pragma once

#include <optional>

#include "sproc/linrat/polyhedron.hpp"
#include "sproc/linrat/simplex.hpp"

namespace sproc {

enum class Sense { Minimize, Maximize };

/// Outcome of optimising <c, x> over {x : A x <= b}, x free.
///
/// Let s = +1 for Maximize and -1 for Minimize. Certificates:
///   Optimal    `point` attains `value`; `dual` y >= 0 with A^T y = s c,
///              <b, y> = s value, and y_i (b_i - <a_i, x>) = 0.
///   Infeasible `farkas` y >= 0 with A^T y = 0 and <b, y> < 0.
///   Unbounded  `point` is feasible and `ray` d has A d <= 0, s <c, d> > 0.
struct LpOutcome {
  LpStatus status = LpStatus::Infeasible;
  Rational value;
  RVec point;
  RVec dual;
  RVec farkas;
  RVec ray;
};

/// Exact rational LP. Internally everything is routed through standard-form
/// problems on the transposed system, so tableau height is dim + 1 no matter
/// how many rows the polyhedron carries.
LpOutcome lp_solve(const RVec& objective, const Polyhedron& constraints, Sense sense);

/// Returns a feasible point, or nullopt when the polyhedron is empty.
std::optional<RVec> feasible_point(const Polyhedron& p);

/// Substitutes the certificate carried by `out` back into the problem and
/// checks it exactly. Used by tests and by report auditing.
bool verify_lp_certificate(const LpOutcome& out, const RVec& objective, const Polyhedron& constraints,
                           Sense sense);

}  // namespace sproc
