#pragma once

#include <vector>

#include "sproc/linrat/polyhedron.hpp"

namespace sproc {

/// Generator description: conv(points) + cone(rays). Under cone semantics
/// the same data describes the conic hull of that set.
struct ConeModel {
  std::size_t dim = 0;
  std::vector<RVec> points;
  std::vector<RVec> rays;
  bool empty = false;  // set when the described set is empty

  bool is_empty() const { return empty || (points.empty() && rays.empty()); }
  /// Throws InputError on a generator of the wrong length.
  void validate() const;
};

enum class ConeSemantics {
  ClosedHull,  // point in cone(V u R)
  RawCone,     // point in R_+ (conv(V) + cone(R))
};

struct ConeMembership {
  bool member = false;
  /// Coefficients on points then rays when `member` (a for V, b for R).
  RVec point_coeffs;
  RVec ray_coeffs;
  /// When not a member under ClosedHull: w with <w, v> >= 0 for every
  /// generator and <w, point> < 0.
  RVec separator;
};

ConeMembership cone_membership(const RVec& point, const ConeModel& c, ConeSemantics semantics);

bool cone_member(const RVec& point, const ConeModel& c, ConeSemantics semantics);

/// point in conv(V) + cone(R); a separator (when not a member) is w, t with
/// <w, v> + t >= 0 for v in V, <w, r> >= 0 for r in R and <w, point> + t < 0.
ConeMembership poly_member(const RVec& point, const ConeModel& c);

/// V-representation of a polyhedron: vertices of its minimal faces (one per
/// face, lifted along lineality) plus extreme rays, with every lineality
/// direction included as a pair of opposite rays. Brute force over row
/// subsets, so it is intended for dim <= ~6.
ConeModel to_generators(const Polyhedron& p);

}  // namespace sproc
