#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sproc/procedures/procedures.hpp"

namespace sproc {

struct Star {
  std::string id;
  RVec pos;
  /// Mass coefficient interval [lo, hi], 0 < lo <= hi.
  Rational lo, hi;
};

struct StarField {
  std::size_t dim = 2;
  std::vector<Star> stars;

  /// Throws InputError on a bad dimension, duplicate id or position, or a
  /// non-positive interval.
  void validate() const;
  const Star& star(const std::string& id) const;
};

struct InfluenceConstraint {
  std::string rival;
  /// h_t |x - t|^2 - l_s |x - s|^2
  QuadraticFn q;
};

struct InfluenceSystem {
  std::size_t dim = 2;
  std::string center;
  std::vector<InfluenceConstraint> constraints;
};

/// Worst case over the intervals of u_t |x - t|^2 - u_s |x - s|^2 for every
/// rival t: u_t = h_t and u_s = l_s.
InfluenceSystem worst_case_reduce(const StarField& field, const std::string& center);

/// u_t |x - t|^2 - u_s |x - s|^2 for given coefficients.
QuadraticFn influence_form(const RVec& s, const Rational& us, const RVec& t, const Rational& ut);

/// Every worst-case form is <= 0 at x (exact).
bool robust_member(const RVec& x, const InfluenceSystem& sys);

/// Id of the star sitting exactly at x, if any. The potentials are singular
/// there, the quadratic forms are not.
std::optional<std::string> star_at(const RVec& x, const StarField& field);

struct RasterBox {
  RVec lo, hi;
  /// Points per axis, each >= 2.
  std::vector<int> resolution;
};

/// Grid of memberships. Axis 0 varies fastest; point i on axis k is
/// lo_k + (hi_k - lo_k) i / (res_k - 1), evaluated exactly.
struct Raster {
  std::vector<int> resolution;
  std::vector<unsigned char> cells;
};

Raster region_raster(const InfluenceSystem& sys, const RasterBox& box);

/// One line per row of axis 1 (2-D rasters): comma separated 0/1.
std::string raster_csv(const Raster& r);
/// Plain (P2) PGM, members white. Rows from the top are decreasing axis-1
/// values so the image has the usual orientation.
std::string raster_pgm(const Raster& r);

struct InfluenceClaim {
  /// Claim sup_i (<a_i, x> + b_i) >= 0 on the region: one scenario per piece.
  std::optional<RhsFunction> rhs;
  /// Claim f(x) >= 0 on the region.
  std::optional<QuadraticFn> quadratic;
  /// Without an explicit claim: f = -q_t0 and the remaining forms are the
  /// constraints, so (A) asks whether constraint t0 is redundant.
  std::optional<std::string> t0;
};

struct InfluenceInstance {
  RobustInstance instance;
  std::string mapping;
};

/// Builds the instance asking whether the claim follows from the robust
/// system. With `field` given, every endpoint combination of the intervals
/// becomes its own scenario instead of the worst-case reduction (at most
/// 2^12 combinations).
InfluenceInstance to_robust_instance(const InfluenceSystem& sys, const InfluenceClaim& claim,
                                     const StarField* field = nullptr);

}  // namespace sproc
