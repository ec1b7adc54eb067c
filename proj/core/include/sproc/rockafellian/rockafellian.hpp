#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "sproc/extreal.hpp"
#include "sproc/linrat/polyhedron.hpp"
#include "sproc/rockafellian/quadratic.hpp"

namespace sproc {

/// z -> <slope, z> + intercept on the joint space z = (x, y).
struct AffinePiece {
  RVec slope;
  Rational intercept;
  friend bool operator==(const AffinePiece&, const AffinePiece&) = default;
};

/// max over pieces on `domain`, +inf outside it.
struct PolyhedralFn {
  std::size_t dim = 0;
  std::vector<AffinePiece> pieces;
  std::optional<Polyhedron> domain;

  void validate() const;
  ExtReal eval(const RVec& z) const;
  friend bool operator==(const PolyhedralFn&, const PolyhedralFn&) = default;
};

/// F(x, y) = f(x) if g_i(x) <= y_i for every i, +inf otherwise.
struct ConstraintPerturbation {
  QuadraticFn f;
  std::vector<QuadraticFn> g;

  void validate() const;
  /// f and every g_i have PSD Hessians.
  bool is_convex() const;
  friend bool operator==(const ConstraintPerturbation&, const ConstraintPerturbation&) = default;
};

class Rockafellian {
 public:
  Rockafellian(PolyhedralFn f, std::size_t dim_x, std::size_t dim_y);
  explicit Rockafellian(ConstraintPerturbation cp);

  std::size_t dim_x() const { return dim_x_; }
  std::size_t dim_y() const { return dim_y_; }
  bool is_polyhedral() const { return std::holds_alternative<PolyhedralFn>(rep_); }
  const PolyhedralFn& polyhedral() const { return std::get<PolyhedralFn>(rep_); }
  const ConstraintPerturbation& perturbation() const { return std::get<ConstraintPerturbation>(rep_); }

  friend bool operator==(const Rockafellian&, const Rockafellian&) = default;

 private:
  std::variant<PolyhedralFn, ConstraintPerturbation> rep_;
  std::size_t dim_x_;
  std::size_t dim_y_;
};

/// Finite family {F_u}. All scenarios share dim_x, dim_y and the same kind;
/// mixed families are rejected.
struct RobustInstance {
  std::size_t dim_x = 0;
  std::size_t dim_y = 0;
  std::vector<Rockafellian> scenarios;

  void validate() const;
  bool is_polyhedral() const { return scenarios.front().is_polyhedral(); }
  bool is_convex() const;
  friend bool operator==(const RobustInstance&, const RobustInstance&) = default;
};

/// Exact for rational input.
ExtReal evaluate(const Rockafellian& f, const RVec& x, const RVec& y);
/// Floating evaluation for sampling; polyhedral domains are still tested exactly.
ExtReal evaluate(const Rockafellian& f, const DVec& x, const DVec& y);

/// F*(xp, mu). Exact LP for polyhedral F. For constraint perturbations:
/// +inf if some mu_i > 0, else -inf_x (f - sum mu_i g_i - <xp, .>).
ExtReal conjugate_at(const Rockafellian& f, const RVec& xp, const RVec& mu);
ExtReal conjugate_at(const Rockafellian& f, const DVec& xp, const DVec& mu);

/// Dual probe points for the nonconvex biconjugate: multipliers l >= 0 with
/// f + sum l_i g_i convex, spread over the boundary of that set.
struct DualProbeSet {
  std::vector<DVec> multipliers;
  /// Directions along which the set is unbounded.
  std::vector<DVec> recession;
  bool empty = false;
};

DualProbeSet make_dual_probes(const ConstraintPerturbation& cp, int directions = 64);

struct BiconjugateValue {
  ExtReal value;
  /// false when the value is a certified lower bound of F** only.
  bool exact = true;
};

BiconjugateValue biconjugate_at(const Rockafellian& f, const RVec& x, const RVec& y);
BiconjugateValue biconjugate_at(const Rockafellian& f, const DVec& x, const DVec& y,
                                const DualProbeSet* probes = nullptr);

/// f + sum lambda_i g_i. Throws InputError on negative or wrongly sized lambda.
QuadraticFn lagrangian_combine(const ConstraintPerturbation& cp, const RVec& lambda);
QuadraticFn lagrangian_combine(const ConstraintPerturbation& cp, const DVec& lambda);

/// p(x) = sup_u F_u(x, 0).
ExtReal primal_value(const RobustInstance& inst, const RVec& x);
ExtReal primal_value(const RobustInstance& inst, const DVec& x);

/// sup_u F_u**(x, 0) (a lower bound of q*(x) for nonconvex scenarios).
BiconjugateValue dual_value(const RobustInstance& inst, const DVec& x);

}  // namespace sproc
