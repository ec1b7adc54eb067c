#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sproc/linrat/cone.hpp"
#include "sproc/linrat/lp.hpp"
#include "sproc/rockafellian/rockafellian.hpp"
#include "sproc/rockafellian/search.hpp"

namespace sproc {

enum class Tri { False, True, Unknown };
const char* to_string(Tri t);
inline Tri tri(bool b) { return b ? Tri::True : Tri::False; }

/// Box and resolution of the sampled (quadratic) path.
struct SamplingSpec {
  double box = 5.0;
  /// Grid points per axis; 0 picks a default from the dimension.
  int per_axis = 0;
  /// Random points used when dim_x >= 4.
  int random_points = 4000;
  /// Half-width of the band around a boundary reported as Unknown.
  double boundary = 1e-6;
  std::uint64_t seed = 1;
};

/// G = {(y, r) : exists x, G(x, y) <= r}.
struct EpiProjection {
  enum class Kind { Exact, Sampled };
  Kind kind = Kind::Exact;
  std::size_t dim_y = 0;
  /// Exact path: H- and V-representation in (y, r) space.
  std::optional<Polyhedron> poly;
  /// Exact path: generators of `poly`. Sampled path: the cloud
  /// {(g(x), f(x))} as points and the rays e_i, (0, 1).
  ConeModel generators;
  bool empty = false;
  SamplingSpec sampling;
  std::size_t samples = 0;
  /// Sampled path: the x behind each cloud point, in the same order.
  std::vector<DVec> sample_x;

  std::size_t dim() const { return dim_y + 1; }
};

/// Projection of the epigraph of a single Rockafellian.
EpiProjection epi_projection(const Rockafellian& f, const SamplingSpec& spec = {});
/// Projection of the epigraph of G = sup_u F_u.
EpiProjection epi_projection(const RobustInstance& inst, const SamplingSpec& spec = {});

/// p in G.
Tri epi_member(const EpiProjection& e, const RVec& p);
/// p in R_+ G (theta = 0 allowed, so the origin is a member when G is nonempty).
Tri raw_cone_member(const EpiProjection& e, const RVec& p);
/// p in the closed convex hull of R_+ G.
Tri hull_member(const EpiProjection& e, const RVec& p);

/// Sampled path: min of sum t_i r_i over convex weights t with
/// sum t_i y_i <= 0 on the cloud. Since G**(sum t_i x_i, 0) is at most that
/// sum, `value` bounds inf_x G**(x, 0) from above at `point`. Empty when no
/// combination reaches y <= 0.
struct CloudBound {
  Rational value;
  DVec point;
};
std::optional<CloudBound> cloud_biconjugate_bound(const EpiProjection& e);

/// Exact minimisation of sup_u F_u(x, 0) over x for polyhedral instances.
struct PrimalMin {
  LpStatus status = LpStatus::Infeasible;
  Rational value;  // when Optimal
  RVec point;      // minimiser or a feasible point on the ray
  RVec ray;        // when Unbounded
};
PrimalMin polyhedral_primal_min(const RobustInstance& inst);

/// The three statements of the primal lemma for G = sup_u F_u:
///   (i)   G(x, 0) >= 0 for every x
///   (ii)  (0, -1) is not in R_+^* G
///   (iii) (0, -1) is not in R_+ G
struct Lemma21Result {
  Tri i = Tri::Unknown;
  Tri ii = Tri::Unknown;
  Tri iii = Tri::Unknown;
  bool exact = false;
  std::optional<DVec> witness;
  std::string note;

  bool agree() const { return i == ii && ii == iii && i != Tri::Unknown; }
};

struct Lemma21Options {
  SamplingSpec sampling;
  PrimalConfig primal;
};

Lemma21Result lemma21_check(const RobustInstance& inst, const Lemma21Options& opt = {});
Lemma21Result lemma21_check(const Rockafellian& f, const Lemma21Options& opt = {});

/// For every probe: membership in the closed convex conic hull equals
/// membership in the raw cone.
bool closed_convex_regarding(const ConeModel& c, const std::vector<RVec>& probes);

/// F# = union over u of the projection of epi F_u* onto X* x R.
struct FSharpModel {
  bool exact = false;
  std::size_t dim_x = 0;
  /// Exact path, one V-representation per scenario: points (s^x, -c) of the
  /// pieces, rays (D^x, d) of the domain rows and (0, 1).
  std::vector<ConeModel> scenario_models;
  /// Scenario whose F_u* is identically -inf (empty domain): its set is
  /// the whole space.
  std::vector<bool> whole_space;
  ConeModel merged;
  /// Quadratic path.
  std::vector<ConstraintPerturbation> scenarios;
  AscentConfig ascent;
  PrimalConfig primal;
  /// Cloud used to refute hull membership on nonconvex instances.
  SamplingSpec sampling;
};

FSharpModel build_f_sharp(const RobustInstance& inst, const AscentConfig& ascent = {},
                          const PrimalConfig& primal = {}, const SamplingSpec& sampling = {});

struct FSharpMembership {
  Tri member = Tri::Unknown;
  std::optional<std::size_t> scenario;
  /// Multiplier lambda = -mu realising F_u*(x', mu) <= s.
  DVec lambda;
  double quality = 0.0;
  /// Exact path: the generator coefficients (or separator) from the LP.
  ConeMembership certificate;
  std::string note;
};

/// (x', s) in F#.
FSharpMembership f_sharp_member(const FSharpModel& m, const RVec& xp, const Rational& s);
/// (x', s) in the closed convex hull of F#. Exact for polyhedral
/// instances; convex quadratic instances go through the primal checker.
/// Nonconvex quadratic instances answer True when (x', s) is in F# itself,
/// False when the sampled cloud exhibits sup_u F_u**(x, 0) < <x', x> - s,
/// and Unknown otherwise.
Tri f_sharp_hull_member(const FSharpModel& m, const RVec& xp, const Rational& s);

}  // namespace sproc
