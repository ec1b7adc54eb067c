#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "sproc/geometry/geometry.hpp"

namespace sproc {

/// Tolerances and search settings shared by the checkers.
struct ProcedureConfig {
  AscentConfig ascent;
  PrimalConfig primal;
  SamplingSpec sampling;
  /// Random convex combinations of the slopes of h added to the probe set.
  int probes = 20;
  std::uint64_t probe_seed = 1;
  /// Margin accepted when substituting a quadratic certificate.
  double substitution_tol = 1e-6;
  /// Samples used by the substitution check.
  int substitution_samples = 10000;
  /// Skip every heuristic path; quadratic instances then report Unknown.
  bool exact_only = false;
};

struct AResult {
  Verdict verdict = Verdict::Unknown;
  bool exact = false;
  /// Violated: a point with sup_u F_u(x, 0) < 0 (or a point on a ray along
  /// which it decreases without bound).
  std::optional<DVec> witness;
  std::optional<DVec> ray;
  /// Value at the witness, "-inf" for a ray.
  std::string witness_value;
  std::string note;
};

/// (A): sup_u F_u(x, 0) >= 0 for every x.
AResult check_A(const RobustInstance& inst, const ProcedureConfig& cfg = {});

struct Certificate {
  std::size_t scenario = 0;
  /// lambda >= 0 for constraint perturbations, free for polyhedral ones.
  RVec lambda;
  /// Polyhedral: exact min of F(x, y) + <lambda, y> (nullopt when F is
  /// identically +inf). Quadratic: psi(lambda).
  std::optional<Rational> margin;
  double quality = 0.0;
  bool exact = false;
};

struct BResult {
  std::optional<Certificate> certificate;
  std::vector<std::string> notes;
};

/// (B): first scenario u (by index) with some lambda making
/// F_u(x, y) + <lambda, y> >= 0 everywhere.
BResult certify_B(const RobustInstance& inst, const ProcedureConfig& cfg = {});

/// Smallest value of F_u(x, y) + <lambda, y> seen: exact LP on the polyhedral
/// path, `samples` random (x, y) with y >= g(x) in the sampling box on the
/// quadratic path.
double substitution_margin(const RobustInstance& inst, const Certificate& c, int samples, std::uint64_t seed);

/// h(x) = max_i <a_i, x> + b_i. An affine h has a single piece.
struct RhsFunction {
  std::vector<AffinePiece> pieces;

  static RhsFunction affine(RVec slope, Rational intercept);
  static RhsFunction zero(std::size_t dim);
  std::size_t dim() const;
  bool is_affine() const { return pieces.size() == 1; }
  void validate() const;
  Rational eval(const RVec& x) const;
  double eval(const DVec& x) const;
  /// Distinct slopes, the generators of dom h*.
  std::vector<RVec> slopes() const;
  /// h*(a') = min { -sum t_i b_i : sum t_i a_i = a', t in the simplex }.
  /// nullopt outside dom h*.
  std::optional<Rational> conjugate(const RVec& ap) const;
};

/// The slopes of h plus `count` seeded random convex combinations of them.
std::vector<RVec> rhs_probes(const RhsFunction& h, int count, std::uint64_t seed);

/// (A_h): sup_u F_u(x, 0) >= h(x) for every x. One check per piece of h.
AResult check_A_h(const RobustInstance& inst, const RhsFunction& h, const ProcedureConfig& cfg = {});

struct ProbeCertificate {
  RVec probe;
  Rational h_star;
  std::optional<Certificate> certificate;
  std::string note;
};

struct BhResult {
  std::vector<ProbeCertificate> probes;
  /// Every probe certified; this is validity on the probes only.
  bool valid_on_probes = false;
};

/// (B_h) on the probe set: for each a', (u, mu) with F_u*(a', mu) <= h*(a').
BhResult certify_B_h(const RobustInstance& inst, const RhsFunction& h, const ProcedureConfig& cfg = {});

enum class Flag { HoldsSufficient, HoldsNumeric, FailsWitness, Unknown, NotApplicable };
const char* to_string(Flag f);
inline bool holds(Flag f) { return f == Flag::HoldsSufficient || f == Flag::HoldsNumeric; }

struct HypothesisFlag {
  Flag flag = Flag::NotApplicable;
  std::string evidence;
  /// Set for FailsWitness.
  std::optional<DVec> witness_point;
  std::string witness_value;
};

struct HypothesisReport {
  /// h[0] is (H1), ..., h[5] is (H6).
  std::array<HypothesisFlag, 6> h;
};

HypothesisReport check_hypotheses(const RobustInstance& inst, const std::optional<RhsFunction>& h,
                                  const ProcedureConfig& cfg = {});

enum class Theorem { T2_1, C2_1, C2_2, T3_1, C3_1, T4_1, C4_1 };
const char* to_string(Theorem t);
/// Parses "t2_1", "C2_1", ... Throws InputError otherwise.
Theorem parse_theorem(const std::string& s);

enum class Agreement { Agree, Disagree, Unknown, Fatal };
const char* to_string(Agreement a);

struct Side {
  std::string name;
  Tri value = Tri::Unknown;
  std::string note;
};

struct ValidationReport {
  Theorem theorem = Theorem::T2_1;
  std::vector<Side> sides;
  Agreement agreement = Agreement::Unknown;
  /// Hypotheses the theorem uses, by name ("H1", ..., or "convex cone").
  std::vector<std::pair<std::string, HypothesisFlag>> hypotheses;
  std::optional<AResult> a;
  std::optional<BResult> b;
  std::vector<std::string> notes;
};

/// Evaluates both sides of the theorem on `inst`. Theorems about h use h = 0
/// when none is given.
ValidationReport validate_equivalence(const RobustInstance& inst, Theorem theorem,
                                      const std::optional<RhsFunction>& h = std::nullopt,
                                      const ProcedureConfig& cfg = {});

}  // namespace sproc
