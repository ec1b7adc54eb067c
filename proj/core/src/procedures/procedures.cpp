#include "sproc/procedures/procedures.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "sproc/error.hpp"
#include "sproc/linrat/simplex.hpp"

namespace sproc {

namespace {

Tri from_verdict(Verdict v) {
  switch (v) {
    case Verdict::Holds:
      return Tri::True;
    case Verdict::Violated:
      return Tri::False;
    default:
      return Tri::Unknown;
  }
}

Tri t_not(Tri a) { return a == Tri::Unknown ? a : a == Tri::True ? Tri::False : Tri::True; }

Tri t_and(Tri a, Tri b) {
  if (a == Tri::False || b == Tri::False) return Tri::False;
  if (a == Tri::True && b == Tri::True) return Tri::True;
  return Tri::Unknown;
}

Tri t_implies(Tri a, Tri b) { return t_not(t_and(a, t_not(b))); }


bool all_convex(const RobustInstance& inst) {
  return inst.is_polyhedral() || inst.is_convex();
}

// F_u - <xp, x> + s for every scenario.
RobustInstance shift_instance(const RobustInstance& inst, const RVec& xp, const Rational& s) {
  RobustInstance out{inst.dim_x, inst.dim_y, {}};
  for (const auto& sc : inst.scenarios) {
    if (sc.is_polyhedral()) {
      PolyhedralFn f = sc.polyhedral();
      for (auto& p : f.pieces) {
        for (std::size_t i = 0; i < inst.dim_x; ++i) p.slope[i] -= xp[i];
        p.intercept += s;
      }
      out.scenarios.emplace_back(std::move(f), inst.dim_x, inst.dim_y);
    } else {
      const auto& c = sc.perturbation();
      out.scenarios.emplace_back(ConstraintPerturbation{c.f.shifted(xp, s), c.g});
    }
  }
  return out;
}

PrimalProblem primal_problem(const RobustInstance& inst) {
  PrimalProblem prob;
  for (const auto& s : inst.scenarios) {
    prob.objectives.push_back(s.perturbation().f);
    for (const auto& g : s.perturbation().g) prob.constraints.push_back(g);
  }
  return prob;
}

// min over (x, y) of F(x, y) + <lambda, y> - <xp, x> + s; nullopt when dom F
// is empty, -inf reported through `unbounded`.
std::optional<Rational> polyhedral_margin(const PolyhedralFn& f, std::size_t nx, const RVec& lambda, const RVec& xp,
                                          const Rational& s, bool& unbounded) {
  const std::size_t n = f.dim;
  std::vector<Halfspace> rows;
  for (const auto& p : f.pieces) {
    RVec a = p.slope;
    for (std::size_t i = 0; i < nx; ++i) a[i] -= xp[i];
    for (std::size_t j = nx; j < n; ++j) a[j] += lambda[j - nx];
    a.push_back(-1);
    rows.push_back({std::move(a), -p.intercept});
  }
  if (f.domain) {
    for (const auto& r : f.domain->rows()) {
      RVec a = r.normal;
      a.push_back(0);
      rows.push_back({std::move(a), r.offset});
    }
  }
  RVec obj = zeros(n + 1);
  obj[n] = 1;
  LpOutcome lp = lp_solve(obj, Polyhedron(n + 1, std::move(rows)), Sense::Minimize);
  unbounded = lp.status == LpStatus::Unbounded;
  if (lp.status != LpStatus::Optimal) return std::nullopt;
  return lp.value + s;
}

// First scenario (by index) with F_u*(xp, mu) <= s.
std::optional<Certificate> search_certificate(const RobustInstance& inst, const FSharpModel& m, const RVec& xp,
                                              const Rational& s, const ProcedureConfig& cfg,
                                              std::vector<std::string>& notes) {
  for (std::size_t u = 0; u < inst.scenarios.size(); ++u) {
    const auto& sc = inst.scenarios[u];
    Certificate c;
    c.scenario = u;
    if (sc.is_polyhedral()) {
      c.exact = true;
      if (m.whole_space[u]) {
        c.lambda = zeros(inst.dim_y);
        c.quality = std::numeric_limits<double>::infinity();
        return c;
      }
      RVec p = xp;
      p.push_back(s);
      ConeMembership cm = poly_member(p, m.scenario_models[u]);
      if (!cm.member) continue;
      // mu is the y-part of sum a_k s_k + sum b_j D_j
      const auto& f = sc.polyhedral();
      RVec mu = zeros(inst.dim_y);
      for (std::size_t k = 0; k < f.pieces.size(); ++k) {
        for (std::size_t j = 0; j < inst.dim_y; ++j) mu[j] += cm.point_coeffs[k] * f.pieces[k].slope[inst.dim_x + j];
      }
      if (f.domain) {
        const auto& rows = f.domain->rows();
        for (std::size_t k = 0; k < rows.size(); ++k) {
          for (std::size_t j = 0; j < inst.dim_y; ++j) mu[j] += cm.ray_coeffs[k] * rows[k].normal[inst.dim_x + j];
        }
      }
      c.lambda = mu;
      for (auto& v : c.lambda) v = -v;
      bool unbounded = false;
      c.margin = polyhedral_margin(f, inst.dim_x, c.lambda, xp, s, unbounded);
      if (unbounded || (c.margin && sgn(*c.margin) < 0)) {
        throw ArithmeticError("polyhedral certificate failed its exact margin check");
      }
      c.quality = c.margin ? to_double(*c.margin) : std::numeric_limits<double>::infinity();
      return c;
    }
    if (cfg.exact_only) {
      notes.push_back("scenario " + std::to_string(u) + ": skipped (exact only)");
      continue;
    }
    const auto& cp = sc.perturbation();
    AscentConfig ac = cfg.ascent;
    ac.seed = cfg.ascent.seed + u;
    MultiplierResult r = multiplier_search(cp.f.shifted(xp, s), cp.g, ac);
    if (!r.success) {
      notes.push_back("scenario " + std::to_string(u) + ": ascent stopped at psi = " + std::to_string(r.psi) +
                      " after " + std::to_string(r.iterations) + " iterations");
      continue;
    }
    c.lambda = to_rvec(r.lambda);
    c.quality = r.psi;
    return c;
  }
  return std::nullopt;
}

}  // namespace

AResult check_A(const RobustInstance& inst, const ProcedureConfig& cfg) {
  inst.validate();
  AResult out;
  if (inst.is_polyhedral()) {
    out.exact = true;
    PrimalMin pm = polyhedral_primal_min(inst);
    switch (pm.status) {
      case LpStatus::Infeasible:
        out.verdict = Verdict::Holds;
        out.note = "sup_u F_u(x, 0) is +inf for every x";
        break;
      case LpStatus::Unbounded:
        out.verdict = Verdict::Violated;
        out.witness = to_dvec(pm.point);
        out.ray = to_dvec(pm.ray);
        out.witness_value = "-inf";
        out.note = "unbounded below along the ray";
        break;
      case LpStatus::Optimal:
        if (sgn(pm.value) >= 0) {
          out.verdict = Verdict::Holds;
          out.note = "exact minimum " + to_string(pm.value);
        } else {
          out.verdict = Verdict::Violated;
          out.witness = to_dvec(pm.point);
          out.witness_value = to_string(pm.value);
        }
        break;
    }
    return out;
  }
  if (cfg.exact_only) {
    out.note = "quadratic instance and exact-only mode";
    return out;
  }
  PrimalResult r = primal_search(primal_problem(inst), cfg.primal);
  out.verdict = r.verdict;
  out.note = r.note;
  if (r.verdict == Verdict::Violated) {
    out.witness = r.witness;
    if (r.witness_value) out.witness_value = to_string(*r.witness_value);
  } else if (r.verdict == Verdict::Holds) {
    out.note = r.certified ? "certified by a Lagrangian lower bound" : "no violation found";
    if (!r.note.empty()) out.note += "; " + r.note;
  }
  return out;
}

BResult certify_B(const RobustInstance& inst, const ProcedureConfig& cfg) {
  inst.validate();
  FSharpModel m = build_f_sharp(inst, cfg.ascent, cfg.primal, cfg.sampling);
  BResult out;
  out.certificate = search_certificate(inst, m, zeros(inst.dim_x), Rational(0), cfg, out.notes);
  return out;
}

double substitution_margin(const RobustInstance& inst, const Certificate& c, int samples, std::uint64_t seed) {
  const auto& sc = inst.scenarios.at(c.scenario);
  if (sc.is_polyhedral()) {
    bool unbounded = false;
    auto m = polyhedral_margin(sc.polyhedral(), inst.dim_x, c.lambda, zeros(inst.dim_x), Rational(0), unbounded);
    if (unbounded) return -std::numeric_limits<double>::infinity();
    return m ? to_double(*m) : std::numeric_limits<double>::infinity();
  }
  const auto& cp = sc.perturbation();
  const DVec lambda = to_dvec(c.lambda);
  std::mt19937_64 rng(seed);
  const double box = 5.0;
  std::uniform_real_distribution<double> ux(-box, box);
  std::exponential_distribution<double> slack(1.0);
  double worst = std::numeric_limits<double>::infinity();
  DVec x(inst.dim_x);
  for (int k = 0; k < samples; ++k) {
    for (auto& v : x) v = ux(rng);
    double val = cp.f.eval(x);
    for (std::size_t i = 0; i < cp.g.size(); ++i) {
      // half the samples sit on y = g(x), where the minimum over y is attained
      const double y = cp.g[i].eval(x) + (k % 2 == 0 ? 0.0 : slack(rng));
      val += lambda[i] * y;
    }
    worst = std::min(worst, val);
  }
  return worst;
}

RhsFunction RhsFunction::affine(RVec slope, Rational intercept) {
  return RhsFunction{{AffinePiece{std::move(slope), std::move(intercept)}}};
}

RhsFunction RhsFunction::zero(std::size_t dim) { return affine(zeros(dim), Rational(0)); }

std::size_t RhsFunction::dim() const { return pieces.empty() ? 0 : pieces.front().slope.size(); }

void RhsFunction::validate() const {
  if (pieces.empty()) throw InputError("rhs function: no pieces");
  for (const auto& p : pieces) {
    if (p.slope.size() != dim()) throw InputError("rhs function: pieces of different dimension");
  }
}

Rational RhsFunction::eval(const RVec& x) const {
  validate();
  std::optional<Rational> best;
  for (const auto& p : pieces) {
    Rational v = dot(p.slope, x) + p.intercept;
    if (!best || v > *best) best = v;
  }
  return *best;
}

double RhsFunction::eval(const DVec& x) const {
  validate();
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& p : pieces) {
    double v = to_double(p.intercept);
    for (std::size_t i = 0; i < x.size(); ++i) v += to_double(p.slope[i]) * x[i];
    best = std::max(best, v);
  }
  return best;
}

std::vector<RVec> RhsFunction::slopes() const {
  std::vector<RVec> out;
  std::set<RVec> seen;
  for (const auto& p : pieces) {
    if (seen.insert(p.slope).second) out.push_back(p.slope);
  }
  return out;
}

std::optional<Rational> RhsFunction::conjugate(const RVec& ap) const {
  validate();
  if (ap.size() != dim()) throw InputError("rhs conjugate: slope has wrong dimension");
  const std::size_t k = pieces.size();
  StandardLp lp;
  for (std::size_t i = 0; i < dim(); ++i) {
    RVec row(k);
    for (std::size_t j = 0; j < k; ++j) row[j] = pieces[j].slope[i];
    lp.rows.push_back(std::move(row));
    lp.rhs.push_back(ap[i]);
  }
  lp.rows.push_back(RVec(k, Rational(1)));
  lp.rhs.push_back(1);
  lp.cost.resize(k);
  for (std::size_t j = 0; j < k; ++j) lp.cost[j] = -pieces[j].intercept;
  StandardOutcome r = solve_standard(lp);
  if (r.status != LpStatus::Optimal) return std::nullopt;
  return r.value;
}

std::vector<RVec> rhs_probes(const RhsFunction& h, int count, std::uint64_t seed) {
  std::vector<RVec> out = h.slopes();
  if (out.size() < 2) return out;
  std::set<RVec> seen(out.begin(), out.end());
  const std::vector<RVec> gens = out;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> w(1, 16);
  for (int k = 0; k < count; ++k) {
    std::vector<int> ws(gens.size());
    int total = 0;
    for (auto& v : ws) total += (v = w(rng));
    RVec a = zeros(h.dim());
    for (std::size_t j = 0; j < gens.size(); ++j) {
      const Rational t = ratio(ws[j], total);
      for (std::size_t i = 0; i < a.size(); ++i) a[i] += t * gens[j][i];
    }
    if (seen.insert(a).second) out.push_back(std::move(a));
  }
  return out;
}

AResult check_A_h(const RobustInstance& inst, const RhsFunction& h, const ProcedureConfig& cfg) {
  inst.validate();
  h.validate();
  if (h.dim() != inst.dim_x) throw InputError("rhs function dimension differs from dim_x");
  AResult out;
  out.verdict = Verdict::Holds;
  out.exact = true;
  for (std::size_t i = 0; i < h.pieces.size(); ++i) {
    const auto& p = h.pieces[i];
    AResult r = check_A(shift_instance(inst, p.slope, -p.intercept), cfg);
    out.exact = out.exact && r.exact;
    if (r.verdict == Verdict::Violated) {
      r.note = "below piece " + std::to_string(i) + " of h" + (r.note.empty() ? "" : "; " + r.note);
      return r;
    }
    if (r.verdict == Verdict::Unknown) {
      out.verdict = Verdict::Unknown;
      out.note = "piece " + std::to_string(i) + ": " + r.note;
    } else if (out.note.empty()) {
      out.note = r.note;
    }
  }
  return out;
}

BhResult certify_B_h(const RobustInstance& inst, const RhsFunction& h, const ProcedureConfig& cfg) {
  inst.validate();
  h.validate();
  if (h.dim() != inst.dim_x) throw InputError("rhs function dimension differs from dim_x");
  FSharpModel m = build_f_sharp(inst, cfg.ascent, cfg.primal, cfg.sampling);
  BhResult out;
  out.valid_on_probes = true;
  for (auto& ap : rhs_probes(h, cfg.probes, cfg.probe_seed)) {
    ProbeCertificate pc;
    pc.h_star = *h.conjugate(ap);
    std::vector<std::string> notes;
    pc.certificate = search_certificate(inst, m, ap, pc.h_star, cfg, notes);
    for (const auto& n : notes) pc.note += (pc.note.empty() ? "" : "; ") + n;
    pc.probe = std::move(ap);
    out.valid_on_probes = out.valid_on_probes && pc.certificate.has_value();
    out.probes.push_back(std::move(pc));
  }
  return out;
}

const char* to_string(Flag f) {
  switch (f) {
    case Flag::HoldsSufficient:
      return "HOLDS-sufficient";
    case Flag::HoldsNumeric:
      return "HOLDS-numeric";
    case Flag::FailsWitness:
      return "FAILS-witness";
    case Flag::Unknown:
      return "UNKNOWN";
    default:
      return "not-applicable";
  }
}

namespace {

// inf_x sup_u F_u(x, 0) = inf_x sup_u F_u**(x, 0) != +inf.
HypothesisFlag closure_gap_flag(const RobustInstance& inst, const ProcedureConfig& cfg) {
  HypothesisFlag out;
  if (inst.is_polyhedral()) {
    PrimalMin pm = polyhedral_primal_min(inst);
    if (pm.status == LpStatus::Infeasible) {
      out.flag = Flag::FailsWitness;
      out.witness_value = "+inf";
      out.evidence = "the LP in (x, t) is infeasible, so both infima are +inf";
      return out;
    }
    out.flag = Flag::HoldsSufficient;
    out.evidence = "polyhedral scenarios equal their biconjugates; p is finite at " + to_string(pm.point.front()) +
                   (pm.point.size() > 1 ? ", ..." : "");
    return out;
  }
  if (cfg.exact_only) {
    out.flag = Flag::Unknown;
    out.evidence = "quadratic instance and exact-only mode";
    return out;
  }
  // A feasible point shows p < +inf somewhere; a certified bound for the
  // objective -1 shows the feasible set is empty.
  PrimalProblem feas = primal_problem(inst);
  for (auto& f : feas.objectives) f = QuadraticFn::constant(inst.dim_x, Rational(-1));
  PrimalResult fr = primal_search(feas, cfg.primal);
  if (fr.verdict == Verdict::Holds && fr.certified) {
    out.flag = Flag::FailsWitness;
    out.witness_value = "+inf";
    out.evidence = "the constraints admit no point (Lagrangian bound), so p is +inf everywhere";
    return out;
  }
  if (fr.verdict != Verdict::Violated) {
    out.flag = Flag::Unknown;
    out.evidence = "no feasible point found and infeasibility not certified";
    return out;
  }
  const DVec a = *fr.witness;
  if (inst.is_convex()) {
    out.flag = Flag::HoldsSufficient;
    out.evidence = "convex scenarios equal their biconjugates; feasible point at x[0] = " + std::to_string(a[0]);
    return out;
  }
  PrimalResult pr = primal_search(primal_problem(inst), cfg.primal);
  if (!pr.best_value) {
    out.flag = Flag::Unknown;
    out.evidence = "primal search found no feasible value";
    return out;
  }
  const double pbest = *pr.best_value;
  const double tol = 1e-6 * (1 + std::abs(pbest));
  EpiProjection e = epi_projection(inst, cfg.sampling);
  std::vector<DualProbeSet> probes;
  for (const auto& s : inst.scenarios) probes.push_back(make_dual_probes(s.perturbation()));
  const DVec zero(inst.dim_y, 0.0);
  double lb_min = std::numeric_limits<double>::infinity();
  for (const auto& x : e.sample_x) {
    double v = -std::numeric_limits<double>::infinity();
    for (std::size_t u = 0; u < inst.scenarios.size(); ++u) {
      ExtReal b = biconjugate_at(inst.scenarios[u], x, zero, &probes[u]).value;
      v = std::max(v, b.is_pos_inf() ? std::numeric_limits<double>::infinity()
                      : b.is_neg_inf() ? -std::numeric_limits<double>::infinity()
                                       : b.value());
    }
    lb_min = std::min(lb_min, v);
  }
  if (lb_min >= pbest - tol) {
    out.flag = Flag::HoldsNumeric;
    out.evidence = "sampled biconjugate lower bounds reach the primal value " + std::to_string(pbest);
    return out;
  }
  std::optional<CloudBound> cb = cloud_biconjugate_bound(e);
  if (cb && to_double(cb->value) < pbest - tol) {
    out.flag = Flag::FailsWitness;
    out.witness_point = cb->point;
    out.witness_value = to_decimal(cb->value);
    out.evidence = "a convex combination of samples puts sup_u F_u**(x, 0) at most " + to_decimal(cb->value, 6) +
                   " while inf p is about " + std::to_string(pbest) + (pr.certified ? "" : " (primal value heuristic)");
    return out;
  }
  out.flag = Flag::Unknown;
  out.evidence = "biconjugate lower bounds stay below the primal value without a refuting combination";
  return out;
}

// F# closed convex regarding gph h* at the probes.
HypothesisFlag hull_gap_flag(const RobustInstance& inst, const RhsFunction& h, const ProcedureConfig& cfg) {
  HypothesisFlag out;
  if (!inst.is_polyhedral() && cfg.exact_only) {
    out.flag = Flag::Unknown;
    out.evidence = "quadratic instance and exact-only mode";
    return out;
  }
  FSharpModel m = build_f_sharp(inst, cfg.ascent, cfg.primal, cfg.sampling);
  const auto probes = rhs_probes(h, cfg.probes, cfg.probe_seed);
  bool unknown = false;
  for (const auto& ap : probes) {
    const Rational hs = *h.conjugate(ap);
    Tri hull = f_sharp_hull_member(m, ap, hs);
    Tri mem = f_sharp_member(m, ap, hs).member;
    if (mem == Tri::True || hull == Tri::False) continue;
    if (hull == Tri::True && mem == Tri::False) {
      out.flag = Flag::FailsWitness;
      out.witness_point = to_dvec(ap);
      out.witness_value = to_string(hs);
      out.evidence = "(a', h*(a')) lies in the closed convex hull of F# but not in F#" +
                     std::string(m.exact ? "" : " (membership from multiplier ascent)");
      return out;
    }
    unknown = true;
  }
  if (unknown) {
    out.flag = Flag::Unknown;
    out.evidence = "hull membership undecided at some probe";
    return out;
  }
  const bool exhaustive = h.slopes().size() == 1;
  if (m.exact && (inst.scenarios.size() == 1 || exhaustive)) {
    out.flag = Flag::HoldsSufficient;
    out.evidence = inst.scenarios.size() == 1 ? "F# is a polyhedron" : "dom h* is a single point";
  } else {
    out.flag = Flag::HoldsNumeric;
    out.evidence = "checked at " + std::to_string(probes.size()) + " probes";
  }
  return out;
}

HypothesisFlag combine(std::vector<HypothesisFlag> flags) {
  HypothesisFlag out;
  out.flag = Flag::HoldsSufficient;
  for (auto& f : flags) {
    if (f.flag == Flag::FailsWitness) return f;
    if (f.flag == Flag::Unknown) out = f;
    if (f.flag == Flag::HoldsNumeric && out.flag == Flag::HoldsSufficient) out = f;
    if (out.evidence.empty()) out.evidence = f.evidence;
  }
  return out;
}

HypothesisFlag shifted_gap_flag(const RobustInstance& inst, const RhsFunction& h, const ProcedureConfig& cfg) {
  std::vector<HypothesisFlag> flags;
  for (const auto& ap : rhs_probes(h, cfg.probes, cfg.probe_seed)) {
    HypothesisFlag f = closure_gap_flag(shift_instance(inst, ap, Rational(0)), cfg);
    if (f.flag == Flag::FailsWitness) f.evidence += " (slope probe " + to_string(ap.front()) + ")";
    flags.push_back(std::move(f));
    // the sufficient test does not depend on the slope
    if (flags.back().flag == Flag::HoldsSufficient && all_convex(inst)) break;
  }
  return combine(std::move(flags));
}

}  // namespace

HypothesisReport check_hypotheses(const RobustInstance& inst, const std::optional<RhsFunction>& h,
                                  const ProcedureConfig& cfg) {
  inst.validate();
  HypothesisReport out;
  const bool single = inst.scenarios.size() == 1;
  out.h[0] = closure_gap_flag(inst, cfg);
  if (single) out.h[1] = out.h[0];
  if (h) {
    h->validate();
    if (h->dim() != inst.dim_x) throw InputError("rhs function dimension differs from dim_x");
    out.h[2] = shifted_gap_flag(inst, *h, cfg);
    out.h[3] = hull_gap_flag(inst, *h, cfg);
    if (single) {
      out.h[4] = out.h[2];
      out.h[5] = out.h[3];
    }
  }
  return out;
}

const char* to_string(Theorem t) {
  switch (t) {
    case Theorem::T2_1:
      return "T2_1";
    case Theorem::C2_1:
      return "C2_1";
    case Theorem::C2_2:
      return "C2_2";
    case Theorem::T3_1:
      return "T3_1";
    case Theorem::C3_1:
      return "C3_1";
    case Theorem::T4_1:
      return "T4_1";
    default:
      return "C4_1";
  }
}

Theorem parse_theorem(const std::string& s) {
  std::string up = s;
  std::transform(up.begin(), up.end(), up.begin(), [](unsigned char c) { return std::toupper(c); });
  for (Theorem t : {Theorem::T2_1, Theorem::C2_1, Theorem::C2_2, Theorem::T3_1, Theorem::C3_1, Theorem::T4_1,
                    Theorem::C4_1}) {
    if (up == to_string(t)) return t;
  }
  throw InputError("unknown theorem '" + s + "'");
}

const char* to_string(Agreement a) {
  switch (a) {
    case Agreement::Agree:
      return "AGREE";
    case Agreement::Disagree:
      return "DISAGREE";
    case Agreement::Fatal:
      return "FATAL";
    default:
      return "UNKNOWN";
  }
}

namespace {

struct Claim {
  Tri holds;  // the asserted relation evaluated on the computed sides
  bool applies;
  std::string what;
};

// Fatal on exact paths, Disagree (possible search artifact) otherwise.
void settle(ValidationReport& r, const std::vector<Claim>& claims, bool exact) {
  r.agreement = Agreement::Agree;
  bool unknown = false;
  for (const auto& c : claims) {
    if (!c.applies) {
      r.notes.push_back("not asserted (hypothesis not established): " + c.what);
      continue;
    }
    if (c.holds == Tri::Unknown) {
      unknown = true;
      r.notes.push_back("undecided: " + c.what);
    } else if (c.holds == Tri::False) {
      r.notes.push_back("contradicted: " + c.what);
      r.agreement = exact ? Agreement::Fatal : Agreement::Disagree;
      return;
    }
  }
  if (unknown) r.agreement = Agreement::Unknown;
}

Tri a_tri(const AResult& a) { return from_verdict(a.verdict); }

Tri b_tri(const BResult& b, const RobustInstance& inst, const ProcedureConfig& cfg) {
  if (b.certificate) return Tri::True;
  if (!inst.is_polyhedral() && cfg.exact_only) return Tri::Unknown;
  return Tri::False;
}

// (0_Y, -1) outside [intersection of closed convex hulls] minus [R_+ G].
Tri geometric_condition(const RobustInstance& inst, const ProcedureConfig& cfg, std::string& note) {
  if (!inst.is_polyhedral() && cfg.exact_only) {
    note = "sampled geometry skipped (exact only)";
    return Tri::Unknown;
  }
  RVec target = zeros(inst.dim_y + 1);
  target[inst.dim_y] = -1;
  Tri in_hulls = Tri::True;
  for (const auto& s : inst.scenarios) in_hulls = t_and(in_hulls, hull_member(epi_projection(s, cfg.sampling), target));
  Tri in_raw = raw_cone_member(epi_projection(inst, cfg.sampling), target);
  note = std::string("(0,-1) in every hull: ") + to_string(in_hulls) + ", in R+G: " + to_string(in_raw);
  return t_not(t_and(in_hulls, t_not(in_raw)));
}

// sup_u F_u**(x, 0) >= 0 for every x.
Tri a_biconj(const RobustInstance& inst, Tri a, Tri b, const ProcedureConfig& cfg, std::string& note) {
  if (all_convex(inst)) {
    note = "scenarios equal their biconjugates";
    return a;
  }
  if (a == Tri::False) {
    note = "F** <= F, so the primal witness refutes it";
    return Tri::False;
  }
  if (b == Tri::True) {
    note = "(B**) coincides with (B)";
    return Tri::True;
  }
  if (cfg.exact_only) return Tri::Unknown;
  std::optional<CloudBound> cb = cloud_biconjugate_bound(epi_projection(inst, cfg.sampling));
  if (cb && cb->value < -to_rational(cfg.sampling.boundary)) {
    note = "convex combination of samples gives value " + to_decimal(cb->value, 6);
    return Tri::False;
  }
  note = "no refuting combination on the sample cloud";
  return Tri::Unknown;
}

void require_single(const RobustInstance& inst, Theorem t) {
  if (inst.scenarios.size() != 1) {
    throw InputError(std::string(to_string(t)) + " applies to a single Rockafellian");
  }
}

}  // namespace

ValidationReport validate_equivalence(const RobustInstance& inst, Theorem theorem, const std::optional<RhsFunction>& h,
                                      const ProcedureConfig& cfg) {
  inst.validate();
  ValidationReport r;
  r.theorem = theorem;
  const bool exact = inst.is_polyhedral();

  if (theorem == Theorem::T4_1 || theorem == Theorem::C4_1) {
    if (theorem == Theorem::C4_1) require_single(inst, theorem);
    RhsFunction hh = h ? *h : RhsFunction::zero(inst.dim_x);
    if (!h) r.notes.push_back("no h given, using h = 0");
    AResult ah = check_A_h(inst, hh, cfg);
    BhResult bh = certify_B_h(inst, hh, cfg);
    Tri a = a_tri(ah);
    Tri b = bh.valid_on_probes ? Tri::True : (!exact && cfg.exact_only) ? Tri::Unknown : Tri::False;
    r.sides.push_back({"A_h", a, ah.note});
    r.sides.push_back({"B_h on probes", b, std::to_string(bh.probes.size()) + " probes"});
    r.sides.push_back({"valid on probes", t_implies(a, b), ""});
    HypothesisReport hr = check_hypotheses(inst, hh, cfg);
    const int i3 = theorem == Theorem::T4_1 ? 2 : 4;
    r.hypotheses.push_back({theorem == Theorem::T4_1 ? "H3" : "H5", hr.h[i3]});
    r.hypotheses.push_back({theorem == Theorem::T4_1 ? "H4" : "H6", hr.h[i3 + 1]});
    const bool hyp = holds(hr.h[i3].flag) && holds(hr.h[i3 + 1].flag);
    settle(r,
           {{t_implies(b, a), true, "(B_h) implies (A_h)"},
            {t_implies(a, b), hyp, "under the hypotheses, (A_h) implies (B_h)"}},
           exact);
    r.a = ah;
    return r;
  }

  AResult a = check_A(inst, cfg);
  BResult b = certify_B(inst, cfg);
  const Tri at = a_tri(a);
  const Tri bt = b_tri(b, inst, cfg);
  const Tri valid = t_implies(at, bt);
  r.sides.push_back({"A", at, a.note});
  r.sides.push_back({"B", bt, b.certificate ? "scenario " + std::to_string(b.certificate->scenario) : "NONE"});
  r.a = a;
  r.b = b;

  switch (theorem) {
    case Theorem::C2_1:
    case Theorem::C2_2:
      require_single(inst, theorem);
      [[fallthrough]];
    case Theorem::T2_1: {
      std::string note;
      Tri geo = geometric_condition(inst, cfg, note);
      r.sides.push_back({"procedure valid", valid, ""});
      const char* name = theorem == Theorem::T2_1   ? "(0,-1) not in the hull/raw cone gap"
                         : theorem == Theorem::C2_1 ? "R+F closed convex regarding (0,-1)"
                                                    : "R+F closed regarding (0,-1)";
      r.sides.push_back({name, geo, note});
      bool applies = true;
      if (theorem == Theorem::C2_2) {
        HypothesisFlag cone;
        if (all_convex(inst)) {
          cone.flag = Flag::HoldsSufficient;
          cone.evidence = "F is convex, so R+F and its closure are convex";
        } else {
          cone.flag = Flag::Unknown;
          cone.evidence = "convexity of the closed cone is not checked for nonconvex F";
        }
        applies = holds(cone.flag);
        r.hypotheses.push_back({"closed cone convex", cone});
      }
      settle(r, {{t_and(t_implies(valid, geo), t_implies(geo, valid)), applies, "validity iff geometric condition"}},
             exact);
      return r;
    }
    case Theorem::T3_1:
    case Theorem::C3_1: {
      if (theorem == Theorem::C3_1) require_single(inst, theorem);
      std::string note;
      Tri abi = a_biconj(inst, at, bt, cfg, note);
      Tri valid2 = t_implies(abi, bt);
      FSharpModel m = build_f_sharp(inst, cfg.ascent, cfg.primal, cfg.sampling);
      Tri hull = (!exact && cfg.exact_only) ? Tri::Unknown : f_sharp_hull_member(m, zeros(inst.dim_x), Rational(0));
      Tri closed = t_implies(hull, bt);
      r.sides.push_back({"(i) procedure valid", valid, ""});
      r.sides.push_back({"A**", abi, note});
      r.sides.push_back({"(ii) biconjugate procedure valid", valid2, ""});
      r.sides.push_back({"(0,0) in closed convex hull of F#", hull, ""});
      r.sides.push_back({"(iii) F# closed convex regarding (0,0)", closed, ""});
      HypothesisReport hr = check_hypotheses(inst, std::nullopt, cfg);
      const int i1 = theorem == Theorem::T3_1 ? 0 : 1;
      r.hypotheses.push_back({theorem == Theorem::T3_1 ? "H1" : "H2", hr.h[i1]});
      const bool hyp = holds(hr.h[i1].flag);
      settle(r,
             {{t_implies(valid, valid2), true, "(i) implies (ii)"},
              {t_implies(valid2, closed), true, "(ii) implies (iii)"},
              {t_implies(closed, valid), hyp, "under the hypothesis, (iii) implies (i)"}},
             exact);
      return r;
    }
    default:
      break;
  }
  return r;
}

}  // namespace sproc
