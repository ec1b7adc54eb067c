#include "sproc/geometry/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "sproc/error.hpp"
#include "sproc/linrat/fourier_motzkin.hpp"
#include "sproc/linrat/simplex.hpp"

namespace sproc {

const char* to_string(Tri t) {
  switch (t) {
    case Tri::True:
      return "true";
    case Tri::False:
      return "false";
    default:
      return "unknown";
  }
}

namespace {

// Epigraph of max over `pieces` on the intersection of `domains`, in
// (x, y, r) space.
Polyhedron epigraph(std::size_t dim, const std::vector<const PolyhedralFn*>& fns) {
  std::vector<Halfspace> rows;
  for (const auto* f : fns) {
    for (const auto& p : f->pieces) {
      RVec n = p.slope;
      n.push_back(-1);
      rows.push_back({std::move(n), -p.intercept});
    }
    if (f->domain) {
      for (const auto& r : f->domain->rows()) {
        RVec n = r.normal;
        n.push_back(0);
        rows.push_back({std::move(n), r.offset});
      }
    }
  }
  return Polyhedron(dim + 1, std::move(rows));
}

EpiProjection exact_projection(std::size_t dim_x, std::size_t dim_y, const std::vector<const PolyhedralFn*>& fns) {
  EpiProjection out;
  out.kind = EpiProjection::Kind::Exact;
  out.dim_y = dim_y;
  Polyhedron epi = epigraph(dim_x + dim_y, fns);
  std::vector<std::size_t> keep;
  for (std::size_t i = dim_x; i <= dim_x + dim_y; ++i) keep.push_back(i);
  Polyhedron proj = fm_project(epi, keep);
  out.generators = to_generators(proj);
  out.empty = out.generators.is_empty();
  out.poly = std::move(proj);
  return out;
}

std::vector<DVec> sample_points(std::size_t n, const SamplingSpec& spec) {
  int per_axis = spec.per_axis;
  if (per_axis == 0) per_axis = n == 1 ? 2001 : n == 2 ? 61 : n == 3 ? 15 : 0;
  std::vector<DVec> pts;
  if (per_axis >= 2 && n <= 3) {
    std::vector<int> idx(n, 0);
    DVec x(n);
    while (true) {
      for (std::size_t i = 0; i < n; ++i) x[i] = -spec.box + 2 * spec.box * idx[i] / (per_axis - 1);
      pts.push_back(x);
      std::size_t i = 0;
      while (i < n && ++idx[i] == per_axis) idx[i++] = 0;
      if (i == n) break;
    }
  } else {
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> u(-spec.box, spec.box);
    for (int k = 0; k < spec.random_points; ++k) {
      DVec x(n);
      for (auto& v : x) v = u(rng);
      pts.push_back(std::move(x));
    }
  }
  return pts;
}

// Cloud {(max_u g_u(x), max_u f_u(x))} plus the orthant rays.
EpiProjection sampled_projection(const std::vector<const ConstraintPerturbation*>& cps, std::size_t dim_x,
                                 std::size_t dim_y, const SamplingSpec& spec) {
  EpiProjection out;
  out.kind = EpiProjection::Kind::Sampled;
  out.dim_y = dim_y;
  out.sampling = spec;
  out.generators.dim = dim_y + 1;
  for (auto& x : sample_points(dim_x, spec)) {
    RVec v(dim_y + 1);
    for (std::size_t i = 0; i < dim_y; ++i) {
      double gi = -std::numeric_limits<double>::infinity();
      for (const auto* c : cps) gi = std::max(gi, c->g[i].eval(x));
      v[i] = to_rational(gi);
    }
    double f = -std::numeric_limits<double>::infinity();
    for (const auto* c : cps) f = std::max(f, c->f.eval(x));
    v[dim_y] = to_rational(f);
    out.generators.points.push_back(std::move(v));
    out.sample_x.push_back(std::move(x));
  }
  out.samples = out.generators.points.size();
  for (std::size_t i = 0; i <= dim_y; ++i) {
    RVec e = zeros(dim_y + 1);
    e[i] = 1;
    out.generators.rays.push_back(std::move(e));
  }
  return out;
}

RVec offset(const RVec& p, double delta) {
  RVec q = p;
  const Rational d = to_rational(delta);
  for (auto& v : q) v += d;
  return q;
}

// For an upward closed sampled set: decide at p - delta and p + delta.
template <class Pred>
Tri banded(const RVec& p, double delta, Pred pred) {
  if (pred(offset(p, -delta))) return Tri::True;
  if (!pred(offset(p, delta))) return Tri::False;
  return Tri::Unknown;
}

// exists t > 0 with t v <= p componentwise
bool scaled_below(const RVec& v, const RVec& p) {
  std::optional<Rational> hi;
  Rational lo(0);
  bool strict = true;  // t > 0 until a positive lower bound shows up
  for (std::size_t i = 0; i < v.size(); ++i) {
    const int s = sgn(v[i]);
    if (s == 0) {
      if (sgn(p[i]) < 0) return false;
      continue;
    }
    Rational b = p[i] / v[i];
    if (s > 0) {
      if (!hi || b < *hi) hi = b;
    } else if (b > lo) {
      lo = b;
      strict = false;
    }
  }
  if (!hi) return true;
  return strict ? *hi > lo : *hi >= lo;
}

}  // namespace

EpiProjection epi_projection(const Rockafellian& f, const SamplingSpec& spec) {
  if (f.is_polyhedral()) return exact_projection(f.dim_x(), f.dim_y(), {&f.polyhedral()});
  return sampled_projection({&f.perturbation()}, f.dim_x(), f.dim_y(), spec);
}

EpiProjection epi_projection(const RobustInstance& inst, const SamplingSpec& spec) {
  inst.validate();
  if (inst.is_polyhedral()) {
    std::vector<const PolyhedralFn*> fns;
    for (const auto& s : inst.scenarios) fns.push_back(&s.polyhedral());
    return exact_projection(inst.dim_x, inst.dim_y, fns);
  }
  std::vector<const ConstraintPerturbation*> cps;
  for (const auto& s : inst.scenarios) cps.push_back(&s.perturbation());
  return sampled_projection(cps, inst.dim_x, inst.dim_y, spec);
}

Tri epi_member(const EpiProjection& e, const RVec& p) {
  if (p.size() != e.dim()) throw InputError("epigraph projection: point has wrong dimension");
  if (e.empty) return Tri::False;
  if (e.kind == EpiProjection::Kind::Exact) return tri(e.poly->contains(p));
  return banded(p, e.sampling.boundary, [&](const RVec& q) {
    for (const auto& v : e.generators.points) {
      bool below = true;
      for (std::size_t i = 0; i < v.size() && below; ++i) below = v[i] <= q[i];
      if (below) return true;
    }
    return false;
  });
}

Tri raw_cone_member(const EpiProjection& e, const RVec& p) {
  if (p.size() != e.dim()) throw InputError("epigraph projection: point has wrong dimension");
  if (e.empty) return Tri::False;
  if (e.kind == EpiProjection::Kind::Exact) return tri(cone_member(p, e.generators, ConeSemantics::RawCone));
  if (is_zero(p)) return Tri::True;
  return banded(p, e.sampling.boundary, [&](const RVec& q) {
    return std::any_of(e.generators.points.begin(), e.generators.points.end(),
                       [&](const RVec& v) { return scaled_below(v, q); });
  });
}

Tri hull_member(const EpiProjection& e, const RVec& p) {
  if (p.size() != e.dim()) throw InputError("epigraph projection: point has wrong dimension");
  if (e.empty) return Tri::False;
  if (e.kind == EpiProjection::Kind::Exact) return tri(cone_member(p, e.generators, ConeSemantics::ClosedHull));
  return banded(p, e.sampling.boundary,
                [&](const RVec& q) { return cone_member(q, e.generators, ConeSemantics::ClosedHull); });
}

PrimalMin polyhedral_primal_min(const RobustInstance& inst) {
  inst.validate();
  if (!inst.is_polyhedral()) throw InputError("polyhedral_primal_min: instance is not polyhedral");
  const std::size_t nx = inst.dim_x;
  // variables (x, t): minimise t
  std::vector<Halfspace> rows;
  for (const auto& s : inst.scenarios) {
    const auto& f = s.polyhedral();
    for (const auto& p : f.pieces) {
      RVec n(p.slope.begin(), p.slope.begin() + static_cast<std::ptrdiff_t>(nx));
      n.push_back(-1);
      rows.push_back({std::move(n), -p.intercept});
    }
    if (f.domain) {
      for (const auto& r : f.domain->rows()) {
        RVec n(r.normal.begin(), r.normal.begin() + static_cast<std::ptrdiff_t>(nx));
        n.push_back(0);
        rows.push_back({std::move(n), r.offset});
      }
    }
  }
  RVec obj = zeros(nx + 1);
  obj[nx] = 1;
  LpOutcome lp = lp_solve(obj, Polyhedron(nx + 1, std::move(rows)), Sense::Minimize);
  PrimalMin out;
  out.status = lp.status;
  if (lp.status == LpStatus::Infeasible) return out;
  out.point.assign(lp.point.begin(), lp.point.begin() + static_cast<std::ptrdiff_t>(nx));
  if (lp.status == LpStatus::Optimal) {
    out.value = lp.value;
  } else {
    out.ray.assign(lp.ray.begin(), lp.ray.begin() + static_cast<std::ptrdiff_t>(nx));
  }
  return out;
}

Lemma21Result lemma21_check(const RobustInstance& inst, const Lemma21Options& opt) {
  inst.validate();
  Lemma21Result out;
  RVec target = zeros(inst.dim_y + 1);
  target[inst.dim_y] = -1;

  if (inst.is_polyhedral()) {
    out.exact = true;
    // (i) primal LP
    PrimalMin pm = polyhedral_primal_min(inst);
    if (pm.status == LpStatus::Infeasible) {
      out.i = Tri::True;
    } else if (pm.status == LpStatus::Unbounded) {
      out.i = Tri::False;
      out.witness = to_dvec(pm.point);
    } else {
      out.i = tri(sgn(pm.value) >= 0);
      if (out.i == Tri::False) out.witness = to_dvec(pm.point);
    }
    EpiProjection g = epi_projection(inst);
    if (g.empty) {
      out.ii = Tri::True;
      out.iii = Tri::True;
      out.note = "empty epigraph projection";
      return out;
    }
    // (ii) largest theta <= 1 with (0, -theta) in G, from the H-representation
    std::vector<Halfspace> rows;
    for (const auto& r : g.poly->rows()) rows.push_back({{-r.normal.back()}, r.offset});
    rows.push_back({{Rational(1)}, Rational(1)});
    LpOutcome th = lp_solve({Rational(1)}, Polyhedron(1, std::move(rows)), Sense::Maximize);
    out.ii = tri(!(th.status == LpStatus::Optimal && sgn(th.value) > 0));
    // (iii) raw cone on the V-representation
    out.iii = tri(!cone_member(target, g.generators, ConeSemantics::RawCone));
    return out;
  }

  PrimalProblem prob;
  for (const auto& s : inst.scenarios) {
    prob.objectives.push_back(s.perturbation().f);
    for (const auto& gi : s.perturbation().g) prob.constraints.push_back(gi);
  }
  PrimalResult pr = primal_search(prob, opt.primal);
  if (pr.verdict == Verdict::Violated) {
    out.i = Tri::False;
    out.witness = pr.witness;
  } else if (pr.verdict == Verdict::Holds && pr.certified) {
    out.i = Tri::True;
  } else {
    out.i = Tri::Unknown;
    out.note = pr.note;
  }
  EpiProjection g = epi_projection(inst, opt.sampling);
  // (ii): (0, -1) = theta p for some theta > 0 and p in the cloud; unlike
  // the raw cone the origin does not count.
  Tri scaled = banded(target, opt.sampling.boundary, [&](const RVec& q) {
    return std::any_of(g.generators.points.begin(), g.generators.points.end(),
                       [&](const RVec& v) { return scaled_below(v, q); });
  });
  out.ii = scaled == Tri::Unknown ? Tri::Unknown : scaled == Tri::True ? Tri::False : Tri::True;
  Tri raw = raw_cone_member(g, target);
  out.iii = raw == Tri::Unknown ? Tri::Unknown : raw == Tri::True ? Tri::False : Tri::True;
  return out;
}

Lemma21Result lemma21_check(const Rockafellian& f, const Lemma21Options& opt) {
  RobustInstance inst{f.dim_x(), f.dim_y(), {f}};
  return lemma21_check(inst, opt);
}

bool closed_convex_regarding(const ConeModel& c, const std::vector<RVec>& probes) {
  for (const auto& p : probes) {
    if (cone_member(p, c, ConeSemantics::ClosedHull) != cone_member(p, c, ConeSemantics::RawCone)) return false;
  }
  return true;
}

FSharpModel build_f_sharp(const RobustInstance& inst, const AscentConfig& ascent, const PrimalConfig& primal,
                          const SamplingSpec& sampling) {
  inst.validate();
  FSharpModel m;
  m.sampling = sampling;
  m.dim_x = inst.dim_x;
  m.ascent = ascent;
  m.primal = primal;
  m.merged.dim = inst.dim_x + 1;
  if (!inst.is_polyhedral()) {
    for (const auto& s : inst.scenarios) m.scenarios.push_back(s.perturbation());
    return m;
  }
  m.exact = true;
  const std::size_t nx = inst.dim_x;
  RVec up = zeros(nx + 1);
  up[nx] = 1;
  for (const auto& s : inst.scenarios) {
    const auto& f = s.polyhedral();
    ConeModel c;
    c.dim = nx + 1;
    for (const auto& p : f.pieces) {
      RVec v(p.slope.begin(), p.slope.begin() + static_cast<std::ptrdiff_t>(nx));
      v.push_back(-p.intercept);
      c.points.push_back(std::move(v));
    }
    if (f.domain) {
      for (const auto& r : f.domain->rows()) {
        RVec v(r.normal.begin(), r.normal.begin() + static_cast<std::ptrdiff_t>(nx));
        v.push_back(r.offset);
        c.rays.push_back(std::move(v));
      }
    }
    c.rays.push_back(up);
    const bool whole = f.domain && f.domain->is_empty();
    m.whole_space.push_back(whole);
    m.merged.points.insert(m.merged.points.end(), c.points.begin(), c.points.end());
    m.merged.rays.insert(m.merged.rays.end(), c.rays.begin(), c.rays.end());
    m.scenario_models.push_back(std::move(c));
  }
  return m;
}

FSharpMembership f_sharp_member(const FSharpModel& m, const RVec& xp, const Rational& s) {
  if (xp.size() != m.dim_x) throw InputError("F#: dual point has wrong dimension");
  FSharpMembership out;
  if (m.exact) {
    RVec p = xp;
    p.push_back(s);
    out.member = Tri::False;
    for (std::size_t u = 0; u < m.scenario_models.size(); ++u) {
      if (m.whole_space[u]) {
        out.member = Tri::True;
        out.scenario = u;
        out.note = "empty domain: conjugate is identically -inf";
        return out;
      }
      ConeMembership cm = poly_member(p, m.scenario_models[u]);
      if (cm.member) {
        out.member = Tri::True;
        out.scenario = u;
        out.certificate = std::move(cm);
        return out;
      }
      if (u == 0) out.certificate = std::move(cm);
    }
    return out;
  }
  out.member = Tri::False;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t u = 0; u < m.scenarios.size(); ++u) {
    const auto& cp = m.scenarios[u];
    MultiplierResult r = multiplier_search(cp.f.shifted(xp, s), cp.g, m.ascent);
    if (r.success) {
      out.member = Tri::True;
      out.scenario = u;
      out.lambda = r.lambda;
      out.quality = r.psi;
      return out;
    }
    if (r.psi > best) {
      best = r.psi;
      out.quality = r.psi;
      out.lambda = r.lambda;
    }
  }
  out.note = "no multiplier found by ascent";
  return out;
}

Tri f_sharp_hull_member(const FSharpModel& m, const RVec& xp, const Rational& s) {
  if (xp.size() != m.dim_x) throw InputError("F#: dual point has wrong dimension");
  if (m.exact) {
    if (std::any_of(m.whole_space.begin(), m.whole_space.end(), [](bool b) { return b; })) return Tri::True;
    RVec p = xp;
    p.push_back(s);
    return tri(poly_member(p, m.merged).member);
  }
  const bool convex = std::all_of(m.scenarios.begin(), m.scenarios.end(),
                                  [](const ConstraintPerturbation& c) { return c.is_convex(); });
  if (convex) {
    PrimalProblem prob;
    for (const auto& c : m.scenarios) {
      prob.objectives.push_back(c.f.shifted(xp, s));
      prob.constraints.insert(prob.constraints.end(), c.g.begin(), c.g.end());
    }
    PrimalResult r = primal_search(prob, m.primal);
    if (r.verdict == Verdict::Violated) return Tri::False;
    if (r.verdict == Verdict::Holds && r.certified) return Tri::True;
    return Tri::Unknown;
  }
  if (f_sharp_member(m, xp, s).member == Tri::True) return Tri::True;
  std::vector<Rockafellian> shifted;
  for (const auto& c : m.scenarios) shifted.emplace_back(ConstraintPerturbation{c.f.shifted(xp, s), c.g});
  RobustInstance inst{m.dim_x, m.scenarios.front().g.size(), std::move(shifted)};
  std::optional<CloudBound> b = cloud_biconjugate_bound(epi_projection(inst, m.sampling));
  if (b && b->value < -to_rational(m.sampling.boundary)) return Tri::False;
  return Tri::Unknown;
}

std::optional<CloudBound> cloud_biconjugate_bound(const EpiProjection& e) {
  if (e.kind != EpiProjection::Kind::Sampled) throw InputError("cloud bound needs a sampled projection");
  const auto& pts = e.generators.points;
  const std::size_t n = pts.size();
  if (n == 0) return std::nullopt;
  // columns: weights t, then one slack per y row
  StandardLp lp;
  for (std::size_t j = 0; j < e.dim_y; ++j) {
    RVec row = zeros(n + e.dim_y);
    for (std::size_t i = 0; i < n; ++i) row[i] = pts[i][j];
    row[n + j] = 1;
    lp.rows.push_back(std::move(row));
    lp.rhs.push_back(0);
  }
  RVec ones = zeros(n + e.dim_y);
  for (std::size_t i = 0; i < n; ++i) ones[i] = 1;
  lp.rows.push_back(std::move(ones));
  lp.rhs.push_back(1);
  lp.cost = zeros(n + e.dim_y);
  for (std::size_t i = 0; i < n; ++i) lp.cost[i] = pts[i][e.dim_y];
  StandardOutcome r = solve_standard(lp);
  if (r.status != LpStatus::Optimal) return std::nullopt;
  CloudBound out;
  out.value = r.value;
  out.point.assign(e.sample_x.front().size(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (sgn(r.z[i]) == 0) continue;
    const double t = to_double(r.z[i]);
    for (std::size_t k = 0; k < out.point.size(); ++k) out.point[k] += t * e.sample_x[i][k];
  }
  return out;
}

}  // namespace sproc
