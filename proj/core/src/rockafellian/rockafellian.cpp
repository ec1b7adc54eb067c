#include "sproc/rockafellian/rockafellian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "sproc/error.hpp"
#include "sproc/linrat/lp.hpp"
#include "sproc/linrat/simplex.hpp"

namespace sproc {

void PolyhedralFn::validate() const {
  if (dim == 0) throw InputError("polyhedral function: dimension must be positive");
  if (pieces.empty()) throw InputError("polyhedral function: at least one piece is required");
  for (const auto& p : pieces) {
    if (p.slope.size() != dim) throw InputError("polyhedral function: piece slope has wrong length");
  }
  if (domain && domain->dim() != dim) throw InputError("polyhedral function: domain has wrong dimension");
}

ExtReal PolyhedralFn::eval(const RVec& z) const {
  if (z.size() != dim) throw InputError("polyhedral function: point has wrong dimension");
  if (domain && !domain->contains(z)) return ExtReal::pos_inf();
  Rational best = dot(pieces.front().slope, z) + pieces.front().intercept;
  for (std::size_t k = 1; k < pieces.size(); ++k) {
    Rational v = dot(pieces[k].slope, z) + pieces[k].intercept;
    if (v > best) best = v;
  }
  return ExtReal(best);
}

void ConstraintPerturbation::validate() const {
  for (const auto& gi : g) {
    if (gi.dim() != f.dim()) throw InputError("constraint perturbation: g_i and f have different dimensions");
  }
}

bool ConstraintPerturbation::is_convex() const {
  if (!f.is_convex()) return false;
  return std::all_of(g.begin(), g.end(), [](const QuadraticFn& gi) { return gi.is_convex(); });
}

Rockafellian::Rockafellian(PolyhedralFn f, std::size_t dim_x, std::size_t dim_y)
    : rep_(std::move(f)), dim_x_(dim_x), dim_y_(dim_y) {
  const auto& p = std::get<PolyhedralFn>(rep_);
  if (dim_x == 0) throw InputError("rockafellian: dim_x must be positive");
  if (p.dim != dim_x + dim_y) throw InputError("rockafellian: polyhedral function must live on X x Y");
  p.validate();
}

Rockafellian::Rockafellian(ConstraintPerturbation cp) : rep_(std::move(cp)) {
  const auto& c = std::get<ConstraintPerturbation>(rep_);
  c.validate();
  dim_x_ = c.f.dim();
  dim_y_ = c.g.size();
  if (dim_x_ == 0) throw InputError("rockafellian: dim_x must be positive");
}

void RobustInstance::validate() const {
  if (scenarios.empty()) throw InputError("instance: at least one scenario is required");
  for (const auto& s : scenarios) {
    if (s.dim_x() != dim_x || s.dim_y() != dim_y) throw InputError("instance: scenario dimensions disagree");
    if (s.is_polyhedral() != scenarios.front().is_polyhedral()) {
      throw InputError("instance: scenarios must all be polyhedral or all be constraint perturbations");
    }
  }
}

bool RobustInstance::is_convex() const {
  if (is_polyhedral()) return true;
  return std::all_of(scenarios.begin(), scenarios.end(),
                     [](const Rockafellian& s) { return s.perturbation().is_convex(); });
}

namespace {

void check_xy(const Rockafellian& f, std::size_t nx, std::size_t ny) {
  if (nx != f.dim_x() || ny != f.dim_y()) throw InputError("rockafellian: argument dimensions do not match");
}

template <class Vec>
Vec join(const Vec& x, const Vec& y) {
  Vec z = x;
  z.insert(z.end(), y.begin(), y.end());
  return z;
}

ExtReal polyhedral_conjugate(const PolyhedralFn& p, const RVec& w) {
  const std::size_t n = p.dim;
  // max <w, z> - t  s.t.  <s_k, z> - t <= -c_k,  D z <= d
  std::vector<Halfspace> rows;
  for (const auto& piece : p.pieces) {
    RVec normal = piece.slope;
    normal.push_back(-1);
    rows.push_back({std::move(normal), -piece.intercept});
  }
  if (p.domain) {
    for (const auto& r : p.domain->rows()) {
      RVec normal = r.normal;
      normal.push_back(0);
      rows.push_back({std::move(normal), r.offset});
    }
  }
  RVec obj = w;
  obj.push_back(-1);
  LpOutcome out = lp_solve(obj, Polyhedron(n + 1, std::move(rows)), Sense::Maximize);
  switch (out.status) {
    case LpStatus::Infeasible:
      return ExtReal::neg_inf();
    case LpStatus::Unbounded:
      return ExtReal::pos_inf();
    default:
      return ExtReal(out.value);
  }
}

// F**(z) = sup over alpha in the simplex, beta >= 0 of
// sum alpha_k (<s_k, z> + c_k) + sum beta_j (<D_j, z> - d_j).
ExtReal polyhedral_biconjugate(const PolyhedralFn& p, const RVec& z) {
  const std::size_t np = p.pieces.size();
  const std::size_t nd = p.domain ? p.domain->size() : 0;
  StandardLp lp;
  lp.rows.push_back(zeros(np + nd));
  for (std::size_t k = 0; k < np; ++k) lp.rows[0][k] = 1;
  lp.rhs = {Rational(1)};
  lp.cost.resize(np + nd);
  for (std::size_t k = 0; k < np; ++k) lp.cost[k] = -(dot(p.pieces[k].slope, z) + p.pieces[k].intercept);
  for (std::size_t j = 0; j < nd; ++j) {
    const auto& r = p.domain->rows()[j];
    lp.cost[np + j] = -(dot(r.normal, z) - r.offset);
  }
  StandardOutcome s = solve_standard(lp);
  if (s.status == LpStatus::Unbounded) return ExtReal::pos_inf();
  return ExtReal(Rational(-s.value));
}

bool has_positive(const DVec& mu) {
  return std::any_of(mu.begin(), mu.end(), [](double v) { return v > 0; });
}

// lambda_min of the Hessian of f + sum l_i g_i.
struct HessianPencil {
  const ConstraintPerturbation& cp;

  SymMatrix at(const DVec& l) const {
    const std::size_t n = cp.f.dim();
    SymMatrix h(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        double v = cp.f.qd()(i, j);
        for (std::size_t k = 0; k < l.size(); ++k) v += l[k] * cp.g[k].qd()(i, j);
        h.set(i, j, v);
      }
    }
    return h;
  }
  double phi(const DVec& l) const { return lambda_min(at(l)); }
  DVec supergradient(const DVec& l) const {
    EigResult e = eigh_sym(at(l));
    const DVec& v = e.vectors.front();
    DVec sg(l.size());
    for (std::size_t k = 0; k < l.size(); ++k) sg[k] = cp.g[k].qd().quad(v);
    return sg;
  }
  bool recession(const DVec& d) const {
    const std::size_t n = cp.f.dim();
    SymMatrix h(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        double v = 0.0;
        for (std::size_t k = 0; k < d.size(); ++k) v += d[k] * cp.g[k].qd()(i, j);
        h.set(i, j, v);
      }
    }
    return lambda_min(h) >= -psd_tolerance();
  }
};

}  // namespace

ExtReal evaluate(const Rockafellian& f, const RVec& x, const RVec& y) {
  check_xy(f, x.size(), y.size());
  if (f.is_polyhedral()) return f.polyhedral().eval(join(x, y));
  const auto& cp = f.perturbation();
  for (std::size_t i = 0; i < cp.g.size(); ++i) {
    if (cp.g[i].eval(x) > y[i]) return ExtReal::pos_inf();
  }
  return ExtReal(cp.f.eval(x));
}

ExtReal evaluate(const Rockafellian& f, const DVec& x, const DVec& y) {
  check_xy(f, x.size(), y.size());
  if (f.is_polyhedral()) {
    ExtReal v = f.polyhedral().eval(to_rvec(join(x, y)));
    return v.is_finite() ? ExtReal(v.value()) : v;
  }
  const auto& cp = f.perturbation();
  for (std::size_t i = 0; i < cp.g.size(); ++i) {
    if (cp.g[i].eval(x) > y[i]) return ExtReal::pos_inf();
  }
  return ExtReal(cp.f.eval(x));
}

ExtReal conjugate_at(const Rockafellian& f, const RVec& xp, const RVec& mu) {
  check_xy(f, xp.size(), mu.size());
  if (f.is_polyhedral()) return polyhedral_conjugate(f.polyhedral(), join(xp, mu));
  return conjugate_at(f, to_dvec(xp), to_dvec(mu));
}

ExtReal conjugate_at(const Rockafellian& f, const DVec& xp, const DVec& mu) {
  check_xy(f, xp.size(), mu.size());
  if (f.is_polyhedral()) {
    ExtReal v = polyhedral_conjugate(f.polyhedral(), to_rvec(join(xp, mu)));
    return v.is_finite() ? ExtReal(v.value()) : v;
  }
  if (has_positive(mu)) return ExtReal::pos_inf();
  const auto& cp = f.perturbation();
  const std::size_t n = cp.f.dim();
  // f - sum mu_i g_i - <xp, .>
  SymMatrix q = cp.f.qd();
  DVec a = cp.f.ad();
  double c = cp.f.cd();
  for (std::size_t k = 0; k < mu.size(); ++k) {
    const auto& g = cp.g[k];
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) q.set(i, j, q(i, j) - mu[k] * g.qd()(i, j));
      a[i] -= mu[k] * g.ad()[i];
    }
    c -= mu[k] * g.cd();
  }
  for (std::size_t i = 0; i < n; ++i) a[i] -= xp[i];
  return -quad_inf(q, a, c);
}

DualProbeSet make_dual_probes(const ConstraintPerturbation& cp, int directions) {
  const std::size_t m = cp.g.size();
  HessianPencil pencil{cp};
  DualProbeSet out;
  constexpr double kCap = 1e6;

  // Centre: maximise the concave map l -> lambda_min(H(l)) over l >= 0.
  DVec centre(m, 0.0);
  double best = pencil.phi(centre);
  if (best < 0 && m > 0) {
    DVec l(m, 0.0);
    for (int k = 1; k <= 400; ++k) {
      DVec sg = pencil.supergradient(l);
      const double nrm = norm2(sg);
      if (nrm == 0) break;
      for (std::size_t i = 0; i < m; ++i) l[i] = std::max(0.0, l[i] + (1.0 + std::abs(best)) * sg[i] / (nrm * k));
      const double v = pencil.phi(l);
      if (v > best) {
        best = v;
        centre = l;
      }
    }
  }
  if (best < -psd_tolerance()) {
    out.empty = true;
    return out;
  }
  out.multipliers.push_back(centre);
  if (m == 0) return out;

  std::vector<DVec> dirs;
  if (m == 1) {
    dirs = {{1.0}, {-1.0}};
  } else if (m == 2) {
    for (int k = 0; k < directions; ++k) {
      const double th = 2 * std::numbers::pi * k / directions;
      dirs.push_back({std::cos(th), std::sin(th)});
    }
  } else {
    for (std::size_t i = 0; i < m; ++i) {
      for (double s : {1.0, -1.0}) {
        DVec d(m, 0.0);
        d[i] = s;
        dirs.push_back(d);
      }
    }
    std::mt19937_64 rng(0x5eedULL + m);
    std::normal_distribution<double> nd;
    for (int k = 0; k < directions; ++k) {
      DVec d(m);
      for (auto& v : d) v = nd(rng);
      const double nrm = norm2(d);
      for (auto& v : d) v /= nrm;
      dirs.push_back(d);
    }
  }

  for (const auto& d : dirs) {
    double hi = kCap;
    for (std::size_t i = 0; i < m; ++i) {
      if (d[i] < 0) hi = std::min(hi, centre[i] / -d[i]);
    }
    auto at = [&](double t) {
      DVec l(m);
      for (std::size_t i = 0; i < m; ++i) l[i] = std::max(0.0, centre[i] + t * d[i]);
      return l;
    };
    const bool nonneg = std::all_of(d.begin(), d.end(), [](double v) { return v >= 0; });
    if (nonneg && pencil.recession(d)) {
      out.recession.push_back(d);
      continue;
    }
    double lo = 0.0;
    if (pencil.phi(at(hi)) >= -psd_tolerance()) {
      lo = hi;
    } else {
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (pencil.phi(at(mid)) >= -psd_tolerance() ? lo : hi) = mid;
      }
    }
    if (lo > 0) out.multipliers.push_back(at(lo));
  }
  return out;
}

BiconjugateValue biconjugate_at(const Rockafellian& f, const RVec& x, const RVec& y) {
  check_xy(f, x.size(), y.size());
  if (f.is_polyhedral()) return {polyhedral_biconjugate(f.polyhedral(), join(x, y)), true};
  return biconjugate_at(f, to_dvec(x), to_dvec(y));
}

BiconjugateValue biconjugate_at(const Rockafellian& f, const DVec& x, const DVec& y, const DualProbeSet* probes) {
  check_xy(f, x.size(), y.size());
  if (f.is_polyhedral()) {
    ExtReal v = polyhedral_biconjugate(f.polyhedral(), to_rvec(join(x, y)));
    return {v.is_finite() ? ExtReal(v.value()) : v, true};
  }
  const auto& cp = f.perturbation();
  if (cp.is_convex()) return {evaluate(f, x, y), true};

  DualProbeSet local;
  if (probes == nullptr) {
    local = make_dual_probes(cp);
    probes = &local;
  }
  BiconjugateValue out{ExtReal::neg_inf(), false};
  if (probes->empty) return out;
  const double fx = cp.f.eval(x);
  DVec slack(cp.g.size());
  for (std::size_t i = 0; i < slack.size(); ++i) slack[i] = cp.g[i].eval(x) - y[i];
  for (const auto& d : probes->recession) {
    double s = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) s += d[i] * slack[i];
    if (s > 0) return {ExtReal::pos_inf(), false};
  }
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& l : probes->multipliers) {
    double v = fx;
    for (std::size_t i = 0; i < l.size(); ++i) v += l[i] * slack[i];
    best = std::max(best, v);
  }
  out.value = ExtReal(best);
  return out;
}

QuadraticFn lagrangian_combine(const ConstraintPerturbation& cp, const RVec& lambda) {
  if (lambda.size() != cp.g.size()) throw InputError("lagrangian_combine: lambda has wrong length");
  QuadraticFn out = cp.f;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    if (sgn(lambda[i]) < 0) throw InputError("lagrangian_combine: multipliers must be nonnegative");
    if (sgn(lambda[i]) != 0) out = out + cp.g[i].scaled(lambda[i]);
  }
  return out;
}

QuadraticFn lagrangian_combine(const ConstraintPerturbation& cp, const DVec& lambda) {
  for (double v : lambda) {
    if (!(v >= 0)) throw InputError("lagrangian_combine: multipliers must be nonnegative");
  }
  return lagrangian_combine(cp, to_rvec(lambda));
}

ExtReal primal_value(const RobustInstance& inst, const RVec& x) {
  ExtReal best = ExtReal::neg_inf();
  const RVec zero = zeros(inst.dim_y);
  for (const auto& s : inst.scenarios) best = max(best, evaluate(s, x, zero));
  return best;
}

ExtReal primal_value(const RobustInstance& inst, const DVec& x) {
  ExtReal best = ExtReal::neg_inf();
  const DVec zero(inst.dim_y, 0.0);
  for (const auto& s : inst.scenarios) best = max(best, evaluate(s, x, zero));
  return best;
}

BiconjugateValue dual_value(const RobustInstance& inst, const DVec& x) {
  BiconjugateValue out{ExtReal::neg_inf(), true};
  const DVec zero(inst.dim_y, 0.0);
  for (const auto& s : inst.scenarios) {
    BiconjugateValue v = biconjugate_at(s, x, zero);
    out.value = max(out.value, v.value);
    out.exact = out.exact && v.exact;
  }
  return out;
}

}  // namespace sproc
