#include "sproc/linrat/lp.hpp"

#include "sproc/error.hpp"

namespace sproc {

namespace {

struct FeasibilityProbe {
  bool feasible = false;
  RVec point;   // when feasible
  RVec farkas;  // when infeasible
};

// Feasibility of A x <= b through the alternative system
//   y >= 0, A^T y = 0, <b, y> = -1.
// If that system is infeasible, its Farkas vector (x, t) has A x + t b >= 0
// with t > 0, which yields the feasible point -x / t.
FeasibilityProbe probe_feasibility(const Polyhedron& p) {
  const std::size_t n = p.dim();
  const std::size_t m = p.size();
  StandardLp alt;
  alt.rows.assign(n + 1, RVec(m, Rational(0)));
  for (std::size_t i = 0; i < m; ++i) {
    const auto& row = p.rows()[i];
    for (std::size_t j = 0; j < n; ++j) alt.rows[j][i] = row.normal[j];
    alt.rows[n][i] = row.offset;
  }
  alt.rhs = zeros(n + 1);
  alt.rhs[n] = -1;
  alt.cost = zeros(m);
  StandardOutcome s = solve_standard(alt);

  FeasibilityProbe out;
  if (s.status != LpStatus::Infeasible) {
    out.farkas = std::move(s.z);
    return out;
  }
  out.feasible = true;
  const Rational& t = s.farkas[n];
  out.point.resize(n);
  for (std::size_t j = 0; j < n; ++j) out.point[j] = -s.farkas[j] / t;
  return out;
}

}  // namespace

LpOutcome lp_solve(const RVec& objective, const Polyhedron& constraints, Sense sense) {
  const std::size_t n = constraints.dim();
  const std::size_t m = constraints.size();
  if (objective.size() != n) throw InputError("lp_solve: objective length does not match polyhedron dimension");

  LpOutcome out;
  FeasibilityProbe fp = probe_feasibility(constraints);
  if (!fp.feasible) {
    out.status = LpStatus::Infeasible;
    out.farkas = std::move(fp.farkas);
    return out;
  }

  const int s = sense == Sense::Maximize ? 1 : -1;
  // Dual: minimise <b, y> s.t. A^T y = s c, y >= 0. Its simplex multipliers
  // are a primal optimum.
  StandardLp dual;
  dual.rows.assign(n, RVec(m, Rational(0)));
  dual.cost.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& row = constraints.rows()[i];
    for (std::size_t j = 0; j < n; ++j) dual.rows[j][i] = row.normal[j];
    dual.cost[i] = row.offset;
  }
  dual.rhs.resize(n);
  for (std::size_t j = 0; j < n; ++j) dual.rhs[j] = s > 0 ? objective[j] : Rational(-objective[j]);

  StandardOutcome d = solve_standard(dual);
  if (d.status == LpStatus::Infeasible) {
    out.status = LpStatus::Unbounded;
    out.point = std::move(fp.point);
    out.ray.resize(n);
    for (std::size_t j = 0; j < n; ++j) out.ray[j] = -d.farkas[j];
    return out;
  }
  if (d.status == LpStatus::Unbounded) {
    // Weak duality makes this impossible once the primal is known feasible.
    throw std::logic_error("lp_solve: dual unbounded although primal is feasible");
  }
  out.status = LpStatus::Optimal;
  out.point = std::move(d.dual);
  out.dual = std::move(d.z);
  out.value = s > 0 ? d.value : Rational(-d.value);
  return out;
}

std::optional<RVec> feasible_point(const Polyhedron& p) {
  FeasibilityProbe fp = probe_feasibility(p);
  if (!fp.feasible) return std::nullopt;
  return std::move(fp.point);
}

bool verify_lp_certificate(const LpOutcome& out, const RVec& c, const Polyhedron& p, Sense sense) {
  const std::size_t n = p.dim();
  const std::size_t m = p.size();
  const int s = sense == Sense::Maximize ? 1 : -1;
  auto At_times = [&](const RVec& y) {
    RVec r = zeros(n);
    for (std::size_t i = 0; i < m; ++i) {
      if (sgn(y[i]) == 0) continue;
      for (std::size_t j = 0; j < n; ++j) r[j] += y[i] * p.rows()[i].normal[j];
    }
    return r;
  };
  auto b_dot = [&](const RVec& y) {
    Rational v = 0;
    for (std::size_t i = 0; i < m; ++i) v += y[i] * p.rows()[i].offset;
    return v;
  };
  switch (out.status) {
    case LpStatus::Infeasible: {
      if (out.farkas.size() != m) return false;
      for (const auto& v : out.farkas) {
        if (sgn(v) < 0) return false;
      }
      return is_zero(At_times(out.farkas)) && b_dot(out.farkas) < 0;
    }
    case LpStatus::Unbounded: {
      if (!p.contains(out.point)) return false;
      for (const auto& row : p.rows()) {
        if (sgn(dot(row.normal, out.ray)) > 0) return false;
      }
      return s * sgn(dot(c, out.ray)) > 0;
    }
    case LpStatus::Optimal: {
      if (!p.contains(out.point) || out.dual.size() != m) return false;
      if (dot(c, out.point) != out.value) return false;
      for (const auto& v : out.dual) {
        if (sgn(v) < 0) return false;
      }
      RVec aty = At_times(out.dual);
      for (std::size_t j = 0; j < n; ++j) {
        if (aty[j] != (s > 0 ? c[j] : Rational(-c[j]))) return false;
      }
      if (b_dot(out.dual) != s * out.value) return false;
      for (std::size_t i = 0; i < m; ++i) {
        if (sgn(out.dual[i]) != 0 && dot(p.rows()[i].normal, out.point) != p.rows()[i].offset) return false;
      }
      return true;
    }
  }
  return false;
}

}  // namespace sproc
