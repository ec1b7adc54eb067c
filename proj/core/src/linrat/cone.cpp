#include "sproc/linrat/cone.hpp"

#include <set>

#include "sproc/error.hpp"
#include "sproc/linrat/rmatrix.hpp"
#include "sproc/linrat/simplex.hpp"

namespace sproc {

void ConeModel::validate() const {
  for (const auto& v : points) {
    if (v.size() != dim) throw InputError("cone model: point has wrong length");
  }
  for (const auto& r : rays) {
    if (r.size() != dim) throw InputError("cone model: ray has wrong length");
  }
}

namespace {

// Columns are the generators (points first, then rays); optionally a final
// row sum(a) = 1 over the point columns.
StandardLp generator_system(const RVec& point, const ConeModel& c, bool convex_row) {
  const std::size_t nv = c.points.size();
  const std::size_t nr = c.rays.size();
  StandardLp lp;
  lp.rows.assign(c.dim, zeros(nv + nr));
  for (std::size_t i = 0; i < c.dim; ++i) {
    for (std::size_t j = 0; j < nv; ++j) lp.rows[i][j] = c.points[j][i];
    for (std::size_t j = 0; j < nr; ++j) lp.rows[i][nv + j] = c.rays[j][i];
  }
  lp.rhs = point;
  if (convex_row) {
    RVec row = zeros(nv + nr);
    for (std::size_t j = 0; j < nv; ++j) row[j] = 1;
    lp.rows.push_back(std::move(row));
    lp.rhs.push_back(1);
  }
  lp.cost = zeros(nv + nr);
  return lp;
}

void split(const RVec& z, std::size_t nv, ConeMembership& out) {
  out.point_coeffs.assign(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(nv));
  out.ray_coeffs.assign(z.begin() + static_cast<std::ptrdiff_t>(nv), z.end());
}

void check_args(const RVec& point, const ConeModel& c) {
  c.validate();
  if (point.size() != c.dim) throw InputError("cone membership: dimension mismatch");
}

// Calls f on every k-subset of {0..n-1} in lexicographic order.
template <class F>
void for_each_subset(std::size_t n, std::size_t k, F&& f) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    f(idx);
    if (k == 0) return;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

ConeMembership cone_membership(const RVec& point, const ConeModel& c, ConeSemantics semantics) {
  check_args(point, c);
  ConeMembership out;
  if (c.is_empty()) return out;
  const std::size_t nv = c.points.size();

  if (semantics == ConeSemantics::ClosedHull) {
    StandardOutcome s = solve_standard(generator_system(point, c, false));
    if (s.status == LpStatus::Infeasible) {
      out.separator = s.farkas;
      return out;
    }
    out.member = true;
    split(s.z, nv, out);
    return out;
  }

  // R_+ (conv V + cone R) is empty when V is.
  if (nv == 0) return out;
  StandardLp lp = generator_system(point, c, false);
  for (std::size_t j = 0; j < nv; ++j) lp.cost[j] = -1;
  StandardOutcome s = solve_standard(lp);
  if (s.status == LpStatus::Infeasible) {
    out.separator = s.farkas;
    return out;
  }
  if (s.status == LpStatus::Unbounded) {
    RVec z = s.z;
    for (std::size_t j = 0; j < z.size(); ++j) z[j] += s.ray[j];
    out.member = true;
    split(z, nv, out);
    return out;
  }
  if (sgn(s.value) < 0) {
    out.member = true;
    split(s.z, nv, out);
    return out;
  }
  if (is_zero(point)) {
    out.member = true;
    out.point_coeffs = zeros(nv);
    out.ray_coeffs = zeros(c.rays.size());
  }
  return out;
}

bool cone_member(const RVec& point, const ConeModel& c, ConeSemantics semantics) {
  return cone_membership(point, c, semantics).member;
}

ConeMembership poly_member(const RVec& point, const ConeModel& c) {
  check_args(point, c);
  ConeMembership out;
  if (c.is_empty() || c.points.empty()) return out;
  StandardOutcome s = solve_standard(generator_system(point, c, true));
  if (s.status == LpStatus::Infeasible) {
    out.separator = s.farkas;
    return out;
  }
  out.member = true;
  split(s.z, c.points.size(), out);
  return out;
}

ConeModel to_generators(const Polyhedron& p) {
  const std::size_t d = p.dim();
  ConeModel out;
  out.dim = d;
  if (p.is_empty()) {
    out.empty = true;
    return out;
  }
  RMatrix a;
  for (const auto& r : p.rows()) a.push_back(r.normal);
  const std::vector<RVec> lineality = nullspace(a, d);
  const std::size_t k = lineality.size();
  const std::size_t m = a.size();

  // Minimal faces of P intersected with the orthogonal complement of the
  // lineality space are single points.
  std::set<RVec> vertices;
  for_each_subset(m, d - k, [&](const std::vector<std::size_t>& s) {
    RMatrix sys;
    RVec rhs;
    for (auto i : s) {
      sys.push_back(a[i]);
      rhs.push_back(p.rows()[i].offset);
    }
    for (const auto& l : lineality) {
      sys.push_back(l);
      rhs.push_back(0);
    }
    auto x = solve_square(sys, rhs);
    if (x && p.contains(*x)) vertices.insert(*x);
  });

  std::set<RVec> rays;
  if (d > k) {
    for_each_subset(m, d - k - 1, [&](const std::vector<std::size_t>& s) {
      RMatrix sys;
      for (auto i : s) sys.push_back(a[i]);
      for (const auto& l : lineality) sys.push_back(l);
      auto ns = nullspace(sys, d);
      if (ns.size() != 1) return;
      for (int sign : {1, -1}) {
        RVec r = ns[0];
        if (sign < 0) {
          for (auto& v : r) v = -v;
        }
        bool ok = true;
        for (const auto& row : a) {
          if (sgn(dot(row, r)) > 0) {
            ok = false;
            break;
          }
        }
        if (ok) rays.insert(primitive(r));
      }
    });
  }
  for (const auto& l : lineality) {
    RVec r = primitive(l);
    RVec neg = r;
    for (auto& v : neg) v = -v;
    rays.insert(r);
    rays.insert(neg);
  }
  out.points.assign(vertices.begin(), vertices.end());
  out.rays.assign(rays.begin(), rays.end());
  return out;
}

}  // namespace sproc
