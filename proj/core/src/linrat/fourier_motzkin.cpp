#include "sproc/linrat/fourier_motzkin.hpp"

#include <algorithm>
#include <map>

#include "sproc/error.hpp"
#include "sproc/linrat/lp.hpp"

namespace sproc {

namespace {

struct TrackedRow {
  Halfspace row;
  std::vector<std::size_t> history;  // indices of the input rows it combines
};

// Scales the normal to a primitive integer vector. Returns false for the
// all-zero normal.
bool normalise(Halfspace& h) {
  if (is_zero(h.normal)) return false;
  RVec prim = primitive(h.normal);
  // find the positive factor: prim = k * normal
  for (std::size_t j = 0; j < prim.size(); ++j) {
    if (sgn(h.normal[j]) != 0) {
      Rational k = prim[j] / h.normal[j];
      h.offset *= k;
      break;
    }
  }
  h.normal = std::move(prim);
  return true;
}

// Normalises, drops trivial rows and keeps the tightest offset per normal.
// Returns false if a row 0 <= negative was found (empty set).
bool canonicalise(std::vector<TrackedRow>& rows) {
  std::map<RVec, std::size_t> seen;
  std::vector<TrackedRow> out;
  for (auto& tr : rows) {
    if (!normalise(tr.row)) {
      if (sgn(tr.row.offset) < 0) return false;
      continue;
    }
    auto [it, fresh] = seen.emplace(tr.row.normal, out.size());
    if (fresh) {
      out.push_back(std::move(tr));
    } else if (tr.row.offset < out[it->second].row.offset) {
      out[it->second] = std::move(tr);
    }
  }
  rows = std::move(out);
  return true;
}

std::vector<TrackedRow> prune_by_lp(std::vector<TrackedRow> rows, std::size_t dim) {
  std::size_t k = 0;
  while (k < rows.size()) {
    std::vector<Halfspace> others;
    others.reserve(rows.size() - 1);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i != k) others.push_back(rows[i].row);
    }
    LpOutcome out = lp_solve(rows[k].row.normal, Polyhedron(dim, std::move(others)), Sense::Maximize);
    if (out.status == LpStatus::Optimal && out.value <= rows[k].row.offset) {
      rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(k));
    } else {
      ++k;
    }
  }
  return rows;
}

}  // namespace

Polyhedron remove_redundant(const Polyhedron& p) {
  if (p.is_empty()) return Polyhedron::empty(p.dim());
  std::vector<TrackedRow> rows;
  for (const auto& r : p.rows()) rows.push_back({r, {}});
  if (!canonicalise(rows)) return Polyhedron::empty(p.dim());
  rows = prune_by_lp(std::move(rows), p.dim());
  std::vector<Halfspace> out;
  for (auto& tr : rows) out.push_back(std::move(tr.row));
  return Polyhedron(p.dim(), std::move(out));
}

Polyhedron fm_project(const Polyhedron& p, const std::vector<std::size_t>& keep) {
  const std::size_t n = p.dim();
  if (keep.empty()) throw InputError("fm_project: keep set must be nonempty");
  std::vector<bool> kept(n, false);
  for (auto k : keep) {
    if (k >= n) throw InputError("fm_project: keep index out of range");
    if (kept[k]) throw InputError("fm_project: duplicate keep index");
    kept[k] = true;
  }
  if (p.is_empty()) return Polyhedron::empty(keep.size());

  std::vector<TrackedRow> rows;
  for (std::size_t i = 0; i < p.size(); ++i) rows.push_back({p.rows()[i], {i}});
  if (!canonicalise(rows)) return Polyhedron::empty(keep.size());

  std::size_t eliminated = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (kept[j]) continue;
    std::vector<TrackedRow> pos, neg, next;
    for (auto& tr : rows) {
      int s = sgn(tr.row.normal[j]);
      if (s > 0) pos.push_back(std::move(tr));
      else if (s < 0) neg.push_back(std::move(tr));
      else next.push_back(std::move(tr));
    }
    ++eliminated;
    for (const auto& a : pos) {
      for (const auto& b : neg) {
        std::vector<std::size_t> hist;
        std::set_union(a.history.begin(), a.history.end(), b.history.begin(), b.history.end(),
                       std::back_inserter(hist));
        // Chernikov: after k eliminations a row built from more than k + 1
        // input rows is implied by the others.
        if (hist.size() > eliminated + 1) continue;
        const Rational wa = -b.row.normal[j];
        const Rational wb = a.row.normal[j];
        Halfspace h{zeros(n), wa * a.row.offset + wb * b.row.offset};
        for (std::size_t c = 0; c < n; ++c) h.normal[c] = wa * a.row.normal[c] + wb * b.row.normal[c];
        h.normal[j] = 0;
        next.push_back({std::move(h), std::move(hist)});
      }
    }
    if (!canonicalise(next)) return Polyhedron::empty(keep.size());
    rows = prune_by_lp(std::move(next), n);
  }

  std::vector<Halfspace> out;
  for (const auto& tr : rows) {
    RVec normal(keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i) normal[i] = tr.row.normal[keep[i]];
    out.push_back({std::move(normal), tr.row.offset});
  }
  return Polyhedron(keep.size(), std::move(out));
}

}  // namespace sproc
