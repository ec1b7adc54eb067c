#include "sproc/linrat/polyhedron.hpp"

#include "sproc/error.hpp"
#include "sproc/linrat/lp.hpp"

namespace sproc {

Polyhedron::Polyhedron(std::size_t dim, std::vector<Halfspace> rows) : dim_(dim), rows_(std::move(rows)) {
  if (dim_ == 0) throw InputError("polyhedron dimension must be at least 1");
  for (const auto& r : rows_) {
    if (r.normal.size() != dim_) throw InputError("polyhedron row has wrong length");
  }
}

Polyhedron Polyhedron::empty(std::size_t dim) { return Polyhedron(dim, {Halfspace{zeros(dim), Rational(-1)}}); }

bool Polyhedron::contains(const RVec& z) const {
  if (z.size() != dim_) throw InputError("polyhedron membership: dimension mismatch");
  for (const auto& r : rows_) {
    if (!r.satisfied_by(z)) return false;
  }
  return true;
}

bool Polyhedron::is_empty() const { return !feasible_point(*this).has_value(); }

Polyhedron Polyhedron::with_rows(const std::vector<Halfspace>& extra) const {
  std::vector<Halfspace> rows = rows_;
  rows.insert(rows.end(), extra.begin(), extra.end());
  return Polyhedron(dim_, std::move(rows));
}

Polyhedron Polyhedron::lifted(std::size_t new_dim, const std::vector<std::size_t>& positions) const {
  if (positions.size() != dim_) throw InputError("polyhedron lift: position map has wrong length");
  std::vector<Halfspace> rows;
  rows.reserve(rows_.size());
  for (const auto& r : rows_) {
    RVec n = zeros(new_dim);
    for (std::size_t i = 0; i < dim_; ++i) {
      if (positions[i] >= new_dim) throw InputError("polyhedron lift: position out of range");
      n[positions[i]] = r.normal[i];
    }
    rows.push_back({std::move(n), r.offset});
  }
  return Polyhedron(new_dim, std::move(rows));
}

}  // namespace sproc
