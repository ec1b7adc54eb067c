#pragma once

#include <cstddef>
#include <vector>

#include "sproc/linrat/rational.hpp"

namespace sproc {

/// One row <normal, z> <= offset.
struct Halfspace {
  RVec normal;
  Rational offset;

  bool satisfied_by(const RVec& z) const { return dot(normal, z) <= offset; }
  friend bool operator==(const Halfspace&, const Halfspace&) = default;
};

/// H-representation {z in Q^dim : <normal_i, z> <= offset_i for all rows}.
/// Emptiness is never assumed; ask `is_empty()` which runs an LP.
class Polyhedron {
 public:
  explicit Polyhedron(std::size_t dim, std::vector<Halfspace> rows = {});

  /// Canonical empty polyhedron: the single row <0, z> <= -1.
  static Polyhedron empty(std::size_t dim);

  std::size_t dim() const { return dim_; }
  const std::vector<Halfspace>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }

  bool contains(const RVec& z) const;
  bool is_empty() const;

  /// Adds rows; dimensions are checked.
  Polyhedron with_rows(const std::vector<Halfspace>& extra) const;

  /// Embeds into a larger space: coordinate i of this polyhedron becomes
  /// coordinate `positions[i]` of a `new_dim` dimensional space.
  Polyhedron lifted(std::size_t new_dim, const std::vector<std::size_t>& positions) const;

  friend bool operator==(const Polyhedron&, const Polyhedron&) = default;

 private:
  std::size_t dim_;
  std::vector<Halfspace> rows_;
};

}  // namespace sproc
