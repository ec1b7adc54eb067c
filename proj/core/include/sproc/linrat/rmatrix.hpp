#pragma once

#include <optional>
#include <vector>

#include "sproc/linrat/rational.hpp"

namespace sproc {

// Row-major dense rational matrix helpers for the tiny systems that show up
// in vertex enumeration (dimension <= ~8).
using RMatrix = std::vector<RVec>;

/// Basis of {x : M x = 0}; `cols` is needed when M has no rows.
std::vector<RVec> nullspace(const RMatrix& m, std::size_t cols);

std::size_t rank(const RMatrix& m, std::size_t cols);

/// Solves the square system M x = b; nullopt if M is singular.
std::optional<RVec> solve_square(const RMatrix& m, const RVec& b);

}  // namespace sproc
