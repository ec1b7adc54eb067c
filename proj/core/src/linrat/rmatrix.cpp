#include "sproc/linrat/rmatrix.hpp"

#include <utility>

#include "sproc/error.hpp"

namespace sproc {

namespace {

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(RMatrix& a, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < a.size(); ++c) {
    std::size_t p = r;
    while (p < a.size() && sgn(a[p][c]) == 0) ++p;
    if (p == a.size()) continue;
    std::swap(a[p], a[r]);
    const Rational inv = 1 / a[r][c];
    for (auto& v : a[r]) v *= inv;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i == r || sgn(a[i][c]) == 0) continue;
      const Rational f = a[i][c];
      for (std::size_t j = 0; j < a[i].size(); ++j) {
        if (sgn(a[r][j]) != 0) a[i][j] -= f * a[r][j];
      }
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

std::vector<RVec> nullspace(const RMatrix& m, std::size_t cols) {
  RMatrix a = m;
  for (const auto& row : a) {
    if (row.size() != cols) throw InputError("nullspace: ragged matrix");
  }
  auto piv = rref(a, cols);
  std::vector<bool> is_pivot(cols, false);
  for (auto c : piv) is_pivot[c] = true;
  std::vector<RVec> basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    RVec v = zeros(cols);
    v[f] = 1;
    for (std::size_t k = 0; k < piv.size(); ++k) v[piv[k]] = -a[k][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

std::size_t rank(const RMatrix& m, std::size_t cols) {
  RMatrix a = m;
  return rref(a, cols).size();
}

std::optional<RVec> solve_square(const RMatrix& m, const RVec& b) {
  const std::size_t n = b.size();
  if (m.size() != n) throw InputError("solve_square: matrix is not square");
  RMatrix a = m;
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].size() != n) throw InputError("solve_square: matrix is not square");
    a[i].push_back(b[i]);
  }
  auto piv = rref(a, n);
  if (piv.size() < n) return std::nullopt;
  RVec x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = a[i][n];
  return x;
}

}  // namespace sproc
