#pragma once

#include <optional>
#include <vector>

#include "sproc/extreal.hpp"

namespace sproc {

using DVec = std::vector<double>;

/// Dense symmetric matrix, row-major. The constructor replaces the input by
/// (S + S^T) / 2, so symmetry holds exactly afterwards.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t n);
  SymMatrix(std::size_t n, std::vector<double> entries);
  static SymMatrix from_rows(const std::vector<DVec>& rows);
  static SymMatrix identity(std::size_t n);

  std::size_t n() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  /// Writes both (i, j) and (j, i).
  void set(std::size_t i, std::size_t j, double v);

  DVec apply(const DVec& x) const;
  /// x^T S x
  double quad(const DVec& x) const;
  /// max_i sum_j |S_ij|
  double norm_inf() const;
  double norm_fro() const;

 private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

struct EigResult {
  DVec values;               // ascending
  std::vector<DVec> vectors;  // vectors[k] pairs with values[k]
  int sweeps = 0;
};

/// Cyclic Jacobi. Throws InputError on non-finite entries or n = 0.
EigResult eigh_sym(const SymMatrix& s);

double lambda_min(const SymMatrix& s);

/// Default PSD tolerance: a symmetric matrix counts as PSD when its smallest
/// eigenvalue is >= -psd_tolerance().
inline constexpr double kEpsPsd = 1e-9;
/// Process-wide and atomic; the CLI sets it from --tol-psd before any work.
double psd_tolerance();
/// Throws InputError unless tol > 0.
void set_psd_tolerance(double tol);
inline constexpr double kNullTol = 1e-8;

struct QuadInf {
  ExtReal value;
  /// A minimiser -Q^+ a / 2 when the infimum is finite.
  std::optional<DVec> argmin;
  /// When the infimum is -inf: a direction along which q decreases without
  /// bound (negative curvature or a linear term in the nullspace).
  std::optional<DVec> descent;
};

/// Infimum over x of x^T Q x + a^T x + c.
QuadInf quad_inf_detail(const SymMatrix& q, const DVec& a, double c);
ExtReal quad_inf(const SymMatrix& q, const DVec& a, double c);

/// [[Q, a/2], [a^T/2, c]]; q >= 0 everywhere iff this is PSD.
SymMatrix homogenize(const SymMatrix& q, const DVec& a, double c);

double norm2(const DVec& v);
double norm_inf(const DVec& v);

}  // namespace sproc
