#pragma once

#include <vector>

#include "sproc/linrat/rational.hpp"
#include "sproc/symeig/symeig.hpp"

namespace sproc {

/// q(x) = x^T Q x + a^T x + c with exact coefficients. Q is symmetrised on
/// construction. A double copy is kept for the numeric kernels.
class QuadraticFn {
 public:
  QuadraticFn() = default;
  QuadraticFn(std::vector<RVec> q, RVec a, Rational c);

  static QuadraticFn zero(std::size_t dim);
  static QuadraticFn constant(std::size_t dim, const Rational& c);
  static QuadraticFn linear(const RVec& a, const Rational& c);

  std::size_t dim() const { return a_.size(); }
  const std::vector<RVec>& q() const { return q_; }
  const RVec& a() const { return a_; }
  const Rational& c() const { return c_; }

  const SymMatrix& qd() const { return qd_; }
  const DVec& ad() const { return ad_; }
  double cd() const { return cd_; }

  Rational eval(const RVec& x) const;
  double eval(const DVec& x) const;
  DVec grad(const DVec& x) const;

  /// Hessian PSD up to kEpsPsd.
  bool is_convex() const;
  /// Exactly zero Hessian.
  bool is_affine() const;

  QuadraticFn operator+(const QuadraticFn& o) const;
  QuadraticFn operator-(const QuadraticFn& o) const;
  QuadraticFn scaled(const Rational& k) const;
  QuadraticFn scaled(double k) const { return scaled(to_rational(k)); }
  /// this - <xp, x> + shift
  QuadraticFn shifted(const RVec& xp, const Rational& shift) const;

  /// [[Q, a/2], [a^T/2, c]] in double.
  SymMatrix homogenized() const;

  friend bool operator==(const QuadraticFn& l, const QuadraticFn& r) {
    return l.q_ == r.q_ && l.a_ == r.a_ && l.c_ == r.c_;
  }

 private:
  void refresh();

  std::vector<RVec> q_;
  RVec a_;
  Rational c_;
  SymMatrix qd_;
  DVec ad_;
  double cd_ = 0.0;
};

}  // namespace sproc
