#include "sproc/rockafellian/quadratic.hpp"

#include "sproc/error.hpp"

namespace sproc {

QuadraticFn::QuadraticFn(std::vector<RVec> q, RVec a, Rational c) : q_(std::move(q)), a_(std::move(a)), c_(std::move(c)) {
  const std::size_t n = a_.size();
  if (q_.size() != n) throw InputError("quadratic: Q must be n x n with n = len(a)");
  for (const auto& row : q_) {
    if (row.size() != n) throw InputError("quadratic: Q must be n x n with n = len(a)");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      Rational m = (q_[i][j] + q_[j][i]) / 2;
      q_[i][j] = m;
      q_[j][i] = m;
    }
  }
  refresh();
}

void QuadraticFn::refresh() {
  const std::size_t n = a_.size();
  qd_ = SymMatrix(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) qd_.set(i, j, to_double(q_[i][j]));
  }
  ad_ = to_dvec(a_);
  cd_ = to_double(c_);
}

QuadraticFn QuadraticFn::zero(std::size_t dim) { return constant(dim, Rational(0)); }

QuadraticFn QuadraticFn::constant(std::size_t dim, const Rational& c) {
  return QuadraticFn(std::vector<RVec>(dim, zeros(dim)), zeros(dim), c);
}

QuadraticFn QuadraticFn::linear(const RVec& a, const Rational& c) {
  return QuadraticFn(std::vector<RVec>(a.size(), zeros(a.size())), a, c);
}

Rational QuadraticFn::eval(const RVec& x) const {
  if (x.size() != dim()) throw InputError("quadratic: point has wrong dimension");
  Rational s = c_ + dot(a_, x);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (sgn(x[i]) == 0) continue;
    for (std::size_t j = 0; j < x.size(); ++j) s += q_[i][j] * x[i] * x[j];
  }
  return s;
}

double QuadraticFn::eval(const DVec& x) const {
  if (x.size() != dim()) throw InputError("quadratic: point has wrong dimension");
  double s = cd_;
  for (std::size_t i = 0; i < x.size(); ++i) s += ad_[i] * x[i];
  if (!x.empty()) s += qd_.quad(x);
  return s;
}

DVec QuadraticFn::grad(const DVec& x) const {
  DVec g = x.empty() ? DVec{} : qd_.apply(x);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = 2 * g[i] + ad_[i];
  return g;
}

bool QuadraticFn::is_convex() const { return dim() == 0 || lambda_min(qd_) >= -psd_tolerance(); }

bool QuadraticFn::is_affine() const {
  for (const auto& row : q_) {
    if (!is_zero(row)) return false;
  }
  return true;
}

QuadraticFn QuadraticFn::operator+(const QuadraticFn& o) const {
  if (o.dim() != dim()) throw InputError("quadratic: dimension mismatch in sum");
  auto q = q_;
  auto a = a_;
  for (std::size_t i = 0; i < dim(); ++i) {
    a[i] += o.a_[i];
    for (std::size_t j = 0; j < dim(); ++j) q[i][j] += o.q_[i][j];
  }
  return QuadraticFn(std::move(q), std::move(a), c_ + o.c_);
}

QuadraticFn QuadraticFn::operator-(const QuadraticFn& o) const { return *this + o.scaled(Rational(-1)); }

QuadraticFn QuadraticFn::scaled(const Rational& k) const {
  auto q = q_;
  auto a = a_;
  for (std::size_t i = 0; i < dim(); ++i) {
    a[i] *= k;
    for (auto& v : q[i]) v *= k;
  }
  return QuadraticFn(std::move(q), std::move(a), c_ * k);
}

QuadraticFn QuadraticFn::shifted(const RVec& xp, const Rational& shift) const {
  if (xp.size() != dim()) throw InputError("quadratic: shift vector has wrong dimension");
  auto a = a_;
  for (std::size_t i = 0; i < dim(); ++i) a[i] -= xp[i];
  return QuadraticFn(q_, std::move(a), c_ + shift);
}

SymMatrix QuadraticFn::homogenized() const { return homogenize(qd_, ad_, cd_); }

}  // namespace sproc
