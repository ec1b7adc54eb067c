#pragma once

#include <optional>
#include <string>

#include "sproc/linrat/rational.hpp"

namespace sproc {

/// Value in R u {+inf, -inf}. Finite values carry a double and, when they
/// come out of exact computation, the exact rational too.
class ExtReal {
 public:
  enum class Kind { Finite, PosInf, NegInf };

  ExtReal() = default;
  ExtReal(double v);  // NOLINT: implicit on purpose, finite values are the common case
  ExtReal(const Rational& r);  // NOLINT

  static ExtReal pos_inf();
  static ExtReal neg_inf();

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::Finite; }
  bool is_pos_inf() const { return kind_ == Kind::PosInf; }
  bool is_neg_inf() const { return kind_ == Kind::NegInf; }
  bool is_exact() const { return exact_.has_value(); }

  /// Finite part (or +-infinity as a double).
  double value() const;
  const std::optional<Rational>& exact() const { return exact_; }

  ExtReal operator-() const;
  /// Throws ArithmeticError for (+inf) + (-inf).
  friend ExtReal operator+(const ExtReal& a, const ExtReal& b);
  friend ExtReal operator-(const ExtReal& a, const ExtReal& b) { return a + (-b); }

  /// Ordering on the extended line; exact comparison when both are exact.
  friend bool operator<(const ExtReal& a, const ExtReal& b);
  friend bool operator>(const ExtReal& a, const ExtReal& b) { return b < a; }
  friend bool operator<=(const ExtReal& a, const ExtReal& b) { return !(b < a); }
  friend bool operator>=(const ExtReal& a, const ExtReal& b) { return !(a < b); }

  /// "+inf", "-inf", the exact "p/q" when available, else a decimal.
  std::string to_string() const;

 private:
  Kind kind_ = Kind::Finite;
  double value_ = 0.0;
  std::optional<Rational> exact_;
};

ExtReal max(const ExtReal& a, const ExtReal& b);
ExtReal min(const ExtReal& a, const ExtReal& b);

}  // namespace sproc
