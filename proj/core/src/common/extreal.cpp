#include "sproc/extreal.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "sproc/error.hpp"

namespace sproc {

ExtReal::ExtReal(double v) {
  if (std::isnan(v)) throw ArithmeticError("NaN is not an extended real");
  if (std::isinf(v)) {
    kind_ = v > 0 ? Kind::PosInf : Kind::NegInf;
    return;
  }
  value_ = v;
}

ExtReal::ExtReal(const Rational& r) : value_(to_double(r)), exact_(r) {}

ExtReal ExtReal::pos_inf() {
  ExtReal e;
  e.kind_ = Kind::PosInf;
  return e;
}

ExtReal ExtReal::neg_inf() {
  ExtReal e;
  e.kind_ = Kind::NegInf;
  return e;
}

double ExtReal::value() const {
  switch (kind_) {
    case Kind::PosInf:
      return std::numeric_limits<double>::infinity();
    case Kind::NegInf:
      return -std::numeric_limits<double>::infinity();
    default:
      return value_;
  }
}

ExtReal ExtReal::operator-() const {
  switch (kind_) {
    case Kind::PosInf:
      return neg_inf();
    case Kind::NegInf:
      return pos_inf();
    default:
      break;
  }
  if (exact_) return ExtReal(Rational(-*exact_));
  return ExtReal(-value_);
}

ExtReal operator+(const ExtReal& a, const ExtReal& b) {
  if ((a.is_pos_inf() && b.is_neg_inf()) || (a.is_neg_inf() && b.is_pos_inf())) {
    throw ArithmeticError("(+inf) + (-inf) is undefined");
  }
  if (a.is_pos_inf() || b.is_pos_inf()) return ExtReal::pos_inf();
  if (a.is_neg_inf() || b.is_neg_inf()) return ExtReal::neg_inf();
  if (a.exact_ && b.exact_) return ExtReal(Rational(*a.exact_ + *b.exact_));
  return ExtReal(a.value_ + b.value_);
}

bool operator<(const ExtReal& a, const ExtReal& b) {
  auto rank = [](const ExtReal& e) { return e.is_neg_inf() ? 0 : e.is_finite() ? 1 : 2; };
  if (rank(a) != rank(b)) return rank(a) < rank(b);
  if (!a.is_finite()) return false;
  if (a.exact_ && b.exact_) return *a.exact_ < *b.exact_;
  return a.value_ < b.value_;
}

std::string ExtReal::to_string() const {
  if (is_pos_inf()) return "+inf";
  if (is_neg_inf()) return "-inf";
  if (exact_) return sproc::to_string(*exact_);
  std::ostringstream os;
  os.precision(17);
  os << value_;
  return os.str();
}

ExtReal max(const ExtReal& a, const ExtReal& b) { return a < b ? b : a; }
ExtReal min(const ExtReal& a, const ExtReal& b) { return b < a ? b : a; }

}  // namespace sproc
