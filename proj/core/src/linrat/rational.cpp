#include "sproc/linrat/rational.hpp"

#include <cmath>
#include <stdexcept>

#include "sproc/error.hpp"

namespace sproc {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

mpz_class parse_integer(std::string_view s, std::string_view whole) {
  bool neg = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) {
    throw InputError("malformed rational literal '" + std::string(whole) + "'");
  }
  mpz_class z(std::string(s), 10);
  return neg ? mpz_class(-z) : z;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty()) throw InputError("empty rational literal");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    mpz_class num = parse_integer(text.substr(0, slash), text);
    mpz_class den = parse_integer(text.substr(slash + 1), text);
    if (den == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
    Rational r(num, den);
    r.canonicalize();
    return r;
  }

  // Decimal with optional exponent.
  std::string_view mant = text;
  long exp10 = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    mant = text.substr(0, e);
    mpz_class ez = parse_integer(text.substr(e + 1), text);
    if (!ez.fits_slong_p() || abs(ez) > 4000) {
      throw InputError("exponent out of range in '" + std::string(text) + "'");
    }
    exp10 = ez.get_si();
  }
  bool neg = false;
  if (!mant.empty() && (mant.front() == '+' || mant.front() == '-')) {
    neg = mant.front() == '-';
    mant.remove_prefix(1);
  }
  std::string digits;
  if (auto dot_pos = mant.find('.'); dot_pos != std::string_view::npos) {
    std::string_view ip = mant.substr(0, dot_pos);
    std::string_view fp = mant.substr(dot_pos + 1);
    if (ip.empty() && fp.empty()) throw InputError("malformed rational literal '" + std::string(text) + "'");
    if ((!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp))) {
      throw InputError("malformed rational literal '" + std::string(text) + "'");
    }
    digits = std::string(ip) + std::string(fp);
    exp10 -= static_cast<long>(fp.size());
  } else {
    if (!all_digits(mant)) throw InputError("malformed rational literal '" + std::string(text) + "'");
    digits = std::string(mant);
  }
  mpz_class num(digits, 10);
  if (neg) num = -num;
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
  Rational r = exp10 >= 0 ? Rational(num * scale) : Rational(num, scale);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) { return r.get_str(10); }

Rational ratio(long num, long den) {
  if (den == 0) throw ArithmeticError("ratio: zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational to_rational(double v) {
  if (!std::isfinite(v)) throw InputError("non-finite value cannot be represented as a rational");
  return Rational(v);
}

double to_double(const Rational& r) { return r.get_d(); }

std::string to_decimal(const Rational& r, int digits) {
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  mpz_class num = r.get_num() * scale;
  const mpz_class& den = r.get_den();
  bool neg = num < 0;
  if (neg) num = -num;
  mpz_class q = num / den;
  mpz_class rem = num - q * den;
  if (2 * rem >= den) q += 1;
  std::string s = q.get_str(10);
  if (static_cast<int>(s.size()) <= digits) s.insert(0, static_cast<std::size_t>(digits + 1) - s.size(), '0');
  std::string out = s.substr(0, s.size() - static_cast<std::size_t>(digits));
  if (digits > 0) out += "." + s.substr(s.size() - static_cast<std::size_t>(digits));
  bool is_zero_str = q == 0;
  return (neg && !is_zero_str) ? "-" + out : out;
}

RVec to_rvec(std::span<const double> v) {
  RVec out;
  out.reserve(v.size());
  for (double d : v) out.push_back(to_rational(d));
  return out;
}

std::vector<double> to_dvec(const RVec& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& r : v) out.push_back(r.get_d());
  return out;
}

Rational dot(const RVec& a, const RVec& b) {
  if (a.size() != b.size()) throw InputError("dot: dimension mismatch");
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (sgn(a[i]) != 0 && sgn(b[i]) != 0) s += a[i] * b[i];
  }
  return s;
}

RVec zeros(std::size_t n) { return RVec(n, Rational(0)); }

bool is_zero(const RVec& v) {
  for (const auto& r : v) {
    if (sgn(r) != 0) return false;
  }
  return true;
}

RVec primitive(const RVec& v) {
  mpz_class l = 1;
  for (const auto& r : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), r.get_den_mpz_t());
  mpz_class g = 0;
  std::vector<mpz_class> ints;
  ints.reserve(v.size());
  for (const auto& r : v) {
    mpz_class z = r.get_num() * (l / r.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), z.get_mpz_t());
    ints.push_back(std::move(z));
  }
  if (g == 0) return v;
  RVec out;
  out.reserve(v.size());
  for (auto& z : ints) out.emplace_back(mpz_class(z / g));
  return out;
}

}  // namespace sproc
