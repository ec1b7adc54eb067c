#pragma once

#include <gmpxx.h>

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sproc {

// Arbitrary precision rational, always kept in canonical form (gcd 1,
// positive denominator) by GMP.
using Rational = mpq_class;
using RVec = std::vector<Rational>;

/// Parses "p/q", an integer, or a finite decimal such as "-1.25" or "3e-2".
/// The decimal form is converted exactly (no binary rounding).
Rational parse_rational(std::string_view text);

/// Canonical text form: "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& r);

/// num/den in canonical form. Prefer this to Rational(num, den), which GMP
/// does not reduce.
Rational ratio(long num, long den);

/// Exact conversion; every finite double is a dyadic rational.
Rational to_rational(double v);
double to_double(const Rational& r);

/// Fixed-precision decimal rendering used in reports (round half away from zero).
std::string to_decimal(const Rational& r, int digits = 12);

RVec to_rvec(std::span<const double> v);
std::vector<double> to_dvec(const RVec& v);

Rational dot(const RVec& a, const RVec& b);
RVec zeros(std::size_t n);
bool is_zero(const RVec& v);

/// Scales v by a positive rational so that it becomes a primitive integer
/// vector. Zero vectors are returned unchanged.
RVec primitive(const RVec& v);

}  // namespace sproc
