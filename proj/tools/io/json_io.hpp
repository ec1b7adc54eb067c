#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

#include "sproc/influence/influence.hpp"
#include "sproc/procedures/procedures.hpp"

namespace sproc::io {

// Insertion-ordered so that reports come out byte-identical across runs.
using Json = nlohmann::ordered_json;

/// Parses `text`; a syntax error becomes an InputError naming
/// source:line:column.
Json parse(std::string_view text, const std::string& source);
Json read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);
/// Two-space indent and a trailing newline.
std::string dump(const Json& j);

/// FNV-1a 64 of the text.
std::uint64_t fnv1a(std::string_view text);

// Rationals are written as canonical "p/q" strings. On input a string in any
// form parse_rational accepts, or a JSON integer, is accepted.
Json to_json(const Rational& r);
Json to_json(const RVec& v);
Rational rational_from(const Json& j, const std::string& where);
RVec rvec_from(const Json& j, const std::string& where);

/// Doubles as fixed 12-digit decimal strings.
Json decimal(double v);
Json decimals(const DVec& v);

Json to_json(const QuadraticFn& q);
QuadraticFn quadratic_from(const Json& j, const std::string& where);
Json to_json(const Polyhedron& p);
Polyhedron polyhedron_from(const Json& j, const std::string& where);
Json to_json(const RobustInstance& inst);
RobustInstance instance_from(const Json& j);
Json to_json(const RhsFunction& h);
RhsFunction rhs_from(const Json& j);
Json to_json(const StarField& f);
StarField starfield_from(const Json& j);

// Report fragments. Verdicts and truth values are upper case, so a report
// holds the string "UNKNOWN" exactly when something was left undecided.
const char* verdict_name(Verdict v);
const char* tri_name(Tri t);
Json to_json(const AResult& a);
Json to_json(const Certificate& c);
Json to_json(const BResult& b);
Json to_json(const BhResult& b);
Json to_json(const HypothesisFlag& f);
Json to_json(const HypothesisReport& r);
Json to_json(const ValidationReport& r);
Json to_json(const InfluenceSystem& s);

/// True when some string value in `j` equals "UNKNOWN".
bool contains_unknown(const Json& j);

}  // namespace sproc::io
