#include "io/json_io.hpp"

#include <fstream>
#include <sstream>

#include "sproc/error.hpp"

namespace sproc::io {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw InputError(where + ": " + what);
}

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing \"") + key + "\"");
  return *it;
}

std::size_t size_from(const Json& j, const std::string& where) {
  if (!j.is_number_unsigned()) fail(where, "expected a non-negative integer");
  return j.get<std::size_t>();
}

const Json& array(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array");
  return j;
}

Json pieces_json(const std::vector<AffinePiece>& pieces) {
  Json out = Json::array();
  for (const auto& p : pieces) out.push_back({{"slope", to_json(p.slope)}, {"intercept", to_json(p.intercept)}});
  return out;
}

std::vector<AffinePiece> pieces_from(const Json& j, const std::string& where) {
  std::vector<AffinePiece> out;
  std::size_t k = 0;
  for (const auto& p : array(j, where)) {
    const std::string w = where + "[" + std::to_string(k++) + "]";
    out.push_back({rvec_from(field(p, "slope", w), w + ".slope"), rational_from(field(p, "intercept", w), w + ".intercept")});
  }
  return out;
}

}  // namespace

Json parse(std::string_view text, const std::string& source) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    // e.byte is the 1-based offset of the character that failed
    std::size_t line = 1, col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string msg = e.what();
    // drop nlohmann's "[json.exception.parse_error.101] parse error at line x, column y: " prefix
    if (auto pos = msg.find(": "); pos != std::string::npos) msg = msg.substr(pos + 2);
    throw InputError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON: " + msg);
  }
}

Json read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(path + ": cannot write");
  out << text;
  if (!out) throw InputError(path + ": write failed");
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Json to_json(const Rational& r) { return to_string(r); }

Json to_json(const RVec& v) {
  Json out = Json::array();
  for (const auto& r : v) out.push_back(to_json(r));
  return out;
}

Rational rational_from(const Json& j, const std::string& where) {
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const InputError& e) {
      fail(where, e.what());
    }
  }
  if (j.is_number_integer()) return Rational(j.get<long>());
  fail(where, "expected a rational string such as \"3/4\" or an integer");
}

RVec rvec_from(const Json& j, const std::string& where) {
  RVec out;
  std::size_t k = 0;
  for (const auto& e : array(j, where)) out.push_back(rational_from(e, where + "[" + std::to_string(k++) + "]"));
  return out;
}

Json decimal(double v) {
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return to_decimal(to_rational(v), 12);
}

Json decimals(const DVec& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(decimal(x));
  return out;
}

Json to_json(const QuadraticFn& q) {
  Json rows = Json::array();
  for (const auto& r : q.q()) rows.push_back(to_json(r));
  return {{"Q", rows}, {"a", to_json(q.a())}, {"c", to_json(q.c())}};
}

QuadraticFn quadratic_from(const Json& j, const std::string& where) {
  std::vector<RVec> rows;
  std::size_t k = 0;
  for (const auto& r : array(field(j, "Q", where), where + ".Q")) {
    rows.push_back(rvec_from(r, where + ".Q[" + std::to_string(k++) + "]"));
  }
  RVec a = rvec_from(field(j, "a", where), where + ".a");
  Rational c = rational_from(field(j, "c", where), where + ".c");
  for (const auto& r : rows) {
    if (r.size() != a.size()) fail(where, "Q must be square with the length of a");
  }
  if (rows.size() != a.size()) fail(where, "Q must be square with the length of a");
  return QuadraticFn(std::move(rows), std::move(a), std::move(c));
}

Json to_json(const Polyhedron& p) {
  Json rows = Json::array();
  for (const auto& r : p.rows()) rows.push_back({{"normal", to_json(r.normal)}, {"offset", to_json(r.offset)}});
  return {{"dim", p.dim()}, {"rows", rows}};
}

Polyhedron polyhedron_from(const Json& j, const std::string& where) {
  const std::size_t dim = size_from(field(j, "dim", where), where + ".dim");
  if (dim == 0) fail(where, "dim must be positive");
  std::vector<Halfspace> rows;
  std::size_t k = 0;
  for (const auto& r : array(field(j, "rows", where), where + ".rows")) {
    const std::string w = where + ".rows[" + std::to_string(k++) + "]";
    Halfspace h{rvec_from(field(r, "normal", w), w + ".normal"), rational_from(field(r, "offset", w), w + ".offset")};
    if (h.normal.size() != dim) fail(w, "normal has wrong length");
    rows.push_back(std::move(h));
  }
  return Polyhedron(dim, std::move(rows));
}

Json to_json(const RobustInstance& inst) {
  Json sc = Json::array();
  for (const auto& f : inst.scenarios) {
    if (f.is_polyhedral()) {
      const auto& p = f.polyhedral();
      Json s = {{"kind", "explicit_polyhedral"}, {"pieces", pieces_json(p.pieces)}};
      if (p.domain) s["domain"] = to_json(*p.domain);
      sc.push_back(std::move(s));
    } else {
      const auto& c = f.perturbation();
      Json g = Json::array();
      for (const auto& gi : c.g) g.push_back(to_json(gi));
      sc.push_back({{"kind", "constraint_perturbation"}, {"f", to_json(c.f)}, {"g", g}});
    }
  }
  return {{"dim_x", inst.dim_x}, {"dim_y", inst.dim_y}, {"scenarios", sc}};
}

RobustInstance instance_from(const Json& j) {
  const std::string where = "instance";
  RobustInstance inst;
  inst.dim_x = size_from(field(j, "dim_x", where), "instance.dim_x");
  inst.dim_y = size_from(field(j, "dim_y", where), "instance.dim_y");
  std::size_t k = 0;
  for (const auto& s : array(field(j, "scenarios", where), "instance.scenarios")) {
    const std::string w = "instance.scenarios[" + std::to_string(k++) + "]";
    const Json& kind = field(s, "kind", w);
    if (kind == "constraint_perturbation") {
      ConstraintPerturbation cp{quadratic_from(field(s, "f", w), w + ".f"), {}};
      std::size_t i = 0;
      for (const auto& g : array(field(s, "g", w), w + ".g")) {
        cp.g.push_back(quadratic_from(g, w + ".g[" + std::to_string(i++) + "]"));
      }
      if (cp.f.dim() != inst.dim_x || cp.g.size() != inst.dim_y) fail(w, "dimensions disagree with dim_x/dim_y");
      inst.scenarios.emplace_back(std::move(cp));
    } else if (kind == "explicit_polyhedral") {
      PolyhedralFn f;
      f.dim = inst.dim_x + inst.dim_y;
      f.pieces = pieces_from(field(s, "pieces", w), w + ".pieces");
      if (auto d = s.find("domain"); d != s.end()) f.domain = polyhedron_from(*d, w + ".domain");
      inst.scenarios.emplace_back(std::move(f), inst.dim_x, inst.dim_y);
    } else {
      fail(w, "kind must be \"constraint_perturbation\" or \"explicit_polyhedral\"");
    }
  }
  if (inst.scenarios.empty()) fail(where, "no scenarios");
  inst.validate();
  return inst;
}

Json to_json(const RhsFunction& h) { return {{"pieces", pieces_json(h.pieces)}}; }

RhsFunction rhs_from(const Json& j) {
  RhsFunction h{pieces_from(field(j, "pieces", "rhs"), "rhs.pieces")};
  h.validate();
  return h;
}

Json to_json(const StarField& f) {
  Json stars = Json::array();
  for (const auto& s : f.stars) {
    stars.push_back({{"id", s.id}, {"pos", to_json(s.pos)}, {"interval", to_json(RVec{s.lo, s.hi})}});
  }
  return {{"dim", f.dim}, {"stars", stars}};
}

StarField starfield_from(const Json& j) {
  StarField f;
  f.dim = size_from(field(j, "dim", "field"), "field.dim");
  std::size_t k = 0;
  for (const auto& s : array(field(j, "stars", "field"), "field.stars")) {
    const std::string w = "field.stars[" + std::to_string(k++) + "]";
    const Json& id = field(s, "id", w);
    if (!id.is_string()) fail(w + ".id", "expected a string");
    RVec iv = rvec_from(field(s, "interval", w), w + ".interval");
    if (iv.size() != 2) fail(w + ".interval", "expected [lo, hi]");
    f.stars.push_back({id.get<std::string>(), rvec_from(field(s, "pos", w), w + ".pos"), iv[0], iv[1]});
  }
  f.validate();
  return f;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Holds:
      return "HOLDS";
    case Verdict::Violated:
      return "VIOLATED";
    default:
      return "UNKNOWN";
  }
}

const char* tri_name(Tri t) {
  switch (t) {
    case Tri::True:
      return "TRUE";
    case Tri::False:
      return "FALSE";
    default:
      return "UNKNOWN";
  }
}

Json to_json(const AResult& a) {
  Json out = {{"verdict", verdict_name(a.verdict)}, {"exact", a.exact}};
  if (a.witness) out["witness"] = decimals(*a.witness);
  if (a.ray) out["ray"] = decimals(*a.ray);
  if (!a.witness_value.empty()) out["witness_value"] = a.witness_value;
  if (!a.note.empty()) out["note"] = a.note;
  return out;
}

Json to_json(const Certificate& c) {
  Json lambda = Json::array();
  for (const auto& l : c.lambda) lambda.push_back(to_decimal(l, 12));
  Json out = {{"scenario", c.scenario}, {"lambda", lambda}, {"exact", c.exact}};
  if (c.exact) out["lambda_exact"] = to_json(c.lambda);
  if (c.margin) out["margin"] = to_decimal(*c.margin, 12);
  out["quality"] = decimal(c.quality);
  return out;
}

Json to_json(const BResult& b) {
  Json out;
  out["certificate"] = b.certificate ? to_json(*b.certificate) : Json("NONE");
  out["notes"] = b.notes;
  return out;
}

Json to_json(const BhResult& b) {
  Json probes = Json::array();
  for (const auto& p : b.probes) {
    Json e = {{"probe", to_json(p.probe)}, {"h_star", to_json(p.h_star)}};
    e["certificate"] = p.certificate ? to_json(*p.certificate) : Json("NONE");
    if (!p.note.empty()) e["note"] = p.note;
    probes.push_back(std::move(e));
  }
  return {{"valid_on_probes", b.valid_on_probes}, {"probes", probes}};
}

Json to_json(const HypothesisFlag& f) {
  Json out = {{"flag", to_string(f.flag)}, {"evidence", f.evidence}};
  if (f.witness_point) out["witness_point"] = decimals(*f.witness_point);
  if (!f.witness_value.empty()) out["witness_value"] = f.witness_value;
  return out;
}

Json to_json(const HypothesisReport& r) {
  Json out;
  for (std::size_t i = 0; i < r.h.size(); ++i) out["H" + std::to_string(i + 1)] = to_json(r.h[i]);
  return out;
}

Json to_json(const ValidationReport& r) {
  Json sides = Json::array();
  for (const auto& s : r.sides) {
    Json e = {{"name", s.name}, {"value", tri_name(s.value)}};
    if (!s.note.empty()) e["note"] = s.note;
    sides.push_back(std::move(e));
  }
  Json hyp = Json::object();
  for (const auto& [name, flag] : r.hypotheses) hyp[name] = to_json(flag);
  Json out = {{"theorem", to_string(r.theorem)}, {"agreement", to_string(r.agreement)}, {"sides", sides},
              {"hypotheses", hyp}};
  if (r.a) out["A"] = to_json(*r.a);
  if (r.b) out["B"] = to_json(*r.b);
  out["notes"] = r.notes;
  return out;
}

Json to_json(const InfluenceSystem& s) {
  Json cs = Json::array();
  for (const auto& c : s.constraints) cs.push_back({{"rival", c.rival}, {"q", to_json(c.q)}});
  return {{"dim", s.dim}, {"center", s.center}, {"constraints", cs}};
}

bool contains_unknown(const Json& j) {
  if (j.is_string()) return j.get_ref<const std::string&>() == "UNKNOWN";
  if (j.is_structured()) {
    for (const auto& e : j) {
      if (contains_unknown(e)) return true;
    }
  }
  return false;
}

}  // namespace sproc::io
