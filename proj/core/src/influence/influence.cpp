#include "sproc/influence/influence.hpp"

#include <set>
#include <sstream>

#include "sproc/error.hpp"

namespace sproc {

void StarField::validate() const {
  if (dim != 2 && dim != 3) throw InputError("star field: dim must be 2 or 3");
  if (stars.empty()) throw InputError("star field: no stars");
  std::set<std::string> ids;
  std::set<RVec> positions;
  for (const auto& s : stars) {
    if (s.pos.size() != dim) throw InputError("star field: star '" + s.id + "' has wrong dimension");
    if (!ids.insert(s.id).second) throw InputError("star field: duplicate id '" + s.id + "'");
    if (!positions.insert(s.pos).second) throw InputError("star field: duplicate position at '" + s.id + "'");
    if (sgn(s.lo) <= 0 || s.hi < s.lo) throw InputError("star field: bad interval for '" + s.id + "'");
  }
}

const Star& StarField::star(const std::string& id) const {
  for (const auto& s : stars) {
    if (s.id == id) return s;
  }
  throw InputError("star field: no star '" + id + "'");
}

QuadraticFn influence_form(const RVec& s, const Rational& us, const RVec& t, const Rational& ut) {
  const std::size_t n = s.size();
  // (ut - us)|x|^2 - 2 <ut t - us s, x> + ut |t|^2 - us |s|^2
  std::vector<RVec> q(n, zeros(n));
  RVec a(n);
  for (std::size_t i = 0; i < n; ++i) {
    q[i][i] = ut - us;
    a[i] = -2 * (ut * t[i] - us * s[i]);
  }
  return QuadraticFn(std::move(q), std::move(a), ut * dot(t, t) - us * dot(s, s));
}

InfluenceSystem worst_case_reduce(const StarField& field, const std::string& center) {
  field.validate();
  const Star& s = field.star(center);
  InfluenceSystem sys;
  sys.dim = field.dim;
  sys.center = center;
  for (const auto& t : field.stars) {
    if (t.id == center) continue;
    sys.constraints.push_back({t.id, influence_form(s.pos, s.lo, t.pos, t.hi)});
  }
  return sys;
}

bool robust_member(const RVec& x, const InfluenceSystem& sys) {
  if (x.size() != sys.dim) throw InputError("influence: point has wrong dimension");
  for (const auto& c : sys.constraints) {
    if (sgn(c.q.eval(x)) > 0) return false;
  }
  return true;
}

std::optional<std::string> star_at(const RVec& x, const StarField& field) {
  for (const auto& s : field.stars) {
    if (s.pos == x) return s.id;
  }
  return std::nullopt;
}

Raster region_raster(const InfluenceSystem& sys, const RasterBox& box) {
  const std::size_t n = sys.dim;
  if (box.lo.size() != n || box.hi.size() != n || box.resolution.size() != n) {
    throw InputError("raster: box has wrong dimension");
  }
  std::size_t total = 1;
  for (std::size_t k = 0; k < n; ++k) {
    if (box.resolution[k] < 2) throw InputError("raster: resolution must be at least 2");
    if (box.hi[k] <= box.lo[k]) throw InputError("raster: empty box");
    total *= static_cast<std::size_t>(box.resolution[k]);
  }
  Raster r;
  r.resolution = box.resolution;
  r.cells.resize(total);
  std::vector<int> idx(n, 0);
  RVec x(n);
  for (std::size_t cell = 0; cell < total; ++cell) {
    for (std::size_t k = 0; k < n; ++k) {
      x[k] = box.lo[k] + (box.hi[k] - box.lo[k]) * ratio(idx[k], box.resolution[k] - 1);
    }
    r.cells[cell] = robust_member(x, sys) ? 1 : 0;
    for (std::size_t k = 0; k < n && ++idx[k] == box.resolution[k]; ++k) idx[k] = 0;
  }
  return r;
}

std::string raster_csv(const Raster& r) {
  if (r.resolution.empty()) return {};
  const std::size_t w = static_cast<std::size_t>(r.resolution[0]);
  std::string out;
  for (std::size_t i = 0; i < r.cells.size(); ++i) {
    out += r.cells[i] ? '1' : '0';
    out += (i + 1) % w == 0 ? '\n' : ',';
  }
  return out;
}

std::string raster_pgm(const Raster& r) {
  if (r.resolution.size() != 2) throw InputError("raster: PGM export needs a 2-D raster");
  const int w = r.resolution[0], h = r.resolution[1];
  std::ostringstream os;
  os << "P2\n" << w << ' ' << h << "\n255\n";
  for (int row = h - 1; row >= 0; --row) {
    for (int col = 0; col < w; ++col) {
      os << (r.cells[static_cast<std::size_t>(row) * w + col] ? 255 : 0) << (col + 1 == w ? '\n' : ' ');
    }
  }
  return os.str();
}

namespace {

std::vector<QuadraticFn> objectives(const InfluenceSystem& sys, const InfluenceClaim& claim,
                                    std::vector<QuadraticFn>& constraints, std::string& mapping) {
  for (const auto& c : sys.constraints) constraints.push_back(c.q);
  const int given = claim.rhs.has_value() + claim.quadratic.has_value() + claim.t0.has_value();
  if (given != 1) throw InputError("influence claim: give exactly one of rhs, quadratic or t0");
  if (claim.quadratic) {
    if (claim.quadratic->dim() != sys.dim) throw InputError("influence claim: wrong dimension");
    mapping = "single scenario: f = claim, g = worst-case forms";
    return {*claim.quadratic};
  }
  if (claim.rhs) {
    claim.rhs->validate();
    if (claim.rhs->dim() != sys.dim) throw InputError("influence claim: wrong dimension");
    std::vector<QuadraticFn> out;
    for (const auto& p : claim.rhs->pieces) out.push_back(QuadraticFn::linear(p.slope, p.intercept));
    mapping = "one scenario per piece of the claim: f = <a_i, x> + b_i, g = worst-case forms";
    return out;
  }
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    if (sys.constraints[i].rival != *claim.t0) continue;
    QuadraticFn f = constraints[i].scaled(Rational(-1));
    constraints.erase(constraints.begin() + static_cast<std::ptrdiff_t>(i));
    mapping = "f = -q_" + *claim.t0 + ", g = the other worst-case forms: (A) holds iff that constraint is redundant";
    return {f};
  }
  throw InputError("influence claim: no rival '" + *claim.t0 + "'");
}

}  // namespace

InfluenceInstance to_robust_instance(const InfluenceSystem& sys, const InfluenceClaim& claim,
                                     const StarField* field) {
  InfluenceInstance out;
  std::vector<QuadraticFn> worst;
  const std::vector<QuadraticFn> fs = objectives(sys, claim, worst, out.mapping);

  std::vector<std::vector<QuadraticFn>> systems;
  if (!field) {
    systems.push_back(worst);
  } else {
    field->validate();
    const Star& s = field->star(sys.center);
    std::vector<const Star*> rivals;
    for (const auto& t : field->stars) {
      if (t.id == sys.center) continue;
      if (claim.t0 && t.id == *claim.t0) continue;
      rivals.push_back(&t);
    }
    const std::size_t k = rivals.size() + 1;  // one bit per rival plus the centre
    if (k > 12) throw InputError("influence: too many stars for endpoint expansion");
    for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
      const Rational& us = (mask & 1) ? s.hi : s.lo;
      std::vector<QuadraticFn> g;
      for (std::size_t j = 0; j < rivals.size(); ++j) {
        const Rational& ut = (mask >> (j + 1) & 1) ? rivals[j]->hi : rivals[j]->lo;
        g.push_back(influence_form(s.pos, us, rivals[j]->pos, ut));
      }
      systems.push_back(std::move(g));
    }
    out.mapping += "; every endpoint combination is a scenario";
  }
  out.instance.dim_x = sys.dim;
  out.instance.dim_y = systems.front().size();
  for (const auto& f : fs) {
    for (const auto& g : systems) out.instance.scenarios.emplace_back(ConstraintPerturbation{f, g});
  }
  out.instance.validate();
  return out;
}

}  // namespace sproc
