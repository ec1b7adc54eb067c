// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance            run every criterion
//   acceptance 3 7        run the listed ones
//
// Exit status is 0 only if every selected criterion passes. Oracles here are
// written independently of the library routines they check (grid sweeps,
// endpoint enumeration, direct substitution).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "io/json_io.hpp"
#include "sproc/error.hpp"

namespace sproc {
namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Rational in [-5, 5] with denominator 1, 2 or 3.
Rational small_rational(std::mt19937& rng) {
  const int den = std::uniform_int_distribution<int>(1, 3)(rng);
  return ratio(std::uniform_int_distribution<int>(-5 * den, 5 * den)(rng), den);
}

Rockafellian random_polyhedral(std::mt19937& rng, std::size_t nx, std::size_t ny) {
  PolyhedralFn f;
  f.dim = nx + ny;
  const int pieces = std::uniform_int_distribution<int>(1, 4)(rng);
  for (int k = 0; k < pieces; ++k) {
    AffinePiece p;
    for (std::size_t i = 0; i < f.dim; ++i) p.slope.push_back(small_rational(rng));
    p.intercept = small_rational(rng);
    f.pieces.push_back(std::move(p));
  }
  if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) {
    std::vector<Halfspace> rows;
    const int nrows = std::uniform_int_distribution<int>(1, 2)(rng);
    for (int k = 0; k < nrows; ++k) {
      RVec a;
      for (std::size_t i = 0; i < f.dim; ++i) a.push_back(small_rational(rng));
      rows.push_back({std::move(a), small_rational(rng) + 5});
    }
    f.domain = Polyhedron(f.dim, std::move(rows));
  }
  return Rockafellian(std::move(f), nx, ny);
}

RobustInstance family(std::vector<Rockafellian> fs) {
  RobustInstance inst{fs.front().dim_x(), fs.front().dim_y(), std::move(fs)};
  inst.validate();
  return inst;
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
  std::mt19937 rng(101);
  const auto t0 = Clock::now();
  int agree = 0, inexact = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t nx = 1 + trial % 3, ny = 1 + (trial / 3) % 3;
    const int nu = 1 + (trial / 9) % 2;
    std::vector<Rockafellian> fs;
    for (int u = 0; u < nu; ++u) fs.push_back(random_polyhedral(rng, nx, ny));
    Lemma21Result r = lemma21_check(family(std::move(fs)));
    agree += r.agree();
    inexact += !r.exact;
  }
  const double secs = seconds_since(t0);
  return {agree == 200 && inexact == 0 && secs < 60.0,
          fmt("%d/200 instances with (i), (ii), (iii) equal, %d inexact, %.1f s (limit 60 s)", agree, inexact, secs)};
}

Outcome criterion2() {
  std::mt19937 rng(202);
  int with_hyp = 0, disagree_with_hyp = 0, disagree_without = 0, gap_shown = 0, undecided = 0, ccr_mismatch = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t nx = 1 + trial % 2, ny = 1 + (trial / 2) % 2;
    const int nu = 1 + (trial / 4) % 3;
    std::vector<Rockafellian> fs;
    for (int u = 0; u < nu; ++u) fs.push_back(random_polyhedral(rng, nx, ny));
    RobustInstance inst = family(std::move(fs));

    RVec p(ny + 1, Rational(0));
    p.back() = -1;
    // (0, -1) in the hull of every R_+ F_u, and in R_+ G for G = sup_u F_u
    bool in_all_hulls = true;
    for (const auto& f : inst.scenarios) {
      const EpiProjection e = epi_projection(f);
      if (nu == 1) {
        const bool ccr = closed_convex_regarding(e.generators, {p});
        const bool direct = (hull_member(e, p) == Tri::True) == (raw_cone_member(e, p) == Tri::True);
        ccr_mismatch += ccr != direct;
      }
      in_all_hulls = in_all_hulls && hull_member(e, p) == Tri::True;
    }
    const bool in_raw = raw_cone_member(epi_projection(inst), p) == Tri::True;
    const bool hypothesis = !(in_all_hulls && !in_raw);

    AResult a = check_A(inst);
    BResult b = certify_B(inst);
    if (a.verdict == Verdict::Unknown || !a.exact) {
      ++undecided;
      continue;
    }
    const bool agree = (a.verdict == Verdict::Holds) == b.certificate.has_value();
    if (hypothesis) {
      ++with_hyp;
      disagree_with_hyp += !agree;
    } else if (!agree) {
      ++disagree_without;
      gap_shown += in_all_hulls && !in_raw;
    }
  }
  return {disagree_with_hyp == 0 && undecided == 0 && gap_shown == disagree_without && ccr_mismatch == 0,
          fmt("%d/200 with the hull/raw-cone condition, %d disagreements there; %d disagreements without it, %d "
              "showing the gap; %d undecided; %d closed-convex-regarding route mismatches",
              with_hyp, disagree_with_hyp, disagree_without, gap_shown, undecided, ccr_mismatch)};
}

// Q = L L^T (+ shift I) with small integer L.
std::vector<RVec> random_psd(std::mt19937& rng, std::size_t n, int shift) {
  std::uniform_int_distribution<int> e(-2, 2);
  std::vector<RVec> l(n, RVec(n));
  for (auto& row : l) {
    for (auto& v : row) v = e(rng);
  }
  std::vector<RVec> q(n, RVec(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) q[i][j] += l[i][k] * l[j][k];
    }
    q[i][i] += shift;
  }
  return q;
}

Outcome criterion3() {
  std::mt19937 rng(303);
  std::uniform_int_distribution<int> c(-4, 4);
  int unknown = 0, mismatch = 0, certificates = 0, bad_margin = 0, holds = 0;
  double worst_margin = 1e300;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + trial % 2;
    RVec a(n), b(n), x0(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = c(rng);
      b[i] = c(rng);
      x0[i] = ratio(c(rng), 2);
    }
    QuadraticFn f(random_psd(rng, n, 0), a, ratio(c(rng) * 3, 2));
    QuadraticFn g0(random_psd(rng, n, 1), b, Rational(0));
    // Slater point x0: g(x0) = -k < 0
    QuadraticFn g(g0.q(), b, -g0.eval(x0) - (1 + std::abs(c(rng))));
    RobustInstance inst{n, 1, {Rockafellian(ConstraintPerturbation{f, {g}})}};
    inst.validate();
    AResult ar = check_A(inst);
    BResult br = certify_B(inst);
    if (ar.verdict == Verdict::Unknown) {
      ++unknown;
      continue;
    }
    holds += ar.verdict == Verdict::Holds;
    mismatch += (ar.verdict == Verdict::Holds) != br.certificate.has_value();
    if (br.certificate) {
      ++certificates;
      const double m = substitution_margin(inst, *br.certificate, 10000, 1000 + trial);
      worst_margin = std::min(worst_margin, m);
      bad_margin += m < -1e-6;
    }
  }
  return {mismatch == 0 && unknown <= 5 && bad_margin == 0,
          fmt("%d mismatches, %d%% UNKNOWN (limit 5%%), %d holds, %d certificates, worst substitution margin %.3g "
              "(limit -1e-6)",
              mismatch, unknown, holds, certificates, certificates ? worst_margin : 0.0)};
}

// Concave piecewise-affine helpers for the polyhedral conjugate oracle: a
// convex 1-D function with breakpoints on multiples of 1/4.
struct Pl1 {
  std::vector<Rational> slope, intercept;
};

Pl1 random_pl1(std::mt19937& rng) {
  std::uniform_int_distribution<int> bp(-16, 16), s(-5, 5);
  const int pieces = std::uniform_int_distribution<int>(1, 2)(rng);
  std::vector<int> slopes;
  while (static_cast<int>(slopes.size()) < pieces) {
    const int v = s(rng);
    if (std::find(slopes.begin(), slopes.end(), v) == slopes.end()) slopes.push_back(v);
  }
  std::sort(slopes.begin(), slopes.end());
  std::vector<int> breaks;
  while (static_cast<int>(breaks.size()) < pieces - 1) breaks.push_back(bp(rng));
  std::sort(breaks.begin(), breaks.end());
  Pl1 out;
  Rational c = ratio(std::uniform_int_distribution<int>(-8, 8)(rng), 4);
  for (int k = 0; k < pieces; ++k) {
    if (k > 0) c += Rational(slopes[k - 1] - slopes[k]) * ratio(breaks[k - 1], 4);
    out.slope.emplace_back(slopes[k]);
    out.intercept.push_back(c);
  }
  return out;
}

Outcome criterion4() {
  std::mt19937 rng(404);
  std::uniform_int_distribution<int> quarter(-12, 12), coef(-3, 3);
  double worst = 0.0;
  int nonfinite = 0;
  // quadratic: sup over x of <xp, x> + mu g(x) - f(x), y eliminated since
  // mu <= 0 makes y = g(x) optimal
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + trial % 2;
    RVec af(n), ag(n), xs(n);
    for (std::size_t i = 0; i < n; ++i) {
      af[i] = coef(rng);
      ag[i] = coef(rng);
      xs[i] = ratio(quarter(rng), 4);
    }
    QuadraticFn f(random_psd(rng, n, 1), af, Rational(coef(rng)));
    QuadraticFn g(random_psd(rng, n, 0), ag, Rational(coef(rng)));
    const Rational mu = -ratio(std::uniform_int_distribution<int>(0, 8)(rng), 4);
    // xp = grad(f - mu g)(xs), so xs is the maximiser
    RVec xp(n);
    for (std::size_t i = 0; i < n; ++i) {
      Rational v = af[i] - mu * ag[i];
      for (std::size_t j = 0; j < n; ++j) v += 2 * (f.q()[i][j] - mu * g.q()[i][j]) * xs[j];
      xp[i] = v;
    }
    Rockafellian F(ConstraintPerturbation{f, {g}});
    ExtReal lib = conjugate_at(F, xp, RVec{mu});
    const DVec xpd = to_dvec(xp);
    const double mud = to_double(mu);
    double best = -1e300;
    DVec x(n);
    std::function<void(std::size_t)> sweep = [&](std::size_t k) {
      if (k == n) {
        double v = mud * g.eval(x) - f.eval(x);
        for (std::size_t i = 0; i < n; ++i) v += xpd[i] * x[i];
        best = std::max(best, v);
        return;
      }
      for (int i = 0; i <= 1000; ++i) {
        x[k] = -5.0 + i / 100.0;
        sweep(k + 1);
      }
    };
    sweep(0);
    if (!lib.is_finite()) {
      ++nonfinite;
      continue;
    }
    worst = std::max(worst, std::abs(lib.value() - best));
  }
  // polyhedral: separable sums of 1-D convex functions with breakpoints and
  // domain bounds on the grid, so the grid contains a maximiser
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 1 + trial % 2;
    std::vector<Pl1> parts;
    for (std::size_t k = 0; k < d; ++k) parts.push_back(random_pl1(rng));
    const bool boxed = trial % 4 < 2;
    std::vector<std::pair<int, int>> box;  // in quarters
    RVec p(d);
    for (std::size_t k = 0; k < d; ++k) {
      int lo = quarter(rng) - 8, hi = quarter(rng) + 8;
      if (lo > hi) std::swap(lo, hi);
      box.emplace_back(lo, hi);
      if (boxed) {
        p[k] = ratio(std::uniform_int_distribution<int>(-24, 24)(rng), 4);
      } else {
        // inside the slope range keeps the conjugate finite
        const Rational& lo_s = parts[k].slope.front();
        const Rational& hi_s = parts[k].slope.back();
        p[k] = lo_s + (hi_s - lo_s) * ratio(std::uniform_int_distribution<int>(0, 4)(rng), 4);
      }
    }
    PolyhedralFn fn;
    fn.dim = d;
    std::function<void(std::size_t, RVec, Rational)> combine = [&](std::size_t k, RVec slope, Rational c) {
      if (k == d) {
        fn.pieces.push_back({slope, c});
        return;
      }
      for (std::size_t j = 0; j < parts[k].slope.size(); ++j) {
        RVec s = slope;
        s.push_back(parts[k].slope[j]);
        combine(k + 1, s, c + parts[k].intercept[j]);
      }
    };
    combine(0, {}, Rational(0));
    if (boxed) {
      std::vector<Halfspace> rows;
      for (std::size_t k = 0; k < d; ++k) {
        RVec e(d, Rational(0));
        e[k] = 1;
        rows.push_back({e, ratio(box[k].second, 4)});
        e[k] = -1;
        rows.push_back({e, -ratio(box[k].first, 4)});
      }
      fn.domain = Polyhedron(d, std::move(rows));
    }
    Rockafellian F(fn, 1, d - 1);
    RVec xp(p.begin(), p.begin() + 1), mu(p.begin() + 1, p.end());
    ExtReal lib = conjugate_at(F, xp, mu);
    double best = -1e300;
    DVec z(d);
    std::function<void(std::size_t)> sweep = [&](std::size_t k) {
      if (k == d) {
        double v = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
          if (boxed && (z[i] < box[i].first / 4.0 - 1e-12 || z[i] > box[i].second / 4.0 + 1e-12)) return;
          v += to_double(p[i]) * z[i];
          double m = -1e300;
          for (std::size_t j = 0; j < parts[i].slope.size(); ++j) {
            m = std::max(m, to_double(parts[i].slope[j]) * z[i] + to_double(parts[i].intercept[j]));
          }
          v -= m;
        }
        best = std::max(best, v);
        return;
      }
      for (int i = 0; i <= 1000; ++i) {
        z[k] = -5.0 + i / 100.0;
        sweep(k + 1);
      }
    };
    sweep(0);
    if (!lib.is_finite()) {
      ++nonfinite;
      continue;
    }
    worst = std::max(worst, std::abs(lib.value() - best));
  }
  return {worst <= 1e-3 && nonfinite == 0,
          fmt("100 functions (50 quadratic, 50 polyhedral), max |conjugate - grid sup| = %.3g (limit 1e-3), %d "
              "non-finite",
              worst, nonfinite)};
}

Outcome criterion5() {
  std::mt19937 rng(505);
  std::uniform_real_distribution<double> u(-3, 3);
  std::uniform_int_distribution<int> c(-3, 3);
  int fy_fail = 0, bi_fail = 0, fy_checked = 0, bi_checked = 0;
  double fy_worst = 1e300, bi_worst = -1e300;
  for (int trial = 0; trial < 100; ++trial) {
    const bool quadratic = trial % 2 == 1;
    const std::size_t nx = 1 + trial % 3 % 2, ny = 1;
    std::optional<Rockafellian> F;
    std::optional<DualProbeSet> probes;
    if (quadratic) {
      auto rq = [&]() {
        std::vector<RVec> q(nx, RVec(nx));
        for (std::size_t i = 0; i < nx; ++i) {
          for (std::size_t j = i; j < nx; ++j) q[i][j] = q[j][i] = c(rng);
        }
        RVec a(nx);
        for (auto& v : a) v = c(rng);
        return QuadraticFn(q, a, Rational(c(rng)));
      };
      ConstraintPerturbation cp{rq(), {rq()}};
      probes = make_dual_probes(cp);
      F.emplace(std::move(cp));
    } else {
      F = random_polyhedral(rng, nx, ny);
    }
    for (int k = 0; k < 1000; ++k) {
      DVec x(nx), y(ny), xp(nx), mu(ny);
      for (auto& v : x) v = u(rng);
      for (auto& v : y) v = u(rng);
      for (auto& v : xp) v = u(rng);
      for (auto& v : mu) v = quadratic ? -std::abs(u(rng)) : u(rng);
      const ExtReal e = evaluate(*F, x, y);
      if (!e.is_finite()) continue;
      const ExtReal cj = conjugate_at(*F, xp, mu);
      double pairing = 0.0;
      for (std::size_t i = 0; i < nx; ++i) pairing += xp[i] * x[i];
      for (std::size_t i = 0; i < ny; ++i) pairing += mu[i] * y[i];
      if (cj.is_finite()) {
        ++fy_checked;
        const double gap = e.value() + cj.value() - pairing;
        fy_worst = std::min(fy_worst, gap);
        fy_fail += gap < -1e-8 * std::max(1.0, std::abs(e.value()) + std::abs(cj.value()));
      } else {
        fy_fail += cj.is_neg_inf();
      }
      const BiconjugateValue b = biconjugate_at(*F, x, y, probes ? &*probes : nullptr);
      if (b.value.is_pos_inf()) {
        ++bi_fail;
        continue;
      }
      if (b.value.is_finite()) {
        ++bi_checked;
        const double excess = b.value.value() - e.value();
        bi_worst = std::max(bi_worst, excess);
        bi_fail += excess > 1e-8 * std::max(1.0, std::abs(e.value()));
      }
    }
  }
  return {fy_fail == 0 && bi_fail == 0,
          fmt("Fenchel-Young: %d pairs, %d failures, min slack %.3g; F** <= F: %d points, %d failures, max excess "
              "%.3g (tolerance 1e-8)",
              fy_checked, fy_fail, fy_checked ? fy_worst : 0.0, bi_checked, bi_fail, bi_checked ? bi_worst : 0.0)};
}

Outcome criterion6() {
  std::mt19937 rng(606);
  std::uniform_int_distribution<int> c(-3, 3);
  int valid = 0, violated = 0;
  for (int trial = 0; trial < 50; ++trial) {
    RobustInstance inst;
    if (trial % 2 == 0) {
      const std::size_t nx = 1 + trial % 4 / 2;
      const int nu = 1 + trial % 3;
      std::vector<Rockafellian> fs;
      for (int u = 0; u < nu; ++u) fs.push_back(random_polyhedral(rng, nx, 1));
      inst = family(std::move(fs));
    } else {
      QuadraticFn f({{Rational(1 + std::abs(c(rng)))}}, {Rational(c(rng))}, Rational(c(rng) + 2));
      QuadraticFn g({{Rational(1)}}, {Rational(c(rng))}, Rational(-1 - std::abs(c(rng))));
      inst = family({Rockafellian(ConstraintPerturbation{f, {g}})});
    }
    RhsFunction h;
    const int slopes = 1 + trial % 3;
    for (int k = 0; k < slopes; ++k) {
      RVec a;
      for (std::size_t i = 0; i < inst.dim_x; ++i) a.push_back(ratio(c(rng), 2));
      h.pieces.push_back({std::move(a), Rational(c(rng) - 3)});
    }
    BhResult b = certify_B_h(inst, h);
    if (!b.valid_on_probes) continue;
    ++valid;
    AResult a = check_A_h(inst, h);
    if (a.verdict == Verdict::Violated) {
      const bool deep = a.witness_value == "-inf" || parse_rational(a.witness_value) < Rational(-1, 1000000);
      violated += deep;
    }
  }
  return {violated == 0 && valid > 0,
          fmt("%d/50 instances certified on every probe, %d of them with (A_h) violated beyond 1e-6", valid, violated)};
}

Outcome criterion7() {
  const io::Json j = io::read_file(std::string(SPROC_DATA_DIR) + "/regression_nonconvex.json");
  RobustInstance inst = io::instance_from(j);
  const auto& cp = inst.scenarios[0].perturbation();
  double best = -1e300;
  for (int i = 0; i <= 1000; ++i) {
    for (int k = 0; k <= 1000; ++k) best = std::max(best, psi(cp.f, cp.g, DVec{i / 100.0, k / 100.0}));
  }
  AResult a = check_A(inst);
  BResult b = certify_B(inst);
  ValidationReport v = validate_equivalence(inst, Theorem::T2_1);
  const Side* geo = nullptr;
  for (const auto& s : v.sides) {
    if (s.name.find("gap") != std::string::npos) geo = &s;
  }
  const bool ok = best < 0 && a.verdict == Verdict::Holds && !b.certificate && v.agreement == Agreement::Agree &&
                  geo != nullptr && geo->value == Tri::False;
  return {ok, fmt("grid max psi over [0,10]^2 = %.4f, check_A = %s, certify_B = %s, T2_1 = %s, geometric condition "
                  "= %s",
                  best, to_string(a.verdict), b.certificate ? "certificate" : "NONE", to_string(v.agreement),
                  geo ? to_string(geo->value) : "missing")};
}

Outcome criterion8() {
  StarField field;
  field.stars = {{"s", {Rational(0), Rational(0)}, Rational(1), Rational(2)},
                 {"t", {Rational(2), Rational(0)}, Rational(1), Rational(4)}};
  InfluenceSystem sys = worst_case_reduce(field, "s");
  const QuadraticFn want({{Rational(3), Rational(0)}, {Rational(0), Rational(3)}}, {Rational(-16), Rational(0)},
                         Rational(16));
  const bool form_ok = sys.constraints.size() == 1 && sys.constraints[0].q == want;

  // every endpoint combination of (u_s, u_t) evaluated from the definition
  auto enumerate = [&](const RVec& x) {
    const Star& s = field.stars[0];
    const Star& t = field.stars[1];
    const Rational ds = x[0] * x[0] + x[1] * x[1];
    const Rational dt = (x[0] - t.pos[0]) * (x[0] - t.pos[0]) + (x[1] - t.pos[1]) * (x[1] - t.pos[1]);
    for (const Rational& us : {s.lo, s.hi}) {
      for (const Rational& ut : {t.lo, t.hi}) {
        if (ut * dt - us * ds > 0) return false;
      }
    }
    return true;
  };
  RasterBox box{{Rational(-5), Rational(-5)}, {Rational(5), Rational(5)}, {100, 100}};
  Raster lib = region_raster(sys, box);
  Raster oracle{{100, 100}, {}};
  for (int j = 0; j < 100; ++j) {
    for (int i = 0; i < 100; ++i) {
      oracle.cells.push_back(enumerate({Rational(-5) + ratio(10 * i, 99), Rational(-5) + ratio(10 * j, 99)}) ? 1 : 0);
    }
  }
  const bool raster_ok = raster_csv(lib) == raster_csv(oracle) && raster_pgm(lib) == raster_pgm(oracle);

  // certain unit masses against the Voronoi cell |x - s| <= |x - t|
  StarField unit;
  unit.stars = {{"s", {Rational(0), Rational(0)}, Rational(1), Rational(1)},
                {"a", {Rational(2), Rational(0)}, Rational(1), Rational(1)},
                {"b", {Rational(-1), Rational(3)}, Rational(1), Rational(1)},
                {"c", {Rational(-2), Rational(-2)}, Rational(1), Rational(1)}};
  InfluenceSystem usys = worst_case_reduce(unit, "s");
  std::mt19937 rng(808);
  std::uniform_int_distribution<int> coord(-500, 500);
  int cell_match = 0, mirror_match = 0;
  for (int k = 0; k < 1000; ++k) {
    RVec x{ratio(coord(rng), 100), ratio(coord(rng), 100)};
    bool in_cell = true, in_mirror = true;
    const Rational ds = x[0] * x[0] + x[1] * x[1];
    for (std::size_t i = 1; i < unit.stars.size(); ++i) {
      const auto& t = unit.stars[i].pos;
      const Rational dt = (x[0] - t[0]) * (x[0] - t[0]) + (x[1] - t[1]) * (x[1] - t[1]);
      in_cell = in_cell && ds <= dt;
      in_mirror = in_mirror && dt <= ds;
    }
    const bool m = robust_member(x, usys);
    cell_match += m == in_cell;
    mirror_match += m == in_mirror;
  }
  const bool cell_ok = cell_match == 1000;
  std::string detail = fmt("worked form %s; 100x100 raster %s the enumeration oracle; Voronoi cell of s matched on "
                           "%d/1000 points",
                           form_ok ? "matches" : "differs", raster_ok ? "byte-identical to" : "differs from",
                           cell_match);
  if (!cell_ok) {
    detail += fmt(" (the reduced form q_t = u_t|x-t|^2 - u_s|x-s|^2 gives the mirrored cell |x-t| <= |x-s|, "
                  "matched on %d/1000)",
                  mirror_match);
  }
  return {form_ok && raster_ok && cell_ok, detail};
}

Outcome criterion9() {
  std::mt19937 rng(909);
  std::uniform_real_distribution<double> u(-10, 10);
  double recon = 0.0, ortho = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + trial % 8;
    SymMatrix s(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) s.set(i, j, u(rng));
    }
    EigResult e = eigh_sym(s);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        double a = 0.0, o = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          a += e.vectors[k][i] * e.values[k] * e.vectors[k][j];
          o += e.vectors[i][k] * e.vectors[j][k];
        }
        recon = std::max(recon, std::abs(a - s(i, j)));
        ortho = std::max(ortho, std::abs(o - (i == j ? 1.0 : 0.0)));
      }
    }
  }

  // LP certificates substituted by hand
  std::uniform_int_distribution<int> c(-5, 5);
  int lp_bad = 0, counts[3] = {0, 0, 0};
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 4, m = 1 + trial % 6;
    std::vector<Halfspace> rows;
    for (std::size_t i = 0; i < m; ++i) {
      RVec a(n);
      for (auto& v : a) v = c(rng);
      rows.push_back({std::move(a), Rational(c(rng))});
    }
    RVec obj(n);
    for (auto& v : obj) v = c(rng);
    const Sense sense = trial % 2 ? Sense::Maximize : Sense::Minimize;
    const Polyhedron p(n, rows);
    const LpOutcome out = lp_solve(obj, p, sense);
    const int s = sense == Sense::Maximize ? 1 : -1;
    auto feasible = [&](const RVec& x) {
      for (const auto& r : rows) {
        if (dot(r.normal, x) > r.offset) return false;
      }
      return true;
    };
    bool ok = true;
    if (out.status == LpStatus::Optimal) {
      ++counts[0];
      ok = feasible(out.point) && dot(obj, out.point) == out.value && out.dual.size() == m;
      Rational by = 0;
      for (std::size_t j = 0; ok && j < n; ++j) {
        Rational aty = 0;
        for (std::size_t i = 0; i < m; ++i) aty += rows[i].normal[j] * out.dual[i];
        ok = aty == s * obj[j];
      }
      for (std::size_t i = 0; ok && i < m; ++i) {
        ok = sgn(out.dual[i]) >= 0;
        by += rows[i].offset * out.dual[i];
      }
      ok = ok && by == s * out.value;
    } else if (out.status == LpStatus::Infeasible) {
      ++counts[1];
      ok = out.farkas.size() == m;
      Rational by = 0;
      for (std::size_t j = 0; ok && j < n; ++j) {
        Rational aty = 0;
        for (std::size_t i = 0; i < m; ++i) aty += rows[i].normal[j] * out.farkas[i];
        ok = sgn(aty) == 0;
      }
      for (std::size_t i = 0; ok && i < m; ++i) {
        ok = sgn(out.farkas[i]) >= 0;
        by += rows[i].offset * out.farkas[i];
      }
      ok = ok && sgn(by) < 0;
    } else {
      ++counts[2];
      ok = feasible(out.point) && s * sgn(dot(obj, out.ray)) > 0;
      for (const auto& r : rows) ok = ok && sgn(dot(r.normal, out.ray)) <= 0;
    }
    lp_bad += !ok;
  }
  return {recon <= 1e-10 && ortho <= 1e-10 && lp_bad == 0,
          fmt("eigen: reconstruction %.2g, orthogonality %.2g (limit 1e-10); LP: %d optimal, %d infeasible, %d "
              "unbounded, %d certificates failing substitution",
              recon, ortho, counts[0], counts[1], counts[2], lp_bad)};
}

}  // namespace
}  // namespace sproc

int main(int argc, char** argv) {
  using sproc::Outcome;
  const std::vector<std::function<Outcome()>> all = {sproc::criterion1, sproc::criterion2, sproc::criterion3,
                                                      sproc::criterion4, sproc::criterion5, sproc::criterion6,
                                                      sproc::criterion7, sproc::criterion8, sproc::criterion9};
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const int k = std::atoi(argv[i]);
    if (k < 1 || k > static_cast<int>(all.size())) {
      std::fprintf(stderr, "unknown criterion %s\n", argv[i]);
      return 2;
    }
    selected.push_back(k);
  }
  if (selected.empty()) {
    for (int k = 1; k <= static_cast<int>(all.size()); ++k) selected.push_back(k);
  }
  bool ok = true;
  for (int k : selected) {
    Outcome o;
    try {
      o = all[k - 1]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %d: %s\n", o.pass ? "PASS" : "FAIL", k, o.detail.c_str());
    std::fflush(stdout);
    ok = ok && o.pass;
  }
  return ok ? 0 : 1;
}
