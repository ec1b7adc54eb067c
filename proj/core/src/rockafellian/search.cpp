#include "sproc/rockafellian/search.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>

#include "sproc/error.hpp"

namespace sproc {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds:
      return "holds";
    case Verdict::Violated:
      return "violated";
    default:
      return "unknown";
  }
}

namespace {

SymMatrix combine(const SymMatrix& base, const std::vector<SymMatrix>& parts, const DVec& w) {
  const std::size_t n = base.n();
  SymMatrix out = base;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (w[k] == 0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) out.set(i, j, out(i, j) + w[k] * parts[k](i, j));
    }
  }
  return out;
}

struct PsiOracle {
  SymMatrix mf;
  std::vector<SymMatrix> mg;

  PsiOracle(const QuadraticFn& f, const std::vector<QuadraticFn>& g) : mf(f.homogenized()) {
    for (const auto& gi : g) {
      if (gi.dim() != f.dim()) throw InputError("multiplier search: constraint dimension mismatch");
      mg.push_back(gi.homogenized());
    }
  }

  // Returns psi and writes a supergradient.
  double eval(const DVec& l, DVec& sg) const {
    EigResult e = eigh_sym(combine(mf, mg, l));
    const DVec& v = e.vectors.front();
    sg.resize(l.size());
    for (std::size_t k = 0; k < l.size(); ++k) sg[k] = mg[k].quad(v);
    return e.values.front();
  }
};

}  // namespace

double psi(const QuadraticFn& f, const std::vector<QuadraticFn>& g, const DVec& lambda) {
  if (lambda.size() != g.size()) throw InputError("psi: multiplier length mismatch");
  DVec sg;
  return PsiOracle(f, g).eval(lambda, sg);
}

MultiplierResult multiplier_search(const QuadraticFn& f, const std::vector<QuadraticFn>& g, const AscentConfig& cfg) {
  const std::size_t m = g.size();
  PsiOracle oracle(f, g);
  MultiplierResult best;
  best.lambda.assign(m, 0.0);
  DVec sg;
  best.psi = oracle.eval(best.lambda, sg);
  best.iterations = 1;
  auto done = [&] { return best.psi >= 0.0; };

  if (m > 0 && !done()) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> start(0.0, cfg.restart_box);
    for (int r = 0; r < cfg.restarts && !done(); ++r) {
      DVec l(m, 0.0);
      if (r > 0) {
        for (auto& v : l) v = start(rng);
      }
      for (int k = 1; k <= cfg.iterations && !done(); ++k) {
        const double val = oracle.eval(l, sg);
        ++best.iterations;
        if (val > best.psi) {
          best.psi = val;
          best.lambda = l;
        }
        const double step = 1.0 / k;
        for (std::size_t i = 0; i < m; ++i) l[i] = std::max(0.0, l[i] + step * sg[i]);
      }
    }
    // Polyak steps with target value 0.
    DVec l = best.lambda;
    for (int k = 0; k < cfg.polish && !done(); ++k) {
      const double val = oracle.eval(l, sg);
      ++best.iterations;
      if (val > best.psi) {
        best.psi = val;
        best.lambda = l;
      }
      if (val >= 0.0) break;
      double nrm2 = 0.0;
      for (double v : sg) nrm2 += v * v;
      if (nrm2 == 0.0) break;
      const double step = -val / nrm2;
      for (std::size_t i = 0; i < m; ++i) l[i] = std::max(0.0, l[i] + step * sg[i]);
    }
  }
  best.success = best.psi >= -cfg.success_tol;
  return best;
}

namespace {

struct Problem {
  const PrimalProblem& p;
  std::size_t n;

  double obj(const DVec& x) const {
    double v = -std::numeric_limits<double>::infinity();
    for (const auto& f : p.objectives) v = std::max(v, f.eval(x));
    return v;
  }
  double viol(const DVec& x) const {
    double v = 0.0;
    for (const auto& g : p.constraints) v = std::max(v, g.eval(x));
    return v;
  }
  bool exact(const DVec& x, Rational& value) const {
    RVec xr = to_rvec(x);
    for (const auto& g : p.constraints) {
      if (sgn(g.eval(xr)) > 0) return false;
    }
    value = p.objectives.front().eval(xr);
    for (std::size_t u = 1; u < p.objectives.size(); ++u) {
      Rational v = p.objectives[u].eval(xr);
      if (v > value) value = v;
    }
    return true;
  }
};

DVec nelder_mead(const std::function<double(const DVec&)>& fn, DVec x0, double scale, int max_iter) {
  const std::size_t n = x0.size();
  std::vector<DVec> s(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i) s[i + 1][i] += scale;
  DVec fv(n + 1);
  for (std::size_t i = 0; i <= n; ++i) fv[i] = fn(s[i]);
  std::vector<std::size_t> idx(n + 1);
  for (int it = 0; it < max_iter; ++it) {
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    const std::size_t lo = idx.front(), hi = idx.back(), nh = idx[n - 1];
    if (std::abs(fv[hi] - fv[lo]) <= 1e-13 * (1 + std::abs(fv[lo]))) {
      double spread = 0.0;
      for (std::size_t i = 0; i < n; ++i) spread = std::max(spread, std::abs(s[hi][i] - s[lo][i]));
      if (spread < 1e-11) break;
    }
    DVec c(n, 0.0);
    for (std::size_t k = 0; k <= n; ++k) {
      if (k == hi) continue;
      for (std::size_t i = 0; i < n; ++i) c[i] += s[k][i] / n;
    }
    auto along = [&](double t) {
      DVec p(n);
      for (std::size_t i = 0; i < n; ++i) p[i] = c[i] + t * (s[hi][i] - c[i]);
      return p;
    };
    DVec xr = along(-1.0);
    const double fr = fn(xr);
    if (fr < fv[lo]) {
      DVec xe = along(-2.0);
      const double fe = fn(xe);
      if (fe < fr) {
        s[hi] = xe;
        fv[hi] = fe;
      } else {
        s[hi] = xr;
        fv[hi] = fr;
      }
    } else if (fr < fv[nh]) {
      s[hi] = xr;
      fv[hi] = fr;
    } else {
      DVec xc = fr < fv[hi] ? along(-0.5) : along(0.5);
      const double fc = fn(xc);
      if (fc < std::min(fr, fv[hi])) {
        s[hi] = xc;
        fv[hi] = fc;
      } else {
        for (std::size_t k = 0; k <= n; ++k) {
          if (k == lo) continue;
          for (std::size_t i = 0; i < n; ++i) s[k][i] = s[lo][i] + 0.5 * (s[k][i] - s[lo][i]);
          fv[k] = fn(s[k]);
        }
      }
    }
  }
  std::size_t best = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    if (fv[k] < fv[best]) best = k;
  }
  return s[best];
}

// Newton-type projection steps onto the most violated constraint.
DVec restore(const Problem& pr, DVec x) {
  for (int it = 0; it < 60; ++it) {
    double worst = 0.0;
    const QuadraticFn* g = nullptr;
    for (const auto& gi : pr.p.constraints) {
      const double v = gi.eval(x);
      if (v > worst) {
        worst = v;
        g = &gi;
      }
    }
    if (g == nullptr) {
      Rational val;
      if (pr.exact(x, val)) return x;
      // double says feasible, exact says not: nudge inward along the worst gradient
      for (const auto& gi : pr.p.constraints) {
        if (sgn(gi.eval(to_rvec(x))) > 0) g = &gi;
      }
      if (g == nullptr) return x;
      worst = 0.0;
    }
    DVec grad = g->grad(x);
    double n2 = 0.0;
    for (double v : grad) n2 += v * v;
    if (n2 == 0.0) return x;
    const double step = (worst + 1e-13 * (1 + norm2(x))) / n2;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= step * grad[i];
  }
  return x;
}

// Solves the small dense system a x = b by partial pivoting; false if singular.
bool solve_dense(std::vector<DVec> a, DVec b, DVec& x) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    }
    if (std::abs(a[p][c]) < 1e-14) return false;
    std::swap(a[p], a[c]);
    std::swap(b[p], b[c]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  x.assign(n, 0.0);
  for (std::size_t c = n; c-- > 0;) {
    double s = b[c];
    for (std::size_t k = c + 1; k < n; ++k) s -= a[c][k] * x[k];
    x[c] = s / a[c][c];
  }
  return true;
}

// min ||A w - b|| over w >= 0 by enumerating supports (A has few columns).
DVec nnls_small(const std::vector<DVec>& cols, const DVec& b) {
  const std::size_t k = cols.size();
  DVec best(k, 0.0);
  double best_res = std::inner_product(b.begin(), b.end(), b.begin(), 0.0);
  for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
    std::vector<std::size_t> sup;
    for (std::size_t j = 0; j < k; ++j) {
      if (mask & (1u << j)) sup.push_back(j);
    }
    std::vector<DVec> ata(sup.size(), DVec(sup.size()));
    DVec atb(sup.size());
    for (std::size_t i = 0; i < sup.size(); ++i) {
      for (std::size_t j = 0; j < sup.size(); ++j) {
        ata[i][j] = std::inner_product(cols[sup[i]].begin(), cols[sup[i]].end(), cols[sup[j]].begin(), 0.0);
      }
      atb[i] = std::inner_product(cols[sup[i]].begin(), cols[sup[i]].end(), b.begin(), 0.0);
    }
    DVec w;
    if (!solve_dense(ata, atb, w)) continue;
    if (std::any_of(w.begin(), w.end(), [](double v) { return v < 0; })) continue;
    DVec r = b;
    for (std::size_t i = 0; i < sup.size(); ++i) {
      for (std::size_t t = 0; t < r.size(); ++t) r[t] -= w[i] * cols[sup[i]][t];
    }
    const double res = std::inner_product(r.begin(), r.end(), r.begin(), 0.0);
    if (res < best_res) {
      best_res = res;
      best.assign(k, 0.0);
      for (std::size_t i = 0; i < sup.size(); ++i) best[sup[i]] = w[i];
    }
  }
  return best;
}

DVec project_simplex(DVec v) {
  DVec s = v;
  std::sort(s.begin(), s.end(), std::greater<>());
  double cum = 0.0, theta = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    cum += s[i];
    const double t = (cum - 1.0) / static_cast<double>(i + 1);
    if (s[i] - t > 0) theta = t;
  }
  for (auto& x : v) x = std::max(0.0, x - theta);
  return v;
}

struct DualBound {
  const PrimalProblem& p;
  std::size_t n;

  QuadInf at(const DVec& alpha, const DVec& mu) const {
    SymMatrix q(n);
    DVec a(n, 0.0);
    double c = 0.0;
    auto add = [&](const QuadraticFn& f, double w) {
      if (w == 0) return;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) q.set(i, j, q(i, j) + w * f.qd()(i, j));
        a[i] += w * f.ad()[i];
      }
      c += w * f.cd();
    };
    for (std::size_t u = 0; u < alpha.size(); ++u) add(p.objectives[u], alpha[u]);
    for (std::size_t i = 0; i < mu.size(); ++i) add(p.constraints[i], mu[i]);
    return quad_inf_detail(q, a, c);
  }
};

}  // namespace

PrimalResult primal_search(const PrimalProblem& prob, const PrimalConfig& cfg) {
  if (prob.objectives.empty()) throw InputError("primal search: no objective");
  const std::size_t n = prob.objectives.front().dim();
  for (const auto& f : prob.objectives) {
    if (f.dim() != n) throw InputError("primal search: objective dimension mismatch");
  }
  for (const auto& g : prob.constraints) {
    if (g.dim() != n) throw InputError("primal search: constraint dimension mismatch");
  }
  Problem pr{prob, n};
  PrimalResult out;
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> box(-cfg.box, cfg.box);

  std::optional<DVec> best_x;
  Rational best_val;
  auto offer = [&](const DVec& x) {
    Rational v;
    if (!pr.exact(x, v)) return;
    if (!best_x || v < best_val) {
      best_x = x;
      best_val = v;
    }
  };

  // Grid scan. Only the double-feasible minimiser is checked exactly.
  {
    std::optional<DVec> cand;
    double cand_val = std::numeric_limits<double>::infinity();
    auto visit = [&](const DVec& x) {
      if (pr.viol(x) > 0) return;
      const double v = pr.obj(x);
      if (v < cand_val) {
        cand_val = v;
        cand = x;
      }
    };
    std::size_t per_axis = n == 1 ? 2001 : n == 2 ? 201 : n == 3 ? 41 : 0;
    if (per_axis > 0) {
      std::vector<std::size_t> idx(n, 0);
      DVec x(n);
      while (true) {
        for (std::size_t i = 0; i < n; ++i) {
          x[i] = -cfg.box + 2 * cfg.box * static_cast<double>(idx[i]) / static_cast<double>(per_axis - 1);
        }
        visit(x);
        std::size_t i = 0;
        while (i < n && ++idx[i] == per_axis) idx[i++] = 0;
        if (i == n) break;
      }
    } else {
      DVec x(n);
      for (int k = 0; k < 20000; ++k) {
        for (auto& v : x) v = box(rng);
        visit(x);
      }
    }
    if (cand) offer(*cand);
  }

  // Multistart local search on an exact penalty.
  const double rho = 1e4;
  auto penalty = [&](const DVec& x) {
    const double v = pr.obj(x) + rho * pr.viol(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::max();
  };
  for (int s = 0; s < cfg.multistarts; ++s) {
    DVec x0(n);
    if (s == 0 && best_x) {
      x0 = *best_x;
    } else {
      for (auto& v : x0) v = box(rng);
    }
    DVec x = nelder_mead(penalty, x0, 0.5, 300 * static_cast<int>(n) + 300);
    offer(restore(pr, x));
  }

  if (best_x) {
    out.best_value = to_double(best_val);
    if (best_val < Rational(to_rational(-cfg.violation_tol))) {
      out.verdict = Verdict::Violated;
      out.witness = best_x;
      out.witness_value = best_val;
      out.note = "feasible point with negative value";
      return out;
    }
  }

  // Weak duality: inf_x sum a_u f_u + sum m_i g_i <= optimum for a in the
  // simplex, m >= 0.
  const std::size_t nu = prob.objectives.size();
  const std::size_t nm = prob.constraints.size();
  DVec alpha(nu, 1.0 / static_cast<double>(nu));
  DVec mu(nm, 0.0);
  if (best_x && nu + nm <= 12) {
    const DVec& x = *best_x;
    const double top = pr.obj(x);
    std::vector<DVec> cols;
    std::vector<int> which;  // -1 - u for objectives, i for constraints
    const double w = 10.0;
    for (std::size_t u = 0; u < nu; ++u) {
      if (prob.objectives[u].eval(x) < top - 1e-6 * (1 + std::abs(top))) continue;
      DVec c = prob.objectives[u].grad(x);
      c.push_back(w);
      cols.push_back(std::move(c));
      which.push_back(-1 - static_cast<int>(u));
    }
    for (std::size_t i = 0; i < nm; ++i) {
      if (prob.constraints[i].eval(x) < -1e-6) continue;
      DVec c = prob.constraints[i].grad(x);
      c.push_back(0.0);
      cols.push_back(std::move(c));
      which.push_back(static_cast<int>(i));
    }
    DVec rhs(n, 0.0);
    rhs.push_back(w);
    DVec sol = nnls_small(cols, rhs);
    DVec a0(nu, 0.0);
    double asum = 0.0;
    for (std::size_t k = 0; k < sol.size(); ++k) {
      if (which[k] < 0) {
        a0[static_cast<std::size_t>(-1 - which[k])] = sol[k];
        asum += sol[k];
      } else {
        mu[static_cast<std::size_t>(which[k])] = sol[k];
      }
    }
    if (asum > 0) {
      for (std::size_t u = 0; u < nu; ++u) alpha[u] = a0[u] / asum;
      for (auto& v : mu) v /= asum;
    }
  }
  DualBound db{prob, n};
  double best_bound = -std::numeric_limits<double>::infinity();
  DVec a = alpha, m = mu;
  for (int k = 1; k <= cfg.dual_iterations; ++k) {
    QuadInf qi = db.at(a, m);
    if (!qi.value.is_finite()) {
      if (k == 1 && nm > 0) {
        // Start from the uniform point if the estimate is useless.
        a.assign(nu, 1.0 / static_cast<double>(nu));
        for (auto& v : m) v = 1.0;
        continue;
      }
      break;
    }
    best_bound = std::max(best_bound, qi.value.value());
    if (best_bound >= 0) break;
    // Polyak step towards D = 0 along the projected supergradient.
    const DVec& x = *qi.argmin;
    DVec ga(nu), gm(nm);
    double mean = 0.0;
    for (std::size_t u = 0; u < nu; ++u) mean += (ga[u] = prob.objectives[u].eval(x)) / static_cast<double>(nu);
    double nrm2 = 0.0;
    for (std::size_t u = 0; u < nu; ++u) nrm2 += (ga[u] - mean) * (ga[u] - mean);
    for (std::size_t i = 0; i < nm; ++i) {
      gm[i] = prob.constraints[i].eval(x);
      if (m[i] > 0 || gm[i] > 0) nrm2 += gm[i] * gm[i];
    }
    if (nrm2 == 0.0) break;
    const double step = -qi.value.value() / nrm2;
    for (std::size_t u = 0; u < nu; ++u) a[u] += step * ga[u];
    a = project_simplex(a);
    for (std::size_t i = 0; i < nm; ++i) m[i] = std::max(0.0, m[i] + step * gm[i]);
  }
  if (std::isfinite(best_bound)) out.dual_bound = best_bound;

  if (std::isfinite(best_bound) && best_bound >= -cfg.certify_tol) {
    out.verdict = Verdict::Holds;
    out.certified = true;
    out.note = "Lagrangian dual bound is nonnegative";
    return out;
  }
  const bool convex = std::all_of(prob.objectives.begin(), prob.objectives.end(),
                                  [](const QuadraticFn& f) { return f.is_convex(); }) &&
                      std::all_of(prob.constraints.begin(), prob.constraints.end(),
                                  [](const QuadraticFn& g) { return g.is_convex(); });
  if (convex) {
    out.verdict = Verdict::Unknown;
    out.note = "convex instance: no violation found but the dual bound is negative";
    return out;
  }
  out.verdict = Verdict::Holds;
  out.note = "no violation found (not certified)";
  return out;
}

}  // namespace sproc
