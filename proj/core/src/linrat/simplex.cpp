#include "sproc/linrat/simplex.hpp"

#include <cstddef>

#include "sproc/error.hpp"

namespace sproc {

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
  }
  return "?";
}

namespace {

// Dense tableau over [original columns | artificial columns | rhs].
class Tableau {
 public:
  Tableau(const StandardLp& lp) : m_(lp.rows.size()), n_(lp.cost.size()), sign_(m_, 1) {
    if (lp.rhs.size() != m_) throw InputError("standard LP: rhs length does not match row count");
    const std::size_t width = n_ + m_ + 1;
    t_.assign(m_, RVec(width, Rational(0)));
    for (std::size_t i = 0; i < m_; ++i) {
      if (lp.rows[i].size() != n_) throw InputError("standard LP: row length does not match cost length");
      sign_[i] = sgn(lp.rhs[i]) < 0 ? -1 : 1;
      for (std::size_t j = 0; j < n_; ++j) {
        if (sgn(lp.rows[i][j]) != 0) t_[i][j] = sign_[i] < 0 ? Rational(-lp.rows[i][j]) : lp.rows[i][j];
      }
      t_[i][n_ + i] = 1;
      t_[i][width - 1] = sign_[i] < 0 ? Rational(-lp.rhs[i]) : lp.rhs[i];
    }
    basis_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) basis_[i] = n_ + i;
    obj_.assign(width, Rational(0));
  }

  std::size_t rows() const { return m_; }
  std::size_t originals() const { return n_; }
  std::size_t rhs_col() const { return n_ + m_; }

  // Phase-one objective: minimise the sum of artificials.
  void load_phase_one() {
    for (auto& v : obj_) v = 0;
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) obj_[j] -= t_[i][j];
      obj_[rhs_col()] -= t_[i][rhs_col()];
    }
    for (std::size_t i = 0; i < m_; ++i) obj_[n_ + i] = 0;
  }

  void load_cost(const RVec& cost) {
    for (std::size_t j = 0; j <= rhs_col(); ++j) obj_[j] = j < n_ ? cost[j] : Rational(0);
    for (std::size_t i = 0; i < m_; ++i) {
      std::size_t b = basis_[i];
      if (b >= n_ || sgn(cost[b]) == 0) continue;
      const Rational cb = cost[b];
      for (std::size_t j = 0; j <= rhs_col(); ++j) {
        if (sgn(t_[i][j]) != 0) obj_[j] -= cb * t_[i][j];
      }
    }
  }

  // Runs Bland-rule pivots until optimal or unbounded. Returns the unbounded
  // entering column, or npos when optimal.
  std::size_t iterate(int& pivots) {
    for (;;) {
      std::size_t enter = npos;
      for (std::size_t j = 0; j < n_; ++j) {
        if (sgn(obj_[j]) < 0) {
          enter = j;
          break;
        }
      }
      if (enter == npos) return npos;
      std::size_t leave = npos;
      Rational best;
      for (std::size_t i = 0; i < m_; ++i) {
        if (sgn(t_[i][enter]) <= 0) continue;
        Rational ratio = t_[i][rhs_col()] / t_[i][enter];
        if (leave == npos || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == npos) return enter;
      pivot(leave, enter);
      ++pivots;
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    RVec& pr = t_[r];
    const Rational inv = 1 / pr[c];
    for (auto& v : pr) {
      if (sgn(v) != 0) v *= inv;
    }
    std::vector<std::size_t> nz;
    for (std::size_t j = 0; j < pr.size(); ++j) {
      if (sgn(pr[j]) != 0) nz.push_back(j);
    }
    auto eliminate = [&](RVec& row) {
      if (sgn(row[c]) == 0) return;
      const Rational f = row[c];
      for (std::size_t j : nz) row[j] -= f * pr[j];
    };
    for (std::size_t i = 0; i < m_; ++i) {
      if (i != r) eliminate(t_[i]);
    }
    eliminate(obj_);
    basis_[r] = c;
  }

  // After a zero-valued phase one, pivot artificials out where possible.
  void drive_out_artificials(int& pivots) {
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      for (std::size_t j = 0; j < n_; ++j) {
        if (sgn(t_[i][j]) != 0) {
          pivot(i, j);
          ++pivots;
          break;
        }
      }
    }
  }

  Rational value() const { return -obj_[rhs_col()]; }

  // Simplex multipliers of the original (unnegated) rows for objective costs
  // that are `art_cost` on every artificial column.
  RVec multipliers(const Rational& art_cost) const {
    RVec y(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      Rational pi = art_cost - obj_[n_ + i];
      y[i] = sign_[i] < 0 ? Rational(-pi) : pi;
    }
    return y;
  }

  RVec primal() const {
    RVec z(n_, Rational(0));
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) z[basis_[i]] = t_[i][rhs_col()];
    }
    return z;
  }

  RVec ray(std::size_t enter) const {
    RVec d(n_, Rational(0));
    d[enter] = 1;
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) d[basis_[i]] = -t_[i][enter];
    }
    return d;
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::size_t m_, n_;
  std::vector<int> sign_;
  std::vector<RVec> t_;
  RVec obj_;
  std::vector<std::size_t> basis_;
};

}  // namespace

StandardOutcome solve_standard(const StandardLp& lp) {
  Tableau tab(lp);
  StandardOutcome out;

  tab.load_phase_one();
  tab.iterate(out.pivots);  // phase one is bounded below by zero
  if (sgn(tab.value()) > 0) {
    out.status = LpStatus::Infeasible;
    RVec pi = tab.multipliers(Rational(1));
    out.farkas.resize(pi.size());
    for (std::size_t i = 0; i < pi.size(); ++i) out.farkas[i] = -pi[i];
    return out;
  }
  tab.drive_out_artificials(out.pivots);

  tab.load_cost(lp.cost);
  std::size_t enter = tab.iterate(out.pivots);
  out.z = tab.primal();
  if (enter != Tableau::npos) {
    out.status = LpStatus::Unbounded;
    out.ray = tab.ray(enter);
    return out;
  }
  out.status = LpStatus::Optimal;
  out.value = tab.value();
  out.dual = tab.multipliers(Rational(0));
  return out;
}

}  // namespace sproc
