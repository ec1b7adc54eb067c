#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "sproc/extreal.hpp"
#include "sproc/rockafellian/quadratic.hpp"

namespace sproc {

/// Projected supergradient ascent on psi(l) = lambda_min(hom(f + sum l_i g_i)).
struct AscentConfig {
  int iterations = 500;
  int restarts = 5;
  /// Polyak steps towards psi = 0 run from the best ascent point.
  int polish = 200;
  double success_tol = 1e-8;
  double restart_box = 10.0;
  std::uint64_t seed = 1;
};

struct MultiplierResult {
  DVec lambda;
  double psi = -std::numeric_limits<double>::infinity();
  bool success = false;
  int iterations = 0;
};

double psi(const QuadraticFn& f, const std::vector<QuadraticFn>& g, const DVec& lambda);

MultiplierResult multiplier_search(const QuadraticFn& f, const std::vector<QuadraticFn>& g, const AscentConfig& cfg);

enum class Verdict { Holds, Violated, Unknown };
const char* to_string(Verdict v);

/// Heuristic minimisation of max_u f_u(x) subject to every g_i(x) <= 0,
/// deciding whether the minimum is >= 0.
struct PrimalConfig {
  double box = 5.0;
  int multistarts = 20;
  double violation_tol = 1e-9;
  /// Dual bound below this means "cannot certify".
  double certify_tol = 1e-6;
  int dual_iterations = 300;
  std::uint64_t seed = 1;
};

struct PrimalProblem {
  std::vector<QuadraticFn> objectives;  // the f_u
  std::vector<QuadraticFn> constraints;  // every g_i of every scenario
};

struct PrimalResult {
  Verdict verdict = Verdict::Unknown;
  /// Holds verdict backed by a Lagrangian dual bound.
  bool certified = false;
  std::optional<DVec> witness;
  /// Exact objective value at the witness (it is exactly feasible).
  std::optional<Rational> witness_value;
  /// Best value found at a feasible point (may be positive).
  std::optional<double> best_value;
  /// inf over x of sum a_u f_u + sum m_i g_i for the best weights found.
  std::optional<double> dual_bound;
  std::string note;
};

PrimalResult primal_search(const PrimalProblem& prob, const PrimalConfig& cfg);

}  // namespace sproc
