#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "sproc/error.hpp"
#include "sproc/procedures/procedures.hpp"
#include "support/builders.hpp"

namespace sproc {
namespace {

using testing::cp;
using testing::family;
using testing::poly;
using testing::quad1;
using testing::R;
using testing::regression_nonconvex;
using testing::single;

RobustInstance trust_region() { return single(cp(quad1(R(-1), R(0), R(1)), {quad1(R(1), R(0), R(-1))})); }
RobustInstance negative_const() { return single(cp(quad1(R(0), R(0), R(-1)), {quad1(R(1), R(0), R(-1))})); }

Rockafellian random_poly(std::mt19937& rng, std::size_t nx, std::size_t ny, int pieces, bool domain) {
  std::uniform_int_distribution<int> coef(-5, 5);
  std::vector<std::vector<long>> ps;
  for (int k = 0; k < pieces; ++k) {
    std::vector<long> row;
    for (std::size_t i = 0; i <= nx + ny; ++i) row.push_back(coef(rng));
    ps.push_back(std::move(row));
  }
  std::optional<Polyhedron> dom;
  if (domain) {
    std::vector<Halfspace> rows;
    for (int k = 0; k < 2; ++k) {
      RVec a;
      for (std::size_t i = 0; i < nx + ny; ++i) a.emplace_back(coef(rng));
      rows.push_back({std::move(a), Rational(coef(rng) + 5)});
    }
    dom = Polyhedron(nx + ny, std::move(rows));
  }
  return poly(nx, ny, ps, dom);
}

GTEST_TEST(CheckATest, Examples) {
  auto zero = family({cp(quad1(R(0), R(0), R(0)), {quad1(R(1), R(0), R(-1))}),
                      cp(quad1(R(0), R(0), R(0)), {quad1(R(0), R(1), R(0))})});
  EXPECT_EQ(check_A(zero).verdict, Verdict::Holds);

  auto v = single(cp(quad1(R(1), R(0), R(-1)), {quad1(R(1), R(0), R(-1))}));
  AResult r = check_A(v);
  ASSERT_EQ(r.verdict, Verdict::Violated);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_LT(std::abs((*r.witness)[0]), 1.0);

  auto abs = family({poly(1, 0, {{1, 0}}), poly(1, 0, {{-1, 0}})});
  AResult e = check_A(abs);
  EXPECT_EQ(e.verdict, Verdict::Holds);
  EXPECT_TRUE(e.exact);

  auto ray = single(poly(1, 1, {{1, 0, 0}}));
  AResult u = check_A(ray);
  EXPECT_EQ(u.verdict, Verdict::Violated);
  EXPECT_EQ(u.witness_value, "-inf");
  EXPECT_TRUE(u.ray.has_value());
}

GTEST_TEST(CheckATest, ExactOnlySkipsQuadratic) {
  ProcedureConfig cfg;
  cfg.exact_only = true;
  EXPECT_EQ(check_A(trust_region(), cfg).verdict, Verdict::Unknown);
}

GTEST_TEST(CertifyBTest, Examples) {
  BResult tr = certify_B(trust_region());
  ASSERT_TRUE(tr.certificate.has_value());
  EXPECT_EQ(tr.certificate->scenario, 0u);
  EXPECT_NEAR(to_double(tr.certificate->lambda[0]), 1.0, 1e-6);
  EXPECT_GE(tr.certificate->quality, -1e-8);

  EXPECT_FALSE(certify_B(negative_const()).certificate.has_value());

  // scenario 0 has psi(lambda) <= -1 on a dense grid, scenario 1 is the
  // trust region pair
  auto pair = family({negative_const().scenarios[0], trust_region().scenarios[0]});
  const auto& first = pair.scenarios[0].perturbation();
  double best = -1e300;
  for (int k = 0; k <= 1000; ++k) best = std::max(best, psi(first.f, first.g, DVec{k / 100.0}));
  EXPECT_LT(best, 0.0);
  BResult two = certify_B(pair);
  ASSERT_TRUE(two.certificate.has_value());
  EXPECT_EQ(two.certificate->scenario, 1u);
  EXPECT_NEAR(to_double(two.certificate->lambda[0]), 1.0, 1e-6);
}

GTEST_TEST(CertifyBTest, PolyhedralCertificateIsExact) {
  // F(x, y) = max(x + y, -x + y): F + <-1, y> = |x| >= 0
  auto f = single(poly(1, 1, {{1, 1, 0}, {-1, 1, 0}}));
  BResult b = certify_B(f);
  ASSERT_TRUE(b.certificate.has_value());
  EXPECT_TRUE(b.certificate->exact);
  EXPECT_EQ(b.certificate->lambda[0], -1);
  ASSERT_TRUE(b.certificate->margin.has_value());
  EXPECT_EQ(*b.certificate->margin, 0);
}

GTEST_TEST(CertifyBTest, SoundnessOnRandomPolyhedral) {
  std::mt19937 rng(21);
  int certified = 0;
  for (int trial = 0; trial < 80; ++trial) {
    std::vector<Rockafellian> fs;
    const int nu = 1 + trial % 3;
    for (int u = 0; u < nu; ++u) fs.push_back(random_poly(rng, 1 + trial % 2, 1 + trial % 3 % 2, 3, trial % 4 == 0));
    auto inst = family(fs);
    BResult b = certify_B(inst);
    if (!b.certificate) continue;
    ++certified;
    EXPECT_GE(substitution_margin(inst, *b.certificate, 0, 0), 0.0);
    EXPECT_NE(check_A(inst).verdict, Verdict::Violated);
  }
  EXPECT_GT(certified, 5);
}

GTEST_TEST(CertifyBTest, SoundnessOnRandomConvexQuadratic) {
  std::mt19937 rng(4);
  std::uniform_int_distribution<int> c(-4, 4);
  int certified = 0;
  for (int trial = 0; trial < 30; ++trial) {
    auto f = quad1(ratio(c(rng) + 4, 2), Rational(c(rng)), Rational(c(rng) + 2));
    auto g = quad1(Rational(1), ratio(c(rng), 2), Rational(-1 - std::abs(c(rng))));
    auto inst = single(cp(f, {g}));
    BResult b = certify_B(inst);
    if (!b.certificate) continue;
    ++certified;
    EXPECT_GE(substitution_margin(inst, *b.certificate, 10000, trial), -1e-6);
    EXPECT_NE(check_A(inst).verdict, Verdict::Violated);
  }
  EXPECT_GT(certified, 3);
}

GTEST_TEST(RhsFunctionTest, Conjugate) {
  RhsFunction h{{AffinePiece{{R(1)}, R(0)}, AffinePiece{{R(-1)}, R(2)}}};
  EXPECT_EQ(h.eval(RVec{R(3)}), 3);
  EXPECT_EQ(*h.conjugate({R(1)}), 0);
  EXPECT_EQ(*h.conjugate({R(-1)}), -2);
  EXPECT_EQ(*h.conjugate({R(0)}), -1);
  EXPECT_FALSE(h.conjugate({R(2)}).has_value());
  auto probes = rhs_probes(h, 20, 1);
  EXPECT_GE(probes.size(), 3u);
  for (const auto& a : probes) EXPECT_TRUE(h.conjugate(a).has_value());
  EXPECT_EQ(rhs_probes(RhsFunction::zero(2), 20, 1).size(), 1u);
  EXPECT_THROW(RhsFunction{}.validate(), InputError);
}

GTEST_TEST(CheckAhTest, ZeroMatchesCheckA) {
  for (const auto& inst : {trust_region(), negative_const(), family({poly(1, 0, {{1, 0}}), poly(1, 0, {{-1, 0}})})}) {
    EXPECT_EQ(check_A_h(inst, RhsFunction::zero(1)).verdict, check_A(inst).verdict);
  }
}

GTEST_TEST(CheckAhTest, AffineBelowParabola) {
  auto inst = single(cp(quad1(R(1), R(0), R(0)), {quad1(R(0), R(0), R(-1))}));
  AResult r = check_A_h(inst, RhsFunction::affine({R(1)}, R(0)));
  ASSERT_EQ(r.verdict, Verdict::Violated);
  const double x = (*r.witness)[0];
  EXPECT_LT(x * x - x, 0.0);
}

// 1-D: p - h is piecewise linear, so its infimum sits at a crossing of two
// lines or is -inf.
GTEST_TEST(CheckAhTest, PolyhedralAgainstBreakpoints) {
  std::mt19937 rng(9);
  std::uniform_int_distribution<int> c(-5, 5);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<std::vector<long>> ps;
    for (int k = 0; k < 3; ++k) ps.push_back({c(rng), c(rng)});
    auto inst = single(poly(1, 0, ps));
    RhsFunction h{{AffinePiece{{Rational(c(rng))}, Rational(c(rng))}, AffinePiece{{Rational(c(rng))}, Rational(c(rng))}}};
    std::vector<std::pair<Rational, Rational>> lines;
    for (const auto& p : ps) lines.push_back({Rational(p[0]), Rational(p[1])});
    for (const auto& p : h.pieces) lines.push_back({p.slope[0], p.intercept});
    auto gap = [&](const Rational& x) -> Rational {
      return *primal_value(inst, RVec{x}).exact() - h.eval(RVec{x});
    };
    std::vector<Rational> xs{Rational(0), Rational(1000000), Rational(-1000000)};
    for (std::size_t i = 0; i < lines.size(); ++i) {
      for (std::size_t j = i + 1; j < lines.size(); ++j) {
        if (lines[i].first == lines[j].first) continue;
        xs.push_back((lines[j].second - lines[i].second) / (lines[i].first - lines[j].first));
      }
    }
    bool violated = false;
    for (const auto& x : xs) violated = violated || sgn(gap(x)) < 0;
    AResult r = check_A_h(inst, h);
    EXPECT_TRUE(r.exact);
    EXPECT_EQ(r.verdict, violated ? Verdict::Violated : Verdict::Holds) << trial;
  }
}

GTEST_TEST(CertifyBhTest, Examples) {
  BhResult zero = certify_B_h(trust_region(), RhsFunction::zero(1));
  ASSERT_EQ(zero.probes.size(), 1u);
  EXPECT_TRUE(zero.valid_on_probes);
  EXPECT_EQ(zero.probes[0].certificate.has_value(), certify_B(trust_region()).certificate.has_value());

  BhResult shifted = certify_B_h(trust_region(), RhsFunction::affine({R(0)}, R(-1)));
  ASSERT_TRUE(shifted.valid_on_probes);
  EXPECT_EQ(shifted.probes[0].h_star, 1);
  const auto& c = *shifted.probes[0].certificate;
  // F*(0, -lambda) = -quad_inf(1 - x^2 + lambda (x^2 - 1)) <= h*(0) = 1
  const double lam = to_double(c.lambda[0]);
  EXPECT_GE(lam, 1.0 - 1e-9);
  EXPECT_LE(-quad_inf(SymMatrix::from_rows({{lam - 1}}), DVec{0.0}, 1 - lam), 1.0 + 1e-9);

  // x^2 >= x fails, so some probe of h(x) = x must stay uncertified
  auto par = single(cp(quad1(R(1), R(0), R(0)), {quad1(R(0), R(0), R(-1))}));
  RhsFunction h = RhsFunction::affine({R(1)}, R(0));
  ASSERT_EQ(check_A_h(par, h).verdict, Verdict::Violated);
  EXPECT_FALSE(certify_B_h(par, h).valid_on_probes);
}

GTEST_TEST(CertifyBhTest, LemmaSoundnessPolyhedral) {
  std::mt19937 rng(13);
  std::uniform_int_distribution<int> c(-3, 3);
  int valid = 0;
  for (int trial = 0; trial < 40; ++trial) {
    auto inst = family({random_poly(rng, 1, 1, 3, false), random_poly(rng, 1, 1, 2, trial % 2 == 0)});
    RhsFunction h{{AffinePiece{{Rational(c(rng))}, Rational(c(rng) - 6)}, AffinePiece{{Rational(c(rng))}, Rational(c(rng) - 6)}}};
    BhResult b = certify_B_h(inst, h);
    if (!b.valid_on_probes) continue;
    ++valid;
    EXPECT_NE(check_A_h(inst, h).verdict, Verdict::Violated) << trial;
  }
  EXPECT_GT(valid, 0);
}

GTEST_TEST(HypothesesTest, Examples) {
  auto convex = single(cp(quad1(R(1), R(0), R(0)), {quad1(R(1), R(0), R(-1))}));
  HypothesisReport r = check_hypotheses(convex, std::nullopt);
  EXPECT_EQ(r.h[0].flag, Flag::HoldsSufficient);
  EXPECT_EQ(r.h[1].flag, Flag::HoldsSufficient);
  EXPECT_EQ(r.h[2].flag, Flag::NotApplicable);

  auto empty = family({cp(quad1(R(1), R(0), R(0)), {quad1(R(1), R(0), R(1))}),
                       cp(quad1(R(0), R(1), R(0)), {quad1(R(0), R(0), R(1))})});
  HypothesisReport e = check_hypotheses(empty, std::nullopt);
  EXPECT_EQ(e.h[0].flag, Flag::FailsWitness);
  EXPECT_EQ(e.h[0].witness_value, "+inf");
  EXPECT_EQ(e.h[1].flag, Flag::NotApplicable);

  auto pe = single(poly(1, 1, {{1, 0, 0}}, Polyhedron::empty(2)));
  EXPECT_EQ(check_hypotheses(pe, std::nullopt).h[0].flag, Flag::FailsWitness);
}

GTEST_TEST(HypothesesTest, PolyhedralH4AtSlopes) {
  // union of F#_1 = {1} x [0, inf) and F#_2 = {-1} x [0, inf): a' = 0 lies
  // only in the hull
  auto inst = family({poly(1, 0, {{1, 0}}), poly(1, 0, {{-1, 0}})});
  RhsFunction h{{AffinePiece{{R(1)}, R(0)}, AffinePiece{{R(-1)}, R(0)}}};
  HypothesisReport r = check_hypotheses(inst, h);
  EXPECT_EQ(r.h[2].flag, Flag::HoldsSufficient);
  ASSERT_EQ(r.h[3].flag, Flag::FailsWitness);
  ASSERT_TRUE(r.h[3].witness_point.has_value());
  EXPECT_LT(std::abs((*r.h[3].witness_point)[0]), 1.0);
  EXPECT_EQ(r.h[4].flag, Flag::NotApplicable);

  RhsFunction one = RhsFunction::affine({R(1)}, R(-1));
  HypothesisReport s = check_hypotheses(inst, one);
  EXPECT_EQ(s.h[3].flag, Flag::HoldsSufficient);
}

GTEST_TEST(ValidateTest, TrustRegionAndNegativeConstant) {
  ValidationReport t = validate_equivalence(trust_region(), Theorem::T2_1);
  EXPECT_EQ(t.agreement, Agreement::Agree);
  for (const auto& s : t.sides) EXPECT_EQ(s.value, Tri::True) << s.name;

  ValidationReport n = validate_equivalence(negative_const(), Theorem::T2_1);
  EXPECT_EQ(n.agreement, Agreement::Agree);
  EXPECT_EQ(n.sides[0].value, Tri::False);
  EXPECT_EQ(n.sides[2].value, Tri::True);
  EXPECT_EQ(n.sides[3].value, Tri::True);
}

GTEST_TEST(ValidateTest, RegressionInstanceIsInvalid) {
  auto inst = regression_nonconvex();
  const auto& c = inst.scenarios[0].perturbation();
  // dense multiplier grid: no lambda in [0, 10]^2 certifies
  double best = -1e300;
  for (int i = 0; i <= 1000; i += 2) {
    for (int j = 0; j <= 1000; j += 2) best = std::max(best, psi(c.f, c.g, DVec{i / 100.0, j / 100.0}));
  }
  EXPECT_LT(best, -0.5);
  EXPECT_EQ(check_A(inst).verdict, Verdict::Holds);
  EXPECT_FALSE(certify_B(inst).certificate.has_value());
  ValidationReport r = validate_equivalence(inst, Theorem::T2_1);
  EXPECT_EQ(r.agreement, Agreement::Agree);
  ASSERT_EQ(r.sides.size(), 4u);
  EXPECT_EQ(r.sides[2].value, Tri::False);
  EXPECT_EQ(r.sides[3].value, Tri::False);
}

GTEST_TEST(ValidateTest, ParseTheorem) {
  EXPECT_EQ(parse_theorem("t2_1"), Theorem::T2_1);
  EXPECT_EQ(parse_theorem("C4_1"), Theorem::C4_1);
  EXPECT_THROW(parse_theorem("t9"), InputError);
  EXPECT_THROW(validate_equivalence(family({poly(1, 0, {{1, 0}}), poly(1, 0, {{-1, 0}})}), Theorem::C2_1),
               InputError);
}

GTEST_TEST(ValidateTest, RandomPolyhedralTheorems) {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Rockafellian> fs;
    const int nu = 1 + trial % 3;
    for (int u = 0; u < nu; ++u) fs.push_back(random_poly(rng, 1, 1, 3, trial % 3 == 0));
    auto inst = family(fs);
    for (Theorem t : {Theorem::T2_1, Theorem::T3_1, Theorem::T4_1}) {
      ValidationReport r = validate_equivalence(inst, t);
      EXPECT_EQ(r.agreement, Agreement::Agree) << trial << " " << to_string(t);
    }
    if (nu == 1) {
      for (Theorem t : {Theorem::C2_1, Theorem::C2_2, Theorem::C3_1, Theorem::C4_1}) {
        EXPECT_EQ(validate_equivalence(inst, t).agreement, Agreement::Agree) << trial << " " << to_string(t);
      }
    }
  }
}

GTEST_TEST(MonotonicityTest, AddingScenarios) {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Rockafellian> fs{random_poly(rng, 1, 1, 3, false)};
    auto small = family(fs);
    fs.push_back(random_poly(rng, 1, 1, 3, trial % 2 == 0));
    auto big = family(fs);
    if (certify_B(small).certificate) EXPECT_TRUE(certify_B(big).certificate.has_value());
    if (check_A(small).verdict == Verdict::Holds) EXPECT_EQ(check_A(big).verdict, Verdict::Holds);
  }
}

// (B**) is (B): for convex scenarios F** = F, so replacing each scenario by
// its biconjugate leaves the set of certifiable scenarios unchanged.
GTEST_TEST(BiconjugateProcedureTest, SameCertifiableScenarios) {
  std::mt19937 rng(31);
  std::uniform_int_distribution<int> c(-3, 3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Rockafellian> fs;
    for (int u = 0; u < 2; ++u) {
      auto f = quad1(ratio(c(rng) + 3, 2), Rational(c(rng)), Rational(c(rng)));
      auto g = quad1(Rational(1), Rational(c(rng)), Rational(-1 - std::abs(c(rng))));
      fs.push_back(cp(f, {g}));
    }
    auto inst = family(fs);
    for (std::size_t u = 0; u < fs.size(); ++u) {
      const auto& p = fs[u].perturbation();
      for (double x : {-2.0, 0.3, 1.7}) {
        for (double y : {-0.5, 0.0, 2.0}) {
          ExtReal e = evaluate(fs[u], DVec{x}, DVec{y});
          BiconjugateValue b = biconjugate_at(fs[u], DVec{x}, DVec{y});
          ASSERT_EQ(e.is_pos_inf(), b.value.is_pos_inf());
          if (e.is_finite()) EXPECT_NEAR(e.value(), b.value.value(), 1e-9);
        }
      }
      const bool orig = certify_B(single(fs[u])).certificate.has_value();
      // the biconjugate-replaced scenario is the same convex pair
      const bool repl = certify_B(single(cp(p.f, p.g))).certificate.has_value();
      EXPECT_EQ(orig, repl);
    }
  }
}

}  // namespace
}  // namespace sproc
