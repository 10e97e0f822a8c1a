#include <gtest/gtest.h>

#include <cmath>

#include "bilocal/criteria.hpp"
#include "bilocal/sampling.hpp"

namespace bilocal {
namespace {

constexpr TParams kSingletT{-1, -1, -1};
constexpr XParams kSinglet{0.0, 0.5, 0.5, 0.0, 0.0, -0.5};
constexpr XParams kMixed{0.25, 0.25, 0.25, 0.25, 0.0, 0.0};
const double kSqrt2 = std::sqrt(2.0);

TEST(TLocalCondition, Examples) {
  const auto s = t_local_condition(kSingletT, kSingletT);
  EXPECT_NEAR(s.value, kSqrt2, 1e-15);
  EXPECT_FALSE(s.holds);

  // Same values as the (0.8, 0, 0.8) example, which is not itself a valid T state.
  const TParams c{0.8, -0.6, 0.8};
  const auto r = t_local_condition(c, c);
  EXPECT_NEAR(r.value, std::sqrt(2 * std::pow(0.8, 4)), 1e-15);
  EXPECT_NEAR(r.value, 0.9051, 1e-4);
  EXPECT_TRUE(r.holds);

  EXPECT_EQ(t_local_condition(TParams{0, 0, 0}, kSingletT).value, 0.0);
  EXPECT_THROW(t_local_condition(TParams{0.8, 0.0, 0.8}, kSingletT), InvalidParameters);
}

TEST(TNonbilocalCondition, Examples) {
  const TParams c{0.8, -0.6, 0.8};
  const auto r = t_nonbilocal_condition(c, c);
  EXPECT_NEAR(r.value, std::sqrt(1.28), 1e-15);
  EXPECT_TRUE(r.holds);
  EXPECT_TRUE(t_local_condition(c, c).holds);  // local but nonbilocal

  const auto w = t_nonbilocal_condition(werner(1.0), werner(0.4));
  EXPECT_NEAR(w.value, std::sqrt(0.8), 1e-15);
  EXPECT_FALSE(w.holds);

  EXPECT_NEAR(t_nonbilocal_condition(kSingletT, kSingletT).value, kSqrt2, 1e-15);

  const auto mixed_sign = t_nonbilocal_condition(kSingletT, TParams{0.3, 0.3, 0.3});
  EXPECT_FALSE(mixed_sign.holds);
  EXPECT_NEAR(mixed_sign.value, 0.0, 1e-15);
}

TEST(TNonbilocalCondition, CoincidesWithAnalyticBound) {
  Rng rng = make_stream(41, 0);
  for (int k = 0; k < 10000; ++k) {
    const TParams a = random_t_params(rng), b = random_t_params(rng);
    const auto r = t_nonbilocal_condition(a, b);
    ASSERT_NEAR(r.value, analytic_bound_b1(t_to_x(a), t_to_x(b)).value, 1e-12);
  }
}

TEST(VisibilityAnalysis, Examples) {
  const auto r = visibility_analysis(0.1, 0.12);
  EXPECT_NEAR(r.tradeoff, 0.1 - 0.12 + kSqrt2 * 0.012, 1e-15);
  EXPECT_NEAR(r.tradeoff, -0.00303, 1e-5);
  EXPECT_TRUE(r.nonbilocal);
  EXPECT_TRUE(visibility_analysis(0.0, 0.05).nonbilocal);
  EXPECT_DOUBLE_EQ(r.bilocal_threshold, 0.5);
  EXPECT_THROW(visibility_analysis(0.0, 0.5), InvalidParameters);
}

TEST(VisibilityAnalysis, NoNonbilocalityAbovePointTwoOne) {
  for (double phi1 = 0.21; phi1 <= 1.0 / kSqrt2; phi1 += 0.01)
    for (double phi2 = 0.0; phi2 <= 1.0 - 1.0 / kSqrt2; phi2 += 0.001)
      ASSERT_FALSE(visibility_analysis(phi1, phi2).nonbilocal) << phi1 << " " << phi2;
}

TEST(VisibilityAnalysis, AgreesWithWernerProduct) {
  for (double phi1 = 0.0; phi1 < 0.3; phi1 += 0.013)
    for (double phi2 = 0.0; phi2 < 0.29; phi2 += 0.017) {
      const auto r = visibility_analysis(phi1, phi2);
      const double product = r.visibility_local * r.visibility_nonlocal;
      if (std::abs(product - 0.5) > 1e-12) EXPECT_EQ(r.nonbilocal, product > 0.5);
    }
}

TEST(Steering, Examples) {
  const auto s = steering_report(kSinglet);
  EXPECT_EQ(s.pre, SteeringVerdict::Guaranteed);
  const auto m = steering_report(kMixed);
  for (double r : m.r) EXPECT_EQ(r, 0.0);
  EXPECT_EQ(m.pre, SteeringVerdict::NotGuaranteed);
  EXPECT_EQ(m.post, SteeringVerdict::NotGuaranteed);
  EXPECT_FALSE(m.nonbilocal);
  EXPECT_EQ(to_string(SteeringVerdict::Guaranteed), "steerable-guaranteed");
}

TEST(Steering, SwappedQuantitiesMatchPsiPlusBranch) {
  Rng rng = make_stream(42, 0);
  for (int k = 0; k < 1000; ++k) {
    const XParams x = random_x_params(rng);
    const auto report = steering_report(x);
    const auto outcomes = entanglement_swap(x, x);
    const auto& branch = outcomes[2];
    ASSERT_NEAR(branch.probability, report.w / 2.0, 1e-12);
    const auto t = correlation_tensor(*branch.conditional_state).t;
    for (int i = 0; i < 3; ++i) ASSERT_NEAR(t[i][i], report.r_swapped[i], 1e-10);
  }
}

TEST(Steering, WitnessExistsAtFigureSlice) {
  bool found = false;
  for (double s = 0.0; s <= 1.0 && !found; s += 0.01)
    for (double k = 0.0; k <= 0.52 && !found; k += 0.01)
      for (double z = 0.0; z <= 0.52 && !found; z += 0.01) {
        const XParams x{s, k, z, 1.0 - s - k - z, 0.24, 0.0};
        if (x_params_violation(x)) continue;
        const auto r = steering_report(x);
        found = r.pre == SteeringVerdict::NotGuaranteed &&
                r.post == SteeringVerdict::NotGuaranteed && r.nonbilocal;
      }
  EXPECT_TRUE(found);
}

TEST(Filter, IdentityFilter) {
  Rng rng = make_stream(43, 0);
  const XParams x = random_x_params(rng);
  const XParams f = filter_state(x, FilterParams{1.0, 1.0});
  EXPECT_NEAR(f.pop00, x.pop00, 1e-15);
  EXPECT_NEAR(f.coh0110, x.coh0110, 1e-15);
  const auto r = filtered_chsh_bound(x, FilterParams{1.0, 1.0});
  EXPECT_NEAR(r.chsh, 2.0 * horodecki_m(x_state_matrix(x)), 1e-12);
}

TEST(Filter, MatchesOperatorConjugation) {
  Rng rng = make_stream(44, 0);
  for (int k = 0; k < 1000; ++k) {
    const XParams x = random_x_params(rng);
    const FilterParams f{uniform(rng, 0.01, 1.0), uniform(rng, 0.01, 1.0)};
    const auto op = filter_operator(f);
    auto rho = op * x_state_matrix(x) * op.adjoint();
    rho = rho * (1.0 / rho.trace().real());
    const XParams filtered = filter_state(x, f);
    ASSERT_LE(max_abs_diff(rho, x_state_matrix(filtered)), 1e-12);
    ASSERT_FALSE(x_params_violation(filtered));
  }
  EXPECT_THROW(filter_state(kSinglet, FilterParams{0.0, 1.0}), InvalidParameters);
  EXPECT_THROW(filter_state(kSinglet, FilterParams{1.5, 1.0}), InvalidParameters);
}

TEST(Filter, HiddenNonlocality) {
  for (double a : {0.1, 0.5, 0.6, 0.9}) {
    const auto r = filtered_chsh_bound(hidden_nonlocality_state(a), hidden_nonlocality_filters(a, 1e-3));
    EXPECT_NEAR(r.chsh, 2.0 * std::sqrt(1.0 + a), 1e-4);
    const auto limit = hidden_nonlocality_limit_state(a);
    EXPECT_NEAR(2.0 * horodecki_m(x_state_matrix(limit)), 2.0 * std::sqrt(1.0 + a), 1e-12);
  }
  const XParams local = hidden_nonlocality_state(0.6);
  EXPECT_LE(horodecki_m(x_state_matrix(local)), 1.0);
  const auto h = hidden_nonlocality_state(1.0);
  EXPECT_NEAR(horodecki_m(x_state_matrix(h)), kSqrt2, 1e-12);
  EXPECT_NEAR(concurrence_x(hidden_nonlocality_state(0.0)), 0.0, 1e-15);
}

TEST(Filter, TableRowsForZeroCoherence0011) {
  // With pop00 coherence zero both rows share the zz term, which is the ground
  // truth whenever that branch dominates.
  for (double a : {0.2, 0.5, 0.8}) {
    const auto r =
        filtered_chsh_bound(hidden_nonlocality_state(a), hidden_nonlocality_filters(a, 1e-3));
    EXPECT_NEAR(r.positive_product.zz_term, r.negative_product.zz_term, 1e-15);
    EXPECT_NEAR(r.positive_product.zz_term, r.chsh, 1e-10);
  }
}

TEST(Edx, Examples) {
  const auto zero = locality_vars_from(0, 0, 0);
  const auto r = edx_inequality(zero, zero);
  EXPECT_NEAR(r.value, kSqrt2, 1e-15);
  EXPECT_EQ(r.verdict, Verdict::Boundary);
  const auto s = locality_vars(kSinglet);
  const auto v = edx_inequality(s, s);
  EXPECT_NEAR(v.value, 2.0, 1e-15);
  EXPECT_EQ(v.verdict, Verdict::Above);
  EXPECT_THROW(edx_inequality(locality_vars_from(0.0, 0.9, 1.0), zero), InvalidParameters);
}

TEST(Edx, LocalCopiesNeverViolate) {
  Rng rng = make_stream(45, 0);
  for (int k = 0; k < 10000; ++k) {
    auto draw = [&] {
      while (true) {
        const auto v = locality_vars_from(uniform(rng, 0, 1), uniform(rng, 0, 1), uniform(rng, 0, 1));
        if (1.0 - v.delta >= std::abs(v.xi - v.epsilon)) return v;
      }
    };
    ASSERT_NE(edx_inequality(draw(), draw()).verdict, Verdict::Above);
  }
}

TEST(Edx, EqualsSqrt2TimesBoundWhenZzProductNonnegative) {
  Rng rng = make_stream(46, 0);
  for (int k = 0; k < 5000; ++k) {
    const TParams a = random_t_params(rng), b = random_t_params(rng);
    const auto e = edx_inequality(locality_vars(t_to_x(a)), locality_vars(t_to_x(b)));
    const double expected = kSqrt2 * std::sqrt(std::abs(a.cz * b.cz) + std::abs(a.cx * b.cx));
    ASSERT_NEAR(e.value, expected, 1e-9);
    if (a.cz * b.cz >= 0.0) {
      ASSERT_NEAR(e.value, kSqrt2 * t_nonbilocal_condition(a, b).value, 1e-9);
    }
  }
}

TEST(MaximalPlane, Examples) {
  EXPECT_NEAR(maximal_plane_condition(0.4, 0.0).delta2_bound, 1.0 - 1.0 / 0.6, 1e-15);
  EXPECT_NEAR(maximal_plane_condition(0.4, 0.0).delta2_bound, -0.6667, 1e-4);
  const auto zero = maximal_plane_condition(0.0, 0.0);
  EXPECT_EQ(zero.product, 1.0);
  EXPECT_EQ(zero.verdict, Verdict::Boundary);
  EXPECT_NEAR(maximal_plane_condition(0.5, 0.0).delta2_bound, -1.0, 1e-15);
  EXPECT_EQ(maximal_plane_condition(0.5, -1.0).verdict, Verdict::Boundary);
  EXPECT_EQ(maximal_plane_condition(0.4, -0.7).verdict, Verdict::Above);
  EXPECT_THROW(maximal_plane_condition(1.5, 0.0), InvalidParameters);
}

TEST(MaximalPlane, BothPositiveNeverCapable) {
  for (double d1 = 0.0; d1 <= 1.0; d1 += 0.01)
    for (double d2 = 0.0; d2 <= 1.0; d2 += 0.01)
      ASSERT_NE(maximal_plane_condition(d1, d2).verdict, Verdict::Above);
}

TEST(Sufficiency, C1BoundAtZeroDelta) {
  EXPECT_NEAR(c1_epsilon_upper(0.0), (4 * kSqrt2 - 5) / 2, 1e-15);
  EXPECT_NEAR(c1_epsilon_upper(0.0), 0.32843, 1e-5);
}

TEST(Sufficiency, SingletPairIsBothNonlocalNegativeDelta) {
  const auto r = sufficiency_report(kSingletT, kSingletT);
  EXPECT_EQ(r.scenario, PairScenario::BothNonlocalDelta1Negative);
  EXPECT_EQ(r.edx.verdict, Verdict::Above);
  EXPECT_FALSE(r.roles_swapped);
}

TEST(Sufficiency, AlphaPairConditionsAlwaysHold) {
  // a = 0 is a product state; the branch choice there is degenerate.
  for (double a = 0.01; a <= 1.0; a += 0.01) {
    const auto r = sufficiency_report(alpha_state_t(a), alpha_state_t(a));
    for (const auto& c : r.copies) {
      EXPECT_TRUE(c.condition_i) << a;
      EXPECT_TRUE(c.condition_ii) << a;
      EXPECT_TRUE(c.condition_iii) << a;
      EXPECT_EQ(c.third, a > 0.5 ? ThirdCondition::FBound : ThirdCondition::GSumBound) << a;
    }
  }
}

TEST(Sufficiency, LocalCopyTakesFirstRole) {
  // Werner 0.6 is local with delta in [0, 1/2); the singlet is nonlocal.
  const auto r = sufficiency_report(kSingletT, werner(0.6));
  EXPECT_TRUE(r.roles_swapped);
  EXPECT_EQ(r.copies[1].horodecki, Verdict::Below);
}

TEST(Sufficiency, SignPairDispatch) {
  EXPECT_EQ(classify_sign_pair(TParams{0.5, -0.2, 0.3}), SignPair::Pair1);
  EXPECT_EQ(classify_sign_pair(TParams{0.5, -0.2, -0.3}), SignPair::Pair2);
  EXPECT_EQ(classify_sign_pair(TParams{0.2, -0.5, -0.3}), SignPair::Pair3);
  EXPECT_EQ(classify_sign_pair(TParams{0.2, -0.5, 0.3}), SignPair::Pair4);
}

TEST(AlphaNonbilocal, Examples) {
  const auto one = alpha_nonbilocal(1.0, 1.0);
  EXPECT_NEAR(one.value, kSqrt2, 1e-15);
  EXPECT_TRUE(one.holds);
  const auto half = alpha_nonbilocal(0.5, 0.5);
  EXPECT_NEAR(half.value, 0.5, 1e-15);
  EXPECT_FALSE(half.holds);
  for (double a1 = 0.0; a1 < 0.5; a1 += 0.01)
    for (double a2 = 0.0; a2 <= 1.0; a2 += 0.01) ASSERT_FALSE(alpha_nonbilocal(a1, a2).holds);
  EXPECT_THROW(alpha_nonbilocal(1.2, 0.5), InvalidParameters);
}

TEST(AlphaNonbilocal, MatchesAnalyticBound) {
  for (double a1 = 0.0; a1 <= 1.0; a1 += 0.05)
    for (double a2 = 0.0; a2 <= 1.0; a2 += 0.05) {
      // compared squared: near zero the root amplifies rounding in the radicand
      const double lhs = alpha_nonbilocal(a1, a2).value;
      const double rhs = analytic_bound_b1(alpha_state(a1), alpha_state(a2)).value;
      ASSERT_NEAR(lhs * lhs, rhs * rhs, 1e-14) << a1 << ' ' << a2;
    }
}

TEST(EntanglementNecessity, SeparablePairsNeverFlagged) {
  Rng rng = make_stream(47, 0);
  for (int k = 0; k < 10000; ++k) {
    const TParams a = random_separable_t_params(rng), b = random_separable_t_params(rng);
    ASSERT_FALSE(t_nonbilocal_condition(a, b).holds);
    ASSERT_FALSE(t_nonbilocal_condition(a, a).holds);
    ASSERT_TRUE(entanglement_necessity_check(a, b));
  }
  EXPECT_TRUE(entanglement_necessity_check(kSingletT, TParams{0.3, 0.3, 0.3}));
}

}  // namespace
}  // namespace bilocal
