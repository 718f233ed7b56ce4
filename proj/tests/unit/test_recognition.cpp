#include <cmath>

#include <gtest/gtest.h>

#include "octk/error.hpp"
#include "octk/recognition.hpp"

using namespace octk;

namespace {

struct Spoiler {
  int y_power;
  int u_power;
  const char* condition;
};

}  // namespace

TEST(Recognition, HysteresisNormalForm) {
  const auto v = check_hysteresis(normal_form(NormalForm::hysteresis), 0.0, 0.0, {});
  EXPECT_TRUE(v.passed);
  EXPECT_EQ(v.singularity, "hysteresis");
  EXPECT_DOUBLE_EQ(v.sign("g_yyy")->value, -6.0);
  EXPECT_DOUBLE_EQ(v.sign("g_u")->value, -1.0);
}

TEST(Recognition, HysteresisCircuitDynamicConvention) {
  const auto g = hysteresis_circuit(SigmoidFamily::tanh(), SignConvention::dynamic_input);
  const auto v = check_hysteresis(g, 0.0, 0.0, {{"beta", 0.0}});
  EXPECT_TRUE(v.passed);
  EXPECT_NEAR(v.sign("g_yyy")->value, -2.0, 1e-12);
}

TEST(Recognition, HysteresisCircuitStaticConventionHasPositiveGu) {
  const auto g = hysteresis_circuit(SigmoidFamily::tanh(), SignConvention::static_input);
  const auto v = check_hysteresis(g, 0.0, 0.0, {{"beta", 0.0}});
  EXPECT_FALSE(v.passed);
  EXPECT_FALSE(v.sign("g_u")->passed);
  EXPECT_TRUE(v.zero("g")->passed && v.zero("g_y")->passed && v.zero("g_yy")->passed);
}

TEST(Recognition, HysteresisFailsAwayFromTheSingularity) {
  const auto v = check_hysteresis(normal_form(NormalForm::hysteresis), 0.5, 0.0, {});
  EXPECT_FALSE(v.passed);
}

TEST(Recognition, WcuspNormalFormAndCircuit) {
  EXPECT_TRUE(check_wcusp(normal_form(NormalForm::wcusp), 0.0, 0.0, {}).passed);
  const auto g = wcusp_circuit(SigmoidFamily::tanh(), 0.5);
  const auto v = check_wcusp(g, 0.0, 0.0, {{"alpha", 0.0}, {"beta", 0.0}, {"gamma", 0.0}});
  EXPECT_TRUE(v.passed);
  // g_uu = B''(0) = 2 S''(delta)
  EXPECT_NEAR(v.sign("g_uu")->value, 2.0 * SigmoidFamily::tanh().derivative(0.5, 2), 1e-12);
}

TEST(Recognition, SpoilersFlipTheirCondition) {
  const double eps = 1e-2;
  const auto h = normal_form(NormalForm::hysteresis);
  for (const Spoiler& s : {Spoiler{0, 0, "g"}, Spoiler{1, 0, "g_y"}, Spoiler{2, 0, "g_yy"}}) {
    const auto v = check_hysteresis(add_monomial(h, eps, s.y_power, s.u_power), 0.0, 0.0, {});
    EXPECT_FALSE(v.passed) << s.condition;
    EXPECT_FALSE(v.zero(s.condition)->passed) << s.condition;
  }
  const auto w = normal_form(NormalForm::wcusp);
  for (const Spoiler& s : {Spoiler{0, 0, "g"}, Spoiler{1, 0, "g_y"}, Spoiler{2, 0, "g_yy"},
                           Spoiler{0, 1, "g_u"}, Spoiler{1, 1, "g_yu"}}) {
    const auto v = check_wcusp(add_monomial(w, eps, s.y_power, s.u_power), 0.0, 0.0, {});
    EXPECT_FALSE(v.passed) << s.condition;
    EXPECT_FALSE(v.zero(s.condition)->passed) << s.condition;
  }
}

TEST(Recognition, RelativeModeIsScaleInvariant) {
  const auto h = normal_form(NormalForm::hysteresis);
  const auto scaled = BifurcationProblem::make("1e6 (-y^3 - u)", {}, [](const auto& y, const auto& u, auto) {
    return 1e6 * (-(y * y * y) - u);
  });
  RecognitionOptions rel;
  rel.relative = true;
  const auto spoiled = add_monomial(scaled, 1e6 * 1e-2, 1, 0);
  EXPECT_TRUE(check_hysteresis(scaled, 0.0, 0.0, {}, rel).passed);
  EXPECT_FALSE(check_hysteresis(spoiled, 0.0, 0.0, {}, rel).passed);
  EXPECT_TRUE(check_hysteresis(h, 0.0, 0.0, {}, rel).passed);
}

TEST(Recognition, PolishMovesOntoTheSingularity) {
  const auto h = normal_form(NormalForm::hysteresis);
  RecognitionOptions o;
  o.polish = true;
  const auto v = check_hysteresis(h, 0.05, -0.02, {}, o);
  EXPECT_TRUE(v.passed);
  EXPECT_NEAR(v.y, 0.0, 1e-6);
  EXPECT_NEAR(v.u, 0.0, 1e-6);
}

TEST(Unfolding, NormalFormAndCircuitPass) {
  const auto v = check_hysteresis_unfolding(normal_form(NormalForm::hysteresis_unfolding));
  EXPECT_TRUE(v.passed);
  // det[[g_u, g_uy], [g_beta, g_beta y]] = (-1)(1) - 0 * 0
  EXPECT_NEAR(v.sign_conditions.back().value, -1.0, 1e-12);
  const auto c = hysteresis_circuit(SigmoidFamily::tanh(), SignConvention::dynamic_input);
  EXPECT_TRUE(check_hysteresis_unfolding(c).passed);
}

TEST(Unfolding, AdditiveParameterFails) {
  const auto additive = BifurcationProblem::make(
      "-y^3 - u + beta", {"beta"}, [](const auto& y, const auto& u, auto p) { return -(y * y * y) - u + p[0]; });
  const auto v = check_hysteresis_unfolding(additive);
  EXPECT_FALSE(v.passed);
  EXPECT_NEAR(v.sign_conditions.back().value, 0.0, 1e-12);
  EXPECT_THROW(check_hysteresis_unfolding(additive, {}, "gamma"), DomainError);
}

TEST(Varieties, HysteresisUnfoldingHasHysteresisVarietyAtZero) {
  const auto p = normal_form(NormalForm::hysteresis_unfolding);
  const auto at0 = variety_membership(p, {{"beta", 0.0}}, {});
  EXPECT_TRUE(at0.contains(Variety::hysteresis));
  EXPECT_FALSE(at0.contains(Variety::bifurcation));
  EXPECT_TRUE(variety_membership(p, {{"beta", 0.5}}, {}).none());
  const auto pts = locate_variety(p, Variety::hysteresis, {}, "beta", {}, -1.0, 1.0);
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_NEAR(pts[0].parameter, 0.0, 1e-8);
}

TEST(Varieties, WcuspUnfoldingBifurcationVariety) {
  // G = G_y = G_u = 0 for -y^3 - u^2 + alpha + beta y: u = 0, beta = 3 y^2,
  // alpha = y^3 - beta y = -2 y^3, so alpha = -+2 (beta/3)^(3/2)
  const auto p = normal_form(NormalForm::wcusp_unfolding);
  const double beta = 0.5;
  const auto pts = locate_variety(p, Variety::bifurcation, {{"beta", beta}}, "alpha", {}, -2.0, 2.0);
  ASSERT_EQ(pts.size(), 2u);
  const double a = 2.0 * std::pow(beta / 3.0, 1.5);
  EXPECT_NEAR(pts[0].parameter, -a, 1e-8);
  EXPECT_NEAR(pts[1].parameter, a, 1e-8);
  EXPECT_NEAR(pts[1].u, 0.0, 1e-8);
}

TEST(Varieties, DoubleLimitNeedsDistinctOutputs) {
  // the two folds of -y^3 - u + beta y sit at opposite u, so no input carries both
  const auto h = normal_form(NormalForm::hysteresis_unfolding);
  EXPECT_TRUE(locate_variety(h, Variety::double_limit, {}, "beta", {}, -1.0, 1.0).empty());
}
