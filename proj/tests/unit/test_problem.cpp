#include <cmath>

#include <gtest/gtest.h>

#include "octk/error.hpp"
#include "octk/problem.hpp"

using namespace octk;

namespace {

/// Fourth-order central difference in y or u.
double fd(const BifurcationProblem& p, double y, double u, const ParamVector& q, bool in_y) {
  const double h = 1e-3;
  auto g = [&](double s) { return in_y ? p(y + s, u, q) : p(y, u + s, q); };
  return (-g(2 * h) + 8 * g(h) - 8 * g(-h) + g(-2 * h)) / (12 * h);
}

}  // namespace

TEST(Problem, NormalFormValues) {
  const auto h = normal_form(NormalForm::hysteresis);
  EXPECT_DOUBLE_EQ(h(2.0, 1.0), -9.0);
  const auto hu = normal_form(NormalForm::hysteresis_unfolding);
  EXPECT_DOUBLE_EQ(hu(1.0, 0.5, {{"beta", 2.0}}), -1.0 - 0.5 + 2.0);
  const auto w = normal_form(NormalForm::wcusp);
  EXPECT_DOUBLE_EQ(w(1.0, 2.0), -5.0);
  const auto wu = normal_form(NormalForm::wcusp_unfolding);
  EXPECT_DOUBLE_EQ(wu(1.0, 2.0, {{"alpha", 1.0}, {"beta", 1.0}, {"gamma", 1.0}}), -5.0 + 1 + 1 + 2);
}

TEST(Problem, CircuitConventions) {
  const auto s = SigmoidFamily::tanh();
  const auto stat = hysteresis_circuit(s, SignConvention::static_input);
  const auto dyn = hysteresis_circuit(s, SignConvention::dynamic_input);
  const ParamVector p{{"beta", 0.3}};
  EXPECT_NEAR(stat(0.2, 0.1, p), -0.2 + std::tanh(0.2 + 0.1 + 0.06), 1e-15);
  EXPECT_NEAR(dyn(0.2, 0.1, p), -0.2 + std::tanh(0.2 - 0.1 + 0.06), 1e-15);
}

TEST(Problem, WcuspCircuitFormula) {
  const auto s = SigmoidFamily::tanh();
  const auto g = wcusp_circuit(s, 0.5);
  const BumpNonlinearity bump(s, 0.5);
  const ParamVector p{{"alpha", 0.1}, {"beta", 0.2}, {"gamma", 1.0}};
  const double y = 0.3, u = -0.4;
  EXPECT_NEAR(g(y, u, p), -y + std::tanh(bump(u + 0.5 * y) + y + 0.1 + 0.2 * y), 1e-15);
  EXPECT_THROW(wcusp_circuit(s, 0.0), DomainError);
}

TEST(Problem, PartialsMatchFiniteDifferences) {
  const auto g = wcusp_circuit(SigmoidFamily::tanh(), 0.5);
  const ParamVector p{{"alpha", 0.1}, {"beta", 0.2}, {"gamma", 1.0}};
  for (double y : {-0.5, 0.0, 0.7}) {
    for (double u : {-0.3, 0.4}) {
      EXPECT_NEAR(partials(g, y, u, p, {1, 0, "", 0}), fd(g, y, u, p, true), 1e-9);
      EXPECT_NEAR(partials(g, y, u, p, {0, 1, "", 0}), fd(g, y, u, p, false), 1e-9);
    }
  }
}

TEST(Problem, ParameterPartial) {
  const auto hu = normal_form(NormalForm::hysteresis_unfolding);
  // d/dbeta (-y^3 - u + beta y) = y, and its y-derivative is 1
  EXPECT_DOUBLE_EQ(partials(hu, 0.7, 0.0, {}, {0, 0, "beta", 1}), 0.7);
  EXPECT_DOUBLE_EQ(partials(hu, 0.7, 0.0, {}, {1, 0, "beta", 1}), 1.0);
  EXPECT_THROW(partials(hu, 0.0, 0.0, {}, {0, 0, "gamma", 1}), DomainError);
  EXPECT_THROW(partials(hu, 0.0, 0.0, {}, {2, 2, "", 0}), DomainError);
}

TEST(Problem, AddMonomial) {
  const auto h = normal_form(NormalForm::hysteresis);
  const auto spoiled = add_monomial(h, 0.01, 1, 1);
  EXPECT_NEAR(spoiled(2.0, 3.0) - h(2.0, 3.0), 0.06, 1e-14);
  EXPECT_NEAR(partials(spoiled, 0.0, 0.0, {}, {1, 1, "", 0}), 0.01, 1e-15);
}

TEST(Problem, UnknownParametersAndKinds) {
  const auto h = normal_form(NormalForm::hysteresis);
  EXPECT_THROW(h(0.0, 0.0, {{"beta", 1.0}}), DomainError);
  ProblemSpec spec;
  spec.kind = "pitchfork";
  EXPECT_THROW(make_problem(spec), DomainError);
  spec.kind = "wcusp-circuit";
  spec.delta = 0.0;
  EXPECT_THROW(make_problem(spec), DomainError);
}

TEST(Params, RejectsDuplicatesAndReportsDefaults) {
  ParamVector p{{"beta", 1.0}};
  EXPECT_THROW(p.set("beta", 2.0), DomainError);
  EXPECT_DOUBLE_EQ(p.with("beta", 2.0).get("beta"), 2.0);
  EXPECT_DOUBLE_EQ(p.get_or("gamma", 0.5), 0.5);
  EXPECT_THROW(p.get("gamma"), DomainError);
}
