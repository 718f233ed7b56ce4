#include <cmath>

#include <gtest/gtest.h>

#include "octk/error.hpp"
#include "octk/sigmoid.hpp"

using namespace octk;

namespace {

/// Closed-form derivatives 0..4 of tanh at u.
std::array<double, 5> tanh_derivatives(double u) {
  const double t = std::tanh(u), s = 1.0 - t * t;
  return {t, s, -2.0 * t * s, -2.0 * s * (1.0 - 3.0 * t * t), 8.0 * t * s * (2.0 - 3.0 * t * t)};
}

std::array<double, 5> algebraic_derivatives(double u) {
  const double q = 1.0 + u * u;
  return {u / std::sqrt(q), std::pow(q, -1.5), -3.0 * u * std::pow(q, -2.5),
          (12.0 * u * u - 3.0) * std::pow(q, -3.5),
          (-60.0 * u * u * u + 45.0 * u) * std::pow(q, -4.5)};
}

}  // namespace

TEST(Sigmoid, ParseAndName) {
  EXPECT_EQ(parse_sigmoid_kind("tanh"), SigmoidKind::hyperbolic_tangent);
  EXPECT_EQ(parse_sigmoid_kind("logistic"), SigmoidKind::logistic_centered);
  EXPECT_EQ(parse_sigmoid_kind("algebraic"), SigmoidKind::algebraic);
  EXPECT_THROW(parse_sigmoid_kind("relu"), DomainError);
  EXPECT_EQ(to_string(SigmoidKind::hyperbolic_tangent), "tanh");
}

TEST(Sigmoid, TanhDerivativesMatchClosedForm) {
  const auto s = SigmoidFamily::tanh();
  for (double u : {-3.0, -0.7, 0.0, 0.4, 2.5}) {
    const auto ref = tanh_derivatives(u);
    for (int n = 0; n <= 4; ++n) EXPECT_NEAR(s.derivative(u, n), ref[static_cast<std::size_t>(n)], 1e-13) << u << " " << n;
  }
}

TEST(Sigmoid, LogisticIsScaledTanh) {
  const auto s = SigmoidFamily::logistic();
  for (double u : {-2.0, 0.3, 1.7}) {
    const auto ref = tanh_derivatives(u / 2.0);
    for (int n = 0; n <= 4; ++n) {
      EXPECT_NEAR(s.derivative(u, n), 2.0 * std::pow(0.5, n) * ref[static_cast<std::size_t>(n)], 1e-13);
    }
  }
}

TEST(Sigmoid, AlgebraicDerivativesMatchClosedForm) {
  const auto s = SigmoidFamily::algebraic();
  for (double u : {-1.5, 0.0, 0.2, 3.0}) {
    const auto ref = algebraic_derivatives(u);
    for (int n = 0; n <= 4; ++n) EXPECT_NEAR(s.derivative(u, n), ref[static_cast<std::size_t>(n)], 1e-12);
  }
}

TEST(Sigmoid, ProvidedKindsSatisfyAxioms) {
  for (const auto& s : {SigmoidFamily::tanh(), SigmoidFamily::logistic(), SigmoidFamily::algebraic()}) {
    const AxiomReport r = verify_sigmoid_axioms(s, default_axiom_grid());
    EXPECT_TRUE(r.all_passed()) << s.name();
    EXPECT_DOUBLE_EQ(s.derivative(0.0, 1), 1.0);
  }
}

TEST(Sigmoid, AxiomCheckRejectsAsymmetricGrid) {
  EXPECT_THROW(verify_sigmoid_axioms(SigmoidFamily::tanh(), {0.0, 1.0, 2.0}), DomainError);
  EXPECT_THROW(verify_sigmoid_axioms(SigmoidFamily::tanh(), {}), DomainError);
}

TEST(Sigmoid, RegisterRejectsNonSaturatingMap) {
  // the identity is odd, monotone and regular but never saturates
  const TaylorFn identity = [](double u, int order) {
    std::vector<double> c(static_cast<std::size_t>(order) + 1, 0.0);
    c[0] = u;
    if (order >= 1) c[1] = 1.0;
    return c;
  };
  EXPECT_THROW(register_custom_sigmoid("identity", identity), DomainError);
  const auto stub = SigmoidFamily::make_unverified("identity", identity);
  EXPECT_FALSE(stub.verified());
  const AxiomReport r = verify_sigmoid_axioms(stub, default_axiom_grid());
  EXPECT_FALSE(r.check(SigmoidAxiom::saturated).passed);
  EXPECT_TRUE(r.check(SigmoidAxiom::odd).passed);
}

TEST(Sigmoid, RegisterAcceptsScaledArctan) {
  // (2/pi) atan(pi u / 2): odd, S'(0) = 1, saturates like 1/u^2
  const TaylorFn f = [](double u, int order) {
    const double k = M_PI / 2.0;
    std::vector<double> c(static_cast<std::size_t>(order) + 1, 0.0);
    c[0] = std::atan(k * u) / k;
    // derivative of atan(k u)/k is 1/(1 + k^2 u^2); expand by series division
    const double a0 = 1.0 + k * k * u * u, a1 = 2.0 * k * k * u, a2 = k * k;
    std::vector<double> d(static_cast<std::size_t>(order), 0.0);
    for (int n = 0; n < order; ++n) {
      double rhs = n == 0 ? 1.0 : 0.0;
      if (n >= 1) rhs -= a1 * d[static_cast<std::size_t>(n - 1)];
      if (n >= 2) rhs -= a2 * d[static_cast<std::size_t>(n - 2)];
      d[static_cast<std::size_t>(n)] = rhs / a0;
    }
    for (int n = 1; n <= order; ++n) c[static_cast<std::size_t>(n)] = d[static_cast<std::size_t>(n - 1)] / n;
    return c;
  };
  const auto s = register_custom_sigmoid("arctan", f, 5e-3);
  EXPECT_TRUE(s.verified());
  EXPECT_EQ(s.kind(), SigmoidKind::custom);
  EXPECT_NEAR(s(1.0), std::atan(M_PI / 2.0) * 2.0 / M_PI, 1e-15);
}

TEST(Bump, EvenWithDoubleZeroAtOrigin) {
  const BumpNonlinearity b(SigmoidFamily::tanh(), 0.5);
  EXPECT_NEAR(b(0.0), 0.0, 1e-15);
  const Jet j = b.eval_jet(0.0, 4);
  EXPECT_NEAR(j.derivative(1), 0.0, 1e-15);
  EXPECT_NEAR(j.derivative(2), 2.0 * SigmoidFamily::tanh().derivative(0.5, 2), 1e-14);
  EXPECT_NEAR(j.derivative(3), 0.0, 1e-14);
  for (double u : {0.1, 0.8, 2.0}) EXPECT_NEAR(b(u), b(-u), 1e-15);
  EXPECT_LT(j.derivative(2), 0.0);
}

TEST(Bump, RejectsZeroOffset) {
  EXPECT_THROW(BumpNonlinearity(SigmoidFamily::tanh(), 0.0), DomainError);
}
