#include <cmath>

#include <gtest/gtest.h>

#include "octk/error.hpp"
#include "octk/jet.hpp"

using namespace octk;

namespace {

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

}  // namespace

TEST(Jet, VariableAndConstant) {
  const Jet x = Jet::variable(2.0, 3);
  EXPECT_DOUBLE_EQ(x.coefficient(0), 2.0);
  EXPECT_DOUBLE_EQ(x.coefficient(1), 1.0);
  EXPECT_DOUBLE_EQ(x.coefficient(2), 0.0);
  const Jet c = Jet::constant(2.0, 5.0, 3);
  EXPECT_DOUBLE_EQ(c.derivative(0), 5.0);
  EXPECT_DOUBLE_EQ(c.derivative(1), 0.0);
}

TEST(Jet, CubeMatchesBinomialExpansion) {
  // (a + h)^3 = a^3 + 3a^2 h + 3a h^2 + h^3
  const double a = 1.5;
  const Jet x = Jet::variable(a, 5);
  const Jet y = x * x * x;
  EXPECT_DOUBLE_EQ(y.coefficient(0), a * a * a);
  EXPECT_DOUBLE_EQ(y.coefficient(1), 3 * a * a);
  EXPECT_DOUBLE_EQ(y.coefficient(2), 3 * a);
  EXPECT_DOUBLE_EQ(y.coefficient(3), 1.0);
  EXPECT_DOUBLE_EQ(y.coefficient(4), 0.0);
  EXPECT_DOUBLE_EQ(y.derivative(3), 6.0);
}

TEST(Jet, MixedOrderTruncatesToTheSmaller) {
  const Jet a = Jet::variable(0.0, 2);
  const Jet b = Jet::variable(0.0, 5);
  EXPECT_EQ((a * b).order(), 2);
  EXPECT_EQ((a + b).order(), 2);
}

TEST(Jet, ComposeExpOfSine) {
  // exp(sin(x)) about 0: 1 + x + x^2/2 + 0 x^3 - x^4/8
  const Jet inner = [] {
    const double c[] = {0.0, 1.0, 0.0, -1.0 / 6.0, 0.0};
    return Jet(0.0, c);
  }();
  std::vector<double> e(5);
  for (int n = 0; n < 5; ++n) e[static_cast<std::size_t>(n)] = 1.0 / factorial(n);
  const Jet outer(0.0, e);
  const Jet f = compose(outer, inner);
  EXPECT_NEAR(f.coefficient(0), 1.0, 1e-15);
  EXPECT_NEAR(f.coefficient(1), 1.0, 1e-15);
  EXPECT_NEAR(f.coefficient(2), 0.5, 1e-15);
  EXPECT_NEAR(f.coefficient(3), 0.0, 1e-15);
  EXPECT_NEAR(f.coefficient(4), -1.0 / 8.0, 1e-15);
}

TEST(Jet, ComposeRejectsMismatchedCenter) {
  const Jet inner = Jet::variable(1.0, 2);
  const Jet outer = Jet::variable(0.0, 2);
  EXPECT_THROW(compose(outer, inner), DomainError);
}

TEST(Jet, RejectsTooManyCoefficients) {
  const std::vector<double> c(Jet::kMaxOrder + 2, 1.0);
  EXPECT_THROW(Jet(0.0, c), DomainError);
  EXPECT_THROW(Jet(0.0, std::span<const double>{}), DomainError);
}

TEST(MultiJet, MixedPartialsOfPolynomial) {
  // f = x^2 y + 3 x y^2 at (1, 2): f_x = 2xy + 3y^2 = 16, f_y = x^2 + 6xy = 13,
  // f_xy = 2x + 6y = 14, f_xx = 2y = 4, f_yy = 6x = 6, f_xxy = 2, f_xyy = 6
  const MultiJet x = MultiJet::variable(2, 3, 0, 1.0);
  const MultiJet y = MultiJet::variable(2, 3, 1, 2.0);
  const MultiJet f = x * x * y + 3.0 * x * y * y;
  EXPECT_DOUBLE_EQ(f.value(), 2.0 + 12.0);
  EXPECT_DOUBLE_EQ(f.partial({1, 0, 0}), 16.0);
  EXPECT_DOUBLE_EQ(f.partial({0, 1, 0}), 13.0);
  EXPECT_DOUBLE_EQ(f.partial({1, 1, 0}), 14.0);
  EXPECT_DOUBLE_EQ(f.partial({2, 0, 0}), 4.0);
  EXPECT_DOUBLE_EQ(f.partial({0, 2, 0}), 6.0);
  EXPECT_DOUBLE_EQ(f.partial({2, 1, 0}), 2.0);
  EXPECT_DOUBLE_EQ(f.partial({1, 2, 0}), 6.0);
  EXPECT_DOUBLE_EQ(f.partial({3, 0, 0}), 0.0);
}

TEST(MultiJet, ApplyMatchesChainRule) {
  // sin(x y) at (0.3, 0.7): d/dx = y cos(xy), d2/dxdy = cos(xy) - xy sin(xy)
  const double a = 0.3, b = 0.7, s = a * b;
  const MultiJet x = MultiJet::variable(2, 3, 0, a);
  const MultiJet y = MultiJet::variable(2, 3, 1, b);
  const MultiJet p = x * y;
  const double taylor[] = {std::sin(s), std::cos(s), -std::sin(s) / 2, -std::cos(s) / 6};
  const MultiJet f = p.apply(taylor);
  EXPECT_NEAR(f.partial({1, 0, 0}), b * std::cos(s), 1e-14);
  EXPECT_NEAR(f.partial({1, 1, 0}), std::cos(s) - s * std::sin(s), 1e-14);
  EXPECT_NEAR(f.partial({2, 0, 0}), -b * b * std::sin(s), 1e-14);
}
