#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "octk/error.hpp"
#include "octk/integrate.hpp"

using namespace octk;

namespace {

CircuitODE bistable(double beta) {
  return circuit_ode(CircuitKind::bistable, SigmoidFamily::tanh(), {{"beta", beta}});
}

}  // namespace

TEST(Integrate, LinearCaseMatchesExactSolution) {
  // beta = -1 removes the feedback: x' = -x + tanh(-u), x = c + (x0 - c) e^{-t}
  const auto ode = bistable(-1.0);
  const double u = 0.3, x0 = 0.8, c = std::tanh(-u);
  const std::vector<double> init{x0};
  const Trajectory tr = integrate(ode, InputSignal::constant(u), init, 5.0);
  ASSERT_GT(tr.size(), 10u);
  EXPECT_DOUBLE_EQ(tr.times.front(), 0.0);
  EXPECT_NEAR(tr.times.back(), 5.0, 1e-12);
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const double exact = c + (x0 - c) * std::exp(-tr.times[i]);
    EXPECT_NEAR(tr.outputs[i], exact, 1e-6) << tr.times[i];
    EXPECT_DOUBLE_EQ(tr.u_applied[i], u);
  }
  EXPECT_EQ(tr.meta.method, "dopri5");
  EXPECT_DOUBLE_EQ(tr.meta.rtol, 1e-7);
  EXPECT_DOUBLE_EQ(tr.meta.max_step, 0.5);
  EXPECT_DOUBLE_EQ(tr.meta.dt_out, 0.2);
}

TEST(Integrate, RestartsAtPulseEdges) {
  // piecewise-constant drive: on each piece the solution relaxes toward tanh(-u)
  const auto ode = bistable(-1.0);
  const std::vector<double> init{0.0};
  const std::vector<PulseShape> pulses{{1.0, 1.0, 0.5}};
  const Trajectory tr = pulse_response(ode, 0.0, pulses, init, 4.0);
  EXPECT_EQ(tr.meta.restarts, 2u);
  const double c = std::tanh(-0.5);
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const double t = tr.times[i];
    double exact = 0.0;
    if (t >= 1.0 && t < 2.0) exact = c * (1.0 - std::exp(-(t - 1.0)));
    if (t >= 2.0) exact = c * (1.0 - std::exp(-1.0)) * std::exp(-(t - 2.0));
    EXPECT_NEAR(tr.outputs[i], exact, 1e-6) << t;
  }
}

TEST(Integrate, ZeroPulseFromTheOriginStaysAtZero) {
  const auto ode = bistable(0.5);
  const std::vector<double> init{0.0};
  const std::vector<PulseShape> pulses{{1.0, 1.0, 0.0}};
  const Trajectory tr = pulse_response(ode, 0.0, pulses, init, 3.0);
  for (double y : tr.outputs) EXPECT_EQ(y, 0.0);
}

TEST(Integrate, SliceAndState) {
  const auto ode = circuit_ode(CircuitKind::relaxation, SigmoidFamily::tanh(), {{"beta", 0.5}},
                               {0.1, 1.0});
  const std::vector<double> init{0.2, -0.1};
  const Trajectory tr = integrate(ode, InputSignal::constant(0.0), init, 2.0);
  EXPECT_EQ(tr.dimension, 2);
  EXPECT_DOUBLE_EQ(tr.state(0)[1], -0.1);
  const Trajectory s = tr.slice(0.5, 1.0);
  EXPECT_GE(s.times.front(), 0.5);
  EXPECT_LE(s.times.back(), 1.0);
  EXPECT_EQ(s.states.size(), 2 * s.size());
  EXPECT_EQ(default_initial_state(ode), (std::vector<double>{0.0, 0.0}));
}

TEST(Integrate, RejectsInvalidRequests) {
  const auto ode = bistable(0.5);
  const std::vector<double> one{0.0}, two{0.0, 0.0};
  EXPECT_THROW(integrate(ode, InputSignal::constant(0.0), two, 1.0), DomainError);
  EXPECT_THROW(integrate(ode, InputSignal::constant(0.0), one, 0.0), DomainError);
  EXPECT_THROW(integrate(ode, InputSignal::constant(0.0, InputChannel::alpha), one, 1.0),
               DomainError);
  const auto relax = circuit_ode(CircuitKind::relaxation, SigmoidFamily::tanh(), {{"beta", 0.5}},
                                 {0.01, 1.0});
  IntegratorOptions o;
  o.max_step = 0.1;
  EXPECT_THROW(integrate(relax, InputSignal::constant(0.0), two, 1.0, o), DomainError);
  const auto burst = circuit_ode(CircuitKind::burster, SigmoidFamily::tanh(),
                                 {{"alpha", 0.0}, {"beta", 0.5}, {"gamma", 1.0}}, {0.0075, 1.0 / 75},
                                 BursterExtras{});
  const std::vector<double> three{0.0, 0.0, 0.0};
  EXPECT_THROW(ramp_protocol(burst, 0.0, 1.0, 100.0, three), DomainError);
}

TEST(Integrate, StepUnderflowIsNumerical) {
  const auto relax = circuit_ode(CircuitKind::relaxation, SigmoidFamily::tanh(), {{"beta", 0.5}},
                                 {0.01, 1.0});
  IntegratorOptions o;
  o.rtol = 1e-14;
  o.atol = 1e-16;
  o.min_step = 0.004;
  const std::vector<double> x0{1e-3, 0.0};
  EXPECT_THROW(integrate(relax, InputSignal::constant(0.0), x0, 10.0, o), NumericalError);
}
