#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "octk/error.hpp"
#include "octk/signal.hpp"

using namespace octk;

TEST(Signal, PulseIsHalfOpen) {
  const auto s = InputSignal::pulse(1.0, 2.0, 0.5);
  EXPECT_DOUBLE_EQ(s(0.999), 0.0);
  EXPECT_DOUBLE_EQ(s(1.0), 0.5);
  EXPECT_DOUBLE_EQ(s(2.999), 0.5);
  EXPECT_DOUBLE_EQ(s(3.0), 0.0);
  EXPECT_DOUBLE_EQ(s.value(1.0, Side::left), 0.0);
  EXPECT_DOUBLE_EQ(s.value(3.0, Side::left), 0.5);
}

TEST(Signal, RampHoldsItsEndValues) {
  const auto r = InputSignal::ramp(2.0, 4.0, -1.0, 1.0);
  EXPECT_DOUBLE_EQ(r(0.0), -1.0);
  EXPECT_DOUBLE_EQ(r(3.0), 0.0);
  EXPECT_DOUBLE_EQ(r(3.5), 0.5);
  EXPECT_DOUBLE_EQ(r(10.0), 1.0);
}

TEST(Signal, SumAndBreakpoints) {
  const auto s = InputSignal::constant(0.2) + InputSignal::pulse(5.0, 1.0, 1.0) +
                 InputSignal::ramp(0.0, 10.0, 0.0, 1.0);
  EXPECT_NEAR(s(5.5), 0.2 + 1.0 + 0.55, 1e-15);
  EXPECT_EQ(s.breakpoints(0.0, 20.0), (std::vector<double>{5.0, 6.0, 10.0}));
  EXPECT_EQ(s.breakpoints(5.5, 20.0), (std::vector<double>{6.0, 10.0}));
  // zero-height pulses and flat ramps do not interrupt the integrator
  const auto flat = InputSignal::pulse(1.0, 1.0, 0.0) + InputSignal::ramp(1.0, 2.0, 3.0, 3.0);
  EXPECT_TRUE(flat.breakpoints(0.0, 5.0).empty());
}

TEST(Signal, ChannelsDoNotMix) {
  const auto u = InputSignal::constant(1.0);
  const auto a = InputSignal::constant(1.0, InputChannel::alpha);
  EXPECT_THROW(u + a, DomainError);
  EXPECT_EQ(parse_input_channel("alpha"), InputChannel::alpha);
  EXPECT_EQ(to_string(InputChannel::u), "u");
  EXPECT_THROW(parse_input_channel("beta"), DomainError);
}

TEST(Signal, RejectsInvalidTerms) {
  EXPECT_THROW(InputSignal::pulse(0.0, -1.0, 1.0), DomainError);
  EXPECT_THROW(InputSignal::ramp(2.0, 1.0, 0.0, 1.0), DomainError);
  EXPECT_THROW(InputSignal::constant(std::numeric_limits<double>::quiet_NaN()), DomainError);
}
