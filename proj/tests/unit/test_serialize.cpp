#include <cmath>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "octk/error.hpp"
#include "octk/serialize.hpp"

using namespace octk;

namespace {

/// Field path of the ConfigError raised by f, or "" when nothing is thrown.
template <class F>
std::string error_field(F&& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

TEST(Serialize, FormatNumberIsShortestRoundTrip) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(-2.0), "-2");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.3333333333333333");
  EXPECT_EQ(std::stod(format_number(M_PI)), M_PI);
  EXPECT_EQ(format_number(NAN), "nan");
}

TEST(Serialize, ProblemSpecRoundTrip) {
  ProblemSpec spec;
  spec.kind = "wcusp-circuit";
  spec.sigmoid = SigmoidKind::algebraic;
  spec.delta = 0.7;
  spec.params = {{"alpha", 0.1}, {"gamma", 1.0}};
  const Json j = to_json(spec);
  const ProblemSpec back = problem_spec_from_json(j);
  EXPECT_EQ(to_json(back), j);
  EXPECT_EQ(back.sigmoid, SigmoidKind::algebraic);
}

TEST(Serialize, ProblemSpecErrorsNameTheField) {
  EXPECT_EQ(error_field([] { problem_spec_from_json(Json{{"kind", "pitchfork"}}); }), "problem.kind");
  EXPECT_EQ(error_field([] { problem_spec_from_json(Json::object()); }), "problem.kind");
  EXPECT_EQ(error_field([] {
              problem_spec_from_json(Json{{"kind", "hysteresis-unfolding"}, {"params", {{"betta", 1}}}});
            }),
            "problem.params.betta");
  EXPECT_EQ(error_field([] { problem_spec_from_json(Json{{"kind", "wcusp"}, {"sigmoid", "relu"}}); }),
            "problem.sigmoid");
  EXPECT_EQ(error_field([] { problem_spec_from_json(Json{{"kind", "wcusp"}, {"colour", 1}}); }),
            "problem.colour");
}

TEST(Serialize, CircuitSpecRoundTripAndBursterDefaults) {
  const Json j{{"kind", "burster"}, {"params", {{"beta", 0.5}, {"gamma", 1.0}}}};
  const CircuitSpec spec = circuit_spec_from_json(j);
  ASSERT_TRUE(spec.extras.has_value());
  EXPECT_DOUBLE_EQ(spec.extras->k_u, 5.0);
  EXPECT_EQ(circuit_spec_from_json(to_json(spec)).extras->wiring, BursterWiring::gain_on_error);
  const CircuitODE ode = make_circuit(spec);
  EXPECT_EQ(to_json(describe(ode)), to_json(spec));
  EXPECT_EQ(error_field([] {
              circuit_spec_from_json(Json{{"kind", "relaxation"}, {"timescales", {{"eps_f", 2.0}}}});
            }).rfind("ode", 0),
            0u);
  EXPECT_EQ(error_field([] {
              circuit_spec_from_json(Json{{"kind", "burster"}, {"extras", {{"wiring", "loose"}}}});
            }),
            "ode.extras.wiring");
}

TEST(Serialize, SignalRoundTrip) {
  const InputSignal s = InputSignal::constant(0.2) + InputSignal::pulse(1.0, 2.0, 0.5) +
                        InputSignal::ramp(0.0, 4.0, 0.0, 1.0);
  const Json j = to_json(s);
  EXPECT_EQ(to_json(signal_from_json(j)), j);
  EXPECT_EQ(error_field([] {
              signal_from_json(Json{{"channel", "u"}, {"terms", {{{"type", "pulse"}, {"t0", 0}, {"width", -1}, {"height", 1}}}}});
            }).rfind("signal.terms", 0),
            0u);
}

TEST(Serialize, TrajectoryCsvAndJson) {
  const auto ode = circuit_ode(CircuitKind::relaxation, SigmoidFamily::tanh(), {{"beta", 0.5}},
                               {0.1, 1.0});
  const std::vector<double> x0{0.1, 0.0};
  const Trajectory tr = integrate(ode, InputSignal::constant(0.0), x0, 1.0);
  std::ostringstream csv;
  write_trajectory_csv(csv, tr);
  EXPECT_EQ(first_line(csv.str()), "t,x0,x1,y,u,alpha");
  std::istringstream in(csv.str());
  const Trajectory back = read_trajectory_csv(in);
  EXPECT_FALSE(back.ode.has_value());
  ASSERT_EQ(back.size(), tr.size());
  EXPECT_EQ(back.states, tr.states);
  EXPECT_EQ(back.times, tr.times);

  const Json j = trajectory_to_json(tr);
  const Trajectory fromj = trajectory_from_json(j);
  ASSERT_TRUE(fromj.ode.has_value());
  EXPECT_EQ(fromj.outputs, tr.outputs);
  EXPECT_EQ(trajectory_to_json(fromj), j);

  std::istringstream bad("t,x0,y\n0,1\n");
  EXPECT_THROW(read_trajectory_csv(bad), Error);
}

TEST(Serialize, DiagramAndChartCsvHeaders) {
  const auto p = normal_form(NormalForm::hysteresis_unfolding);
  const BranchDiagram d = trace(p, {{"beta", 1.0}}, {-1.0, 1.0}, {-1.5, 1.5});
  std::ostringstream dc;
  write_diagram_csv(dc, d);
  EXPECT_EQ(first_line(dc.str()), "branch_id,u,y,stability");
  const Json dj = to_json(d);
  EXPECT_EQ(dj["folds"].size(), 2u);

  StaticScanOptions o;
  o.u_window = {-1.0, 1.0};
  const ParameterChart c = scan_static(p, {}, {{"beta", -1.0, 1.0, 3}}, o);
  std::ostringstream cc;
  write_chart_csv(cc, c);
  EXPECT_EQ(first_line(cc.str()), "beta,label,varieties,failed");
  EXPECT_NE(cc.str().find("hysteresis"), std::string::npos);
}
