#include <cmath>

#include <gtest/gtest.h>

#include "octk/error.hpp"
#include "octk/scan.hpp"

using namespace octk;

namespace {

BifurcationProblem dynamic_hysteresis_circuit() {
  ProblemSpec spec;
  spec.kind = "hysteresis-circuit";
  spec.convention = SignConvention::dynamic_input;
  return make_problem(spec);
}

}  // namespace

TEST(ScanAxis, CellCentres) {
  const ScanAxis a{"beta", -1.0, 1.0, 41};
  EXPECT_DOUBLE_EQ(a.value(0), -1.0);
  EXPECT_DOUBLE_EQ(a.value(20), 0.0);
  EXPECT_DOUBLE_EQ(a.value(40), 1.0);
  EXPECT_DOUBLE_EQ(a.spacing(), 0.05);
  const ScanAxis one{"beta", 0.0, 2.0, 1};
  EXPECT_DOUBLE_EQ(one.value(0), 1.0);
}

TEST(ScanStatic, BetaBoundarySitsAtZero) {
  const ScanAxis axis{"beta", -1.0, 1.0, 41};
  const ParameterChart chart = scan_static(dynamic_hysteresis_circuit(), {}, {axis});
  ASSERT_EQ(chart.cells.size(), 41u);
  for (int i = 0; i < 41; ++i) {
    const double beta = axis.value(i);
    if (beta < -axis.spacing()) EXPECT_EQ(chart.cell(i).label, "monotone") << beta;
    if (beta > axis.spacing()) EXPECT_EQ(chart.cell(i).label, "bistable-hysteresis") << beta;
  }
  ASSERT_EQ(chart.boundaries.size(), 1u);
  EXPECT_LE(std::abs(chart.boundaries[0].point[0]), axis.spacing());

  // the hysteresis variety beta = 0 is flagged on the centre cell only
  for (int i = 0; i < 41; ++i) {
    const auto& v = chart.cell(i).varieties;
    const bool has = std::find(v.begin(), v.end(), Variety::hysteresis) != v.end();
    EXPECT_EQ(has, i == 20) << i;
  }

  const Region r = find_region(chart, "bistable-hysteresis");
  EXPECT_GE(r.cells.size(), 19u);
  EXPECT_NEAR(r.bounding_box[0].hi, 1.0, 1e-12);
  EXPECT_LE(r.bounding_box[0].lo, 2.0 * axis.spacing());
  EXPECT_TRUE(find_region(chart, "mirrored-hysteresis").empty());
  EXPECT_THROW(find_region(chart, "bursting"), DomainError);
}

TEST(ScanStatic, TwoAxesAreRowMajor) {
  const auto p = normal_form(NormalForm::wcusp_unfolding);
  const std::vector<ScanAxis> axes{{"alpha", -0.5, 0.5, 3}, {"beta", 0.5, 1.0, 2}};
  StaticScanOptions o;
  o.flag_varieties = false;
  const ParameterChart chart = scan_static(p, {}, axes, o);
  ASSERT_EQ(chart.cells.size(), 6u);
  EXPECT_EQ(chart.flat_index(2, 1), 5u);
  EXPECT_DOUBLE_EQ(chart.cell(1, 1).coords[0], 0.0);
  EXPECT_DOUBLE_EQ(chart.cell(1, 1).coords[1], 1.0);
}

TEST(ScanStatic, RejectsBadAxes) {
  const auto p = dynamic_hysteresis_circuit();
  EXPECT_THROW(scan_static(p, {}, {{"gamma", 0.0, 1.0, 3}}), DomainError);
  EXPECT_THROW(scan_static(p, {}, {{"beta", 0.0, 1.0, 0}}), DomainError);
  EXPECT_THROW(scan_static(p, {}, {{"beta", 0.0, 1.0, kMaxScanResolution + 1}}), DomainError);
  EXPECT_THROW(scan_static(p, {}, {{"beta", 1.0, 0.0, 3}}), DomainError);
  EXPECT_THROW(scan_static(p, {}, {{"beta", 0.0, 1.0, 3}, {"beta", 0.0, 1.0, 3}}), DomainError);
  EXPECT_THROW(scan_static(p, {}, {}), DomainError);
}

TEST(ScanDynamic, BistableLatchAppearsForPositiveBeta) {
  DynamicScanSpec spec;
  spec.kind = CircuitKind::bistable;
  ProbeSpec probe;
  probe.t_end = 60.0;
  const ParameterChart chart = scan_dynamic(spec, {{"beta", -1.0, 1.0, 4}}, probe);
  EXPECT_EQ(chart.kind, ChartKind::dynamic_regimes);
  EXPECT_EQ(chart.cell(0).label, "monostable");
  EXPECT_EQ(chart.cell(1).label, "monostable");
  EXPECT_EQ(chart.cell(2).label, "bistable-switch");
  EXPECT_EQ(chart.cell(3).label, "bistable-switch");
  const Region r = find_region(chart, "bistable-switch");
  EXPECT_NEAR(r.midpoint[0], 2.0 / 3.0, 1e-12);
  EXPECT_THROW(find_region(chart, "bistable-hysteresis"), DomainError);
}

TEST(ScanDynamic, InputAxisAndDefaults) {
  DynamicScanSpec spec;
  spec.kind = CircuitKind::burster;
  spec.extras = BursterExtras{};
  EXPECT_DOUBLE_EQ(default_probe_time(spec), 750.0);
  spec.kind = CircuitKind::relaxation;
  spec.fixed = {{"beta", 0.5}};
  spec.timescales.eps_f = 0.01;
  EXPECT_DOUBLE_EQ(default_probe_time(spec), 200.0);
  ProbeSpec probe;
  probe.mode = ProbeMode::trajectory;
  probe.t_end = 100.0;
  probe.x0 = {1e-3, 0.0};  // the origin itself is an equilibrium
  // far from zero input the fast nullcline has a single stable branch and the cycle dies
  const ParameterChart chart = scan_dynamic(spec, {{"u", -3.0, 0.0, 2}}, probe);
  EXPECT_EQ(chart.cell(0).label, "quiescent");
  EXPECT_EQ(chart.cell(1).label, "periodic-spiking");
  EXPECT_EQ(parse_probe_mode("trajectory"), ProbeMode::trajectory);
  EXPECT_THROW(parse_probe_mode("sweep"), DomainError);
}
