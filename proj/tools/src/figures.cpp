#include "octk/cli/figures.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "octk/error.hpp"

namespace octk::cli {

namespace {

const SigmoidFamily& tanh_family() {
  static const SigmoidFamily s = SigmoidFamily::tanh();
  return s;
}

double norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

/// Output at the last sample not after t.
double output_at(const Trajectory& traj, double t) {
  const auto it = std::upper_bound(traj.times.begin(), traj.times.end(), t);
  const auto i = it == traj.times.begin() ? 0 : static_cast<std::size_t>(it - traj.times.begin()) - 1;
  return traj.outputs[i];
}

/// Every k-th sample, chosen so neighbouring rows sit at least `spacing` apart.
Trajectory thin(const Trajectory& traj, double spacing) {
  if (traj.size() < 2) return traj;
  const double dt = traj.times[1] - traj.times[0];
  const auto stride = static_cast<std::size_t>(std::max(1.0, std::ceil(spacing / dt - 1e-9)));
  if (stride == 1) return traj;
  Trajectory out;
  out.dimension = traj.dimension;
  out.meta = traj.meta;
  out.ode = traj.ode;
  for (std::size_t i = 0; i < traj.size(); i += stride) {
    out.push(traj.times[i], traj.state(i), traj.outputs[i], traj.u_applied[i],
             traj.alpha_applied[i]);
  }
  return out;
}

std::string fmt(double v) { return format_number(v); }

Check check(std::string name, bool passed, std::string detail) {
  return {std::move(name), passed, std::move(detail)};
}

std::string label_of(const RegimeReport& r) { return std::string(to_string(r.label)); }

ClassifyOptions segment_options() {
  ClassifyOptions co;
  co.spikes.transient = 0.0;
  return co;
}

Json pulses_json(const std::vector<PulseShape>& pulses) {
  Json a = Json::array();
  for (const auto& p : pulses) a.push_back({{"t0", p.t0}, {"width", p.width}, {"height", p.height}});
  return a;
}

ParamVector wcusp_params(double alpha) {
  return {{"alpha", alpha}, {"beta", kRestSpikeBeta}, {"gamma", kRestSpikeGamma}, {"delta", kDelta}};
}

}  // namespace

bool FigureBundle::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

bool RestSpikeRun::toggled() const {
  return segments.size() == 3 && segments[0].label == RegimeLabel::quiescent &&
         segments[1].label == RegimeLabel::periodic_spiking &&
         segments[2].label == RegimeLabel::quiescent;
}

// ---------------------------------------------------------------------------

LatchRun latch_protocol(std::uint64_t seed) {
  const CircuitODE ode =
      circuit_ode(CircuitKind::bistable, tanh_family(), ParamVector{{"beta", 0.5}});
  const std::vector<PulseShape> pulses{{20.0, 10.0, -1.0}, {60.0, 10.0, 1.0}};
  const std::vector<double> x0{-1.0};
  LatchRun run;
  run.trajectory = pulse_response(ode, 0.0, pulses, x0, 100.0);
  run.y_before = output_at(run.trajectory, 19.9);
  run.y_set = output_at(run.trajectory, 55.0);
  run.y_reset = run.trajectory.outputs.back();
  const auto ics = probe_initial_conditions(1, 9, seed);
  run.probe = probe_bistability(ode, 0.0, ics, 200.0);
  return run;
}

RelaxationRun relaxation_protocol() {
  const CircuitODE ode = circuit_ode(CircuitKind::relaxation, tanh_family(),
                                     ParamVector{{"beta", kRelaxBeta}}, {kRelaxEpsF, kBurstEpsU});
  const std::vector<double> x0{1e-3, 0.0};
  RelaxationRun run;
  run.start_distance = norm(x0);
  run.trajectory = integrate(ode, InputSignal::constant(0.0), x0, 200.0);
  for (std::size_t i = 0; i < run.trajectory.size(); ++i) {
    const double d = norm(run.trajectory.state(i));
    run.max_distance = std::max(run.max_distance, d);
    if (run.escape_time < 0.0 && d > 0.1) run.escape_time = run.trajectory.times[i];
  }
  run.report = classify_trajectory(run.trajectory);
  return run;
}

ExcitabilityRun excitability_protocol() {
  const CircuitODE ode = circuit_ode(CircuitKind::relaxation, tanh_family(),
                                     ParamVector{{"beta", kRelaxBeta}}, {kRelaxEpsF, kBurstEpsU});
  ExcitabilityRun run;
  run.plateau_u = 0.45;
  run.pulses = {{150.0, 1.0, 0.1}, {200.0, 1.0, 0.1}};
  std::vector<InputSignal> signals{InputSignal::ramp(0.0, 50.0, 0.0, run.plateau_u)};
  for (const auto& p : run.pulses) signals.push_back(InputSignal::pulse(p.t0, p.width, p.height));
  const std::vector<double> x0{1e-3, 0.0};
  run.trajectory = integrate(ode, signals, x0, 250.0);
  run.before_pulses = classify_trajectory(run.trajectory.slice(90.0, 149.9), segment_options());
  ExcitabilityOptions eo;
  eo.response_window = 10.0;
  run.response = measure_excitability(run.trajectory, run.pulses, eo);
  return run;
}

CircuitSpec rest_spike_spec(double alpha) {
  return {CircuitKind::rest_spike, SigmoidKind::hyperbolic_tangent, wcusp_params(alpha),
          {kRestSpikeEpsF, kBurstEpsU}, std::nullopt};
}

AlphaSelection select_rest_spike_alpha(std::uint64_t seed) {
  AlphaSelection sel;
  ProblemSpec ps;
  ps.kind = "wcusp-circuit";
  ps.delta = kDelta;
  ps.params = {{"beta", kRestSpikeBeta}, {"gamma", kRestSpikeGamma}};
  const BifurcationProblem problem = make_problem(ps);
  sel.anchors = locate_bifurcation_variety(problem, ps.params, "alpha", SearchBox{}, -2.0, 2.0);
  if (sel.anchors.empty()) {
    sel.window = {-1.0, 1.0};
  } else {
    sel.window = {sel.anchors.front().parameter - 0.5, sel.anchors.back().parameter + 0.5};
  }
  DynamicScanSpec spec;
  spec.kind = CircuitKind::rest_spike;
  spec.sigmoid = tanh_family();
  spec.fixed = wcusp_params(0.0);
  spec.u = kRestSpikeU;
  spec.timescales = {kRestSpikeEpsF, kBurstEpsU};
  ProbeSpec probe;
  probe.seed = seed;
  sel.chart = scan_dynamic(spec, {{"alpha", sel.window.lo, sel.window.hi, 41}}, probe);
  sel.region = find_region(sel.chart, to_string(RegimeLabel::rest_spike_bistable));
  if (!sel.region.empty()) sel.alpha = sel.region.midpoint[0];
  return sel;
}

RestSpikeRun rest_spike_protocol(double alpha, std::uint64_t seed) {
  const CircuitODE ode = make_circuit(rest_spike_spec(alpha));
  RestSpikeRun run;
  run.alpha = alpha;
  const auto ics = probe_initial_conditions(2, 9, seed);
  run.probe = probe_bistability(ode, kRestSpikeU, ics, 200.0);

  run.alpha_pulses = {{100.0, 1.0, 0.3}, {250.0, 2.0, -0.3}};
  std::vector<InputSignal> signals{InputSignal::constant(kRestSpikeU)};
  for (const auto& p : run.alpha_pulses) {
    signals.push_back(InputSignal::pulse(p.t0, p.width, p.height, InputChannel::alpha));
  }
  const std::vector<double> x0{-1.2, -1.2};
  run.toggle = integrate(ode, signals, x0, 400.0);
  const ClassifyOptions co = segment_options();
  run.segments.push_back(classify_trajectory(run.toggle.slice(40.0, 99.0), co));
  run.segments.push_back(classify_trajectory(run.toggle.slice(150.0, 249.0), co));
  run.segments.push_back(classify_trajectory(run.toggle.slice(300.0, 400.0), co));
  return run;
}

CircuitSpec burster_spec(double alpha, BursterWiring wiring) {
  return {CircuitKind::burster, SigmoidKind::hyperbolic_tangent, wcusp_params(alpha),
          {kRestSpikeEpsF, kBurstEpsU}, BursterExtras{kBurstKu, kBurstXbar, wiring}};
}

BurstSelection select_burst_alpha(double rest_spike_alpha) {
  BurstSelection sel;
  for (auto wiring : {BursterWiring::gain_on_error, BursterWiring::gain_in_filter}) {
    // at the feedback set point the effective alpha equals the baseline minus this offset
    const double offset = wiring == BursterWiring::gain_on_error ? kBurstKu * kBurstXbar : kBurstXbar;
    const double centre = rest_spike_alpha - offset;
    DynamicScanSpec spec;
    spec.kind = CircuitKind::burster;
    spec.sigmoid = tanh_family();
    spec.fixed = wcusp_params(0.0);
    spec.u = kRestSpikeU;
    spec.timescales = {kRestSpikeEpsF, kBurstEpsU};
    spec.extras = BursterExtras{kBurstKu, kBurstXbar, wiring};
    ProbeSpec probe;
    probe.mode = ProbeMode::trajectory;
    sel.wiring = wiring;
    sel.chart = scan_dynamic(spec, {{"alpha", centre - kBurstKu, centre + kBurstKu, 81}}, probe);
    sel.region = find_region(sel.chart, to_string(RegimeLabel::bursting));
    sel.attempts.emplace_back(wiring, !sel.region.empty());
    if (!sel.region.empty()) {
      sel.alpha = sel.region.midpoint[0];
      break;
    }
  }
  return sel;
}

BurstRun burst_protocol(double alpha, BursterWiring wiring) {
  const CircuitODE ode = make_circuit(burster_spec(alpha, wiring));
  BurstRun run;
  run.alpha = alpha;
  run.wiring = wiring;
  run.u_from = 0.4;
  run.u_to = 1.0;
  // one settling window at the bursting input, then a slow ramp to the tonic range
  const double settle = 10.0 / kBurstEpsU;
  const double t_end = 4.0 * settle;
  const std::vector<double> x0 = default_initial_state(ode);
  run.ramp = integrate(ode, InputSignal::ramp(settle, t_end, run.u_from, run.u_to), x0, t_end);
  run.early = classify_trajectory(run.ramp.slice(0.0, settle));
  run.late = classify_trajectory(run.ramp.slice(t_end - settle, t_end));
  return run;
}

// ---------------------------------------------------------------------------

FigureBundle figure4(std::uint64_t seed) {
  FigureBundle b;
  b.figure = "fig4";
  const LatchRun run = latch_protocol(seed);
  b.trajectories.emplace_back("fig4_latch", run.trajectory);

  ProblemSpec ps;
  ps.kind = "hysteresis-circuit";
  ps.convention = SignConvention::dynamic_input;
  ps.params = {{"beta", 0.5}};
  const BranchDiagram d = trace(make_problem(ps), ps.params, {-1.0, 1.0}, {-1.2, 1.2});
  const DiagramClass dc = classify(d);
  b.diagrams.emplace_back("fig4_diagram", d);

  b.checks.push_back(check("latch holds the low state", run.y_before < -0.5, "y=" + fmt(run.y_before)));
  b.checks.push_back(check("set pulse latches high", run.y_set > 0.5, "y=" + fmt(run.y_set)));
  b.checks.push_back(check("reset pulse latches low", run.y_reset < -0.5, "y=" + fmt(run.y_reset)));
  b.checks.push_back(check("probe finds bistable-switch",
                           run.probe.label == RegimeLabel::bistable_switch, label_of(run.probe)));
  b.checks.push_back(check("diagram is bistable-hysteresis",
                           dc.label == DiagramLabel::bistable_hysteresis,
                           std::string(to_string(dc.label))));

  b.summary["parameters"] = {{"circuit", to_json(describe(*run.trajectory.ode))},
                             {"u", 0.0},
                             {"x0", {-1.0}},
                             {"pulses", pulses_json({{20.0, 10.0, -1.0}, {60.0, 10.0, 1.0}})},
                             {"t_end", 100.0},
                             {"probe_seed", seed}};
  b.summary["latch"] = {{"y_before", run.y_before}, {"y_set", run.y_set}, {"y_reset", run.y_reset}};
  b.summary["probe"] = to_json(run.probe);
  b.summary["diagram_class"] = to_json(dc);
  return b;
}

FigureBundle figure5() {
  FigureBundle b;
  b.figure = "fig5";
  const RelaxationRun rel = relaxation_protocol();
  const ExcitabilityRun exc = excitability_protocol();
  b.trajectories.emplace_back("fig5_relaxation", thin(rel.trajectory, 0.01));
  b.trajectories.emplace_back("fig5_excitability", thin(exc.trajectory, 0.01));

  const double cv = rel.report.evidence.isi_cv.value_or(INFINITY);
  b.checks.push_back(check("relaxation is periodic-spiking",
                           rel.report.label == RegimeLabel::periodic_spiking, label_of(rel.report)));
  b.checks.push_back(check("period CV below 0.05", cv < 0.05, "cv=" + fmt(cv)));
  b.checks.push_back(check("origin is unstable", rel.escape_time >= 0.0,
                           "escape at t=" + fmt(rel.escape_time)));
  b.checks.push_back(check("rest before the pulses", exc.before_pulses.label == RegimeLabel::quiescent,
                           label_of(exc.before_pulses)));
  std::ostringstream ratios;
  bool all = !exc.response.evidence.pulse_ratios.empty();
  for (double r : exc.response.evidence.pulse_ratios) {
    ratios << fmt(r) << ' ';
    all = all && r >= 5.0;
  }
  b.checks.push_back(check("each pulse gives a 5x excursion", all, ratios.str()));

  b.summary["relaxation"] = {{"circuit", to_json(describe(*rel.trajectory.ode))},
                             {"u", 0.0},
                             {"x0", {1e-3, 0.0}},
                             {"t_end", 200.0},
                             {"report", to_json(rel.report)},
                             {"escape_time", rel.escape_time},
                             {"max_distance", rel.max_distance}};
  b.summary["excitability"] = {{"ramp", {{"t0", 0.0}, {"t1", 50.0}, {"v0", 0.0}, {"v1", exc.plateau_u}}},
                               {"pulses", pulses_json(exc.pulses)},
                               {"t_end", 250.0},
                               {"before_pulses", to_json(exc.before_pulses)},
                               {"response", to_json(exc.response)}};
  return b;
}

namespace {

void add_rest_spike(FigureBundle& b, const AlphaSelection& sel, std::uint64_t seed) {
  Json anchors = Json::array();
  for (const auto& a : sel.anchors) anchors.push_back({{"alpha", a.parameter}, {"y", a.y}, {"u", a.u}});
  b.summary["alpha_selection"] = {{"variety_anchors", anchors},
                                  {"window", {sel.window.lo, sel.window.hi}},
                                  {"region", to_json(sel.region)},
                                  {"alpha", sel.alpha ? Json(*sel.alpha) : Json(nullptr)},
                                  {"seed", seed}};
  b.checks.push_back(check("alpha scan finds rest-spike bistability", sel.alpha.has_value(),
                           sel.alpha ? "alpha=" + fmt(*sel.alpha) : "no coexistence in the window"));
}

}  // namespace

FigureBundle figure6(std::uint64_t seed) {
  FigureBundle b;
  b.figure = "fig6";
  const AlphaSelection sel = select_rest_spike_alpha(seed);
  b.charts.emplace_back("fig6_alpha_scan", sel.chart);
  add_rest_spike(b, sel, seed);
  if (!sel.alpha) return b;

  const RestSpikeRun run = rest_spike_protocol(*sel.alpha, seed);
  b.trajectories.emplace_back("fig6_toggle", run.toggle);
  const auto& ev = run.probe.evidence;
  b.checks.push_back(check("equilibrium and periodic attractors coexist",
                           ev.equilibrium_clusters >= 1 && ev.periodic_clusters >= 1,
                           "equilibria=" + std::to_string(ev.equilibrium_clusters) +
                               " periodic=" + std::to_string(ev.periodic_clusters)));
  b.checks.push_back(check("alpha pulses toggle rest and spiking", run.toggled(),
                           label_of(run.segments[0]) + " -> " + label_of(run.segments[1]) + " -> " +
                               label_of(run.segments[2])));
  Json segs = Json::array();
  for (const auto& s : run.segments) segs.push_back(to_json(s));
  b.summary["rest_spike"] = {{"circuit", to_json(rest_spike_spec(run.alpha))},
                             {"u", kRestSpikeU},
                             {"probe", to_json(run.probe)},
                             {"alpha_pulses", pulses_json(run.alpha_pulses)},
                             {"x0", {-1.2, -1.2}},
                             {"t_end", 400.0},
                             {"segments", segs}};
  return b;
}

FigureBundle figure7(std::uint64_t seed) {
  FigureBundle b;
  b.figure = "fig7";
  const AlphaSelection rs = select_rest_spike_alpha(seed);
  add_rest_spike(b, rs, seed);
  if (!rs.alpha) return b;

  const BurstSelection sel = select_burst_alpha(*rs.alpha);
  b.charts.emplace_back("fig7_alpha_scan", sel.chart);
  Json attempts = Json::array();
  for (const auto& [w, ok] : sel.attempts) {
    attempts.push_back({{"wiring", std::string(to_string(w))}, {"bursting_found", ok}});
  }
  b.summary["burst_selection"] = {{"wiring", std::string(to_string(sel.wiring))},
                                  {"attempts", attempts},
                                  {"region", to_json(sel.region)},
                                  {"alpha", sel.alpha ? Json(*sel.alpha) : Json(nullptr)}};
  b.checks.push_back(check("alpha scan finds bursting", sel.alpha.has_value(),
                           "wiring=" + std::string(to_string(sel.wiring))));
  if (!sel.alpha) return b;

  const BurstRun run = burst_protocol(*sel.alpha, sel.wiring);
  b.trajectories.emplace_back("fig7_ramp", thin(run.ramp, 0.03));
  const auto& ev = run.early.evidence;
  const std::size_t min_spb =
      ev.spikes_per_burst.empty() ? 0 : *std::min_element(ev.spikes_per_burst.begin(), ev.spikes_per_burst.end());
  const double sep = ev.separation.value_or(0.0);
  b.checks.push_back(check("early segment is bursting", run.early.label == RegimeLabel::bursting,
                           label_of(run.early)));
  b.checks.push_back(check("at least 2 spikes per burst", min_spb >= 2,
                           "min=" + std::to_string(min_spb)));
  b.checks.push_back(check("ISI clusters separated 5x", sep >= 5.0, "separation=" + fmt(sep)));
  b.checks.push_back(check("late segment is tonic spiking",
                           run.late.label == RegimeLabel::periodic_spiking, label_of(run.late)));

  // the rest-spike alpha used directly as the baseline, kept for reference only
  const CircuitODE literal = make_circuit(burster_spec(*rs.alpha, sel.wiring));
  const Trajectory lt = integrate(literal, InputSignal::constant(kRestSpikeU),
                                  default_initial_state(literal), 10.0 / kBurstEpsU);
  const RegimeReport lr = classify_trajectory(lt.slice(5.0 / kBurstEpsU, 10.0 / kBurstEpsU), segment_options());

  b.summary["burst"] = {{"circuit", to_json(burster_spec(run.alpha, run.wiring))},
                        {"ramp", {{"t0", 10.0 / kBurstEpsU},
                                  {"t1", 40.0 / kBurstEpsU},
                                  {"v0", run.u_from},
                                  {"v1", run.u_to}}},
                        {"csv_min_spacing", 0.03},
                        {"early", to_json(run.early)},
                        {"late", to_json(run.late)},
                        {"rest_spike_alpha_as_baseline",
                         {{"alpha", *rs.alpha}, {"u", kRestSpikeU}, {"report", to_json(lr)}}}};
  return b;
}

FigureBundle figure(std::string_view name, std::uint64_t seed) {
  if (name == "fig4") return figure4(seed);
  if (name == "fig5") return figure5();
  if (name == "fig6") return figure6(seed);
  if (name == "fig7") return figure7(seed);
  throw DomainError("unknown figure '" + std::string(name) + "' (expected fig4, fig5, fig6 or fig7)");
}

}  // namespace octk::cli
