#include "octk/cli/run.hpp"

#include <fstream>
#include <sstream>

#include "octk/cli/figures.hpp"
#include "octk/error.hpp"

#ifndef OCTK_VERSION
#define OCTK_VERSION "0.0.0"
#endif

namespace octk::cli {

namespace fs = std::filesystem;

std::string_view version() { return OCTK_VERSION; }

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

namespace {

template <class Writer, class T>
std::string render(Writer w, const T& value) {
  std::ostringstream os;
  w(os, value);
  return os.str();
}

Json manifest(const Json& config, const std::vector<Artifact>& artifacts) {
  Json names = Json::array();
  for (const auto& a : artifacts) names.push_back(a.name);
  names.push_back("manifest.json");
  return {{"tool", "octk"}, {"version", std::string(version())}, {"config", config},
          {"artifacts", names}};
}

RunResult run_recognize(const RunConfig& cfg) {
  const auto& o = cfg.recognize;
  const BifurcationProblem problem = make_problem(*cfg.problem);
  const ParamVector& params = cfg.problem->params;
  RecognitionVerdict v;
  switch (o.singularity) {
    case Singularity::hysteresis:
      v = check_hysteresis(problem, o.y, o.u, params, o.recognition);
      break;
    case Singularity::wcusp:
      v = check_wcusp(problem, o.y, o.u, params, o.recognition);
      break;
    case Singularity::hysteresis_unfolding:
      v = check_hysteresis_unfolding(problem, o.recognition, o.parameter);
      break;
  }
  Json out = to_json(v);
  if (o.varieties) out["varieties"] = to_json(variety_membership(problem, params, o.box));
  RunResult r;
  r.artifacts.push_back({"verdict.json", dump(out)});
  r.summary = v.singularity + ": " + (v.passed ? "passed" : "failed");
  return r;
}

RunResult run_trace(const RunConfig& cfg) {
  const auto& o = cfg.trace;
  const BranchDiagram d =
      trace(make_problem(*cfg.problem), cfg.problem->params, o.u_window, o.y_window, o.trace);
  Json out = to_json(d);
  std::string label = "empty";
  if (!d.empty()) {
    const DiagramClass c = classify(d);
    out["class"] = to_json(c);
    label = std::string(to_string(c.label));
  } else {
    out["class"] = nullptr;
  }
  RunResult r;
  r.artifacts.push_back({"diagram.csv", render(write_diagram_csv, d)});
  r.artifacts.push_back({"diagram.json", dump(out)});
  r.summary = std::to_string(d.branches.size()) + " branches, " + std::to_string(d.folds.size()) +
              " folds, " + label;
  return r;
}

RunResult run_simulate(const RunConfig& cfg) {
  const auto& o = cfg.simulate;
  const CircuitODE ode = make_circuit(*cfg.ode);
  const std::vector<double> x0 = o.x0.empty() ? default_initial_state(ode) : o.x0;
  const Trajectory traj = integrate(ode, o.signals, x0, o.t_end, o.integrator);
  RunResult r;
  r.artifacts.push_back({"trajectory.csv", render(write_trajectory_csv, traj)});
  r.artifacts.push_back({"trajectory.json", dump(trajectory_to_json(traj))});
  r.summary = std::to_string(traj.size()) + " samples";
  if (o.classify) {
    const RegimeReport rep = classify_trajectory(traj);
    r.artifacts.push_back({"report.json", dump(to_json(rep))});
    r.summary += ", " + std::string(to_string(rep.label));
  }
  return r;
}

Trajectory load_trajectory(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("options.trajectory", "cannot open " + path.string());
  if (path.extension() == ".json") {
    try {
      return trajectory_from_json(Json::parse(in));
    } catch (const Json::parse_error& e) {
      throw ConfigError("options.trajectory", std::string("malformed JSON: ") + e.what());
    }
  }
  return read_trajectory_csv(in);
}

RunResult run_classify(const RunConfig& cfg) {
  const auto& o = cfg.classify;
  Trajectory traj = load_trajectory(o.trajectory);
  if (o.window) traj = traj.slice(o.window->lo, o.window->hi);
  const RegimeReport rep = o.pulses.empty() ? classify_trajectory(traj, o.classify)
                                            : measure_excitability(traj, o.pulses, o.excitability);
  RunResult r;
  r.artifacts.push_back({"report.json", dump(to_json(rep))});
  r.summary = std::string(to_string(rep.label));
  return r;
}

RunResult run_scan(const RunConfig& cfg) {
  const auto& o = cfg.scan;
  ParameterChart chart;
  if (o.kind == ChartKind::static_diagrams) {
    chart = scan_static(make_problem(*cfg.problem), cfg.problem->params, o.axes, o.static_options);
  } else {
    DynamicScanSpec spec;
    spec.kind = cfg.ode->kind;
    spec.sigmoid = SigmoidFamily::of_kind(cfg.ode->sigmoid);
    spec.fixed = cfg.ode->params;
    spec.u = o.u;
    spec.timescales = cfg.ode->timescales;
    spec.extras = cfg.ode->extras;
    ProbeSpec probe = o.probe;
    probe.seed = cfg.seed;
    chart = scan_dynamic(spec, o.axes, probe);
  }
  RunResult r;
  r.artifacts.push_back({"chart.csv", render(write_chart_csv, chart)});
  r.artifacts.push_back({"chart.json", dump(to_json(chart))});
  r.summary = std::to_string(chart.cells.size()) + " cells, " +
              std::to_string(chart.boundaries.size()) + " boundary edges";
  if (o.region) {
    const Region region = find_region(chart, *o.region);
    r.artifacts.push_back({"region.json", dump(to_json(region))});
    r.summary += ", region '" + *o.region + "' has " + std::to_string(region.cells.size()) + " cells";
  }
  return r;
}

}  // namespace

RunResult run(const RunConfig& config) {
  RunResult r;
  switch (config.command) {
    case Command::recognize: r = run_recognize(config); break;
    case Command::trace: r = run_trace(config); break;
    case Command::simulate: r = run_simulate(config); break;
    case Command::classify: r = run_classify(config); break;
    case Command::scan: r = run_scan(config); break;
  }
  r.artifacts.push_back({"manifest.json", dump(manifest(resolved_json(config), r.artifacts))});
  return r;
}

RunResult reproduce(std::string_view name, std::uint64_t seed) {
  const FigureBundle b = figure(name, seed);
  RunResult r;
  for (const auto& [stem, traj] : b.trajectories) {
    r.artifacts.push_back({stem + ".csv", render(write_trajectory_csv, traj)});
  }
  for (const auto& [stem, d] : b.diagrams) {
    r.artifacts.push_back({stem + ".csv", render(write_diagram_csv, d)});
  }
  for (const auto& [stem, chart] : b.charts) {
    r.artifacts.push_back({stem + ".csv", render(write_chart_csv, chart)});
    r.artifacts.push_back({stem + ".json", dump(to_json(chart))});
  }
  Json checks = Json::array();
  for (const auto& c : b.checks) {
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  }
  Json report = {{"figure", b.figure}, {"passed", b.passed()}, {"checks", checks}};
  for (const auto& [k, v] : b.summary.items()) report[k] = v;
  r.artifacts.push_back({b.figure + "_report.json", dump(report)});

  const Json config = {{"command", "reproduce"}, {"figure", b.figure}, {"seed", seed}};
  r.artifacts.push_back({"manifest.json", dump(manifest(config, r.artifacts))});
  r.status = b.passed() ? kExitSuccess : kExitCheckFailed;
  std::size_t ok = 0;
  for (const auto& c : b.checks) ok += c.passed ? 1 : 0;
  r.summary = b.figure + ": " + std::to_string(ok) + "/" + std::to_string(b.checks.size()) +
              " checks passed";
  return r;
}

void write_artifacts(const fs::path& dir, const std::vector<Artifact>& artifacts) {
  fs::create_directories(dir);
  for (const auto& a : artifacts) {
    std::ofstream out(dir / a.name, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + (dir / a.name).string());
    out << a.content;
  }
}

}  // namespace octk::cli
