#include "octk/scan.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "octk/error.hpp"

namespace octk {

double ScanAxis::value(int i) const {
  return resolution == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * i / (resolution - 1);
}

double ScanAxis::spacing() const {
  return resolution == 1 ? hi - lo : (hi - lo) / (resolution - 1);
}

std::string_view to_string(ChartKind kind) {
  return kind == ChartKind::static_diagrams ? "static" : "dynamic";
}

std::string_view to_string(ProbeMode mode) {
  return mode == ProbeMode::bistability ? "bistability" : "trajectory";
}

ProbeMode parse_probe_mode(std::string_view name) {
  if (name == "bistability") return ProbeMode::bistability;
  if (name == "trajectory") return ProbeMode::trajectory;
  throw DomainError("unknown probe mode '" + std::string(name) + "'");
}

std::size_t ParameterChart::flat_index(int i, int j) const {
  const int n0 = axes.empty() ? 1 : axes[0].resolution;
  return static_cast<std::size_t>(i + n0 * j);
}

const ChartCell& ParameterChart::cell(int i, int j) const { return cells.at(flat_index(i, j)); }

namespace {

void validate_axes(const std::vector<ScanAxis>& axes) {
  if (axes.empty() || axes.size() > 2) throw DomainError("scans take one or two axes");
  for (const auto& a : axes) {
    if (a.resolution < 1 || a.resolution > kMaxScanResolution) {
      throw DomainError("axis '" + a.name + "' resolution must be in [1, " +
                        std::to_string(kMaxScanResolution) + "]");
    }
    if (!(a.hi >= a.lo) || !std::isfinite(a.lo) || !std::isfinite(a.hi)) {
      throw DomainError("axis '" + a.name + "' needs a finite range with lo <= hi");
    }
  }
  if (axes.size() == 2 && axes[0].name == axes[1].name) {
    throw DomainError("scan axes must be distinct");
  }
}

/// Empty cells in grid order, coordinates filled in.
ParameterChart layout(ChartKind kind, const std::vector<ScanAxis>& axes) {
  ParameterChart chart;
  chart.kind = kind;
  chart.axes = axes;
  const int n0 = axes[0].resolution;
  const int n1 = axes.size() > 1 ? axes[1].resolution : 1;
  for (int j = 0; j < n1; ++j) {
    for (int i = 0; i < n0; ++i) {
      ChartCell c;
      c.index = {i};
      c.coords = {axes[0].value(i)};
      if (axes.size() > 1) {
        c.index.push_back(j);
        c.coords.push_back(axes[1].value(j));
      }
      chart.cells.push_back(std::move(c));
    }
  }
  return chart;
}

void find_boundaries(ParameterChart& chart) {
  const int n0 = chart.axes[0].resolution;
  const int n1 = chart.axes.size() > 1 ? chart.axes[1].resolution : 1;
  auto edge = [&](std::size_t a, std::size_t b) {
    if (chart.cells[a].label == chart.cells[b].label) return;
    BoundaryEdge e{a, b, {}};
    for (std::size_t k = 0; k < chart.cells[a].coords.size(); ++k) {
      e.point.push_back(0.5 * (chart.cells[a].coords[k] + chart.cells[b].coords[k]));
    }
    chart.boundaries.push_back(std::move(e));
  };
  for (int j = 0; j < n1; ++j) {
    for (int i = 0; i < n0; ++i) {
      const std::size_t here = chart.flat_index(i, j);
      if (i + 1 < n0) edge(here, chart.flat_index(i + 1, j));
      if (j + 1 < n1) edge(here, chart.flat_index(i, j + 1));
    }
  }
}

int nearest_cell(const ScanAxis& axis, double v) {
  if (axis.resolution == 1) return 0;
  const double k = std::round((v - axis.lo) / axis.spacing());
  return static_cast<int>(std::clamp(k, 0.0, static_cast<double>(axis.resolution - 1)));
}

void flag(ChartCell& c, Variety v) {
  if (std::find(c.varieties.begin(), c.varieties.end(), v) == c.varieties.end()) {
    c.varieties.push_back(v);
    std::sort(c.varieties.begin(), c.varieties.end());
  }
}

}  // namespace

ParameterChart scan_static(const BifurcationProblem& problem, const ParamVector& fixed,
                           const std::vector<ScanAxis>& axes, const StaticScanOptions& opts) {
  validate_axes(axes);
  for (const auto& a : axes) {
    if (!problem.has_parameter(a.name)) {
      throw DomainError("problem '" + problem.label() + "' has no parameter '" + a.name + "'");
    }
  }
  ParameterChart chart = layout(ChartKind::static_diagrams, axes);
  for (auto& c : chart.cells) {
    ParamVector p = fixed;
    for (std::size_t k = 0; k < axes.size(); ++k) p = p.with(axes[k].name, c.coords[k]);
    const BranchDiagram d = trace(problem, p, opts.u_window, opts.y_window, opts.trace);
    if (d.empty()) {
      DiagramClass none;
      c.diagram = none;
      c.label = std::string(to_string(DiagramLabel::other));
      c.error = "no solutions in the window";
      continue;
    }
    c.diagram = classify(d);
    c.label = std::string(to_string(c.diagram->label));
  }

  if (opts.flag_varieties) {
    const SearchBox box{opts.y_window.lo, opts.y_window.hi, opts.u_window.lo, opts.u_window.hi};
    const int n0 = axes[0].resolution;
    const int n1 = axes.size() > 1 ? axes[1].resolution : 1;
    // varieties located along every grid line of each axis
    for (std::size_t free = 0; free < axes.size(); ++free) {
      const std::size_t other = 1 - free;
      const ScanAxis& fa = axes[free];
      const int lines = axes.size() > 1 ? axes[other].resolution : 1;
      const double half = 0.5 * fa.spacing();
      for (int line = 0; line < lines; ++line) {
        ParamVector p = fixed;
        if (axes.size() > 1) p = p.with(axes[other].name, axes[other].value(line));
        for (Variety v : {Variety::bifurcation, Variety::hysteresis, Variety::double_limit}) {
          const auto pts = locate_variety(problem, v, p, fa.name, box, fa.lo - half, fa.hi + half);
          for (const auto& pt : pts) {
            const int k = nearest_cell(fa, pt.parameter);
            const int i = free == 0 ? k : line;
            const int j = free == 0 ? line : k;
            if (i < n0 && j < n1) flag(chart.cells[chart.flat_index(i, j)], v);
          }
        }
      }
    }
  }
  find_boundaries(chart);
  return chart;
}

double default_probe_time(const DynamicScanSpec& spec) {
  if (spec.kind == CircuitKind::burster) return 10.0 / spec.timescales.eps_u;
  return 200.0;
}

ParameterChart scan_dynamic(const DynamicScanSpec& spec, const std::vector<ScanAxis>& axes,
                            const ProbeSpec& probe) {
  validate_axes(axes);
  ParameterChart chart = layout(ChartKind::dynamic_regimes, axes);
  const double t_end = probe.t_end > 0.0 ? probe.t_end : default_probe_time(spec);

  for (auto& c : chart.cells) {
    ParamVector p = spec.fixed;
    double u = spec.u;
    for (std::size_t k = 0; k < axes.size(); ++k) {
      if (axes[k].name == "u") u = c.coords[k];
      else p = p.with(axes[k].name, c.coords[k]);
    }
    const CircuitODE ode = circuit_ode(spec.kind, spec.sigmoid, p, spec.timescales, spec.extras);
    try {
      if (probe.mode == ProbeMode::bistability) {
        const auto ics = probe_initial_conditions(ode.dimension(), std::max<std::size_t>(8, probe.ic_count),
                                                  probe.seed);
        ProbeOptions po;
        po.integrator = probe.integrator;
        po.analysis_fraction = probe.analysis_fraction;
        c.regime = probe_bistability(ode, u, ics, t_end, po);
      } else {
        const std::vector<double> x0 = probe.x0.empty() ? default_initial_state(ode) : probe.x0;
        const Trajectory traj = integrate(ode, InputSignal::constant(u), x0, t_end, probe.integrator);
        ClassifyOptions co;
        co.spikes.transient = 0.0;
        co.min_duration = std::min(co.min_duration, t_end * probe.analysis_fraction);
        c.regime = classify_trajectory(traj.slice(t_end * (1.0 - probe.analysis_fraction), t_end), co);
      }
      c.label = std::string(to_string(c.regime->label));
    } catch (const NumericalError& e) {
      c.failed = true;
      c.error = e.what();
      c.label = std::string(to_string(RegimeLabel::other));
    }
  }
  find_boundaries(chart);
  return chart;
}

Region find_region(const ParameterChart& chart, std::string_view label) {
  if (chart.kind == ChartKind::static_diagrams) parse_diagram_label(label);
  else parse_regime_label(label);

  Region best;
  best.label = std::string(label);
  if (chart.cells.empty()) return best;
  const int n0 = chart.axes[0].resolution;
  const int n1 = chart.axes.size() > 1 ? chart.axes[1].resolution : 1;
  std::vector<bool> seen(chart.cells.size(), false);
  for (std::size_t start = 0; start < chart.cells.size(); ++start) {
    if (seen[start] || chart.cells[start].label != label) continue;
    std::vector<std::size_t> component{start};
    seen[start] = true;
    for (std::size_t k = 0; k < component.size(); ++k) {
      const std::size_t here = component[k];
      const int i = static_cast<int>(here % static_cast<std::size_t>(n0));
      const int j = static_cast<int>(here / static_cast<std::size_t>(n0));
      const int di[4] = {1, -1, 0, 0};
      const int dj[4] = {0, 0, 1, -1};
      for (int d = 0; d < 4; ++d) {
        const int a = i + di[d];
        const int b = j + dj[d];
        if (a < 0 || a >= n0 || b < 0 || b >= n1) continue;
        const std::size_t next = chart.flat_index(a, b);
        if (seen[next] || chart.cells[next].label != label) continue;
        seen[next] = true;
        component.push_back(next);
      }
    }
    if (component.size() > best.cells.size()) best.cells = std::move(component);
  }
  std::sort(best.cells.begin(), best.cells.end());
  if (best.cells.empty()) return best;
  for (std::size_t k = 0; k < chart.axes.size(); ++k) {
    Interval box{INFINITY, -INFINITY};
    for (std::size_t c : best.cells) {
      box.lo = std::min(box.lo, chart.cells[c].coords[k]);
      box.hi = std::max(box.hi, chart.cells[c].coords[k]);
    }
    best.bounding_box.push_back(box);
    best.midpoint.push_back(0.5 * (box.lo + box.hi));
  }
  return best;
}

}  // namespace octk
