#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "octk/circuit_ode.hpp"
#include "octk/continuation.hpp"
#include "octk/problem.hpp"
#include "octk/recognition.hpp"
#include "octk/regimes.hpp"

namespace octk {

/// One chart axis: `resolution` cell centres spread evenly over [lo, hi].
struct ScanAxis {
  std::string name;
  double lo = 0.0;
  double hi = 0.0;
  int resolution = 1;

  double value(int i) const;
  /// Distance between neighbouring cell centres (the whole range for one cell).
  double spacing() const;
};

inline constexpr int kMaxScanResolution = 201;

struct ChartCell {
  std::vector<int> index;
  std::vector<double> coords;
  std::string label;
  std::optional<DiagramClass> diagram;
  std::optional<RegimeReport> regime;
  std::vector<Variety> varieties;
  bool failed = false;
  std::string error;
};

/// Cell pair whose labels differ, with the midpoint between their centres.
struct BoundaryEdge {
  std::size_t a = 0;
  std::size_t b = 0;
  std::vector<double> point;
};

enum class ChartKind { static_diagrams, dynamic_regimes };
std::string_view to_string(ChartKind kind);

struct ParameterChart {
  ChartKind kind = ChartKind::static_diagrams;
  std::vector<ScanAxis> axes;
  /// Row-major with the first axis varying fastest.
  std::vector<ChartCell> cells;
  std::vector<BoundaryEdge> boundaries;

  const ChartCell& cell(int i, int j = 0) const;
  std::size_t flat_index(int i, int j = 0) const;
};

struct StaticScanOptions {
  Interval u_window{-1.0, 1.0};
  Interval y_window{-1.2, 1.2};
  TraceOptions trace;
  bool flag_varieties = true;
};

/// Traces and classifies the diagram at every cell centre. Cells crossed by a
/// transition variety (located along each grid line) are flagged.
ParameterChart scan_static(const BifurcationProblem& problem, const ParamVector& fixed,
                           const std::vector<ScanAxis>& axes, const StaticScanOptions& opts = {});

/// Circuit template for dynamic scans; axis names may be circuit parameters or
/// "u" for the constant input.
struct DynamicScanSpec {
  CircuitKind kind = CircuitKind::bistable;
  SigmoidFamily sigmoid = SigmoidFamily::tanh();
  ParamVector fixed;
  double u = 0.0;
  Timescales timescales;
  std::optional<BursterExtras> extras;
};

enum class ProbeMode { bistability, trajectory };
std::string_view to_string(ProbeMode mode);
ProbeMode parse_probe_mode(std::string_view name);

struct ProbeSpec {
  ProbeMode mode = ProbeMode::bistability;
  /// <= 0 selects 200, or 10 / eps_u for bursters.
  double t_end = 0.0;
  std::size_t ic_count = 9;
  std::uint64_t seed = 0;
  /// Trajectory mode start state; empty means the origin.
  std::vector<double> x0;
  double analysis_fraction = 0.5;
  IntegratorOptions integrator;
};

double default_probe_time(const DynamicScanSpec& spec);

ParameterChart scan_dynamic(const DynamicScanSpec& spec, const std::vector<ScanAxis>& axes,
                            const ProbeSpec& probe = {});

struct Region {
  std::string label;
  std::vector<std::size_t> cells;
  std::vector<Interval> bounding_box;  ///< per axis, over cell centres
  std::vector<double> midpoint;

  bool empty() const noexcept { return cells.empty(); }
};

/// Largest 4-connected set of cells carrying `label` (ties go to the set with
/// the lowest first cell). Throws DomainError for labels the chart kind
/// cannot produce.
Region find_region(const ParameterChart& chart, std::string_view label);

}  // namespace octk
