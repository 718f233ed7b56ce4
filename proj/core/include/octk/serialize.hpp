#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "octk/circuit_ode.hpp"
#include "octk/continuation.hpp"
#include "octk/integrate.hpp"
#include "octk/problem.hpp"
#include "octk/recognition.hpp"
#include "octk/regimes.hpp"
#include "octk/scan.hpp"
#include "octk/signal.hpp"

namespace octk {

using Json = nlohmann::ordered_json;

/// Serializable description of a dynamic circuit.
struct CircuitSpec {
  CircuitKind kind = CircuitKind::bistable;
  SigmoidKind sigmoid = SigmoidKind::hyperbolic_tangent;
  ParamVector params;
  Timescales timescales;
  std::optional<BursterExtras> extras;
};

CircuitODE make_circuit(const CircuitSpec& spec);
CircuitSpec describe(const CircuitODE& ode);

// Parsers throw ConfigError naming the offending field (dotted path).
Json to_json(const ParamVector& p);
ParamVector params_from_json(const Json& j, const std::string& path = "params");

Json to_json(const ProblemSpec& spec);
ProblemSpec problem_spec_from_json(const Json& j, const std::string& path = "problem");

Json to_json(const CircuitSpec& spec);
CircuitSpec circuit_spec_from_json(const Json& j, const std::string& path = "ode");

Json to_json(const InputSignal& s);
InputSignal signal_from_json(const Json& j, const std::string& path = "signal");

Json to_json(const RecognitionVerdict& v);
Json to_json(const VarietyMembership& m);
Json to_json(const BranchDiagram& d);
Json to_json(const DiagramClass& c);
Json to_json(const RegimeReport& r);
Json to_json(const ParameterChart& c);
Json to_json(const Region& r);
Json to_json(const IntegratorMeta& m);

/// Columns: branch_id, u, y, stability.
void write_diagram_csv(std::ostream& os, const BranchDiagram& d);

/// Columns: t, x0..x{n-1}, y, u, alpha.
void write_trajectory_csv(std::ostream& os, const Trajectory& t);
/// Meta header plus column arrays.
Json trajectory_to_json(const Trajectory& t);
Trajectory trajectory_from_json(const Json& j);
/// Accepts the layout written by write_trajectory_csv. The circuit is unknown.
Trajectory read_trajectory_csv(std::istream& is);

/// Columns: one per axis, label, varieties (';'-separated), failed.
void write_chart_csv(std::ostream& os, const ParameterChart& c);

/// Shortest round-trip decimal form.
std::string format_number(double v);

}  // namespace octk
