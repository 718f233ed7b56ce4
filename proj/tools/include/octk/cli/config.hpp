#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "octk/serialize.hpp"

namespace octk::cli {

enum class Command { recognize, trace, simulate, classify, scan };
std::string_view to_string(Command c);
/// Throws ConfigError("command", ...) for unknown names.
Command parse_command(std::string_view name);

enum class Singularity { hysteresis, wcusp, hysteresis_unfolding };
std::string_view to_string(Singularity s);

struct RecognizeOptions {
  Singularity singularity = Singularity::hysteresis;
  double y = 0.0;
  double u = 0.0;
  /// Unfolding direction checked by hysteresis-unfolding.
  std::string parameter = "beta";
  RecognitionOptions recognition;
  /// Also report transition-variety membership inside `box`.
  bool varieties = false;
  SearchBox box;
};

struct TraceCommandOptions {
  Interval u_window{-1.0, 1.0};
  Interval y_window{-1.2, 1.2};
  TraceOptions trace;
};

struct SimulateOptions {
  double t_end = 100.0;
  std::vector<double> x0;  ///< empty: the origin
  std::vector<InputSignal> signals;
  IntegratorOptions integrator;
  bool classify = false;
};

struct ClassifyCommandOptions {
  std::filesystem::path trajectory;  ///< absolute once loaded
  std::optional<Interval> window;
  ClassifyOptions classify;
  /// When nonempty the excitability measure runs on these pulses instead.
  std::vector<PulseShape> pulses;
  ExcitabilityOptions excitability;
};

struct ScanCommandOptions {
  ChartKind kind = ChartKind::static_diagrams;
  std::vector<ScanAxis> axes;
  StaticScanOptions static_options;
  double u = 0.0;
  ProbeSpec probe;
  std::optional<std::string> region;
};

/// A fully resolved run. Equal configs produce byte-identical artifacts.
struct RunConfig {
  Command command = Command::recognize;
  std::uint64_t seed = 0;
  std::optional<ProblemSpec> problem;
  std::optional<CircuitSpec> ode;

  RecognizeOptions recognize;
  TraceCommandOptions trace;
  SimulateOptions simulate;
  ClassifyCommandOptions classify;
  ScanCommandOptions scan;
};

/// Parses a config document, or the `config` member of a manifest written by an
/// earlier run. Relative paths are taken against `base_dir`. When `command` is
/// given it must agree with the document's own `command` field, if any.
RunConfig load_config(const Json& doc, std::optional<Command> command,
                      const std::filesystem::path& base_dir);
RunConfig load_config_file(const std::filesystem::path& path, std::optional<Command> command);

/// Every option spelled out, defaults included. Feeding it back to
/// `load_config` reproduces the run.
Json resolved_json(const RunConfig& config);

}  // namespace octk::cli
