#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "octk/serialize.hpp"

namespace octk::cli {

// Figure protocols at their reference parameters, with the tanh sigmoid and delta = 0.5.

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Everything a figure run produces.
struct FigureBundle {
  std::string figure;
  std::vector<Check> checks;
  Json summary = Json::object();
  /// File stem and trajectory, written as <stem>.csv.
  std::vector<std::pair<std::string, Trajectory>> trajectories;
  std::vector<std::pair<std::string, BranchDiagram>> diagrams;
  std::vector<std::pair<std::string, ParameterChart>> charts;

  bool passed() const;
};

// -- bistable latch --------------------------------------------------------

struct LatchRun {
  Trajectory trajectory;
  RegimeReport probe;
  double y_before = 0.0;  ///< output just before the set pulse
  double y_set = 0.0;     ///< output after the set pulse has ended
  double y_reset = 0.0;   ///< output at the end, after the reset pulse
};

/// Bistable circuit at beta = 0.5, u = 0: a negative u pulse sets the latch,
/// a positive one resets it.
LatchRun latch_protocol(std::uint64_t seed = 0);

// -- relaxation oscillator ------------------------------------------------

inline constexpr double kRelaxBeta = 0.5;
inline constexpr double kRelaxEpsF = 0.01;

struct RelaxationRun {
  Trajectory trajectory;
  RegimeReport report;
  double start_distance = 0.0;
  double max_distance = 0.0;  ///< from the origin, over the run
  double escape_time = -1.0;  ///< first time outside the 0.1-ball, -1 if never
};

/// u = 0 from (1e-3, 0) for 200 time units.
RelaxationRun relaxation_protocol();

struct ExcitabilityRun {
  Trajectory trajectory;
  std::vector<PulseShape> pulses;
  RegimeReport before_pulses;  ///< the settled segment ahead of the first pulse
  RegimeReport response;       ///< pulse excursions and ratios
  double plateau_u = 0.0;
};

/// u ramps from 0 to a plateau past the oscillatory window, then two pulses of
/// height 0.1 hit the excitable rest state.
ExcitabilityRun excitability_protocol();

// -- rest-spike bistability ----------------------------------------------

inline constexpr double kRestSpikeU = 0.5;
inline constexpr double kRestSpikeBeta = 0.5;
inline constexpr double kRestSpikeGamma = 1.0;
inline constexpr double kRestSpikeEpsF = 0.0075;
inline constexpr double kDelta = 0.5;

CircuitSpec rest_spike_spec(double alpha);

struct AlphaSelection {
  Interval window;
  std::vector<VarietyPoint> anchors;  ///< bifurcation-variety crossings that set the window
  ParameterChart chart;
  Region region;
  std::optional<double> alpha;  ///< region midpoint, absent when the region is empty
};

/// Scans alpha across the bifurcation variety of the static circuit and picks
/// the midpoint of the largest rest-spike-bistable region.
AlphaSelection select_rest_spike_alpha(std::uint64_t seed = 0);

struct RestSpikeRun {
  double alpha = 0.0;
  RegimeReport probe;
  Trajectory toggle;
  std::vector<PulseShape> alpha_pulses;
  /// Before the first pulse, between the pulses, after the second.
  std::vector<RegimeReport> segments;
  bool toggled() const;
};

RestSpikeRun rest_spike_protocol(double alpha, std::uint64_t seed = 0);

// -- bursting -------------------------------------------------------------

inline constexpr double kBurstKu = 5.0;
inline constexpr double kBurstEpsU = 1.0 / 75.0;
inline constexpr double kBurstXbar = 2.5;

CircuitSpec burster_spec(double alpha, BursterWiring wiring);

struct BurstSelection {
  BursterWiring wiring = BursterWiring::gain_on_error;
  /// Both wirings tried, in order, with their outcome.
  std::vector<std::pair<BursterWiring, bool>> attempts;
  ParameterChart chart;
  Region region;
  std::optional<double> alpha;
};

/// Scans the burster's alpha baseline around the rest-spike value shifted by
/// the feedback offset. Falls back to the gain-in-filter wiring when the
/// gain-on-error scan finds no bursting.
BurstSelection select_burst_alpha(double rest_spike_alpha);

struct BurstRun {
  double alpha = 0.0;
  BursterWiring wiring = BursterWiring::gain_on_error;
  Trajectory ramp;
  RegimeReport early;  ///< first third of the run
  RegimeReport late;   ///< last third of the run
  double u_from = 0.0;
  double u_to = 0.0;
};

BurstRun burst_protocol(double alpha, BursterWiring wiring);

// -- bundles ----------------------------------------------------------------

FigureBundle figure4(std::uint64_t seed = 0);
FigureBundle figure5();
FigureBundle figure6(std::uint64_t seed = 0);
FigureBundle figure7(std::uint64_t seed = 0);

/// Throws DomainError for names other than fig4..fig7.
FigureBundle figure(std::string_view name, std::uint64_t seed = 0);

}  // namespace octk::cli
