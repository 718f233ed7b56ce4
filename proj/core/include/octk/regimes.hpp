#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "octk/circuit_ode.hpp"
#include "octk/integrate.hpp"

namespace octk {

enum class RegimeLabel {
  quiescent,
  periodic_spiking,
  bursting,
  excitable_pulse,
  bistable_switch,
  rest_spike_bistable,
  monostable,
  other,
};
std::string_view to_string(RegimeLabel label);
RegimeLabel parse_regime_label(std::string_view name);

struct SpikeOptions {
  double threshold = 0.0;
  double band = 0.1;
  /// <= 0 selects 20 eps_f from the trajectory's circuit, or 0.2 without one.
  double refractory = 0.0;
  /// Samples with t < t_first + transient are ignored.
  double transient = 10.0;
};

struct SpikeTrain {
  std::vector<double> spike_times;
  double threshold = 0.0;
  double band = 0.0;
  double refractory = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;

  std::vector<double> intervals() const;
};

/// Upward crossings of the threshold, re-armed once the output falls below
/// threshold - band. Crossing times are linearly interpolated. Throws
/// DomainError when nothing is left after the transient.
SpikeTrain detect_spikes(const Trajectory& traj, const SpikeOptions& opts = {});

struct RegimeEvidence {
  std::size_t spike_count = 0;
  std::optional<double> period;
  std::optional<double> isi_cv;
  double amplitude = 0.0;  ///< max - min of the output in the window
  double terminal_speed = 0.0;
  // bursting
  std::size_t burst_count = 0;
  std::vector<std::size_t> spikes_per_burst;
  std::optional<double> intraburst_median;
  std::optional<double> interburst_min;
  std::optional<double> interburst_mean;
  std::optional<double> separation;  ///< interburst_min / intraburst_median
  // probes
  std::size_t attractor_count = 0;
  std::size_t equilibrium_clusters = 0;
  std::size_t periodic_clusters = 0;
  std::vector<std::vector<double>> equilibria;
  std::vector<double> periods;
  // pulse protocols
  std::vector<double> pulse_excursions;
  std::vector<double> pulse_ratios;
};

struct RegimeReport {
  RegimeLabel label = RegimeLabel::other;
  RegimeEvidence evidence;
  double t_lo = 0.0;
  double t_hi = 0.0;
  std::string diagnostics;
};

struct ClassifyOptions {
  SpikeOptions spikes;
  double periodic_cv = 0.2;
  double burst_separation = 5.0;
  std::size_t min_spikes_per_burst = 2;
  double quiescent_speed = 1e-6;
  /// Minimum analyzed duration; bursters need at least 5 / eps_u.
  double min_duration = 50.0;
};

/// Decision tree on the spike train: rest with no spikes is quiescent, a
/// unimodal interspike distribution is periodic spiking, a two-cluster split
/// with enough separation is bursting. Excitable-pulse is only reported when
/// the trajectory carries a time-varying input. Undecided cases are `other`.
RegimeReport classify_trajectory(const Trajectory& traj, const ClassifyOptions& opts = {});

struct ProbeOptions {
  ClassifyOptions classify;
  IntegratorOptions integrator;
  /// Only the final fraction of each run is classified.
  double analysis_fraction = 0.5;
  double equilibrium_merge = 1e-3;
  double period_merge = 0.05;  ///< relative
};

/// Integrates from each initial condition at constant input and clusters the
/// omega-limits. Requires at least 8 initial conditions.
RegimeReport probe_bistability(const CircuitODE& ode, double constant_u,
                               std::span<const std::vector<double>> initial_conditions,
                               double t_end, const ProbeOptions& opts = {});

/// Grid corners and centre of [-box, box]^n, topped up with seeded uniform
/// samples until `count` states are produced.
std::vector<std::vector<double>> probe_initial_conditions(int dimension, std::size_t count,
                                                          std::uint64_t seed, double box = 1.2);

struct ExcitabilityOptions {
  /// Time after each pulse onset searched for the excursion.
  double response_window = 5.0;
  double ratio = 5.0;
};

/// For each pulse the largest |y(t) - y(t0)| within the response window,
/// divided by the pulse height. Labels excitable-pulse when every ratio meets
/// the threshold.
RegimeReport measure_excitability(const Trajectory& traj, std::span<const PulseShape> pulses,
                                  const ExcitabilityOptions& opts = {});

}  // namespace octk
