#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "octk/circuit_ode.hpp"
#include "octk/signal.hpp"

namespace octk {

struct IntegratorOptions {
  double rtol = 1e-7;
  double atol = 1e-9;
  /// <= 0 selects eps_f / 2. Larger values are rejected for kinds with a fast variable.
  double max_step = 0.0;
  /// <= 0 selects eps_f / 5.
  double dt_out = 0.0;
  double min_step = 1e-12;
  double t_start = 0.0;
};

struct IntegratorMeta {
  std::string method = "dopri5";
  double rtol = 0.0;
  double atol = 0.0;
  double max_step = 0.0;
  double dt_out = 0.0;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
  std::size_t restarts = 0;  ///< integration restarts at input breakpoints
};

/// Sampled solution. States are stored row-major with `dimension` columns.
struct Trajectory {
  int dimension = 0;
  std::vector<double> times;
  std::vector<double> states;
  std::vector<double> outputs;
  std::vector<double> u_applied;
  std::vector<double> alpha_applied;
  IntegratorMeta meta;
  /// Absent for trajectories loaded from plain CSV.
  std::optional<CircuitODE> ode;

  std::size_t size() const noexcept { return times.size(); }
  bool empty() const noexcept { return times.empty(); }
  std::span<const double> state(std::size_t i) const {
    return {states.data() + i * static_cast<std::size_t>(dimension),
            static_cast<std::size_t>(dimension)};
  }
  void push(double t, std::span<const double> x, double y, double u, double alpha);

  /// Samples with t_lo <= t <= t_hi.
  Trajectory slice(double t_lo, double t_hi) const;
};

/// Adaptive Dormand-Prince 5(4) with dense output sampled every dt_out.
/// Integration restarts at every breakpoint of the input signals. Several
/// signals on the same channel add up; alpha signals are only accepted by the
/// rest-spike and burster kinds. Throws NumericalError on step underflow or a
/// non-finite state.
Trajectory integrate(const CircuitODE& ode, std::span<const InputSignal> signals,
                     std::span<const double> x0, double t_end, const IntegratorOptions& opts = {});

Trajectory integrate(const CircuitODE& ode, const InputSignal& signal, std::span<const double> x0,
                     double t_end, const IntegratorOptions& opts = {});

/// Constant input plus pulses on the u channel.
Trajectory pulse_response(const CircuitODE& ode, double base_u, std::span<const PulseShape> pulses,
                          std::span<const double> x0, double t_end,
                          const IntegratorOptions& opts = {});

/// Linear ramp on u from u_from at t = 0 to u_to at t = duration. Bursters
/// require duration >= 10 / eps_u.
Trajectory ramp_protocol(const CircuitODE& ode, double u_from, double u_to, double duration,
                         std::span<const double> x0, const IntegratorOptions& opts = {});

/// Same, with extra signals (for example alpha pulses) layered on top.
Trajectory ramp_protocol(const CircuitODE& ode, double u_from, double u_to, double duration,
                         std::span<const double> x0, std::span<const InputSignal> extra,
                         const IntegratorOptions& opts = {});

/// The origin, the default initial condition.
std::vector<double> default_initial_state(const CircuitODE& ode);

}  // namespace octk
