#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "octk/params.hpp"
#include "octk/sigmoid.hpp"

namespace octk {

enum class CircuitKind { bistable, relaxation, rest_spike, burster };
std::string_view to_string(CircuitKind kind);
CircuitKind parse_circuit_kind(std::string_view name);

/// How the ultra-slow filter H_u(s) = k_u / (s / eps_u + 1) closes the loop on
/// alpha in the burster.
enum class BursterWiring {
  /// alpha_eff = alpha + k_u (x_bar_u - x_u),  x_u' = eps_u (x_f - x_u)
  gain_on_error,
  /// alpha_eff = alpha + x_bar_u - x_u,        x_u' = eps_u (k_u x_f - x_u)
  gain_in_filter,
};
std::string_view to_string(BursterWiring wiring);
BursterWiring parse_burster_wiring(std::string_view name);

struct Timescales {
  double eps_f = 1.0;         ///< fast filter time constant, 0 < eps_f <= 1
  double eps_u = 1.0 / 75.0;  ///< ultra-slow rate (burster only), 0 < eps_u <= 1
};

struct BursterExtras {
  double k_u = 5.0;
  double x_bar_u = 2.5;
  BursterWiring wiring = BursterWiring::gain_on_error;
};

/// Right-hand side of one of the four dynamic circuits.
///
/// State layout: bistable [x]; relaxation and rest-spike [x_f, x_s]; burster
/// [x_f, x_s, x_u]. The output is always state[0]. Parameters: beta for the
/// hysteresis kinds; alpha, beta, gamma and delta (bump offset, default 0.5)
/// for the winged-cusp kinds.
class CircuitODE {
 public:
  CircuitKind kind() const noexcept { return kind_; }
  const SigmoidFamily& sigmoid() const noexcept { return sigmoid_; }
  const ParamVector& params() const noexcept { return params_; }
  const Timescales& timescales() const noexcept { return timescales_; }
  const std::optional<BursterExtras>& extras() const noexcept { return extras_; }

  int dimension() const noexcept;
  bool has_fast_variable() const noexcept { return kind_ != CircuitKind::bistable; }
  bool accepts_alpha_input() const noexcept {
    return kind_ == CircuitKind::rest_spike || kind_ == CircuitKind::burster;
  }
  /// eps_u < 1 < 1/eps_f for the burster, 1 < 1/eps_f otherwise.
  bool timescales_separated() const noexcept;

  /// dx/dt at state x under input u and an additive alpha-channel signal.
  void rhs(std::span<const double> x, double u, double alpha_input, std::span<double> dx) const;
  double output(std::span<const double> x) const { return x[0]; }

  /// -x_f + S(...) without the 1/eps_f factor; its zero set in (x_f, x_s) is the
  /// critical manifold. Hysteresis kinds and winged-cusp kinds only.
  double fast_residual(double x_f, double x_s, double u, double alpha_eff) const;
  /// alpha seen by the fast subsystem, including burster feedback.
  double effective_alpha(std::span<const double> x, double alpha_input) const;

 private:
  friend CircuitODE circuit_ode(CircuitKind, const SigmoidFamily&, const ParamVector&,
                                const Timescales&, std::optional<BursterExtras>);
  CircuitODE(CircuitKind kind, SigmoidFamily sigmoid, ParamVector params, Timescales ts,
             std::optional<BursterExtras> extras);

  CircuitKind kind_;
  SigmoidFamily sigmoid_;
  ParamVector params_;
  Timescales timescales_;
  std::optional<BursterExtras> extras_;
  BumpNonlinearity bump_;
  double alpha_, beta_, gamma_;
};

/// Validates and builds a circuit. Throws DomainError for unknown parameter
/// names, timescales outside (0, 1], or a burster without extras.
CircuitODE circuit_ode(CircuitKind kind, const SigmoidFamily& sigmoid, const ParamVector& params,
                       const Timescales& timescales = {},
                       std::optional<BursterExtras> extras = std::nullopt);

}  // namespace octk
