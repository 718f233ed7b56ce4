#include "octk/circuit_ode.hpp"

#include <cmath>
#include <string>

#include "octk/error.hpp"

namespace octk {

std::string_view to_string(CircuitKind kind) {
  switch (kind) {
    case CircuitKind::bistable: return "bistable";
    case CircuitKind::relaxation: return "relaxation";
    case CircuitKind::rest_spike: return "rest-spike";
    case CircuitKind::burster: return "burster";
  }
  return "?";
}

CircuitKind parse_circuit_kind(std::string_view name) {
  if (name == "bistable") return CircuitKind::bistable;
  if (name == "relaxation") return CircuitKind::relaxation;
  if (name == "rest-spike") return CircuitKind::rest_spike;
  if (name == "burster") return CircuitKind::burster;
  throw DomainError("unknown circuit kind '" + std::string(name) + "'");
}

std::string_view to_string(BursterWiring wiring) {
  return wiring == BursterWiring::gain_on_error ? "gain-on-error" : "gain-in-filter";
}

BursterWiring parse_burster_wiring(std::string_view name) {
  if (name == "gain-on-error") return BursterWiring::gain_on_error;
  if (name == "gain-in-filter") return BursterWiring::gain_in_filter;
  throw DomainError("unknown burster wiring '" + std::string(name) + "'");
}

CircuitODE::CircuitODE(CircuitKind kind, SigmoidFamily sigmoid, ParamVector params, Timescales ts,
                       std::optional<BursterExtras> extras)
    : kind_(kind),
      sigmoid_(sigmoid),
      params_(std::move(params)),
      timescales_(ts),
      extras_(extras),
      bump_(sigmoid, params_.get_or("delta", 0.5)),
      alpha_(params_.get_or("alpha", 0.0)),
      beta_(params_.get_or("beta", 0.0)),
      gamma_(params_.get_or("gamma", 0.0)) {}

int CircuitODE::dimension() const noexcept {
  switch (kind_) {
    case CircuitKind::bistable: return 1;
    case CircuitKind::relaxation:
    case CircuitKind::rest_spike: return 2;
    case CircuitKind::burster: return 3;
  }
  return 0;
}

bool CircuitODE::timescales_separated() const noexcept {
  const bool fast = kind_ == CircuitKind::bistable || 1.0 < 1.0 / timescales_.eps_f;
  if (kind_ != CircuitKind::burster) return fast;
  return fast && timescales_.eps_u < 1.0;
}

double CircuitODE::effective_alpha(std::span<const double> x, double alpha_input) const {
  double a = alpha_ + alpha_input;
  if (kind_ == CircuitKind::burster) {
    const auto& e = *extras_;
    a += e.wiring == BursterWiring::gain_on_error ? e.k_u * (e.x_bar_u - x[2]) : e.x_bar_u - x[2];
  }
  return a;
}

double CircuitODE::fast_residual(double x_f, double x_s, double u, double alpha_eff) const {
  switch (kind_) {
    case CircuitKind::bistable:
    case CircuitKind::relaxation:
      return -x_f + sigmoid_(x_f - (u + x_s) + beta_ * x_f);
    case CircuitKind::rest_spike:
    case CircuitKind::burster:
      return -x_f +
             sigmoid_(x_f + bump_(u + x_s + 0.5 * gamma_ * x_f) + beta_ * x_f + alpha_eff);
  }
  return 0.0;
}

void CircuitODE::rhs(std::span<const double> x, double u, double alpha_input,
                     std::span<double> dx) const {
  switch (kind_) {
    case CircuitKind::bistable:
      dx[0] = -x[0] + sigmoid_(x[0] - u + beta_ * x[0]);
      return;
    case CircuitKind::relaxation:
      dx[0] = fast_residual(x[0], x[1], u, 0.0) / timescales_.eps_f;
      dx[1] = x[0] - x[1];
      return;
    case CircuitKind::rest_spike:
      dx[0] = fast_residual(x[0], x[1], u, alpha_ + alpha_input) / timescales_.eps_f;
      dx[1] = x[0] - x[1];
      return;
    case CircuitKind::burster: {
      const auto& e = *extras_;
      dx[0] = fast_residual(x[0], x[1], u, effective_alpha(x, alpha_input)) / timescales_.eps_f;
      dx[1] = x[0] - x[1];
      const double drive = e.wiring == BursterWiring::gain_on_error ? x[0] : e.k_u * x[0];
      dx[2] = timescales_.eps_u * (drive - x[2]);
      return;
    }
  }
}

CircuitODE circuit_ode(CircuitKind kind, const SigmoidFamily& sigmoid, const ParamVector& params,
                       const Timescales& timescales, std::optional<BursterExtras> extras) {
  if (!sigmoid.verified()) {
    throw DomainError("sigmoid '" + sigmoid.name() + "' has not passed the axiom check");
  }
  const bool wcusp_kind = kind == CircuitKind::rest_spike || kind == CircuitKind::burster;
  for (const auto& [name, value] : params.entries()) {
    const bool known = name == "beta" ||
                       (wcusp_kind && (name == "alpha" || name == "gamma" || name == "delta"));
    if (!known) {
      throw DomainError("circuit '" + std::string(to_string(kind)) + "' has no parameter '" +
                        name + "'");
    }
    if (!std::isfinite(value)) throw DomainError("parameter '" + name + "' is not finite");
  }
  if (wcusp_kind && params.get_or("delta", 0.5) <= 0.0) {
    throw DomainError("circuit delta must be > 0");
  }
  if (!(timescales.eps_f > 0.0 && timescales.eps_f <= 1.0)) {
    throw DomainError("eps_f must lie in (0, 1]");
  }
  if (kind == CircuitKind::burster) {
    if (!extras) throw DomainError("burster circuit needs extras (k_u, x_bar_u)");
    if (!(timescales.eps_u > 0.0 && timescales.eps_u <= 1.0)) {
      throw DomainError("eps_u must lie in (0, 1]");
    }
  } else {
    extras.reset();
  }
  return CircuitODE(kind, sigmoid, params, timescales, extras);
}

}  // namespace octk
