#include "octk/problem.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "octk/error.hpp"

namespace octk {

std::string_view to_string(NormalForm form) {
  switch (form) {
    case NormalForm::hysteresis: return "hysteresis";
    case NormalForm::hysteresis_unfolding: return "hysteresis-unfolding";
    case NormalForm::wcusp: return "wcusp";
    case NormalForm::wcusp_unfolding: return "wcusp-unfolding";
  }
  return "?";
}

std::string_view to_string(SignConvention c) {
  return c == SignConvention::static_input ? "static" : "dynamic";
}

SignConvention parse_sign_convention(std::string_view name) {
  if (name == "static") return SignConvention::static_input;
  if (name == "dynamic") return SignConvention::dynamic_input;
  throw DomainError("unknown sign convention '" + std::string(name) + "'");
}

BifurcationProblem::BifurcationProblem(std::string label, std::vector<std::string> names)
    : label_(std::move(label)), names_(std::move(names)) {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    for (std::size_t j = i + 1; j < names_.size(); ++j) {
      if (names_[i] == names_[j]) {
        throw DomainError("problem '" + label_ + "' declares parameter '" + names_[i] + "' twice");
      }
    }
  }
}

bool BifurcationProblem::has_parameter(std::string_view name) const {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

BifurcationProblem& BifurcationProblem::with_spec(ProblemSpec spec) {
  spec_ = std::move(spec);
  return *this;
}

std::vector<double> BifurcationProblem::resolve(const ParamVector& params) const {
  std::vector<double> out(names_.size(), 0.0);
  for (const auto& [name, value] : params.entries()) {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) {
      throw DomainError("problem '" + label_ + "' has no parameter '" + name + "'");
    }
    out[it - names_.begin()] = value;
  }
  return out;
}

double BifurcationProblem::operator()(double y, double u, const ParamVector& params) const {
  const auto p = resolve(params);
  return value_(y, u, p);
}

// ---------------------------------------------------------------------------

namespace {

void require_verified(const SigmoidFamily& s) {
  if (!s.verified()) {
    throw DomainError("sigmoid '" + s.name() + "' has not passed the axiom check");
  }
}

}  // namespace

BifurcationProblem normal_form(NormalForm form) {
  switch (form) {
    case NormalForm::hysteresis:
      return BifurcationProblem::make("-y^3 - u", {}, [](const auto& y, const auto& u, auto) {
        return -(y * y * y) - u;
      });
    case NormalForm::hysteresis_unfolding:
      return BifurcationProblem::make("-y^3 - u + beta y", {"beta"},
                                      [](const auto& y, const auto& u, auto p) {
                                        return -(y * y * y) - u + p[0] * y;
                                      });
    case NormalForm::wcusp:
      return BifurcationProblem::make("-y^3 - u^2", {}, [](const auto& y, const auto& u, auto) {
        return -(y * y * y) - u * u;
      });
    case NormalForm::wcusp_unfolding:
      return BifurcationProblem::make(
          "-y^3 - u^2 + alpha + beta y + gamma u y", {"alpha", "beta", "gamma"},
          [](const auto& y, const auto& u, auto p) {
            return -(y * y * y) - u * u + p[0] + p[1] * y + p[2] * (u * y);
          });
  }
  throw DomainError("unknown normal form");
}

BifurcationProblem hysteresis_circuit(const SigmoidFamily& sigmoid, SignConvention convention) {
  require_verified(sigmoid);
  const double sign = convention == SignConvention::static_input ? 1.0 : -1.0;
  std::string label = convention == SignConvention::static_input ? "-y + S(y + u + beta y)"
                                                                 : "-y + S(y - u + beta y)";
  return BifurcationProblem::make(std::move(label), {"beta"},
                                  [sigmoid, sign](const auto& y, const auto& u, auto p) {
                                    return sigmoid(y + sign * u + p[0] * y) - y;
                                  });
}

BifurcationProblem wcusp_circuit(const SigmoidFamily& sigmoid, double delta) {
  require_verified(sigmoid);
  if (!(delta > 0.0)) throw DomainError("wcusp_circuit: delta must be > 0");
  const BumpNonlinearity bump(sigmoid, delta);
  return BifurcationProblem::make(
      "-y + S(B(u + gamma y / 2) + y + alpha + beta y)", {"alpha", "beta", "gamma"},
      [sigmoid, bump](const auto& y, const auto& u, auto p) {
        return sigmoid(bump(u + 0.5 * p[2] * y) + y + p[0] + p[1] * y) - y;
      });
}

BifurcationProblem make_problem(const ProblemSpec& spec) {
  BifurcationProblem problem = [&] {
    if (spec.kind == "hysteresis") return normal_form(NormalForm::hysteresis);
    if (spec.kind == "hysteresis-unfolding") return normal_form(NormalForm::hysteresis_unfolding);
    if (spec.kind == "wcusp") return normal_form(NormalForm::wcusp);
    if (spec.kind == "wcusp-unfolding") return normal_form(NormalForm::wcusp_unfolding);
    const auto sigmoid = SigmoidFamily::of_kind(spec.sigmoid);
    if (spec.kind == "hysteresis-circuit") return hysteresis_circuit(sigmoid, spec.convention);
    if (spec.kind == "wcusp-circuit") return wcusp_circuit(sigmoid, spec.delta);
    throw DomainError("unknown problem kind '" + spec.kind + "'");
  }();
  problem.resolve(spec.params);  // rejects unknown names early
  problem.with_spec(spec);
  return problem;
}

BifurcationProblem add_monomial(const BifurcationProblem& problem, double coefficient, int y_power,
                                int u_power) {
  if (y_power < 0 || u_power < 0) throw DomainError("add_monomial: negative power");
  std::ostringstream label;
  label << problem.label() << " + " << coefficient << " y^" << y_power << " u^" << u_power;
  return BifurcationProblem::make(
      label.str(), problem.parameter_names(),
      [problem, coefficient, y_power, u_power](const auto& y, const auto& u, auto p) {
        auto term = problem.evaluate(y, u, p);
        auto mono = term * 0.0 + coefficient;
        for (int i = 0; i < y_power; ++i) mono = mono * y;
        for (int i = 0; i < u_power; ++i) mono = mono * u;
        return term + mono;
      });
}

// ---------------------------------------------------------------------------

MultiJet local_expansion(const BifurcationProblem& problem, double y, double u,
                         const ParamVector& params, int order,
                         std::optional<std::string_view> param) {
  const auto resolved = problem.resolve(params);
  int param_index = -1;
  if (param) {
    const auto& names = problem.parameter_names();
    auto it = std::find(names.begin(), names.end(), *param);
    if (it == names.end()) {
      throw DomainError("problem '" + problem.label() + "' has no parameter '" +
                        std::string(*param) + "'");
    }
    param_index = static_cast<int>(it - names.begin());
  }
  const int nvars = param ? 3 : 2;
  const MultiJet yj = MultiJet::variable(nvars, order, 0, y);
  const MultiJet uj = MultiJet::variable(nvars, order, 1, u);
  std::vector<MultiJet> pj;
  pj.reserve(resolved.size());
  for (std::size_t i = 0; i < resolved.size(); ++i) {
    pj.push_back(int(i) == param_index ? MultiJet::variable(nvars, order, 2, resolved[i])
                                       : MultiJet(nvars, order, resolved[i]));
  }
  return problem.evaluate(yj, uj, pj);
}

double partials(const BifurcationProblem& problem, double y, double u, const ParamVector& params,
                const DerivativeSpec& spec) {
  if (spec.dy < 0 || spec.du < 0 || spec.dparam < 0) {
    throw DomainError("partials: negative derivative order");
  }
  if (spec.dy + spec.du > kMaxPartialOrder || spec.dparam > 1) {
    throw DomainError("partials: order cap exceeded (at most " + std::to_string(kMaxPartialOrder) +
                      " in (y, u) plus one parameter direction)");
  }
  if (spec.dparam > 0 && spec.param.empty()) {
    throw DomainError("partials: parameter direction requested without a name");
  }
  const int order = spec.dy + spec.du + spec.dparam;
  if (spec.dparam == 0) {
    return local_expansion(problem, y, u, params, order).partial({spec.dy, spec.du, 0});
  }
  return local_expansion(problem, y, u, params, order, spec.param)
      .partial({spec.dy, spec.du, spec.dparam});
}

}  // namespace octk
