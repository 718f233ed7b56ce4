#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "octk/jet.hpp"
#include "octk/params.hpp"
#include "octk/sigmoid.hpp"

namespace octk {

enum class NormalForm { hysteresis, hysteresis_unfolding, wcusp, wcusp_unfolding };
std::string_view to_string(NormalForm form);

/// Which side of the loop the input enters on. `static_input` realizes
/// -y + S(y + u + beta y); `dynamic_input` realizes -y + S(y - u + beta y), the
/// convention of the bistable state-space model.
enum class SignConvention { static_input, dynamic_input };
std::string_view to_string(SignConvention c);
SignConvention parse_sign_convention(std::string_view name);

/// Serializable description of the problems the toolkit can build.
struct ProblemSpec {
  /// hysteresis | hysteresis-unfolding | wcusp | wcusp-unfolding |
  /// hysteresis-circuit | wcusp-circuit
  std::string kind = "hysteresis";
  SigmoidKind sigmoid = SigmoidKind::hyperbolic_tangent;
  SignConvention convention = SignConvention::static_input;
  double delta = 0.5;
  ParamVector params;
};

/// A scalar static behavior g(y, u; params) = 0 with output y, input u and
/// named unfolding parameters (default 0).
///
/// Evaluation is available on doubles and on multivariate jets; the two paths
/// share one generic formula so derivatives are exact to rounding.
class BifurcationProblem {
 public:
  using ValueFn = std::function<double(double, double, std::span<const double>)>;
  using JetFn =
      std::function<MultiJet(const MultiJet&, const MultiJet&, std::span<const MultiJet>)>;

  /// `f(y, u, p)` must be callable with (double, double, span<const double>) and
  /// (MultiJet, MultiJet, span<const MultiJet>); p follows `parameter_names`.
  template <class F>
  static BifurcationProblem make(std::string label, std::vector<std::string> parameter_names,
                                 F f) {
    BifurcationProblem p(std::move(label), std::move(parameter_names));
    p.value_ = [f](double y, double u, std::span<const double> q) { return f(y, u, q); };
    p.jet_ = [f](const MultiJet& y, const MultiJet& u, std::span<const MultiJet> q) {
      return f(y, u, q);
    };
    return p;
  }

  const std::string& label() const noexcept { return label_; }
  const std::vector<std::string>& parameter_names() const noexcept { return names_; }
  bool has_parameter(std::string_view name) const;
  const std::optional<ProblemSpec>& spec() const noexcept { return spec_; }
  BifurcationProblem& with_spec(ProblemSpec spec);

  /// Parameter values in declaration order. Unknown names throw DomainError;
  /// undeclared ones default to 0.
  std::vector<double> resolve(const ParamVector& params) const;

  double operator()(double y, double u, const ParamVector& params = {}) const;
  double evaluate(double y, double u, std::span<const double> resolved) const {
    return value_(y, u, resolved);
  }
  MultiJet evaluate(const MultiJet& y, const MultiJet& u, std::span<const MultiJet> resolved) const {
    return jet_(y, u, resolved);
  }

 private:
  BifurcationProblem(std::string label, std::vector<std::string> names);

  std::string label_;
  std::vector<std::string> names_;
  ValueFn value_;
  JetFn jet_;
  std::optional<ProblemSpec> spec_;
};

BifurcationProblem normal_form(NormalForm form);
BifurcationProblem hysteresis_circuit(const SigmoidFamily& sigmoid,
                                      SignConvention convention = SignConvention::static_input);
/// -y + S(B_delta(u + gamma y / 2) + y + alpha + beta y). Throws for delta <= 0.
BifurcationProblem wcusp_circuit(const SigmoidFamily& sigmoid, double delta = 0.5);
/// Builds any problem describable by a ProblemSpec.
BifurcationProblem make_problem(const ProblemSpec& spec);

/// g + coefficient * y^y_power * u^u_power.
BifurcationProblem add_monomial(const BifurcationProblem& problem, double coefficient, int y_power,
                                int u_power);

/// A mixed partial request: d^(dy + du + dparam) g / dy^dy du^du dparam^dparam.
struct DerivativeSpec {
  int dy = 0;
  int du = 0;
  std::string param;
  int dparam = 0;
};

/// Total order cap for `partials`: three in (y, u) plus one parameter direction.
inline constexpr int kMaxPartialOrder = 3;

/// Mixed partial via jet arithmetic. Throws DomainError when dy + du exceeds 3,
/// dparam exceeds 1, or the parameter is undeclared.
double partials(const BifurcationProblem& problem, double y, double u, const ParamVector& params,
                const DerivativeSpec& spec);

/// Full local expansion in (y, u[, param]) up to `order`; variable 0 is y,
/// variable 1 is u and variable 2 (when requested) the named parameter.
MultiJet local_expansion(const BifurcationProblem& problem, double y, double u,
                         const ParamVector& params, int order,
                         std::optional<std::string_view> param = std::nullopt);

}  // namespace octk
