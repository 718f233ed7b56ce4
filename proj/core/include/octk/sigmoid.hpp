#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "octk/jet.hpp"

namespace octk {

enum class SigmoidKind {
  hyperbolic_tangent,  ///< tanh(u)
  logistic_centered,   ///< 4 * logistic(u) - 2 = 2 tanh(u/2)
  algebraic,           ///< u / sqrt(1 + u^2)
  custom,
};

std::string_view to_string(SigmoidKind kind);
/// Accepts "tanh", "logistic", "algebraic". Throws DomainError otherwise.
SigmoidKind parse_sigmoid_kind(std::string_view name);

/// Taylor coefficients c_0..c_order of S about u.
using TaylorFn = std::function<std::vector<double>(double u, int order)>;

/// An odd, monotone, saturating scalar nonlinearity with S'(0) = 1, together
/// with exact Taylor data to arbitrary order.
///
/// The three provided kinds compute their expansions from closed-form
/// recurrences. Custom kinds are built with `register_custom_sigmoid`, which
/// refuses families that fail `verify_sigmoid_axioms`; `make_unverified`
/// exists for building deliberately broken test stubs.
class SigmoidFamily {
 public:
  static SigmoidFamily tanh();
  static SigmoidFamily logistic();
  static SigmoidFamily algebraic();
  static SigmoidFamily of_kind(SigmoidKind kind);
  static SigmoidFamily make_unverified(std::string name, TaylorFn taylor);

  SigmoidKind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }
  /// Provided kinds and registered custom kinds. Circuits reject the rest.
  bool verified() const noexcept { return verified_; }

  double operator()(double u) const;
  /// c_0..c_order about u, any order >= 0.
  std::vector<double> taylor(double u, int order) const;
  /// n-th derivative at u, any n >= 0.
  double derivative(double u, int n) const;
  /// Truncated expansion about u; order is capped at Jet::kMaxOrder.
  Jet eval_jet(double u, int order) const;

  /// S(x) lifted to multivariate jets.
  MultiJet operator()(const MultiJet& x) const { return x.apply(taylor(x.value(), x.order())); }

 private:
  friend SigmoidFamily register_custom_sigmoid(std::string, TaylorFn, double);
  SigmoidFamily(SigmoidKind kind, std::string name, TaylorFn custom, bool verified);

  SigmoidKind kind_ = SigmoidKind::hyperbolic_tangent;
  std::string name_;
  TaylorFn custom_;
  bool verified_ = true;
};

/// B(u) = S(u + delta) - S(u - delta) - 2 S(delta), delta != 0.
///
/// Even in u, B(0) = B'(0) = 0 and B''(0) = 2 S''(delta).
class BumpNonlinearity {
 public:
  /// Throws DomainError when delta == 0.
  BumpNonlinearity(SigmoidFamily base, double delta);

  const SigmoidFamily& base() const noexcept { return base_; }
  double delta() const noexcept { return delta_; }

  double operator()(double u) const;
  MultiJet operator()(const MultiJet& u) const;
  Jet eval_jet(double u, int order) const;

 private:
  SigmoidFamily base_;
  double delta_;
  double offset_;  // 2 S(delta)
};

double bump_eval(const BumpNonlinearity& bump, double u);
Jet bump_jet(const BumpNonlinearity& bump, double u, int order);

enum class SigmoidAxiom { odd, monotone, saturated, regular, curvature_sign };
std::string_view to_string(SigmoidAxiom axiom);

struct AxiomCheck {
  SigmoidAxiom axiom;
  bool passed = false;
  double witness_u = 0.0;      ///< worst-case grid point
  double witness_value = 0.0;  ///< the quantity checked at witness_u
  std::string detail;
};

struct AxiomReport {
  std::string sigmoid;
  std::vector<AxiomCheck> checks;
  /// sgn S''''(u) = -sgn(u) on the grid. Not gating: tanh itself violates it.
  bool fourth_derivative_sign_holds = false;

  bool all_passed() const;
  const AxiomCheck& check(SigmoidAxiom axiom) const;
};

struct AxiomOptions {
  double odd_tolerance = 1e-12;
  /// S'(u) at the ends of the grid must fall below this.
  double saturation_tolerance = 1e-3;
  double regular_tolerance = 1e-10;
};

/// Uniform symmetric grid [-20, 20] with step 0.05.
std::vector<double> default_axiom_grid();

/// Checks the five sigmoid axioms on `grid`. The grid must be nonempty and
/// symmetric about 0 (DomainError otherwise); failures are reported, not thrown.
AxiomReport verify_sigmoid_axioms(const SigmoidFamily& sigmoid, const std::vector<double>& grid,
                                  const AxiomOptions& options = {});

/// Wraps a user-supplied expansion as a custom family. Throws DomainError naming
/// the failed axioms unless the family passes on the default grid.
SigmoidFamily register_custom_sigmoid(std::string name, TaylorFn taylor,
                                      double saturation_tolerance = AxiomOptions{}.saturation_tolerance);

}  // namespace octk
