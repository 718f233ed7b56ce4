#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "octk/params.hpp"
#include "octk/problem.hpp"

namespace octk {

struct ZeroCondition {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

enum class RequiredSign { negative, positive, nonzero };
std::string_view to_string(RequiredSign s);

struct SignCondition {
  std::string name;
  double value = 0.0;
  RequiredSign required = RequiredSign::nonzero;
  double tolerance = 0.0;
  bool passed = false;
};

/// Outcome of a recognition check: passed iff every zero condition satisfies
/// |value| < tolerance and every sign condition holds strictly with
/// |value| > tolerance.
struct RecognitionVerdict {
  std::string singularity;
  double y = 0.0;
  double u = 0.0;
  bool passed = false;
  std::vector<ZeroCondition> zero_conditions;
  std::vector<SignCondition> sign_conditions;

  const ZeroCondition* zero(std::string_view name) const;
  const SignCondition* sign(std::string_view name) const;
};

struct RecognitionOptions {
  double zero_tolerance = 1e-8;
  double sign_tolerance = 1e-6;
  /// Scale both tolerances by the largest |partial| of order <= 3 at the point,
  /// making verdicts invariant under g -> c g.
  bool relative = false;
  /// Move (y, u) onto the zero set of the conditions by Gauss-Newton first.
  bool polish = false;
};

/// g = g_y = g_yy = 0, g_yyy < 0, g_u < 0.
RecognitionVerdict check_hysteresis(const BifurcationProblem& problem, double y, double u,
                                    const ParamVector& params, const RecognitionOptions& opts = {});

/// Hysteresis conditions at beta = 0 plus det[[g_u, g_uy], [g_beta, g_beta y]] != 0
/// at the origin.
RecognitionVerdict check_hysteresis_unfolding(const BifurcationProblem& family,
                                              const RecognitionOptions& opts = {},
                                              std::string_view parameter = "beta");

/// g = g_y = g_u = g_yy = g_yu = 0, g_yyy < 0, g_uu < 0.
RecognitionVerdict check_wcusp(const BifurcationProblem& problem, double y, double u,
                               const ParamVector& params, const RecognitionOptions& opts = {});

// ---------------------------------------------------------------------------
// Transition varieties

enum class Variety {
  bifurcation,   ///< G = G_y = G_u = 0
  hysteresis,    ///< G = G_y = G_yy = 0
  double_limit,  ///< G = G_y = 0 at two points y1 != y2 with common u
};
std::string_view to_string(Variety v);

struct VarietyHit {
  Variety variety;
  /// One (y, u) point, or two for the double-limit variety.
  std::vector<std::pair<double, double>> witness;
  double residual = 0.0;
};

struct VarietyMembership {
  std::vector<VarietyHit> hits;  ///< at most one per variety, in enum order

  bool none() const noexcept { return hits.empty(); }
  bool contains(Variety v) const;
  const VarietyHit* find(Variety v) const;
};

struct SearchBox {
  double y_lo = -2.0, y_hi = 2.0;
  double u_lo = -2.0, u_hi = 2.0;
};

struct VarietyOptions {
  double tolerance = 1e-8;
  int seeds_per_axis = 41;
  int max_iterations = 50;
};

/// Seeds a grid over the box, polishes with Levenberg-Marquardt and keeps only
/// witnesses whose residual drops below the tolerance. Among several witnesses
/// the lexicographically lowest (y, u) is reported.
VarietyMembership variety_membership(const BifurcationProblem& problem, const ParamVector& params,
                                     const SearchBox& box, const VarietyOptions& opts = {});

struct VarietyPoint {
  double y = 0.0, u = 0.0, parameter = 0.0;
  /// Second output value for the double-limit variety, equal to y otherwise.
  double y2 = 0.0;
  double residual = 0.0;
};

/// Solves the defining equations of `variety` jointly with `free_parameter`
/// (other parameters fixed), seeding a grid over the box and the parameter
/// interval. Returns the distinct solutions sorted by parameter value.
std::vector<VarietyPoint> locate_variety(const BifurcationProblem& problem, Variety variety,
                                         const ParamVector& params,
                                         std::string_view free_parameter, const SearchBox& box,
                                         double parameter_lo, double parameter_hi);

/// locate_variety for G = G_y = G_u = 0.
std::vector<VarietyPoint> locate_bifurcation_variety(const BifurcationProblem& problem,
                                                     const ParamVector& params,
                                                     std::string_view free_parameter,
                                                     const SearchBox& box, double parameter_lo,
                                                     double parameter_hi);

}  // namespace octk
