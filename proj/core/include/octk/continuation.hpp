#pragma once

#include <cstddef>
#include <string_view>
#include <utility>
#include <vector>

#include "octk/params.hpp"
#include "octk/problem.hpp"

namespace octk {

/// Sign of g_y with the convention y' = g: stable iff g_y < 0.
enum class Stability { stable, unstable, marginal };
std::string_view to_string(Stability s);
Stability parse_stability(std::string_view name);

inline constexpr double kMarginalTolerance = 1e-8;

Stability stability_from_slope(double g_y, double tolerance = kMarginalTolerance);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const noexcept { return hi - lo; }
  bool contains(double x) const noexcept { return x >= lo && x <= hi; }
};

struct BranchSample {
  double u = 0.0;
  double y = 0.0;
  Stability stability = Stability::marginal;
};

struct Branch {
  std::vector<BranchSample> samples;
  bool closed = false;     ///< isola: the last sample connects back to the first
  bool truncated = false;  ///< corrector diverged before the branch left the box
};

struct FoldPoint {
  double u = 0.0;
  double y = 0.0;
  std::size_t branch = 0;
  double g_y = 0.0;
};

struct BranchDiagram {
  std::vector<Branch> branches;
  std::vector<FoldPoint> folds;
  Interval u_window;
  Interval y_window;
  double arclength_step = 0.0;

  bool empty() const noexcept { return branches.empty(); }
  std::size_t sample_count() const noexcept;
};

struct TraceOptions {
  /// Pseudo-arclength step; <= 0 selects 1e-2 times the window diagonal.
  double step = 0.0;
  int max_halvings = 6;
  /// Interior u-lines used as extra seeds, so isolas are not missed.
  int interior_seed_lines = 5;
  /// Grid points per seed line for root bracketing.
  int seed_grid = 2001;
  double merge_tolerance = 1e-6;
  double residual_tolerance = 1e-10;
  double stability_tolerance = kMarginalTolerance;
  std::size_t max_steps_per_branch = 200000;
};

/// Traces every solution component of g(y, u) = 0 meeting the box.
BranchDiagram trace(const BifurcationProblem& problem, const ParamVector& params,
                    Interval u_window, Interval y_window, const TraceOptions& opts = {});

enum class DiagramLabel { monotone, bistable_hysteresis, mirrored_hysteresis, other };
std::string_view to_string(DiagramLabel label);
DiagramLabel parse_diagram_label(std::string_view name);

struct DiagramClass {
  DiagramLabel label = DiagramLabel::other;
  int fold_count = 0;
  std::vector<Interval> bistable_u_intervals;
};

/// monotone: a single fold-free branch. bistable-hysteresis: two folds on one
/// branch with one bistable interval. mirrored-hysteresis: four folds forming
/// two bistable intervals separated by a monostable middle. Anything else is
/// `other`. Throws DomainError on an empty diagram.
DiagramClass classify(const BranchDiagram& diagram);

/// u ranges with at least two stable samples at the same u, resolved on a grid
/// of `resolution` points over the u window.
std::vector<Interval> bistable_intervals(const BranchDiagram& diagram, int resolution = 2001);

struct Equilibrium {
  double y = 0.0;
  Stability stability = Stability::marginal;
  double g_y = 0.0;
};

struct EquilibriumOptions {
  int grid = 10001;
  double stability_tolerance = kMarginalTolerance;
};

/// All roots of g(., u) in the window, ascending.
std::vector<Equilibrium> equilibria_at(const BifurcationProblem& problem, const ParamVector& params,
                                       double u, Interval y_window,
                                       const EquilibriumOptions& opts = {});

}  // namespace octk
