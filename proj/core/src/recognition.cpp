#include "octk/recognition.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>

#include "linalg.hpp"
#include "octk/error.hpp"

namespace octk {

std::string_view to_string(RequiredSign s) {
  switch (s) {
    case RequiredSign::negative: return "negative";
    case RequiredSign::positive: return "positive";
    case RequiredSign::nonzero: return "nonzero";
  }
  return "?";
}

std::string_view to_string(Variety v) {
  switch (v) {
    case Variety::bifurcation: return "bifurcation";
    case Variety::hysteresis: return "hysteresis";
    case Variety::double_limit: return "double-limit";
  }
  return "?";
}

const ZeroCondition* RecognitionVerdict::zero(std::string_view name) const {
  for (const auto& c : zero_conditions) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

const SignCondition* RecognitionVerdict::sign(std::string_view name) const {
  for (const auto& c : sign_conditions) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

bool VarietyMembership::contains(Variety v) const { return find(v) != nullptr; }

const VarietyHit* VarietyMembership::find(Variety v) const {
  for (const auto& h : hits) {
    if (h.variety == v) return &h;
  }
  return nullptr;
}

namespace {

constexpr int kMaxUnknowns = 4;
constexpr int kMaxResiduals = 5;
// double-limit witnesses closer than this are one degenerate fold
constexpr double kDistinctOutputs = 1e-2;

struct LeastSquaresState {
  std::array<double, kMaxResiduals> r{};
  std::array<std::array<double, kMaxUnknowns>, kMaxResiduals> jac{};
};

double norm(const std::array<double, kMaxResiduals>& r, int m) {
  double s = 0.0;
  for (int i = 0; i < m; ++i) s += r[i] * r[i];
  return std::sqrt(s);
}

/// Levenberg-Marquardt on a tiny dense problem. `eval(z, state)` fills the
/// first m residuals and their Jacobian. Returns the final residual norm.
template <class Eval>
double levenberg_marquardt(Eval&& eval, std::array<double, kMaxUnknowns>& z, int n, int m,
                           int max_iterations, double target) {
  LeastSquaresState s;
  eval(z, s);
  double current = norm(s.r, m);
  double lambda = 1e-6;
  for (int it = 0; it < max_iterations && current > target; ++it) {
    std::array<std::array<double, kMaxUnknowns>, kMaxUnknowns> a{};
    std::array<double, kMaxUnknowns> g{};
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < m; ++k) a[i][j] += s.jac[k][i] * s.jac[k][j];
      }
      for (int k = 0; k < m; ++k) g[i] -= s.jac[k][i] * s.r[k];
    }
    bool improved = false;
    for (int attempt = 0; attempt < 12; ++attempt) {
      auto damped = a;
      for (int i = 0; i < n; ++i) damped[i][i] += lambda * std::max(a[i][i], 1e-12);
      std::array<double, kMaxUnknowns> step{};
      if (!detail::solve_dense<kMaxUnknowns>(damped, g, n, step)) {
        lambda *= 10.0;
        continue;
      }
      auto trial = z;
      double step_norm = 0.0;
      for (int i = 0; i < n; ++i) {
        trial[i] += step[i];
        step_norm += step[i] * step[i];
      }
      LeastSquaresState ts;
      eval(trial, ts);
      const double tn = norm(ts.r, m);
      if (std::isfinite(tn) && tn < current) {
        z = trial;
        s = ts;
        current = tn;
        lambda = std::max(lambda * 0.1, 1e-12);
        improved = true;
        break;
      }
      if (std::sqrt(step_norm) < 1e-15) break;
      lambda *= 10.0;
    }
    if (!improved) break;
  }
  return current;
}

struct PartialTable {
  MultiJet jet;
  double operator()(int dy, int du) const { return jet.partial({dy, du, 0}); }
};

PartialTable table_at(const BifurcationProblem& p, const std::vector<double>& resolved, double y,
                      double u, int order) {
  const MultiJet yj = MultiJet::variable(2, order, 0, y);
  const MultiJet uj = MultiJet::variable(2, order, 1, u);
  std::vector<MultiJet> pj;
  pj.reserve(resolved.size());
  for (double v : resolved) pj.emplace_back(2, order, v);
  return {p.evaluate(yj, uj, pj)};
}

struct ConditionList {
  std::string singularity;
  std::vector<std::pair<int, int>> zeros;                   // (dy, du)
  std::vector<std::tuple<int, int, RequiredSign>> signs;    // (dy, du, sign)
};

std::string partial_name(int dy, int du) {
  if (dy == 0 && du == 0) return "g";
  return "g_" + std::string(dy, 'y') + std::string(du, 'u');
}

/// Moves (y, u) toward a common zero of the listed conditions.
void polish_point(const BifurcationProblem& problem, const std::vector<double>& resolved,
                  const ConditionList& list, double& y, double& u, double tol) {
  const int m = static_cast<int>(list.zeros.size());
  int max_order = 0;
  for (auto [a, b] : list.zeros) max_order = std::max(max_order, a + b);
  auto eval = [&](const std::array<double, kMaxUnknowns>& z, LeastSquaresState& s) {
    const auto t = table_at(problem, resolved, z[0], z[1], max_order + 1);
    for (int k = 0; k < m; ++k) {
      const auto [a, b] = list.zeros[k];
      s.r[k] = t(a, b);
      s.jac[k][0] = t(a + 1, b);
      s.jac[k][1] = t(a, b + 1);
    }
  };
  std::array<double, kMaxUnknowns> z{y, u, 0.0};
  levenberg_marquardt(eval, z, 2, m, 50, 1e-3 * tol);
  y = z[0];
  u = z[1];
}

RecognitionVerdict run_conditions(const BifurcationProblem& problem, double y, double u,
                                  const ParamVector& params, const RecognitionOptions& opts,
                                  const ConditionList& list) {
  const auto resolved = problem.resolve(params);
  if (opts.polish) polish_point(problem, resolved, list, y, u, opts.zero_tolerance);
  const auto t = table_at(problem, resolved, y, u, 3);

  double scale = 1.0;
  if (opts.relative) {
    scale = 0.0;
    for (int d = 0; d <= 3; ++d) {
      for (int a = 0; a <= d; ++a) scale = std::max(scale, std::abs(t(a, d - a)));
    }
    if (scale == 0.0) scale = 1.0;
  }

  RecognitionVerdict v;
  v.singularity = list.singularity;
  v.y = y;
  v.u = u;
  v.passed = true;
  for (auto [a, b] : list.zeros) {
    ZeroCondition c{partial_name(a, b), t(a, b), opts.zero_tolerance * scale, false};
    c.passed = std::abs(c.value) < c.tolerance;
    v.passed = v.passed && c.passed;
    v.zero_conditions.push_back(std::move(c));
  }
  for (auto [a, b, sign] : list.signs) {
    SignCondition c{partial_name(a, b), t(a, b), sign, opts.sign_tolerance * scale, false};
    const bool big = std::abs(c.value) > c.tolerance;
    c.passed = big && (sign == RequiredSign::nonzero ||
                       (sign == RequiredSign::negative ? c.value < 0.0 : c.value > 0.0));
    v.passed = v.passed && c.passed;
    v.sign_conditions.push_back(std::move(c));
  }
  return v;
}

const ConditionList& hysteresis_conditions() {
  static const ConditionList list{
      "hysteresis",
      {{0, 0}, {1, 0}, {2, 0}},
      {{3, 0, RequiredSign::negative}, {0, 1, RequiredSign::negative}}};
  return list;
}

const ConditionList& wcusp_conditions() {
  static const ConditionList list{
      "winged-cusp",
      {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}},
      {{3, 0, RequiredSign::negative}, {0, 2, RequiredSign::negative}}};
  return list;
}

}  // namespace

RecognitionVerdict check_hysteresis(const BifurcationProblem& problem, double y, double u,
                                    const ParamVector& params, const RecognitionOptions& opts) {
  return run_conditions(problem, y, u, params, opts, hysteresis_conditions());
}

RecognitionVerdict check_wcusp(const BifurcationProblem& problem, double y, double u,
                               const ParamVector& params, const RecognitionOptions& opts) {
  return run_conditions(problem, y, u, params, opts, wcusp_conditions());
}

RecognitionVerdict check_hysteresis_unfolding(const BifurcationProblem& family,
                                              const RecognitionOptions& opts,
                                              std::string_view parameter) {
  if (!family.has_parameter(parameter)) {
    throw DomainError("problem '" + family.label() + "' has no parameter '" +
                      std::string(parameter) + "'");
  }
  const ParamVector at_zero = ParamVector{}.with(parameter, 0.0);
  RecognitionOptions base_opts = opts;
  base_opts.polish = false;
  RecognitionVerdict v = check_hysteresis(family, 0.0, 0.0, at_zero, base_opts);
  v.singularity = "hysteresis-unfolding";

  const MultiJet j = local_expansion(family, 0.0, 0.0, at_zero, 2, parameter);
  const double h_u = j.partial({0, 1, 0});
  const double h_uy = j.partial({1, 1, 0});
  const double big_h_b = j.partial({0, 0, 1});
  const double big_h_by = j.partial({1, 0, 1});
  const double det = h_u * big_h_by - h_uy * big_h_b;

  double scale = 1.0;
  if (opts.relative) {
    scale = std::max({std::abs(h_u), std::abs(h_uy), std::abs(big_h_b), std::abs(big_h_by)});
    scale = scale > 0.0 ? scale * scale : 1.0;
  }
  SignCondition c{"det[[g_u, g_uy], [G_p, G_py]]", det, RequiredSign::nonzero,
                  opts.sign_tolerance * scale, false};
  c.passed = std::abs(det) > c.tolerance;
  v.passed = v.passed && c.passed;
  v.sign_conditions.push_back(std::move(c));
  return v;
}

// ---------------------------------------------------------------------------

namespace {

bool inside(const SearchBox& box, double y, double u, double margin = 1e-9) {
  return y >= box.y_lo - margin && y <= box.y_hi + margin && u >= box.u_lo - margin &&
         u <= box.u_hi + margin;
}

bool lex_less(std::pair<double, double> a, std::pair<double, double> b) {
  return a.first < b.first || (a.first == b.first && a.second < b.second);
}

double seed_coord(double lo, double hi, int i, int n) {
  return n == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * i / (n - 1);
}

}  // namespace

VarietyMembership variety_membership(const BifurcationProblem& problem, const ParamVector& params,
                                     const SearchBox& box, const VarietyOptions& opts) {
  const auto resolved = problem.resolve(params);
  const int n = std::max(1, opts.seeds_per_axis);
  VarietyMembership out;

  auto single_point = [&](Variety variety, const std::array<std::pair<int, int>, 3>& rows) {
    std::optional<VarietyHit> best;
    auto eval = [&](const std::array<double, kMaxUnknowns>& z, LeastSquaresState& s) {
      const auto t = table_at(problem, resolved, z[0], z[1], 3);
      for (int k = 0; k < 3; ++k) {
        const auto [a, b] = rows[k];
        s.r[k] = t(a, b);
        s.jac[k][0] = t(a + 1, b);
        s.jac[k][1] = t(a, b + 1);
      }
    };
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        std::array<double, kMaxUnknowns> z{seed_coord(box.y_lo, box.y_hi, i, n),
                                           seed_coord(box.u_lo, box.u_hi, j, n), 0.0};
        const double res =
            levenberg_marquardt(eval, z, 2, 3, opts.max_iterations, 1e-3 * opts.tolerance);
        if (!(res < opts.tolerance) || !inside(box, z[0], z[1])) continue;
        std::pair<double, double> w{z[0], z[1]};
        if (!best || lex_less(w, best->witness.front())) best = VarietyHit{variety, {w}, res};
      }
    }
    if (best) out.hits.push_back(*best);
  };

  single_point(Variety::bifurcation, {{{0, 0}, {1, 0}, {0, 1}}});
  single_point(Variety::hysteresis, {{{0, 0}, {1, 0}, {2, 0}}});

  // double limit: pair up fold points sharing the same u
  std::vector<std::pair<double, double>> folds;
  {
    auto eval = [&](const std::array<double, kMaxUnknowns>& z, LeastSquaresState& s) {
      const auto t = table_at(problem, resolved, z[0], z[1], 2);
      s.r[0] = t(0, 0);
      s.r[1] = t(1, 0);
      s.jac[0] = {t(1, 0), t(0, 1), 0.0};
      s.jac[1] = {t(2, 0), t(1, 1), 0.0};
    };
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        std::array<double, kMaxUnknowns> z{seed_coord(box.y_lo, box.y_hi, i, n),
                                           seed_coord(box.u_lo, box.u_hi, j, n), 0.0};
        const double res =
            levenberg_marquardt(eval, z, 2, 2, opts.max_iterations, 1e-3 * opts.tolerance);
        if (!(res < opts.tolerance) || !inside(box, z[0], z[1])) continue;
        const bool seen = std::any_of(folds.begin(), folds.end(), [&](const auto& f) {
          return std::hypot(f.first - z[0], f.second - z[1]) < 1e-6;
        });
        if (!seen) folds.emplace_back(z[0], z[1]);
      }
    }
  }
  std::optional<VarietyHit> best_pair;
  const double u_window = 0.1 * std::max(box.u_hi - box.u_lo, 1e-12);
  for (std::size_t a = 0; a < folds.size(); ++a) {
    for (std::size_t b = a + 1; b < folds.size(); ++b) {
      if (std::abs(folds[a].second - folds[b].second) > u_window) continue;
      if (std::abs(folds[a].first - folds[b].first) < kDistinctOutputs) continue;
      auto eval = [&](const std::array<double, kMaxUnknowns>& z, LeastSquaresState& s) {
        const auto t1 = table_at(problem, resolved, z[0], z[2], 2);
        const auto t2 = table_at(problem, resolved, z[1], z[2], 2);
        s.r[0] = t1(0, 0);
        s.r[1] = t1(1, 0);
        s.r[2] = t2(0, 0);
        s.r[3] = t2(1, 0);
        s.jac[0] = {t1(1, 0), 0.0, t1(0, 1)};
        s.jac[1] = {t1(2, 0), 0.0, t1(1, 1)};
        s.jac[2] = {0.0, t2(1, 0), t2(0, 1)};
        s.jac[3] = {0.0, t2(2, 0), t2(1, 1)};
      };
      std::array<double, kMaxUnknowns> z{folds[a].first, folds[b].first,
                                         0.5 * (folds[a].second + folds[b].second)};
      const double res =
          levenberg_marquardt(eval, z, 3, 4, opts.max_iterations, 1e-3 * opts.tolerance);
      if (!(res < opts.tolerance) || std::abs(z[0] - z[1]) < kDistinctOutputs) continue;
      if (!inside(box, z[0], z[2]) || !inside(box, z[1], z[2])) continue;
      std::pair<double, double> w1{std::min(z[0], z[1]), z[2]};
      std::pair<double, double> w2{std::max(z[0], z[1]), z[2]};
      if (!best_pair || lex_less(w1, best_pair->witness.front())) {
        best_pair = VarietyHit{Variety::double_limit, {w1, w2}, res};
      }
    }
  }
  if (best_pair) out.hits.push_back(*best_pair);
  return out;
}

std::vector<VarietyPoint> locate_variety(const BifurcationProblem& problem, Variety variety,
                                         const ParamVector& params,
                                         std::string_view free_parameter, const SearchBox& box,
                                         double parameter_lo, double parameter_hi) {
  const auto& names = problem.parameter_names();
  auto it = std::find(names.begin(), names.end(), free_parameter);
  if (it == names.end()) {
    throw DomainError("problem '" + problem.label() + "' has no parameter '" +
                      std::string(free_parameter) + "'");
  }
  if (!(parameter_hi >= parameter_lo)) throw DomainError("empty parameter interval");
  const auto index = static_cast<std::size_t>(it - names.begin());
  const auto resolved = problem.resolve(params);

  auto expansion = [&](double y, double u, double p) {
    const MultiJet yj = MultiJet::variable(3, 3, 0, y);
    const MultiJet uj = MultiJet::variable(3, 3, 1, u);
    std::vector<MultiJet> pj;
    pj.reserve(resolved.size());
    for (std::size_t i = 0; i < resolved.size(); ++i) {
      pj.push_back(i == index ? MultiJet::variable(3, 3, 2, p) : MultiJet(3, 3, resolved[i]));
    }
    return problem.evaluate(yj, uj, pj);
  };

  // rows as (dy, du) partials; the Jacobian adds one derivative in y, u, p
  const std::array<std::pair<int, int>, 3> rows =
      variety == Variety::hysteresis
          ? std::array<std::pair<int, int>, 3>{{{0, 0}, {1, 0}, {2, 0}}}
          : std::array<std::pair<int, int>, 3>{{{0, 0}, {1, 0}, {0, 1}}};
  auto eval3 = [&](const std::array<double, kMaxUnknowns>& z, LeastSquaresState& s) {
    const MultiJet g = expansion(z[0], z[1], z[2]);
    for (int k = 0; k < 3; ++k) {
      const auto [a, b] = rows[k];
      s.r[k] = g.partial({a, b, 0});
      s.jac[k] = {g.partial({a + 1, b, 0}), g.partial({a, b + 1, 0}), g.partial({a, b, 1}), 0.0};
    }
  };
  // unknowns (y1, y2, u, p); G = G_y = 0 at both points
  auto eval4 = [&](const std::array<double, kMaxUnknowns>& z, LeastSquaresState& s) {
    const MultiJet g1 = expansion(z[0], z[2], z[3]);
    const MultiJet g2 = expansion(z[1], z[2], z[3]);
    auto d1 = [&](int a, int b, int c) { return g1.partial({a, b, c}); };
    auto d2 = [&](int a, int b, int c) { return g2.partial({a, b, c}); };
    s.r[0] = d1(0, 0, 0);
    s.r[1] = d1(1, 0, 0);
    s.r[2] = d2(0, 0, 0);
    s.r[3] = d2(1, 0, 0);
    s.jac[0] = {d1(1, 0, 0), 0.0, d1(0, 1, 0), d1(0, 0, 1)};
    s.jac[1] = {d1(2, 0, 0), 0.0, d1(1, 1, 0), d1(1, 0, 1)};
    s.jac[2] = {0.0, d2(1, 0, 0), d2(0, 1, 0), d2(0, 0, 1)};
    s.jac[3] = {0.0, d2(2, 0, 0), d2(1, 1, 0), d2(1, 0, 1)};
  };

  std::vector<VarietyPoint> found;
  auto keep = [&](const VarietyPoint& v) {
    if (!inside(box, v.y, v.u) || !inside(box, v.y2, v.u)) return;
    if (v.parameter < parameter_lo - 1e-9 || v.parameter > parameter_hi + 1e-9) return;
    const bool seen = std::any_of(found.begin(), found.end(), [&](const VarietyPoint& p) {
      return std::abs(p.y - v.y) + std::abs(p.y2 - v.y2) + std::abs(p.u - v.u) +
                 std::abs(p.parameter - v.parameter) <
             1e-6;
    });
    if (!seen) found.push_back(v);
  };

  constexpr int kSeeds = 11;
  constexpr int kParamSeeds = 9;
  const int param_seeds = parameter_hi > parameter_lo ? kParamSeeds : 1;
  for (int i = 0; i < kSeeds; ++i) {
    for (int j = 0; j < kSeeds; ++j) {
      for (int k = 0; k < param_seeds; ++k) {
        const double ys = seed_coord(box.y_lo, box.y_hi, i, kSeeds);
        const double us = seed_coord(box.u_lo, box.u_hi, j, kSeeds);
        const double ps = seed_coord(parameter_lo, parameter_hi, k, param_seeds);
        if (variety != Variety::double_limit) {
          std::array<double, kMaxUnknowns> z{ys, us, ps, 0.0};
          const double res = levenberg_marquardt(eval3, z, 3, 3, 50, 1e-12);
          if (res < 1e-8) keep({z[0], z[1], z[2], z[0], res});
          continue;
        }
        // pair each y seed with the mirrored one; equal outputs are rejected
        const double y2s = seed_coord(box.y_lo, box.y_hi, kSeeds - 1 - i, kSeeds);
        if (y2s <= ys) continue;
        std::array<double, kMaxUnknowns> z{ys, y2s, us, ps};
        const double res = levenberg_marquardt(eval4, z, 4, 4, 50, 1e-12);
        if (res < 1e-8 && std::abs(z[0] - z[1]) > kDistinctOutputs) {
          keep({std::min(z[0], z[1]), z[2], z[3], std::max(z[0], z[1]), res});
        }
      }
    }
  }
  std::sort(found.begin(), found.end(), [](const VarietyPoint& a, const VarietyPoint& b) {
    return a.parameter < b.parameter || (a.parameter == b.parameter && a.y < b.y);
  });
  return found;
}

std::vector<VarietyPoint> locate_bifurcation_variety(const BifurcationProblem& problem,
                                                     const ParamVector& params,
                                                     std::string_view free_parameter,
                                                     const SearchBox& box, double parameter_lo,
                                                     double parameter_hi) {
  return locate_variety(problem, Variety::bifurcation, params, free_parameter, box, parameter_lo,
                        parameter_hi);
}

}  // namespace octk
