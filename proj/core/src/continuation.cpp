#include "octk/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include <boost/math/tools/toms748_solve.hpp>

#include "octk/error.hpp"

namespace octk {

std::string_view to_string(Stability s) {
  switch (s) {
    case Stability::stable: return "stable";
    case Stability::unstable: return "unstable";
    case Stability::marginal: return "marginal";
  }
  return "?";
}

Stability parse_stability(std::string_view name) {
  if (name == "stable") return Stability::stable;
  if (name == "unstable") return Stability::unstable;
  if (name == "marginal") return Stability::marginal;
  throw DomainError("unknown stability label '" + std::string(name) + "'");
}

Stability stability_from_slope(double g_y, double tolerance) {
  if (g_y < -tolerance) return Stability::stable;
  if (g_y > tolerance) return Stability::unstable;
  return Stability::marginal;
}

std::string_view to_string(DiagramLabel label) {
  switch (label) {
    case DiagramLabel::monotone: return "monotone";
    case DiagramLabel::bistable_hysteresis: return "bistable-hysteresis";
    case DiagramLabel::mirrored_hysteresis: return "mirrored-hysteresis";
    case DiagramLabel::other: return "other";
  }
  return "?";
}

DiagramLabel parse_diagram_label(std::string_view name) {
  if (name == "monotone") return DiagramLabel::monotone;
  if (name == "bistable-hysteresis") return DiagramLabel::bistable_hysteresis;
  if (name == "mirrored-hysteresis") return DiagramLabel::mirrored_hysteresis;
  if (name == "other") return DiagramLabel::other;
  throw DomainError("unknown diagram label '" + std::string(name) + "'");
}

std::size_t BranchDiagram::sample_count() const noexcept {
  std::size_t n = 0;
  for (const auto& b : branches) n += b.samples.size();
  return n;
}

namespace {

struct Local {
  double g = 0.0, g_y = 0.0, g_u = 0.0;
};

struct Local2 {
  double g = 0.0, g_y = 0.0, g_u = 0.0, g_yy = 0.0, g_yu = 0.0;
};

class Evaluator {
 public:
  Evaluator(const BifurcationProblem& p, const ParamVector& params)
      : problem_(p), resolved_(p.resolve(params)) {}

  double value(double y, double u) const { return problem_.evaluate(y, u, resolved_); }

  Local first(double y, double u) const {
    const MultiJet g = jet(y, u, 1);
    return {g.value(), g.partial({1, 0, 0}), g.partial({0, 1, 0})};
  }

  Local2 second(double y, double u) const {
    const MultiJet g = jet(y, u, 2);
    return {g.value(), g.partial({1, 0, 0}), g.partial({0, 1, 0}), g.partial({2, 0, 0}),
            g.partial({1, 1, 0})};
  }

 private:
  MultiJet jet(double y, double u, int order) const {
    const MultiJet yj = MultiJet::variable(2, order, 0, y);
    const MultiJet uj = MultiJet::variable(2, order, 1, u);
    std::vector<MultiJet> pj;
    pj.reserve(resolved_.size());
    for (double v : resolved_) pj.emplace_back(2, order, v);
    return problem_.evaluate(yj, uj, pj);
  }

  const BifurcationProblem& problem_;
  std::vector<double> resolved_;
};

/// Roots of f on [lo, hi] from sign changes on a uniform grid, refined by TOMS 748.
std::vector<double> grid_roots(const std::function<double(double)>& f, double lo, double hi,
                               int n) {
  std::vector<double> roots;
  n = std::max(n, 2);
  const double dx = (hi - lo) / (n - 1);
  double xa = lo;
  double fa = f(xa);
  if (fa == 0.0) roots.push_back(xa);
  for (int i = 1; i < n; ++i) {
    const double xb = i == n - 1 ? hi : lo + dx * i;
    const double fb = f(xb);
    if (fb == 0.0) {
      roots.push_back(xb);
    } else if (std::isfinite(fa) && std::isfinite(fb) && (fa < 0.0) != (fb < 0.0) && fa != 0.0) {
      std::uintmax_t iters = 100;
      const auto r = boost::math::tools::toms748_solve(
          f, xa, xb, fa, fb, boost::math::tools::eps_tolerance<double>(52), iters);
      roots.push_back(0.5 * (r.first + r.second));
    }
    xa = xb;
    fa = fb;
  }
  return roots;
}

struct Point {
  double u = 0.0, y = 0.0;
};

double dist(Point a, Point b) { return std::hypot(a.u - b.u, a.y - b.y); }

enum class Axis { u, y };

struct SeedLine {
  Axis fixed;
  double value;
};

class Tracer {
 public:
  Tracer(const Evaluator& ev, Interval uw, Interval yw, const TraceOptions& o, double h)
      : ev_(ev), uw_(uw), yw_(yw), o_(o), h0_(h) {}

  bool inside(Point z) const {
    const double mu = 1e-12 * std::max(1.0, uw_.width());
    const double my = 1e-12 * std::max(1.0, yw_.width());
    return z.u >= uw_.lo - mu && z.u <= uw_.hi + mu && z.y >= yw_.lo - my && z.y <= yw_.hi + my;
  }

  /// Unit tangent (du, dy) = (g_y, -g_u) / |grad g|.
  std::optional<Point> tangent(Point z) const {
    const Local l = ev_.first(z.y, z.u);
    const double n = std::hypot(l.g_y, l.g_u);
    if (!(n > 0.0) || !std::isfinite(n)) return std::nullopt;
    return Point{l.g_y / n, -l.g_u / n};
  }

  /// Newton on g = 0 restricted to the line through the predictor orthogonal to t.
  std::optional<Point> correct(Point pred, Point t) const {
    Point z = pred;
    for (int it = 0; it < 12; ++it) {
      const Local l = ev_.first(z.y, z.u);
      if (!std::isfinite(l.g)) return std::nullopt;
      const double c = t.u * (z.u - pred.u) + t.y * (z.y - pred.y);
      const double det = l.g_u * t.y - l.g_y * t.u;
      if (std::abs(det) < 1e-300) return std::nullopt;
      const double du = (-l.g * t.y + c * l.g_y) / det;
      const double dy = (-c * l.g_u + l.g * t.u) / det;
      z.u += du;
      z.y += dy;
      if (std::hypot(du, dy) < 1e-13 * (1.0 + std::hypot(z.u, z.y))) {
        if (std::abs(ev_.value(z.y, z.u)) < o_.residual_tolerance) return z;
      }
    }
    if (std::abs(ev_.value(z.y, z.u)) < o_.residual_tolerance) return z;
    return std::nullopt;
  }

  /// Root of g on a coordinate line, started near `guess`.
  std::optional<Point> on_line(SeedLine line, Point guess) const {
    Point z = guess;
    if (line.fixed == Axis::u) z.u = line.value;
    else z.y = line.value;
    for (int it = 0; it < 30; ++it) {
      const Local l = ev_.first(z.y, z.u);
      const double d = line.fixed == Axis::u ? l.g_y : l.g_u;
      if (!std::isfinite(l.g) || d == 0.0) return std::nullopt;
      const double step = -l.g / d;
      if (line.fixed == Axis::u) z.y += step;
      else z.u += step;
      if (std::abs(step) < 1e-14 * (1.0 + std::abs(line.fixed == Axis::u ? z.y : z.u))) break;
    }
    if (std::abs(ev_.value(z.y, z.u)) < o_.residual_tolerance) return z;
    return std::nullopt;
  }

  /// Boundary crossing between an inside point a and an outside point b.
  std::optional<Point> clip(Point a, Point b) const {
    double best = 2.0;
    SeedLine line{Axis::u, 0.0};
    auto consider = [&](double av, double bv, double bound, Axis axis) {
      if ((av - bound) * (bv - bound) <= 0.0 && av != bv) {
        const double f = (bound - av) / (bv - av);
        if (f < best) {
          best = f;
          line = {axis, bound};
        }
      }
    };
    consider(a.u, b.u, uw_.lo, Axis::u);
    consider(a.u, b.u, uw_.hi, Axis::u);
    consider(a.y, b.y, yw_.lo, Axis::y);
    consider(a.y, b.y, yw_.hi, Axis::y);
    if (best > 1.0) return std::nullopt;
    const Point guess{a.u + best * (b.u - a.u), a.y + best * (b.y - a.y)};
    auto z = on_line(line, guess);
    if (z && dist(*z, guess) < 2.0 * dist(a, b) && inside(*z)) return z;
    return std::nullopt;
  }

  struct HalfBranch {
    std::vector<Point> points;
    bool closed = false;
    bool truncated = false;
  };

  HalfBranch walk(Point start, double direction) const {
    HalfBranch out;
    out.points.push_back(start);
    auto t0 = tangent(start);
    if (!t0) {
      out.truncated = true;
      return out;
    }
    Point t{t0->u * direction, t0->y * direction};
    Point z = start;
    double travelled = 0.0;
    for (std::size_t step = 0; step < o_.max_steps_per_branch; ++step) {
      std::optional<Point> next;
      double h = h0_;
      for (int k = 0; k <= o_.max_halvings; ++k, h *= 0.5) {
        const Point pred{z.u + h * t.u, z.y + h * t.y};
        auto c = correct(pred, t);
        if (c && dist(*c, z) < 2.0 * h && dist(*c, z) > 0.05 * h) {
          next = c;
          break;
        }
      }
      if (!next) {
        out.truncated = true;
        return out;
      }
      auto tn = tangent(*next);
      if (!tn) {
        out.truncated = true;
        return out;
      }
      Point t_new = *tn;
      if (t_new.u * t.u + t_new.y * t.y < 0.0) t_new = {-t_new.u, -t_new.y};

      if (!inside(*next)) {
        if (auto b = clip(z, *next)) {
          if (dist(*b, z) > 1e-12) out.points.push_back(*b);
        }
        return out;
      }
      travelled += dist(*next, z);
      // back at the start: an isola
      if (travelled > 3.0 * h0_ && dist(*next, start) < 0.75 * h0_ &&
          (start.u - next->u) * t_new.u + (start.y - next->y) * t_new.y >= 0.0) {
        out.points.push_back(*next);
        out.closed = true;
        return out;
      }
      out.points.push_back(*next);
      z = *next;
      t = t_new;
    }
    out.truncated = true;
    return out;
  }

 private:
  const Evaluator& ev_;
  Interval uw_, yw_;
  const TraceOptions& o_;
  double h0_;
};

bool covered(const Tracer& tracer, const std::vector<Branch>& branches, SeedLine line, Point seed,
             double tol) {
  auto coord = [&](const BranchSample& s) { return line.fixed == Axis::u ? s.u : s.y; };
  for (const auto& b : branches) {
    const auto& s = b.samples;
    const std::size_t n = s.size();
    const std::size_t segments = b.closed ? n : (n == 0 ? 0 : n - 1);
    for (std::size_t i = 0; i < n; ++i) {
      if (dist({s[i].u, s[i].y}, seed) < tol) return true;
    }
    for (std::size_t i = 0; i < segments; ++i) {
      const auto& a = s[i];
      const auto& c = s[(i + 1) % n];
      const double ca = coord(a) - line.value;
      const double cc = coord(c) - line.value;
      if (ca * cc > 0.0 || ca == cc) continue;
      const double f = ca / (ca - cc);
      const Point guess{a.u + f * (c.u - a.u), a.y + f * (c.y - a.y)};
      if (dist(guess, seed) > 4.0 * std::max(dist({a.u, a.y}, {c.u, c.y}), tol)) continue;
      auto z = tracer.on_line(line, guess);
      if (z && dist(*z, seed) < tol) return true;
    }
  }
  return false;
}

std::optional<Point> refine_fold(const Evaluator& ev, Point guess) {
  Point z = guess;
  for (int it = 0; it < 30; ++it) {
    const Local2 l = ev.second(z.y, z.u);
    // unknowns (u, y); rows g and g_y
    const double a = l.g_u, b = l.g_y, c = l.g_yu, d = l.g_yy;
    const double det = a * d - b * c;
    if (!std::isfinite(det) || std::abs(det) < 1e-300) return std::nullopt;
    const double du = (-l.g * d + b * l.g_y) / det;
    const double dy = (-a * l.g_y + c * l.g) / det;
    z.u += du;
    z.y += dy;
    if (std::hypot(du, dy) < 1e-14 * (1.0 + std::hypot(z.u, z.y))) break;
  }
  const Local l = ev.first(z.y, z.u);
  if (std::abs(l.g) < 1e-10 && std::abs(l.g_y) < 1e-8) return z;
  return std::nullopt;
}

}  // namespace

BranchDiagram trace(const BifurcationProblem& problem, const ParamVector& params,
                    Interval u_window, Interval y_window, const TraceOptions& opts) {
  if (!(u_window.hi > u_window.lo) || !(y_window.hi > y_window.lo)) {
    throw DomainError("trace windows must be nonempty");
  }
  if (opts.step < 0.0 || !std::isfinite(opts.step)) {
    throw DomainError("arclength step must be positive");
  }
  const double h =
      opts.step > 0.0 ? opts.step : 1e-2 * std::hypot(u_window.width(), y_window.width());
  const Evaluator ev(problem, params);
  const Tracer tracer(ev, u_window, y_window, opts, h);

  BranchDiagram d;
  d.u_window = u_window;
  d.y_window = y_window;
  d.arclength_step = h;

  std::vector<SeedLine> lines{{Axis::u, u_window.lo},
                              {Axis::u, u_window.hi},
                              {Axis::y, y_window.lo},
                              {Axis::y, y_window.hi}};
  for (int k = 1; k <= opts.interior_seed_lines; ++k) {
    lines.push_back({Axis::u, u_window.lo + u_window.width() * k / (opts.interior_seed_lines + 1)});
  }

  for (const SeedLine& line : lines) {
    std::vector<double> roots;
    if (line.fixed == Axis::u) {
      roots = grid_roots([&](double y) { return ev.value(y, line.value); }, y_window.lo,
                         y_window.hi, opts.seed_grid);
    } else {
      roots = grid_roots([&](double u) { return ev.value(line.value, u); }, u_window.lo,
                         u_window.hi, opts.seed_grid);
    }
    for (double r : roots) {
      const Point seed = line.fixed == Axis::u ? Point{line.value, r} : Point{r, line.value};
      if (std::abs(ev.value(seed.y, seed.u)) >= opts.residual_tolerance) continue;
      if (covered(tracer, d.branches, line, seed, opts.merge_tolerance)) continue;

      auto forward = tracer.walk(seed, 1.0);
      std::vector<Point> pts;
      bool closed = forward.closed;
      bool truncated = forward.truncated;
      if (closed) {
        pts = std::move(forward.points);
        pts.pop_back();  // the closing point duplicates the seed region
      } else {
        auto backward = tracer.walk(seed, -1.0);
        truncated = truncated || backward.truncated;
        pts.assign(backward.points.rbegin(), backward.points.rend());
        pts.insert(pts.end(), forward.points.begin() + 1, forward.points.end());
      }

      Branch b;
      b.closed = closed;
      b.truncated = truncated;
      const std::size_t branch_index = d.branches.size();
      std::vector<double> slopes;
      slopes.reserve(pts.size());
      for (const Point& p : pts) {
        const Local l = ev.first(p.y, p.u);
        slopes.push_back(l.g_y);
      }
      const std::size_t n = pts.size();
      const std::size_t segments = closed ? n : (n == 0 ? 0 : n - 1);
      for (std::size_t i = 0; i < n; ++i) {
        b.samples.push_back({pts[i].u, pts[i].y,
                             stability_from_slope(slopes[i], opts.stability_tolerance)});
        if (i >= segments) continue;
        const std::size_t j = (i + 1) % n;
        const double s0 = slopes[i];
        const double s1 = slopes[j];
        if (!(s0 * s1 < 0.0)) continue;
        const double f = s0 / (s0 - s1);
        const Point guess{pts[i].u + f * (pts[j].u - pts[i].u),
                          pts[i].y + f * (pts[j].y - pts[i].y)};
        auto fold = refine_fold(ev, guess);
        if (!fold || dist(*fold, guess) > 2.0 * h) continue;
        const Local l = ev.first(fold->y, fold->u);
        b.samples.push_back({fold->u, fold->y, Stability::marginal});
        // a crossing with g_u = 0 as well is a bifurcation point, not a turning point
        if (std::abs(l.g_u) > 1e-6) d.folds.push_back({fold->u, fold->y, branch_index, l.g_y});
      }
      d.branches.push_back(std::move(b));
    }
  }
  return d;
}

std::vector<Interval> bistable_intervals(const BranchDiagram& diagram, int resolution) {
  resolution = std::max(resolution, 1);
  const Interval w = diagram.u_window;
  const double du = w.width() / resolution;
  std::vector<int> count(static_cast<std::size_t>(resolution), 0);
  for (const auto& b : diagram.branches) {
    const auto& s = b.samples;
    const std::size_t n = s.size();
    const std::size_t segments = b.closed ? n : (n == 0 ? 0 : n - 1);
    for (std::size_t i = 0; i < segments; ++i) {
      const auto& a = s[i];
      const auto& c = s[(i + 1) % n];
      if (a.stability != Stability::stable || c.stability != Stability::stable) continue;
      const double lo = std::min(a.u, c.u);
      const double hi = std::max(a.u, c.u);
      // grid points at cell midpoints, half-open segments so shared samples count once
      const int k0 = std::max(0, static_cast<int>(std::ceil((lo - w.lo) / du - 0.5)));
      for (int k = k0; k < resolution; ++k) {
        const double u = w.lo + (k + 0.5) * du;
        if (u >= hi) break;
        if (u >= lo) ++count[static_cast<std::size_t>(k)];
      }
    }
  }
  std::vector<Interval> out;
  int start = -1;
  for (int k = 0; k <= resolution; ++k) {
    const bool on = k < resolution && count[static_cast<std::size_t>(k)] >= 2;
    if (on && start < 0) start = k;
    if (!on && start >= 0) {
      out.push_back({w.lo + (start + 0.5) * du, w.lo + (k - 0.5) * du});
      start = -1;
    }
  }
  // away from the window edges an interval can only end at a fold, but the
  // last stable sample before the fold may sit a few grid cells short of it
  auto snap = [&](double& end) {
    if (end - w.lo <= du || w.hi - end <= du) return;
    double best = 0.02 * w.width();
    for (const auto& f : diagram.folds) {
      if (std::abs(f.u - end) <= best) {
        best = std::abs(f.u - end);
        end = f.u;
      }
    }
  };
  for (auto& iv : out) {
    const double lo = iv.lo, hi = iv.hi;
    snap(iv.lo);
    snap(iv.hi);
    if (!(iv.hi > iv.lo)) iv = {lo, hi};
  }
  return out;
}

DiagramClass classify(const BranchDiagram& diagram) {
  if (diagram.empty()) throw DomainError("cannot classify an empty diagram");
  DiagramClass c;
  c.fold_count = static_cast<int>(diagram.folds.size());
  c.bistable_u_intervals = bistable_intervals(diagram);
  const auto& iv = c.bistable_u_intervals;

  if (c.fold_count == 0 && diagram.branches.size() == 1 && iv.empty()) {
    c.label = DiagramLabel::monotone;
  } else if (c.fold_count == 2 && diagram.folds[0].branch == diagram.folds[1].branch &&
             iv.size() == 1) {
    c.label = DiagramLabel::bistable_hysteresis;
  } else if (c.fold_count == 4 && iv.size() == 2) {
    c.label = DiagramLabel::mirrored_hysteresis;
  } else {
    c.label = DiagramLabel::other;
  }
  return c;
}

std::vector<Equilibrium> equilibria_at(const BifurcationProblem& problem, const ParamVector& params,
                                       double u, Interval y_window, const EquilibriumOptions& opts) {
  if (!(y_window.hi > y_window.lo)) throw DomainError("equilibrium window must be nonempty");
  const Evaluator ev(problem, params);
  const auto roots =
      grid_roots([&](double y) { return ev.value(y, u); }, y_window.lo, y_window.hi, opts.grid);
  std::vector<Equilibrium> out;
  out.reserve(roots.size());
  for (double y : roots) {
    const Local l = ev.first(y, u);
    out.push_back({y, stability_from_slope(l.g_y, opts.stability_tolerance), l.g_y});
  }
  return out;
}

}  // namespace octk
