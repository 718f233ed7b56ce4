#include "octk/sigmoid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "octk/error.hpp"

namespace octk {

namespace {

// tanh about u: t' = 1 - t^2 =: s. s_0 = sech^2(u) is evaluated directly so
// that derivatives keep full relative accuracy in the saturated tails.
std::vector<double> tanh_taylor(double u, int order) {
  std::vector<double> t(order + 1, 0.0);
  std::vector<double> s(order + 1, 0.0);
  t[0] = std::tanh(u);
  const double e = std::exp(-2.0 * std::abs(u));
  s[0] = 4.0 * e / ((1.0 + e) * (1.0 + e));
  for (int k = 0; k < order; ++k) {
    if (k > 0) {
      double acc = 0.0;
      for (int j = 0; j <= k; ++j) acc += t[j] * t[k - j];
      s[k] = -acc;
    }
    t[k + 1] = s[k] / (k + 1);
  }
  return t;
}

// S(u) = 4 sigma(u) - 2 with sigma' = sigma * (1 - sigma). Both sigma and
// 1 - sigma are seeded from their own exponentials.
std::vector<double> logistic_taylor(double u, int order) {
  std::vector<double> p(order + 1, 0.0);
  std::vector<double> q(order + 1, 0.0);
  auto sigma = [](double x) {
    return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
  };
  p[0] = sigma(u);
  q[0] = sigma(-u);
  for (int k = 0; k < order; ++k) {
    double acc = 0.0;
    for (int j = 0; j <= k; ++j) acc += p[j] * q[k - j];
    p[k + 1] = acc / (k + 1);
    q[k + 1] = -p[k + 1];
  }
  std::vector<double> out(order + 1);
  out[0] = 2.0 * std::tanh(0.5 * u);
  for (int k = 1; k <= order; ++k) out[k] = 4.0 * p[k];
  return out;
}

// S(u) = u * w(u), w = g^(-1/2), g = 1 + u^2. Power-series recurrence for g^p:
// k g_0 w_k = sum_{j=1}^{k} (p j - (k - j)) g_j w_{k-j}.
std::vector<double> algebraic_taylor(double u, int order) {
  const double g[3] = {1.0 + u * u, 2.0 * u, 1.0};
  const double p = -0.5;
  std::vector<double> w(order + 1, 0.0);
  w[0] = 1.0 / std::sqrt(g[0]);
  for (int k = 1; k <= order; ++k) {
    double acc = 0.0;
    for (int j = 1; j <= std::min(k, 2); ++j) acc += (p * j - (k - j)) * g[j] * w[k - j];
    w[k] = acc / (k * g[0]);
  }
  std::vector<double> out(order + 1);
  out[0] = u * w[0];
  for (int k = 1; k <= order; ++k) out[k] = u * w[k] + w[k - 1];
  return out;
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

std::string_view to_string(SigmoidKind kind) {
  switch (kind) {
    case SigmoidKind::hyperbolic_tangent: return "tanh";
    case SigmoidKind::logistic_centered: return "logistic";
    case SigmoidKind::algebraic: return "algebraic";
    case SigmoidKind::custom: return "custom";
  }
  return "custom";
}

SigmoidKind parse_sigmoid_kind(std::string_view name) {
  if (name == "tanh") return SigmoidKind::hyperbolic_tangent;
  if (name == "logistic") return SigmoidKind::logistic_centered;
  if (name == "algebraic") return SigmoidKind::algebraic;
  throw DomainError("unknown sigmoid kind '" + std::string(name) +
                    "' (expected tanh, logistic or algebraic)");
}

SigmoidFamily::SigmoidFamily(SigmoidKind kind, std::string name, TaylorFn custom, bool verified)
    : kind_(kind), name_(std::move(name)), custom_(std::move(custom)), verified_(verified) {}

SigmoidFamily SigmoidFamily::tanh() { return {SigmoidKind::hyperbolic_tangent, "tanh", {}, true}; }
SigmoidFamily SigmoidFamily::logistic() {
  return {SigmoidKind::logistic_centered, "logistic", {}, true};
}
SigmoidFamily SigmoidFamily::algebraic() { return {SigmoidKind::algebraic, "algebraic", {}, true}; }

SigmoidFamily SigmoidFamily::of_kind(SigmoidKind kind) {
  switch (kind) {
    case SigmoidKind::hyperbolic_tangent: return tanh();
    case SigmoidKind::logistic_centered: return logistic();
    case SigmoidKind::algebraic: return algebraic();
    case SigmoidKind::custom: break;
  }
  throw DomainError("SigmoidFamily::of_kind: custom kinds need a Taylor function");
}

SigmoidFamily SigmoidFamily::make_unverified(std::string name, TaylorFn taylor) {
  if (!taylor) throw DomainError("custom sigmoid '" + name + "' has no Taylor function");
  return {SigmoidKind::custom, std::move(name), std::move(taylor), false};
}

double SigmoidFamily::operator()(double u) const {
  switch (kind_) {
    case SigmoidKind::hyperbolic_tangent: return std::tanh(u);
    case SigmoidKind::logistic_centered: return 2.0 * std::tanh(0.5 * u);
    case SigmoidKind::algebraic: return u / std::sqrt(1.0 + u * u);
    case SigmoidKind::custom: return custom_(u, 0).at(0);
  }
  return 0.0;
}

std::vector<double> SigmoidFamily::taylor(double u, int order) const {
  if (order < 0) throw DomainError("SigmoidFamily::taylor: negative order");
  switch (kind_) {
    case SigmoidKind::hyperbolic_tangent: return tanh_taylor(u, order);
    case SigmoidKind::logistic_centered: return logistic_taylor(u, order);
    case SigmoidKind::algebraic: return algebraic_taylor(u, order);
    case SigmoidKind::custom: {
      auto c = custom_(u, order);
      if (c.size() < static_cast<std::size_t>(order + 1)) {
        throw DomainError("custom sigmoid '" + name_ + "' returned too few coefficients");
      }
      c.resize(order + 1);
      return c;
    }
  }
  return {};
}

double SigmoidFamily::derivative(double u, int n) const { return factorial(n) * taylor(u, n)[n]; }

Jet SigmoidFamily::eval_jet(double u, int order) const {
  if (order < 0 || order > Jet::kMaxOrder) {
    throw DomainError("eval_jet: order " + std::to_string(order) + " exceeds the cap of " +
                      std::to_string(Jet::kMaxOrder));
  }
  const auto c = taylor(u, order);
  return Jet(u, c);
}

// ---------------------------------------------------------------------------

BumpNonlinearity::BumpNonlinearity(SigmoidFamily base, double delta)
    : base_(std::move(base)), delta_(delta) {
  if (delta == 0.0 || !std::isfinite(delta)) {
    throw DomainError("bump nonlinearity needs a finite delta != 0");
  }
  offset_ = 2.0 * base_(delta_);
}

double BumpNonlinearity::operator()(double u) const {
  return base_(u + delta_) - base_(u - delta_) - offset_;
}

MultiJet BumpNonlinearity::operator()(const MultiJet& u) const {
  return base_(u + delta_) - base_(u - delta_) - offset_;
}

Jet BumpNonlinearity::eval_jet(double u, int order) const {
  const Jet plus = base_.eval_jet(u + delta_, order);
  const Jet minus = base_.eval_jet(u - delta_, order);
  std::vector<double> c(order + 1);
  for (int k = 0; k <= order; ++k) c[k] = plus.coefficient(k) - minus.coefficient(k);
  c[0] -= offset_;
  return Jet(u, c);
}

double bump_eval(const BumpNonlinearity& bump, double u) { return bump(u); }
Jet bump_jet(const BumpNonlinearity& bump, double u, int order) { return bump.eval_jet(u, order); }

// ---------------------------------------------------------------------------

std::string_view to_string(SigmoidAxiom axiom) {
  switch (axiom) {
    case SigmoidAxiom::odd: return "odd";
    case SigmoidAxiom::monotone: return "monotone";
    case SigmoidAxiom::saturated: return "saturated";
    case SigmoidAxiom::regular: return "regular";
    case SigmoidAxiom::curvature_sign: return "curvature_sign";
  }
  return "?";
}

bool AxiomReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const AxiomCheck& c) { return c.passed; });
}

const AxiomCheck& AxiomReport::check(SigmoidAxiom axiom) const {
  for (const auto& c : checks) {
    if (c.axiom == axiom) return c;
  }
  throw DomainError("axiom report has no entry for " + std::string(to_string(axiom)));
}

std::vector<double> default_axiom_grid() {
  std::vector<double> grid;
  for (int i = -400; i <= 400; ++i) grid.push_back(0.05 * i);
  return grid;
}

AxiomReport verify_sigmoid_axioms(const SigmoidFamily& s, const std::vector<double>& grid,
                                  const AxiomOptions& options) {
  if (grid.empty()) throw DomainError("verify_sigmoid_axioms: empty grid");
  {
    auto sorted = grid;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      const double a = sorted[i];
      const double b = sorted[sorted.size() - 1 - i];
      if (std::abs(a + b) > 1e-12 * std::max(1.0, std::abs(a))) {
        throw DomainError("verify_sigmoid_axioms: grid is not symmetric about 0");
      }
    }
  }

  AxiomReport report;
  report.sigmoid = s.name();

  AxiomCheck odd;
  odd.axiom = SigmoidAxiom::odd;
  AxiomCheck mono;
  mono.axiom = SigmoidAxiom::monotone;
  AxiomCheck curv;
  curv.axiom = SigmoidAxiom::curvature_sign;
  odd.passed = mono.passed = curv.passed = true;
  odd.witness_value = -1.0;
  mono.witness_value = std::numeric_limits<double>::infinity();
  bool fourth_ok = true;

  for (double u : grid) {
    const auto c = s.taylor(u, 4);
    const double asym = std::abs(c[0] + s(-u));
    if (asym > odd.witness_value) {
      odd.witness_value = asym;
      odd.witness_u = u;
    }
    if (c[1] < mono.witness_value) {
      mono.witness_value = c[1];
      mono.witness_u = u;
    }
    if (u != 0.0) {
      const double second = 2.0 * c[2];
      const bool ok = second != 0.0 && std::signbit(second) == std::signbit(-u);
      if (!ok && curv.passed) {
        curv.passed = false;
        curv.witness_u = u;
        curv.witness_value = second;
      }
      const double fourth = 24.0 * c[4];
      if (fourth == 0.0 || std::signbit(fourth) != std::signbit(-u)) fourth_ok = false;
    }
  }
  odd.passed = odd.witness_value <= options.odd_tolerance;
  odd.detail = "max |S(u) + S(-u)| on grid";
  mono.passed = mono.witness_value > 0.0;
  mono.detail = "min S'(u) on grid";
  curv.detail = "sgn S''(u) == -sgn(u) for u != 0";

  AxiomCheck sat;
  sat.axiom = SigmoidAxiom::saturated;
  {
    const double lo = *std::min_element(grid.begin(), grid.end());
    const double hi = *std::max_element(grid.begin(), grid.end());
    const double d_lo = s.derivative(lo, 1);
    const double d_hi = s.derivative(hi, 1);
    sat.witness_u = d_hi >= d_lo ? hi : lo;
    sat.witness_value = std::max(d_lo, d_hi);
    // the tail must also be decaying toward the ends
    const double inner = 0.5 * hi;
    const bool decaying = s.derivative(inner, 1) > d_hi && s.derivative(-inner, 1) > d_lo;
    sat.passed = sat.witness_value < options.saturation_tolerance && decaying;
    sat.detail = "S'(u) at the grid ends, tolerance " + std::to_string(options.saturation_tolerance);
  }

  AxiomCheck reg;
  reg.axiom = SigmoidAxiom::regular;
  {
    const auto c0 = s.taylor(0.0, 7);
    reg.witness_u = 0.0;
    reg.witness_value = c0[1];
    reg.passed = std::abs(c0[1] - 1.0) <= options.regular_tolerance;
    for (int n = 1; n <= 3 && reg.passed; ++n) {
      const int k = 2 * n + 1;
      const double d = factorial(k) * c0[k];
      if (std::abs(d) <= options.regular_tolerance) {
        reg.passed = false;
        reg.witness_value = d;
        reg.detail = "S^(" + std::to_string(k) + ")(0) vanishes";
      }
    }
    if (reg.detail.empty()) reg.detail = "S'(0) == 1 and S^(3,5,7)(0) != 0";
  }

  report.checks = {odd, mono, sat, reg, curv};
  report.fourth_derivative_sign_holds = fourth_ok;
  return report;
}

SigmoidFamily register_custom_sigmoid(std::string name, TaylorFn taylor, double saturation_tolerance) {
  auto candidate = SigmoidFamily::make_unverified(name, taylor);
  AxiomOptions opts;
  opts.saturation_tolerance = saturation_tolerance;
  const auto report = verify_sigmoid_axioms(candidate, default_axiom_grid(), opts);
  if (!report.all_passed()) {
    std::string failed;
    for (const auto& c : report.checks) {
      if (!c.passed) failed += (failed.empty() ? "" : ", ") + std::string(to_string(c.axiom));
    }
    throw DomainError("sigmoid '" + name + "' fails axioms: " + failed);
  }
  return SigmoidFamily(SigmoidKind::custom, std::move(name), std::move(taylor), true);
}

}  // namespace octk
