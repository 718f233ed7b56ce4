// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "octk/cli/figures.hpp"
#include "octk/continuation.hpp"
#include "octk/error.hpp"
#include "octk/integrate.hpp"
#include "octk/recognition.hpp"
#include "octk/scan.hpp"

using namespace octk;
using namespace octk::cli;

namespace {

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

/// Runs one criterion under a wall-clock limit and prints its line.
bool criterion(int id, const char* title, double limit_s, const std::function<void(Outcome&)>& body) {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.passed = false;
    out.detail << "[exception: " << e.what() << "] ";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = secs < limit_s;
  if (!in_time) out.detail << "[over time limit] ";
  const bool ok = out.passed && in_time;
  std::printf("%s  %d  %-34s %7.2f s (limit %g s)  %s\n", ok ? "PASS" : "FAIL", id, title, secs,
              limit_s, out.detail.str().c_str());
  std::fflush(stdout);
  return ok;
}

BifurcationProblem dynamic_hysteresis_circuit(double delta = 0.5) {
  ProblemSpec spec;
  spec.kind = "hysteresis-circuit";
  spec.convention = SignConvention::dynamic_input;
  spec.delta = delta;
  return make_problem(spec);
}

int sign_changes(const BifurcationProblem& p, const ParamVector& q, double u, Interval y, int n) {
  int count = 0;
  double prev = p(y.lo, u, q);
  for (int i = 1; i < n; ++i) {
    const double cur = p(y.lo + y.width() * i / (n - 1), u, q);
    if ((prev < 0.0) != (cur < 0.0)) ++count;
    prev = cur;
  }
  return count;
}

int polyline_crossings(const BranchDiagram& d, double u) {
  int count = 0;
  for (const auto& b : d.branches) {
    for (std::size_t i = 1; i < b.samples.size(); ++i) {
      if ((b.samples[i - 1].u < u) != (b.samples[i].u < u)) ++count;
    }
  }
  return count;
}

void recognition_suite(Outcome& o) {
  const auto tanh = SigmoidFamily::tanh();
  o.require(check_hysteresis(normal_form(NormalForm::hysteresis), 0.0, 0.0, {}).passed,
            "hysteresis normal form");
  o.require(check_hysteresis(dynamic_hysteresis_circuit(), 0.0, 0.0, {{"beta", 0.0}}).passed,
            "hysteresis circuit");
  o.require(check_wcusp(normal_form(NormalForm::wcusp), 0.0, 0.0, {}).passed, "wcusp normal form");
  o.require(check_wcusp(wcusp_circuit(tanh, 0.5), 0.0, 0.0,
                        {{"alpha", 0.0}, {"beta", 0.0}, {"gamma", 0.0}})
                .passed,
            "wcusp circuit");
  // eps * {1, y, y^2, u, u y}; each hits the zero condition of the matching partial
  struct Spoiler {
    int py, pu;
    const char* condition;
  };
  const Spoiler spoilers[] = {{0, 0, "g"}, {1, 0, "g_y"}, {2, 0, "g_yy"}, {0, 1, "g_u"}, {1, 1, "g_yu"}};
  int flipped = 0, total = 0;
  for (const auto& s : spoilers) {
    for (bool wcusp : {false, true}) {
      const bool hysteresis_has = s.pu == 0;  // hysteresis conditions: g, g_y, g_yy
      if (!wcusp && !hysteresis_has) continue;
      const auto base = normal_form(wcusp ? NormalForm::wcusp : NormalForm::hysteresis);
      const auto spoiled = add_monomial(base, 1e-2, s.py, s.pu);
      const auto v = wcusp ? check_wcusp(spoiled, 0.0, 0.0, {}) : check_hysteresis(spoiled, 0.0, 0.0, {});
      ++total;
      if (!v.passed && !v.zero(s.condition)->passed) ++flipped;
    }
  }
  o.require(flipped == total, "spoilers");
  o.detail << "spoilers flipped " << flipped << "/" << total;
}

void unfolding_determinant(Outcome& o) {
  const auto nf = check_hysteresis_unfolding(normal_form(NormalForm::hysteresis_unfolding));
  const auto circuit = check_hysteresis_unfolding(dynamic_hysteresis_circuit());
  const auto additive = BifurcationProblem::make(
      "-y^3 - u + beta", {"beta"}, [](const auto& y, const auto& u, auto p) { return -(y * y * y) - u + p[0]; });
  const auto add = check_hysteresis_unfolding(additive);
  o.require(nf.passed, "normal form");
  o.require(circuit.passed, "circuit");
  o.require(!add.passed, "additive counterexample");
  o.detail << "det " << nf.sign_conditions.back().value << " / " << circuit.sign_conditions.back().value
           << " / " << add.sign_conditions.back().value;
}

void continuation_oracle(Outcome& o) {
  const auto p = normal_form(NormalForm::hysteresis_unfolding);
  const BranchDiagram d = trace(p, {{"beta", 1.0}}, {-1.0, 1.0}, {-1.5, 1.5});
  const double yf = 1.0 / std::sqrt(3.0), uf = 2.0 * std::pow(3.0, -1.5);
  double err = 0.0;
  for (const auto& f : d.folds) err = std::max({err, std::abs(std::abs(f.y) - yf), std::abs(std::abs(f.u) - uf)});
  o.require(d.folds.size() == 2 && err < 1e-6, "fold locations");

  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> beta_dist(-1.0, 2.0), u_dist(-0.95, 0.95);
  const Interval uw{-1.0, 1.0}, yw{-2.0, 2.0};
  int mismatches = 0, checks = 0;
  for (int k = 0; k < 50; ++k) {
    const ParamVector q{{"beta", beta_dist(rng)}};
    const BranchDiagram dk = trace(p, q, uw, yw);
    for (int j = 0; j < 4; ++j) {
      const double u = u_dist(rng);
      ++checks;
      if (polyline_crossings(dk, u) != sign_changes(p, q, u, yw, 10000)) ++mismatches;
    }
  }
  o.require(mismatches == 0, "root counts");
  o.detail << "fold error " << err << ", root-count mismatches " << mismatches << "/" << checks;
}

void static_regime_map(Outcome& o) {
  const ScanAxis axis{"beta", -1.0, 1.0, 41};
  const ParameterChart chart = scan_static(dynamic_hysteresis_circuit(), {}, {axis});
  int wrong = 0;
  for (int i = 0; i < axis.resolution; ++i) {
    const double b = axis.value(i);
    if (b < 0.0 && chart.cell(i).label != "monotone") ++wrong;
    if (b > 0.0 && chart.cell(i).label != "bistable-hysteresis") ++wrong;
  }
  o.require(wrong == 0, "cell labels");
  o.require(chart.boundaries.size() == 1, "single boundary");
  const double at = chart.boundaries.empty() ? NAN : chart.boundaries[0].point[0];
  o.require(std::abs(at) <= axis.spacing(), "boundary location");
  o.detail << "boundary at beta=" << at << ", mislabeled cells " << wrong;
}

void relaxation_oscillation(Outcome& o) {
  const RelaxationRun r = relaxation_protocol();
  const double cv = r.report.evidence.isi_cv.value_or(INFINITY);
  o.require(r.report.label == RegimeLabel::periodic_spiking, "label");
  o.require(cv < 0.05, "isi cv");
  o.require(r.start_distance <= 1e-3 + 1e-15 && r.escape_time > 0.0, "origin escape");
  o.detail << "label " << to_string(r.report.label) << ", cv " << cv << ", escape t=" << r.escape_time;
}

void excitability(Outcome& o) {
  const ExcitabilityRun r = excitability_protocol();
  const auto& ratios = r.response.evidence.pulse_ratios;
  o.require(r.before_pulses.label == RegimeLabel::quiescent, "rest before pulses");
  o.require(ratios.size() == 2, "two pulses");
  for (const auto& p : r.pulses) o.require(p.height == 0.1, "pulse height");
  for (double q : ratios) o.require(q >= 5.0, "ratio");
  o.detail << "ratios";
  for (double q : ratios) o.detail << " " << q;
}

std::optional<double> rest_spike_alpha;

void rest_spike_bistability(Outcome& o) {
  const AlphaSelection sel = select_rest_spike_alpha(0);
  o.require(sel.alpha.has_value(), "region found");
  if (!sel.alpha) return;
  rest_spike_alpha = sel.alpha;
  const RestSpikeRun r = rest_spike_protocol(*sel.alpha, 0);
  o.require(r.probe.evidence.equilibrium_clusters >= 1, "equilibrium cluster");
  o.require(r.probe.evidence.periodic_clusters >= 1, "periodic cluster");
  o.require(r.toggled(), "alpha pulse toggle");
  o.detail << "alpha " << *sel.alpha << ", clusters " << r.probe.evidence.equilibrium_clusters << "+"
           << r.probe.evidence.periodic_clusters << ", segments";
  for (const auto& s : r.segments) o.detail << " " << to_string(s.label);
}

void bursting(Outcome& o) {
  const double a7 = rest_spike_alpha ? *rest_spike_alpha : select_rest_spike_alpha(0).alpha.value();
  const BurstSelection sel = select_burst_alpha(a7);
  o.require(sel.alpha.has_value(), "bursting alpha found");
  if (!sel.alpha) return;
  const BurstRun r = burst_protocol(*sel.alpha, sel.wiring);
  const auto& ev = r.early.evidence;
  const std::size_t min_spb =
      ev.spikes_per_burst.empty() ? 0 : *std::min_element(ev.spikes_per_burst.begin(), ev.spikes_per_burst.end());
  const double sep = ev.separation.value_or(0.0);
  o.require(r.early.label == RegimeLabel::bursting, "bursting");
  o.require(min_spb >= 2, "spikes per burst");
  o.require(sep >= 5.0, "separation");
  o.require(r.late.label == RegimeLabel::periodic_spiking, "late tonic spiking");
  o.detail << "wiring " << to_string(sel.wiring) << (sel.attempts.size() > 1 ? " (fallback)" : "")
           << ", alpha " << *sel.alpha << ", spikes/burst>=" << min_spb << ", separation " << sep
           << ", late " << to_string(r.late.label);
}

void cross_module(Outcome& o) {
  const auto tanh = SigmoidFamily::tanh();
  std::mt19937_64 rng(99);

  // continuation stability against perturbed simulations of the latch circuit
  {
    const auto p = dynamic_hysteresis_circuit();
    std::uniform_real_distribution<double> beta_dist(-1.0, 2.0), u_dist(-1.0, 1.0);
    int compared = 0, disagree = 0, skipped = 0;
    for (int k = 0; k < 20; ++k) {
      const double beta = beta_dist(rng), u = u_dist(rng);
      const auto ode = circuit_ode(CircuitKind::bistable, tanh, {{"beta", beta}});
      for (const auto& e : equilibria_at(p, {{"beta", beta}}, u, {-1.5, 1.5})) {
        if (std::abs(e.g_y) < 1e-2) {
          ++skipped;
          continue;
        }
        const double delta = 1e-4;
        bool grows = false, all_shrink = true;
        for (double side : {-1.0, 1.0}) {
          const std::vector<double> x0{e.y + side * delta};
          const Trajectory tr = integrate(ode, InputSignal::constant(u), x0, 100.0);
          const double dist = std::abs(tr.outputs.back() - e.y);
          if (dist > delta) grows = true;
          if (dist >= delta) all_shrink = false;
        }
        const bool sim_stable = all_shrink && !grows;
        ++compared;
        if (sim_stable != (e.stability == Stability::stable)) ++disagree;
      }
    }
    o.require(disagree == 0, "stability agreement");
    o.detail << "stability " << compared - disagree << "/" << compared << " (" << skipped
             << " near-fold skipped); ";
  }

  // fast nullclines against the static circuits at input u + x_s
  {
    std::uniform_real_distribution<double> s(-2.0, 2.0);
    const auto relax = circuit_ode(CircuitKind::relaxation, tanh, {{"beta", 0.7}}, {0.01, 1.0});
    const auto hyst = dynamic_hysteresis_circuit();
    const ParamVector wq{{"alpha", -0.3}, {"beta", 0.5}, {"gamma", 1.0}};
    const auto rest = circuit_ode(CircuitKind::rest_spike, tanh, wq, {0.0075, 1.0});
    const auto wc = wcusp_circuit(tanh, 0.5);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double xf = s(rng), xs = s(rng), u = s(rng);
      worst = std::max(worst, std::abs(relax.fast_residual(xf, xs, u, 0.0) - hyst(xf, u + xs, {{"beta", 0.7}})));
      worst = std::max(worst, std::abs(rest.fast_residual(xf, xs, u, -0.3) - wc(xf, u + xs, wq)));
    }
    o.require(worst < 1e-10, "nullcline residual");
    o.detail << "nullcline residual " << worst << "; ";
  }

  // jets against fourth-order differences of the next-lower jet derivative
  {
    const double h = 1e-3;
    double worst = 0.0;
    for (const auto& sg : {SigmoidFamily::tanh(), SigmoidFamily::logistic(), SigmoidFamily::algebraic()}) {
      for (double x : {-2.0, -0.6, 0.0, 0.3, 1.4}) {
        for (int n = 1; n <= 4; ++n) {
          auto lower = [&](double v) { return sg.eval_jet(v, n - 1).derivative(n - 1); };
          const double fd = (-lower(x + 2 * h) + 8 * lower(x + h) - 8 * lower(x - h) + lower(x - 2 * h)) / (12 * h);
          const double ref = sg.eval_jet(x, n).derivative(n);
          worst = std::max(worst, std::abs(ref - fd) / std::max(1.0, std::abs(ref)));
        }
      }
    }
    o.require(worst < 1e-5, "jet vs finite difference");
    o.detail << "jet-FD error " << worst;
  }
}

}  // namespace

int main() {
  int failed = 0;
  failed += !criterion(1, "recognition suite", 1.0, recognition_suite);
  failed += !criterion(2, "unfolding determinant", 1.0, unfolding_determinant);
  failed += !criterion(3, "continuation oracle", 10.0, continuation_oracle);
  failed += !criterion(4, "static regime map", 10.0, static_regime_map);
  failed += !criterion(5, "relaxation oscillation", 30.0, relaxation_oscillation);
  failed += !criterion(6, "excitability", 30.0, excitability);
  failed += !criterion(7, "rest-spike bistability", 120.0, rest_spike_bistability);
  failed += !criterion(8, "bursting", 300.0, bursting);
  failed += !criterion(9, "cross-module invariants", 30.0, cross_module);
  std::printf("%d of 9 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
