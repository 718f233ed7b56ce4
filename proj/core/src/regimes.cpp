#include "octk/regimes.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "octk/error.hpp"

namespace octk {

std::string_view to_string(RegimeLabel label) {
  switch (label) {
    case RegimeLabel::quiescent: return "quiescent";
    case RegimeLabel::periodic_spiking: return "periodic-spiking";
    case RegimeLabel::bursting: return "bursting";
    case RegimeLabel::excitable_pulse: return "excitable-pulse";
    case RegimeLabel::bistable_switch: return "bistable-switch";
    case RegimeLabel::rest_spike_bistable: return "rest-spike-bistable";
    case RegimeLabel::monostable: return "monostable";
    case RegimeLabel::other: return "other";
  }
  return "?";
}

RegimeLabel parse_regime_label(std::string_view name) {
  for (auto l : {RegimeLabel::quiescent, RegimeLabel::periodic_spiking, RegimeLabel::bursting,
                 RegimeLabel::excitable_pulse, RegimeLabel::bistable_switch,
                 RegimeLabel::rest_spike_bistable, RegimeLabel::monostable, RegimeLabel::other}) {
    if (to_string(l) == name) return l;
  }
  throw DomainError("unknown regime label '" + std::string(name) + "'");
}

std::vector<double> SpikeTrain::intervals() const {
  std::vector<double> out;
  for (std::size_t i = 1; i < spike_times.size(); ++i) {
    out.push_back(spike_times[i] - spike_times[i - 1]);
  }
  return out;
}

namespace {

double default_refractory(const Trajectory& traj) {
  return traj.ode ? 20.0 * traj.ode->timescales().eps_f : 0.2;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double terminal_speed(const Trajectory& traj) {
  const std::size_t n = traj.size();
  const auto d = static_cast<std::size_t>(traj.dimension);
  std::vector<double> dx(d, 0.0);
  if (traj.ode) {
    traj.ode->rhs(traj.state(n - 1), traj.u_applied[n - 1], traj.alpha_applied[n - 1], dx);
  } else if (n >= 2) {
    const double dt = traj.times[n - 1] - traj.times[n - 2];
    for (std::size_t i = 0; i < d; ++i) dx[i] = (traj.state(n - 1)[i] - traj.state(n - 2)[i]) / dt;
  }
  double s = 0.0;
  for (double v : dx) s += v * v;
  return std::sqrt(s);
}

bool input_varies(const Trajectory& traj) {
  auto varies = [](const std::vector<double>& v) {
    if (v.empty()) return false;
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi > *lo;
  };
  return varies(traj.u_applied) || varies(traj.alpha_applied);
}

/// Routh-Hurwitz on a finite-difference Jacobian.
bool equilibrium_is_stable(const CircuitODE& ode, std::span<const double> x, double u,
                           double alpha) {
  const int n = ode.dimension();
  std::array<std::array<double, 3>, 3> j{};
  std::vector<double> xp(x.begin(), x.end()), xm(x.begin(), x.end());
  std::vector<double> fp(static_cast<std::size_t>(n)), fm(static_cast<std::size_t>(n));
  for (int c = 0; c < n; ++c) {
    const double h = 1e-6 * std::max(1.0, std::abs(x[c]));
    xp[c] = x[c] + h;
    xm[c] = x[c] - h;
    ode.rhs(xp, u, alpha, fp);
    ode.rhs(xm, u, alpha, fm);
    for (int r = 0; r < n; ++r) j[r][c] = (fp[r] - fm[r]) / (2.0 * h);
    xp[c] = xm[c] = x[c];
  }
  if (n == 1) return j[0][0] < 0.0;
  if (n == 2) {
    const double tr = j[0][0] + j[1][1];
    const double det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    return tr < 0.0 && det > 0.0;
  }
  const double tr = j[0][0] + j[1][1] + j[2][2];
  const double minors = j[0][0] * j[1][1] - j[0][1] * j[1][0] + j[0][0] * j[2][2] -
                        j[0][2] * j[2][0] + j[1][1] * j[2][2] - j[1][2] * j[2][1];
  const double det = j[0][0] * (j[1][1] * j[2][2] - j[1][2] * j[2][1]) -
                     j[0][1] * (j[1][0] * j[2][2] - j[1][2] * j[2][0]) +
                     j[0][2] * (j[1][0] * j[2][1] - j[1][1] * j[2][0]);
  const double a1 = -tr, a2 = minors, a3 = -det;
  return a1 > 0.0 && a3 > 0.0 && a1 * a2 > a3;
}

}  // namespace

SpikeTrain detect_spikes(const Trajectory& traj, const SpikeOptions& opts) {
  if (traj.empty()) throw DomainError("cannot detect spikes on an empty trajectory");
  SpikeTrain train;
  train.threshold = opts.threshold;
  train.band = opts.band;
  train.refractory = opts.refractory > 0.0 ? opts.refractory : default_refractory(traj);
  const double cut = traj.times.front() + opts.transient;
  std::size_t first = 0;
  while (first < traj.size() && traj.times[first] < cut) ++first;
  if (first >= traj.size()) {
    throw DomainError("no samples left after removing the initial transient");
  }
  train.t_lo = traj.times[first];
  train.t_hi = traj.times.back();

  const double rearm = opts.threshold - opts.band;
  bool armed = traj.outputs[first] < rearm;
  for (std::size_t i = first + 1; i < traj.size(); ++i) {
    const double y0 = traj.outputs[i - 1];
    const double y1 = traj.outputs[i];
    if (!armed) {
      if (y1 < rearm) armed = true;
      continue;
    }
    if (y0 < opts.threshold && y1 >= opts.threshold) {
      const double f = (opts.threshold - y0) / (y1 - y0);
      const double t = traj.times[i - 1] + f * (traj.times[i] - traj.times[i - 1]);
      armed = false;
      if (!train.spike_times.empty() && t - train.spike_times.back() < train.refractory) continue;
      train.spike_times.push_back(t);
    }
  }
  return train;
}

RegimeReport classify_trajectory(const Trajectory& traj, const ClassifyOptions& opts) {
  if (traj.size() < 2) throw DomainError("trajectory too short to classify");
  double min_duration = opts.min_duration;
  if (traj.ode && traj.ode->kind() == CircuitKind::burster) {
    min_duration = std::max(min_duration, 5.0 / traj.ode->timescales().eps_u);
  }
  const double duration = traj.times.back() - traj.times.front();
  if (duration < min_duration * (1.0 - 1e-9)) {
    std::ostringstream msg;
    msg << "trajectory spans " << duration << " time units, classification needs "
        << min_duration;
    throw DomainError(msg.str());
  }

  const SpikeTrain train = detect_spikes(traj, opts.spikes);
  RegimeReport r;
  r.t_lo = train.t_lo;
  r.t_hi = train.t_hi;
  auto& ev = r.evidence;
  ev.spike_count = train.spike_times.size();
  {
    double lo = INFINITY, hi = -INFINITY;
    for (std::size_t i = 0; i < traj.size(); ++i) {
      if (traj.times[i] < train.t_lo) continue;
      lo = std::min(lo, traj.outputs[i]);
      hi = std::max(hi, traj.outputs[i]);
    }
    ev.amplitude = hi - lo;
  }
  ev.terminal_speed = terminal_speed(traj);
  const bool at_rest = ev.terminal_speed < opts.quiescent_speed;

  if (ev.spike_count == 0) {
    if (at_rest) {
      r.label = RegimeLabel::quiescent;
    } else {
      r.label = RegimeLabel::other;
      r.diagnostics = "no spikes but the terminal state is still moving";
    }
    return r;
  }
  if (at_rest) {
    if (input_varies(traj)) {
      r.label = RegimeLabel::excitable_pulse;
      r.diagnostics = "spikes under a time-varying input, then rest";
    } else {
      r.label = RegimeLabel::quiescent;
      r.diagnostics = "spikes during the transient only";
    }
    return r;
  }

  const std::vector<double> isi = train.intervals();
  if (isi.size() < 3) {
    r.label = RegimeLabel::other;
    r.diagnostics = "too few spikes to decide";
    return r;
  }
  const double mean = std::accumulate(isi.begin(), isi.end(), 0.0) / isi.size();
  double var = 0.0;
  for (double v : isi) var += (v - mean) * (v - mean);
  const double cv = std::sqrt(var / isi.size()) / mean;
  ev.isi_cv = cv;
  if (cv < opts.periodic_cv) {
    r.label = RegimeLabel::periodic_spiking;
    ev.period = mean;
    return r;
  }

  // two-cluster split at the largest gap between sorted log intervals
  std::vector<double> sorted = isi;
  std::sort(sorted.begin(), sorted.end());
  std::size_t cut = 0;
  double best_gap = -1.0;
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    const double gap = std::log(sorted[i]) - std::log(sorted[i - 1]);
    if (gap > best_gap) {
      best_gap = gap;
      cut = i;
    }
  }
  const double split = std::sqrt(sorted[cut - 1] * sorted[cut]);
  std::vector<double> short_isi(sorted.begin(), sorted.begin() + static_cast<long>(cut));
  std::vector<double> long_isi(sorted.begin() + static_cast<long>(cut), sorted.end());
  ev.intraburst_median = median(short_isi);
  ev.interburst_min = long_isi.front();
  ev.interburst_mean = std::accumulate(long_isi.begin(), long_isi.end(), 0.0) / long_isi.size();
  ev.separation = *ev.interburst_min / *ev.intraburst_median;

  // bursts are runs of spikes joined by short intervals; only bursts bounded
  // by long gaps on both sides are complete
  std::vector<std::size_t> sizes{1};
  for (double v : isi) {
    if (v >= split) {
      sizes.push_back(1);
    } else {
      ++sizes.back();
    }
  }
  for (std::size_t b = 1; b + 1 < sizes.size(); ++b) ev.spikes_per_burst.push_back(sizes[b]);
  ev.burst_count = ev.spikes_per_burst.size();

  const bool separated = *ev.separation >= opts.burst_separation;
  const bool enough = ev.burst_count >= 1 &&
                      std::all_of(ev.spikes_per_burst.begin(), ev.spikes_per_burst.end(),
                                  [&](std::size_t s) { return s >= opts.min_spikes_per_burst; });
  if (separated && enough) {
    r.label = RegimeLabel::bursting;
    return r;
  }
  r.label = RegimeLabel::other;
  std::ostringstream msg;
  msg << "irregular spiking: isi cv " << cv << ", cluster separation " << *ev.separation
      << ", complete bursts " << ev.burst_count;
  r.diagnostics = msg.str();
  return r;
}

std::vector<std::vector<double>> probe_initial_conditions(int dimension, std::size_t count,
                                                          std::uint64_t seed, double box) {
  if (dimension < 1 || dimension > 3) throw DomainError("state dimension must be 1, 2 or 3");
  std::vector<std::vector<double>> out;
  const auto d = static_cast<std::size_t>(dimension);
  if (dimension <= 2) {
    const std::array<double, 3> levels{-box, 0.0, box};
    std::size_t total = 1;
    for (std::size_t i = 0; i < d; ++i) total *= 3;
    for (std::size_t k = 0; k < total; ++k) {
      std::vector<double> x(d);
      std::size_t rest = k;
      for (std::size_t i = 0; i < d; ++i) {
        x[i] = levels[rest % 3];
        rest /= 3;
      }
      out.push_back(std::move(x));
    }
  } else {
    for (std::size_t k = 0; k < 8; ++k) {
      out.push_back({(k & 1) ? box : -box, (k & 2) ? box : -box, (k & 4) ? box : -box});
    }
    out.push_back({0.0, 0.0, 0.0});
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-box, box);
  while (out.size() < count) {
    std::vector<double> x(d);
    for (auto& v : x) v = dist(rng);
    out.push_back(std::move(x));
  }
  return out;
}

RegimeReport probe_bistability(const CircuitODE& ode, double constant_u,
                               std::span<const std::vector<double>> initial_conditions,
                               double t_end, const ProbeOptions& opts) {
  if (initial_conditions.size() < 8) {
    throw DomainError("bistability probes need at least 8 initial conditions");
  }
  RegimeReport r;
  r.t_lo = t_end * (1.0 - opts.analysis_fraction);
  r.t_hi = t_end;
  auto& ev = r.evidence;
  const InputSignal u = InputSignal::constant(constant_u);
  ClassifyOptions copts = opts.classify;
  copts.spikes.transient = 0.0;
  copts.min_duration = std::min(copts.min_duration, t_end * opts.analysis_fraction);

  std::size_t unresolved = 0, unstable = 0, failed = 0;
  for (const auto& x0 : initial_conditions) {
    Trajectory traj;
    try {
      traj = integrate(ode, u, x0, t_end, opts.integrator);
    } catch (const NumericalError&) {
      ++failed;
      continue;
    }
    const Trajectory tail = traj.slice(r.t_lo, r.t_hi);
    const RegimeReport one = classify_trajectory(tail, copts);
    if (one.label == RegimeLabel::quiescent) {
      const auto x = traj.state(traj.size() - 1);
      if (!equilibrium_is_stable(ode, x, constant_u, 0.0)) {
        ++unstable;
        continue;
      }
      const bool known = std::any_of(ev.equilibria.begin(), ev.equilibria.end(), [&](const auto& e) {
        double s = 0.0;
        for (std::size_t i = 0; i < e.size(); ++i) s += (e[i] - x[i]) * (e[i] - x[i]);
        return std::sqrt(s) < opts.equilibrium_merge;
      });
      if (!known) ev.equilibria.emplace_back(x.begin(), x.end());
    } else if (one.label == RegimeLabel::periodic_spiking || one.label == RegimeLabel::bursting) {
      const double p = one.evidence.period ? *one.evidence.period
                                           : one.evidence.interburst_mean.value_or(0.0);
      const bool known = std::any_of(ev.periods.begin(), ev.periods.end(), [&](double q) {
        return std::abs(q - p) <= opts.period_merge * std::max(q, p);
      });
      if (!known) ev.periods.push_back(p);
    } else {
      ++unresolved;
    }
  }
  ev.equilibrium_clusters = ev.equilibria.size();
  ev.periodic_clusters = ev.periods.size();
  ev.attractor_count = ev.equilibrium_clusters + ev.periodic_clusters;

  if (ev.equilibrium_clusters >= 1 && ev.periodic_clusters >= 1) {
    r.label = RegimeLabel::rest_spike_bistable;
  } else if (ev.equilibrium_clusters >= 2) {
    r.label = RegimeLabel::bistable_switch;
  } else if (ev.attractor_count == 1) {
    r.label = RegimeLabel::monostable;
  } else {
    r.label = RegimeLabel::other;
  }
  std::ostringstream msg;
  msg << initial_conditions.size() << " initial conditions";
  if (unresolved > 0) msg << ", " << unresolved << " unresolved";
  if (unstable > 0) msg << ", " << unstable << " on unstable equilibria";
  if (failed > 0) msg << ", " << failed << " integration failures";
  r.diagnostics = msg.str();
  return r;
}

RegimeReport measure_excitability(const Trajectory& traj, std::span<const PulseShape> pulses,
                                  const ExcitabilityOptions& opts) {
  if (traj.empty()) throw DomainError("cannot measure excitability on an empty trajectory");
  RegimeReport r;
  r.t_lo = traj.times.front();
  r.t_hi = traj.times.back();
  bool all = !pulses.empty();
  for (const auto& p : pulses) {
    if (p.height == 0.0) throw DomainError("excitability needs pulses of nonzero height");
    auto it = std::upper_bound(traj.times.begin(), traj.times.end(), p.t0);
    if (it == traj.times.begin()) throw DomainError("pulse starts before the trajectory");
    const auto i0 = static_cast<std::size_t>(it - traj.times.begin()) - 1;
    const double base = traj.outputs[i0];
    double excursion = 0.0;
    for (std::size_t i = i0; i < traj.size() && traj.times[i] <= p.t0 + opts.response_window;
         ++i) {
      excursion = std::max(excursion, std::abs(traj.outputs[i] - base));
    }
    const double ratio = excursion / std::abs(p.height);
    r.evidence.pulse_excursions.push_back(excursion);
    r.evidence.pulse_ratios.push_back(ratio);
    all = all && ratio >= opts.ratio;
  }
  r.label = all ? RegimeLabel::excitable_pulse : RegimeLabel::other;
  if (!all) r.diagnostics = "at least one pulse response is below the excitability ratio";
  return r;
}

}  // namespace octk
