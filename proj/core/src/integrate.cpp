#include "octk/integrate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "octk/error.hpp"

namespace octk {

void Trajectory::push(double t, std::span<const double> x, double y, double u, double alpha) {
  times.push_back(t);
  states.insert(states.end(), x.begin(), x.end());
  outputs.push_back(y);
  u_applied.push_back(u);
  alpha_applied.push_back(alpha);
}

Trajectory Trajectory::slice(double t_lo, double t_hi) const {
  Trajectory out;
  out.dimension = dimension;
  out.meta = meta;
  out.ode = ode;
  for (std::size_t i = 0; i < size(); ++i) {
    if (times[i] < t_lo || times[i] > t_hi) continue;
    out.push(times[i], state(i), outputs[i], u_applied[i], alpha_applied[i]);
  }
  return out;
}

std::vector<double> default_initial_state(const CircuitODE& ode) {
  return std::vector<double>(static_cast<std::size_t>(ode.dimension()), 0.0);
}

namespace {

constexpr int kMaxDim = 3;
using State = std::array<double, kMaxDim>;

// Dormand-Prince 5(4) tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
// dense output
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

struct Drive {
  std::vector<const InputSignal*> u;
  std::vector<const InputSignal*> alpha;

  double value(const std::vector<const InputSignal*>& list, double t, Side side) const {
    double v = 0.0;
    for (const auto* s : list) v += s->value(t, side);
    return v;
  }
};

class Stepper {
 public:
  Stepper(const CircuitODE& ode, const Drive& drive, int n) : ode_(ode), drive_(drive), n_(n) {}

  /// Inputs are taken from the right, except at the segment end, where the
  /// left limit applies; the segment then sees one smooth signal.
  void f(double t, const State& x, State& dx) const {
    const Side side = t >= seg_end_ ? Side::left : Side::right;
    const double u = drive_.value(drive_.u, t, side);
    const double a = drive_.value(drive_.alpha, t, side);
    ode_.rhs(std::span<const double>(x.data(), n_), u, a, std::span<double>(dx.data(), n_));
  }

  void set_segment_end(double t) { seg_end_ = t; }

  /// One trial step; returns the scaled error norm.
  double attempt(double t, double h, const State& x, const State& k1, double rtol, double atol) {
    State tmp{};
    auto combo = [&](std::initializer_list<std::pair<double, const State*>> terms) {
      for (int i = 0; i < n_; ++i) {
        double s = 0.0;
        for (const auto& [c, k] : terms) s += c * (*k)[i];
        tmp[i] = x[i] + h * s;
      }
    };
    k1_ = k1;
    combo({{a21, &k1_}});
    f(t + c2 * h, tmp, k2_);
    combo({{a31, &k1_}, {a32, &k2_}});
    f(t + c3 * h, tmp, k3_);
    combo({{a41, &k1_}, {a42, &k2_}, {a43, &k3_}});
    f(t + c4 * h, tmp, k4_);
    combo({{a51, &k1_}, {a52, &k2_}, {a53, &k3_}, {a54, &k4_}});
    f(t + c5 * h, tmp, k5_);
    combo({{a61, &k1_}, {a62, &k2_}, {a63, &k3_}, {a64, &k4_}, {a65, &k5_}});
    f(t + h, tmp, k6_);
    combo({{a71, &k1_}, {a73, &k3_}, {a74, &k4_}, {a75, &k5_}, {a76, &k6_}});
    x_new_ = tmp;
    f(t + h, x_new_, k7_);

    double sum = 0.0;
    for (int i = 0; i < n_; ++i) {
      const double err = h * (e1 * k1_[i] + e3 * k3_[i] + e4 * k4_[i] + e5 * k5_[i] +
                              e6 * k6_[i] + e7 * k7_[i]);
      const double sc = atol + rtol * std::max(std::abs(x[i]), std::abs(x_new_[i]));
      sum += (err / sc) * (err / sc);
    }
    return std::sqrt(sum / n_);
  }

  /// Prepares the continuous extension of the last accepted step.
  void build_dense(const State& x, double h) {
    for (int i = 0; i < n_; ++i) {
      const double diff = x_new_[i] - x[i];
      const double bspl = h * k1_[i] - diff;
      r1_[i] = x[i];
      r2_[i] = diff;
      r3_[i] = bspl;
      r4_[i] = diff - h * k7_[i] - bspl;
      r5_[i] = h * (d1 * k1_[i] + d3 * k3_[i] + d4 * k4_[i] + d5 * k5_[i] + d6 * k6_[i] +
                    d7 * k7_[i]);
    }
  }

  State dense(double theta) const {
    State y{};
    const double t1 = 1.0 - theta;
    for (int i = 0; i < n_; ++i) {
      y[i] = r1_[i] + theta * (r2_[i] + t1 * (r3_[i] + theta * (r4_[i] + t1 * r5_[i])));
    }
    return y;
  }

  const State& x_new() const { return x_new_; }
  const State& k7() const { return k7_; }

 private:
  const CircuitODE& ode_;
  const Drive& drive_;
  int n_;
  double seg_end_ = 0.0;
  State k1_{}, k2_{}, k3_{}, k4_{}, k5_{}, k6_{}, k7_{}, x_new_{};
  State r1_{}, r2_{}, r3_{}, r4_{}, r5_{};
};

bool finite_state(const State& x, int n) {
  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(x[i])) return false;
  }
  return true;
}

}  // namespace

Trajectory integrate(const CircuitODE& ode, std::span<const InputSignal> signals,
                     std::span<const double> x0, double t_end, const IntegratorOptions& opts) {
  const int n = ode.dimension();
  if (static_cast<int>(x0.size()) != n) {
    throw DomainError("initial state has dimension " + std::to_string(x0.size()) + ", expected " +
                      std::to_string(n));
  }
  const double t0 = opts.t_start;
  if (!(t_end > t0)) throw DomainError("t_end must exceed the start time");
  if (!(opts.rtol > 0.0) || !(opts.atol > 0.0)) throw DomainError("tolerances must be positive");

  const double eps_f = ode.timescales().eps_f;
  const double cap = eps_f / 2.0;
  double max_step = opts.max_step > 0.0 ? opts.max_step : cap;
  if (ode.has_fast_variable() && max_step > cap * (1.0 + 1e-12)) {
    throw DomainError("max_step must not exceed eps_f / 2 for kinds with a fast variable");
  }
  const double dt_out = opts.dt_out > 0.0 ? opts.dt_out : eps_f / 5.0;

  Drive drive;
  for (const auto& s : signals) {
    if (s.channel() == InputChannel::alpha) {
      if (!ode.accepts_alpha_input()) {
        throw DomainError("alpha-channel input requires a rest-spike or burster circuit");
      }
      drive.alpha.push_back(&s);
    } else {
      drive.u.push_back(&s);
    }
  }

  std::vector<double> stops;
  for (const auto& s : signals) {
    const auto b = s.breakpoints(t0, t_end);
    stops.insert(stops.end(), b.begin(), b.end());
  }
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());
  stops.push_back(t_end);

  Trajectory traj;
  traj.dimension = n;
  traj.ode = ode;
  traj.meta.rtol = opts.rtol;
  traj.meta.atol = opts.atol;
  traj.meta.max_step = max_step;
  traj.meta.dt_out = dt_out;
  const auto expected = static_cast<std::size_t>((t_end - t0) / dt_out) + 2;
  traj.times.reserve(expected);
  traj.states.reserve(expected * static_cast<std::size_t>(n));

  auto record = [&](double t, const State& x) {
    const double u = drive.value(drive.u, t, Side::right);
    const double a = drive.value(drive.alpha, t, Side::right);
    traj.push(t, std::span<const double>(x.data(), n), x[0], u, a);
  };

  State x{};
  std::copy(x0.begin(), x0.end(), x.begin());
  if (!finite_state(x, n)) throw NumericalError("non-finite initial state", t0);
  record(t0, x);
  std::size_t next_out = 1;
  auto out_time = [&](std::size_t k) { return t0 + static_cast<double>(k) * dt_out; };

  Stepper stepper(ode, drive, n);
  double t = t0;
  double h = std::min({max_step, 1e-3 * std::max(eps_f, 1e-3), t_end - t0});
  for (std::size_t seg = 0; seg < stops.size(); ++seg) {
    const double seg_end = stops[seg];
    if (seg > 0) ++traj.meta.restarts;
    stepper.set_segment_end(seg_end);
    State k1{};
    stepper.f(t, x, k1);
    while (t < seg_end) {
      const double remaining = seg_end - t;
      bool last = false;
      if (h >= remaining * (1.0 - 1e-12)) {
        h = remaining;
        last = true;
      }
      const double err = stepper.attempt(t, h, x, k1, opts.rtol, opts.atol);
      if (!std::isfinite(err) || err > 1.0) {
        ++traj.meta.rejected_steps;
        const double fac = std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.2;
        h *= fac;
        if (h < opts.min_step) {
          throw NumericalError("step size underflow at t = " + std::to_string(t), t);
        }
        continue;
      }
      ++traj.meta.accepted_steps;
      const double t_new = last ? seg_end : t + h;
      stepper.build_dense(x, t_new - t);
      // dense samples strictly inside the step, then the step end if on the grid
      while (next_out < expected + 1) {
        const double to = out_time(next_out);
        if (to > t_new || to > t_end * (1.0 + 1e-15) + 1e-15) break;
        if (std::abs(to - t_new) <= 1e-12 * std::max(1.0, std::abs(t_new))) {
          record(to, stepper.x_new());
        } else {
          record(to, stepper.dense((to - t) / (t_new - t)));
        }
        ++next_out;
      }
      x = stepper.x_new();
      if (!finite_state(x, n)) throw NumericalError("non-finite state", t_new);
      k1 = stepper.k7();
      t = t_new;
      const double fac = err > 0.0 ? std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -0.2))) : 5.0;
      if (!last) h = std::min(h * fac, max_step);
      else h = std::min(std::max(h, h * fac), max_step);
    }
  }
  if (traj.times.back() < t_end - 1e-12 * std::max(1.0, std::abs(t_end))) record(t_end, x);
  return traj;
}

Trajectory integrate(const CircuitODE& ode, const InputSignal& signal, std::span<const double> x0,
                     double t_end, const IntegratorOptions& opts) {
  return integrate(ode, std::span<const InputSignal>(&signal, 1), x0, t_end, opts);
}

Trajectory pulse_response(const CircuitODE& ode, double base_u, std::span<const PulseShape> pulses,
                          std::span<const double> x0, double t_end,
                          const IntegratorOptions& opts) {
  InputSignal u = InputSignal::constant(base_u);
  for (const auto& p : pulses) u.add(p);
  return integrate(ode, u, x0, t_end, opts);
}

Trajectory ramp_protocol(const CircuitODE& ode, double u_from, double u_to, double duration,
                         std::span<const double> x0, const IntegratorOptions& opts) {
  return ramp_protocol(ode, u_from, u_to, duration, x0, {}, opts);
}

Trajectory ramp_protocol(const CircuitODE& ode, double u_from, double u_to, double duration,
                         std::span<const double> x0, std::span<const InputSignal> extra,
                         const IntegratorOptions& opts) {
  if (!(duration > 0.0)) throw DomainError("ramp duration must be positive");
  if (ode.kind() == CircuitKind::burster && duration < 10.0 / ode.timescales().eps_u) {
    throw DomainError("burster ramps must last at least 10 / eps_u");
  }
  std::vector<InputSignal> signals;
  signals.push_back(
      InputSignal::ramp(opts.t_start, opts.t_start + duration, u_from, u_to, InputChannel::u));
  signals.insert(signals.end(), extra.begin(), extra.end());
  return integrate(ode, signals, x0, opts.t_start + duration, opts);
}

}  // namespace octk
