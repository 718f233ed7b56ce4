#include "octk/signal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "octk/error.hpp"

namespace octk {

std::string_view to_string(InputChannel c) { return c == InputChannel::u ? "u" : "alpha"; }

InputChannel parse_input_channel(std::string_view name) {
  if (name == "u") return InputChannel::u;
  if (name == "alpha") return InputChannel::alpha;
  throw DomainError("unknown input channel '" + std::string(name) + "'");
}

InputSignal InputSignal::constant(double value, InputChannel channel) {
  InputSignal s(channel);
  s.add(ConstantShape{value});
  return s;
}

InputSignal InputSignal::pulse(double t0, double width, double height, InputChannel channel) {
  InputSignal s(channel);
  s.add(PulseShape{t0, width, height});
  return s;
}

InputSignal InputSignal::ramp(double t0, double t1, double v0, double v1, InputChannel channel) {
  InputSignal s(channel);
  s.add(RampShape{t0, t1, v0, v1});
  return s;
}

InputSignal& InputSignal::add(const SignalShape& shape) {
  auto finite = [](std::initializer_list<double> xs) {
    return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
  };
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ConstantShape>) {
          if (!finite({s.value})) throw DomainError("constant signal value must be finite");
        } else if constexpr (std::is_same_v<T, PulseShape>) {
          if (!finite({s.t0, s.width, s.height})) throw DomainError("pulse fields must be finite");
          if (s.width < 0.0) throw DomainError("pulse width must be nonnegative");
        } else {
          if (!finite({s.t0, s.t1, s.v0, s.v1})) throw DomainError("ramp fields must be finite");
          if (s.t1 < s.t0) throw DomainError("ramp must end after it starts");
        }
      },
      shape);
  terms_.push_back(shape);
  return *this;
}

InputSignal InputSignal::operator+(const InputSignal& other) const {
  if (other.channel_ != channel_) {
    throw DomainError("cannot add signals on different channels");
  }
  InputSignal s = *this;
  s.terms_.insert(s.terms_.end(), other.terms_.begin(), other.terms_.end());
  return s;
}

double InputSignal::value(double t, Side side) const {
  double v = 0.0;
  for (const auto& term : terms_) {
    v += std::visit(
        [&](const auto& s) -> double {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, ConstantShape>) {
            return s.value;
          } else if constexpr (std::is_same_v<T, PulseShape>) {
            const double t1 = s.t0 + s.width;
            const bool on = side == Side::right ? (t >= s.t0 && t < t1) : (t > s.t0 && t <= t1);
            return on ? s.height : 0.0;
          } else {
            if (t <= s.t0) return s.v0;
            if (t >= s.t1) return s.v1;
            return s.v0 + (s.v1 - s.v0) * (t - s.t0) / (s.t1 - s.t0);
          }
        },
        term);
  }
  return v;
}

std::vector<double> InputSignal::breakpoints(double t_lo, double t_hi) const {
  std::vector<double> out;
  auto keep = [&](double t) {
    if (t > t_lo && t < t_hi) out.push_back(t);
  };
  for (const auto& term : terms_) {
    if (const auto* p = std::get_if<PulseShape>(&term)) {
      if (p->width > 0.0 && p->height != 0.0) {
        keep(p->t0);
        keep(p->t0 + p->width);
      }
    } else if (const auto* r = std::get_if<RampShape>(&term)) {
      if (r->v0 != r->v1) {
        keep(r->t0);
        keep(r->t1);
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace octk
