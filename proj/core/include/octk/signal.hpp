#pragma once

#include <string_view>
#include <variant>
#include <vector>

namespace octk {

enum class InputChannel { u, alpha };
std::string_view to_string(InputChannel c);
InputChannel parse_input_channel(std::string_view name);

struct ConstantShape {
  double value = 0.0;
};

/// `height` on [t0, t0 + width), zero elsewhere.
struct PulseShape {
  double t0 = 0.0;
  double width = 0.0;
  double height = 0.0;
};

/// v0 before t0, linear on [t0, t1], v1 after t1.
struct RampShape {
  double t0 = 0.0;
  double t1 = 0.0;
  double v0 = 0.0;
  double v1 = 0.0;
};

using SignalShape = std::variant<ConstantShape, PulseShape, RampShape>;

/// Which one-sided limit to take at a discontinuity.
enum class Side { left, right };

/// A sum of elementary shapes feeding one input channel.
class InputSignal {
 public:
  InputSignal() = default;
  explicit InputSignal(InputChannel channel) : channel_(channel) {}

  static InputSignal constant(double value, InputChannel channel = InputChannel::u);
  static InputSignal pulse(double t0, double width, double height,
                           InputChannel channel = InputChannel::u);
  static InputSignal ramp(double t0, double t1, double v0, double v1,
                          InputChannel channel = InputChannel::u);

  InputChannel channel() const noexcept { return channel_; }
  const std::vector<SignalShape>& terms() const noexcept { return terms_; }

  /// Validates and appends a term. Throws DomainError for negative widths,
  /// t1 < t0 or non-finite values.
  InputSignal& add(const SignalShape& shape);
  /// Sum of two signals on the same channel; throws DomainError otherwise.
  InputSignal operator+(const InputSignal& other) const;

  /// Right-continuous value at t.
  double operator()(double t) const { return value(t, Side::right); }
  double value(double t, Side side) const;

  /// Times in (t_lo, t_hi) where the signal or its slope jumps, ascending.
  std::vector<double> breakpoints(double t_lo, double t_hi) const;

 private:
  InputChannel channel_ = InputChannel::u;
  std::vector<SignalShape> terms_;
};

}  // namespace octk
