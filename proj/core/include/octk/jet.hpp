#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace octk {

/// Truncated Taylor expansion of a scalar function about `center`:
///
///   f(center + h) = c0 + c1 h + ... + ck h^k + O(h^(k+1)).
///
/// Arithmetic is exact up to the truncation order; mixing jets of different
/// order truncates to the smaller one.
class Jet {
 public:
  static constexpr int kMaxOrder = 6;

  Jet() = default;
  /// Throws DomainError if `coefficients` is empty or longer than kMaxOrder+1.
  Jet(double center, std::span<const double> coefficients);
  Jet(double center, std::initializer_list<double> coefficients);

  /// The identity map h -> center + h truncated at `order`.
  static Jet variable(double center, int order);
  static Jet constant(double center, double value, int order);

  double center() const noexcept { return center_; }
  int order() const noexcept { return order_; }
  std::span<const double> coefficients() const noexcept {
    return {coeffs_.data(), static_cast<std::size_t>(order_ + 1)};
  }
  double coefficient(int n) const;
  /// n-th derivative at the center, n! * c_n.
  double derivative(int n) const;

  Jet operator-() const;
  Jet& operator+=(const Jet& rhs);
  Jet& operator-=(const Jet& rhs);
  Jet& operator*=(const Jet& rhs);
  Jet& operator*=(double s);

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, const Jet& b) { return a *= b; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }

 private:
  double center_ = 0.0;
  int order_ = 0;
  std::array<double, kMaxOrder + 1> coeffs_{};
};

/// Jet of outer(inner(x)) about inner.center(). `outer` must be expanded about
/// inner's value (its c0); throws DomainError otherwise.
Jet compose(const Jet& outer, const Jet& inner);

/// Truncated multivariate Taylor polynomial in up to three variables.
///
/// Coefficients are indexed by exponent tuples with total degree <= order. Used
/// to extract mixed partials of bifurcation problems without symbolic algebra.
class MultiJet {
 public:
  static constexpr int kMaxVars = 3;
  static constexpr int kMaxOrder = 6;
  using Exponents = std::array<int, kMaxVars>;

  MultiJet() = default;
  MultiJet(int num_vars, int order, double value = 0.0);

  /// Seed variable `index` at `value`: value + h_index.
  static MultiJet variable(int num_vars, int order, int index, double value);

  int num_vars() const noexcept { return num_vars_; }
  int order() const noexcept { return order_; }
  double value() const noexcept { return coeffs_.empty() ? 0.0 : coeffs_[0]; }

  double coefficient(const Exponents& e) const;
  /// Mixed partial derivative prod(e_i!) * coefficient(e).
  double partial(const Exponents& e) const;

  MultiJet operator-() const;
  MultiJet& operator+=(const MultiJet& rhs);
  MultiJet& operator-=(const MultiJet& rhs);
  MultiJet& operator*=(const MultiJet& rhs);
  MultiJet& operator+=(double s);
  MultiJet& operator-=(double s);
  MultiJet& operator*=(double s);

  friend MultiJet operator+(MultiJet a, const MultiJet& b) { return a += b; }
  friend MultiJet operator-(MultiJet a, const MultiJet& b) { return a -= b; }
  friend MultiJet operator*(const MultiJet& a, const MultiJet& b);
  friend MultiJet operator+(MultiJet a, double s) { return a += s; }
  friend MultiJet operator+(double s, MultiJet a) { return a += s; }
  friend MultiJet operator-(MultiJet a, double s) { return a -= s; }
  friend MultiJet operator-(double s, MultiJet a) { return (-a) += s; }
  friend MultiJet operator*(MultiJet a, double s) { return a *= s; }
  friend MultiJet operator*(double s, MultiJet a) { return a *= s; }

  /// f(this) given the Taylor coefficients of f about value().
  /// `taylor` must hold at least order()+1 entries.
  MultiJet apply(std::span<const double> taylor) const;

 private:
  struct Layout;
  const Layout& layout() const;

  int num_vars_ = 0;
  int order_ = 0;
  std::vector<double> coeffs_;
};

}  // namespace octk
