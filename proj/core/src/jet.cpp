#include "octk/jet.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "octk/error.hpp"

namespace octk {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

// ---------------------------------------------------------------------------
// Jet

Jet::Jet(double center, std::span<const double> coefficients) : center_(center) {
  if (coefficients.empty() || coefficients.size() > kMaxOrder + 1) {
    throw DomainError("Jet: order must be in [0, " + std::to_string(kMaxOrder) +
                      "], got " + std::to_string(int(coefficients.size()) - 1));
  }
  order_ = static_cast<int>(coefficients.size()) - 1;
  std::copy(coefficients.begin(), coefficients.end(), coeffs_.begin());
}

Jet::Jet(double center, std::initializer_list<double> coefficients)
    : Jet(center, std::span<const double>(coefficients.begin(), coefficients.size())) {}

Jet Jet::variable(double center, int order) {
  Jet j = constant(center, center, order);
  if (order >= 1) j.coeffs_[1] = 1.0;
  return j;
}

Jet Jet::constant(double center, double value, int order) {
  if (order < 0 || order > kMaxOrder) {
    throw DomainError("Jet: order must be in [0, " + std::to_string(kMaxOrder) + "]");
  }
  Jet j;
  j.center_ = center;
  j.order_ = order;
  j.coeffs_[0] = value;
  return j;
}

double Jet::coefficient(int n) const {
  if (n < 0 || n > order_) {
    throw DomainError("Jet::coefficient: index " + std::to_string(n) +
                      " outside [0, " + std::to_string(order_) + "]");
  }
  return coeffs_[n];
}

double Jet::derivative(int n) const { return factorial(n) * coefficient(n); }

Jet Jet::operator-() const {
  Jet r = *this;
  for (int i = 0; i <= order_; ++i) r.coeffs_[i] = -r.coeffs_[i];
  return r;
}

Jet& Jet::operator+=(const Jet& rhs) {
  order_ = std::min(order_, rhs.order_);
  for (int i = 0; i <= order_; ++i) coeffs_[i] += rhs.coeffs_[i];
  for (int i = order_ + 1; i <= kMaxOrder; ++i) coeffs_[i] = 0.0;
  return *this;
}

Jet& Jet::operator-=(const Jet& rhs) { return *this += -rhs; }

Jet& Jet::operator*=(const Jet& rhs) {
  const int n = std::min(order_, rhs.order_);
  std::array<double, kMaxOrder + 1> out{};
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; i + j <= n; ++j) out[i + j] += coeffs_[i] * rhs.coeffs_[j];
  }
  coeffs_ = out;
  order_ = n;
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (int i = 0; i <= order_; ++i) coeffs_[i] *= s;
  return *this;
}

Jet compose(const Jet& outer, const Jet& inner) {
  const double inner_value = inner.coefficients()[0];
  const double scale = std::max(1.0, std::abs(inner_value));
  if (std::abs(outer.center() - inner_value) > 1e-12 * scale) {
    throw DomainError("compose: outer jet is not expanded about the inner value");
  }
  const int n = std::min(outer.order(), inner.order());
  // Horner in the nilpotent increment h = inner - inner_value.
  Jet h(inner.center(), inner.coefficients().first(n + 1));
  h -= Jet::constant(inner.center(), inner_value, n);
  Jet result = Jet::constant(inner.center(), outer.coefficient(n), n);
  for (int k = n - 1; k >= 0; --k) {
    result *= h;
    result += Jet::constant(inner.center(), outer.coefficient(k), n);
  }
  return result;
}

// ---------------------------------------------------------------------------
// MultiJet

struct MultiJet::Layout {
  std::vector<Exponents> exponents;
  // index[e0][e1][e2] for total degree <= order, -1 otherwise
  std::array<int, (kMaxOrder + 1) * (kMaxOrder + 1) * (kMaxOrder + 1)> index{};
  struct Product {
    int lhs, rhs, out;
  };
  std::vector<Product> products;

  static int key(const Exponents& e) {
    return (e[0] * (kMaxOrder + 1) + e[1]) * (kMaxOrder + 1) + e[2];
  }

  Layout(int num_vars, int order) {
    index.fill(-1);
    const int lim1 = num_vars > 1 ? order : 0;
    const int lim2 = num_vars > 2 ? order : 0;
    const int lim0 = num_vars > 0 ? order : 0;
    // graded order: total degree first so that coefficient 0 is the value
    for (int d = 0; d <= order; ++d) {
      for (int a = std::min(d, lim0); a >= 0; --a) {
        for (int b = std::min(d - a, lim1); b >= 0; --b) {
          const int c = d - a - b;
          if (c > lim2) continue;
          Exponents e{a, b, c};
          index[key(e)] = static_cast<int>(exponents.size());
          exponents.push_back(e);
        }
      }
    }
    for (int i = 0; i < int(exponents.size()); ++i) {
      for (int j = 0; j < int(exponents.size()); ++j) {
        const auto& a = exponents[i];
        const auto& b = exponents[j];
        if (a[0] + a[1] + a[2] + b[0] + b[1] + b[2] > order) continue;
        Exponents s{a[0] + b[0], a[1] + b[1], a[2] + b[2]};
        products.push_back({i, j, index[key(s)]});
      }
    }
  }
};

const MultiJet::Layout& MultiJet::layout() const {
  static const auto table = [] {
    std::vector<Layout> t;
    t.reserve((kMaxVars + 1) * (kMaxOrder + 1));
    for (int v = 0; v <= kMaxVars; ++v) {
      for (int o = 0; o <= kMaxOrder; ++o) t.emplace_back(v, o);
    }
    return t;
  }();
  return table[num_vars_ * (kMaxOrder + 1) + order_];
}

MultiJet::MultiJet(int num_vars, int order, double value)
    : num_vars_(num_vars), order_(order) {
  if (num_vars < 0 || num_vars > kMaxVars) {
    throw DomainError("MultiJet: at most " + std::to_string(kMaxVars) + " variables");
  }
  if (order < 0 || order > kMaxOrder) {
    throw DomainError("MultiJet: order must be in [0, " + std::to_string(kMaxOrder) +
                      "], got " + std::to_string(order));
  }
  coeffs_.assign(layout().exponents.size(), 0.0);
  coeffs_[0] = value;
}

MultiJet MultiJet::variable(int num_vars, int order, int index, double value) {
  MultiJet j(num_vars, order, value);
  if (index < 0 || index >= num_vars) throw DomainError("MultiJet: bad variable index");
  if (order >= 1) {
    Exponents e{0, 0, 0};
    e[index] = 1;
    j.coeffs_[j.layout().index[Layout::key(e)]] = 1.0;
  }
  return j;
}

double MultiJet::coefficient(const Exponents& e) const {
  for (int i = 0; i < kMaxVars; ++i) {
    if (e[i] < 0 || e[i] > kMaxOrder || (i >= num_vars_ && e[i] != 0)) {
      throw DomainError("MultiJet::coefficient: exponent outside the jet");
    }
  }
  const int idx = layout().index[Layout::key(e)];
  if (idx < 0) {
    throw DomainError("MultiJet::coefficient: total degree exceeds order " +
                      std::to_string(order_));
  }
  return coeffs_[idx];
}

double MultiJet::partial(const Exponents& e) const {
  return coefficient(e) * factorial(e[0]) * factorial(e[1]) * factorial(e[2]);
}

MultiJet MultiJet::operator-() const {
  MultiJet r = *this;
  for (double& c : r.coeffs_) c = -c;
  return r;
}

namespace {

void require_same_shape(const MultiJet& a, const MultiJet& b) {
  if (a.num_vars() != b.num_vars() || a.order() != b.order()) {
    throw DomainError("MultiJet: operands have different shapes");
  }
}

}  // namespace

MultiJet& MultiJet::operator+=(const MultiJet& rhs) {
  require_same_shape(*this, rhs);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
  return *this;
}

MultiJet& MultiJet::operator-=(const MultiJet& rhs) {
  require_same_shape(*this, rhs);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
  return *this;
}

MultiJet operator*(const MultiJet& a, const MultiJet& b) {
  require_same_shape(a, b);
  MultiJet r(a.num_vars_, a.order_);
  r.coeffs_[0] = 0.0;
  for (const auto& p : a.layout().products) {
    r.coeffs_[p.out] += a.coeffs_[p.lhs] * b.coeffs_[p.rhs];
  }
  return r;
}

MultiJet& MultiJet::operator*=(const MultiJet& rhs) { return *this = *this * rhs; }

MultiJet& MultiJet::operator+=(double s) {
  coeffs_[0] += s;
  return *this;
}

MultiJet& MultiJet::operator-=(double s) {
  coeffs_[0] -= s;
  return *this;
}

MultiJet& MultiJet::operator*=(double s) {
  for (double& c : coeffs_) c *= s;
  return *this;
}

MultiJet MultiJet::apply(std::span<const double> taylor) const {
  if (taylor.size() < static_cast<std::size_t>(order_ + 1)) {
    throw DomainError("MultiJet::apply: not enough Taylor coefficients");
  }
  MultiJet h = *this;
  h.coeffs_[0] = 0.0;
  MultiJet result(num_vars_, order_, taylor[order_]);
  for (int k = order_ - 1; k >= 0; --k) {
    result = result * h;
    result.coeffs_[0] += taylor[k];
  }
  return result;
}

}  // namespace octk
