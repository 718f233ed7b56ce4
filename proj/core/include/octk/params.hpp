#pragma once

#include <initializer_list>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace octk {

/// Named unfolding parameters (alpha, beta, gamma, delta, ...). Each name
/// appears at most once; lookups of absent names fall back to a default.
class ParamVector {
 public:
  using Entry = std::pair<std::string, double>;

  ParamVector() = default;
  /// Throws DomainError on a repeated name.
  ParamVector(std::initializer_list<Entry> entries);

  /// Adds a new entry; throws DomainError if `name` is already set.
  ParamVector& set(std::string name, double value);
  /// Copy with `name` inserted or overwritten.
  ParamVector with(std::string_view name, double value) const;

  bool contains(std::string_view name) const;
  /// Throws DomainError if absent.
  double get(std::string_view name) const;
  double get_or(std::string_view name, double fallback) const;

  const std::vector<Entry>& entries() const noexcept { return entries_; }
  bool empty() const noexcept { return entries_.empty(); }

  friend bool operator==(const ParamVector&, const ParamVector&) = default;

 private:
  std::vector<Entry> entries_;
};

}  // namespace octk
