#include "octk/params.hpp"

#include <algorithm>

#include "octk/error.hpp"

namespace octk {

ParamVector::ParamVector(std::initializer_list<Entry> entries) {
  for (const auto& [name, value] : entries) set(name, value);
}

ParamVector& ParamVector::set(std::string name, double value) {
  if (contains(name)) throw DomainError("parameter '" + name + "' set twice");
  entries_.emplace_back(std::move(name), value);
  return *this;
}

ParamVector ParamVector::with(std::string_view name, double value) const {
  ParamVector copy = *this;
  auto it = std::find_if(copy.entries_.begin(), copy.entries_.end(),
                         [&](const Entry& e) { return e.first == name; });
  if (it != copy.entries_.end()) {
    it->second = value;
  } else {
    copy.entries_.emplace_back(std::string(name), value);
  }
  return copy;
}

bool ParamVector::contains(std::string_view name) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [&](const Entry& e) { return e.first == name; });
}

double ParamVector::get(std::string_view name) const {
  for (const auto& [n, v] : entries_) {
    if (n == name) return v;
  }
  throw DomainError("parameter '" + std::string(name) + "' is not set");
}

double ParamVector::get_or(std::string_view name, double fallback) const {
  for (const auto& [n, v] : entries_) {
    if (n == name) return v;
  }
  return fallback;
}

}  // namespace octk
