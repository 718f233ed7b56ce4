#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "octk/error.hpp"
#include "octk/serialize.hpp"

namespace octk::cli {

/// Typed reads from one JSON object. Every key read is remembered so that
/// `finish` can reject the ones nobody asked for.
class Fields {
 public:
  Fields(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_, "expected an object");
  }

  std::string path(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

  bool has(std::string_view key) {
    seen_.emplace(key);
    return j_.contains(std::string(key));
  }

  const Json& at(std::string_view key) {
    if (!has(key)) throw ConfigError(path(key), "required field is missing");
    return j_[std::string(key)];
  }

  double number(std::string_view key) { return as_number(at(key), path(key)); }
  double number(std::string_view key, double fallback) {
    return has(key) ? number(key) : fallback;
  }

  double positive(std::string_view key, double fallback) {
    const double v = number(key, fallback);
    if (!(v > 0.0)) throw ConfigError(path(key), "must be positive");
    return v;
  }

  long long integer(std::string_view key, long long fallback, long long lo, long long hi) {
    if (!has(key)) return fallback;
    const Json& v = at(key);
    if (!v.is_number_integer()) throw ConfigError(path(key), "expected an integer");
    const auto x = v.get<long long>();
    if (x < lo || x > hi) {
      throw ConfigError(path(key),
                        "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    return x;
  }

  bool boolean(std::string_view key, bool fallback) {
    if (!has(key)) return fallback;
    const Json& v = at(key);
    if (!v.is_boolean()) throw ConfigError(path(key), "expected true or false");
    return v.get<bool>();
  }

  std::string text(std::string_view key) {
    const Json& v = at(key);
    if (!v.is_string()) throw ConfigError(path(key), "expected a string");
    return v.get<std::string>();
  }
  std::string text(std::string_view key, std::string fallback) {
    return has(key) ? text(key) : std::move(fallback);
  }

  std::vector<double> numbers(std::string_view key) {
    if (!has(key)) return {};
    const Json& v = at(key);
    if (!v.is_array()) throw ConfigError(path(key), "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      out.push_back(as_number(v[i], path(key) + "[" + std::to_string(i) + "]"));
    }
    return out;
  }

  /// A two-element [lo, hi] array with lo < hi.
  std::optional<std::pair<double, double>> range(std::string_view key) {
    if (!has(key)) return std::nullopt;
    const auto v = numbers(key);
    if (v.size() != 2 || !(v[0] < v[1])) throw ConfigError(path(key), "expected [lo, hi] with lo < hi");
    return std::pair{v[0], v[1]};
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) throw ConfigError(path(key), "unknown field");
    }
  }

  static double as_number(const Json& v, const std::string& where) {
    if (!v.is_number()) throw ConfigError(where, "expected a number");
    return v.get<double>();
  }

 private:
  const Json& j_;
  std::string path_;
  std::set<std::string, std::less<>> seen_;
};

}  // namespace octk::cli
