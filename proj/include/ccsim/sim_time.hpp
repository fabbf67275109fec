#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>

namespace ccsim {

namespace detail {
inline int64_t checked_add(int64_t a, int64_t b) {
  int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("time arithmetic overflow");
  return r;
}
inline int64_t checked_sub(int64_t a, int64_t b) {
  int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw std::overflow_error("time arithmetic overflow");
  return r;
}
}  // namespace detail

// Relative time span, integer nanoseconds.
class Duration {
 public:
  constexpr Duration() : ns_(0) {}
  static constexpr Duration nanos(int64_t ns) { return Duration(ns); }
  static constexpr Duration micros(int64_t us) { return Duration(us * 1000); }
  static constexpr Duration millis(int64_t ms) { return Duration(ms * 1000000); }
  static constexpr Duration seconds(int64_t s) { return Duration(s * 1000000000); }
  static Duration from_seconds(double s) { return Duration(static_cast<int64_t>(s * 1e9)); }
  static Duration from_millis(double ms) { return Duration(static_cast<int64_t>(ms * 1e6)); }
  static constexpr Duration max() { return Duration(std::numeric_limits<int64_t>::max()); }

  constexpr int64_t ns() const { return ns_; }
  constexpr double to_seconds() const { return static_cast<double>(ns_) * 1e-9; }
  constexpr double to_millis() const { return static_cast<double>(ns_) * 1e-6; }
  constexpr bool is_zero() const { return ns_ == 0; }

  Duration operator+(Duration o) const { return Duration(detail::checked_add(ns_, o.ns_)); }
  Duration operator-(Duration o) const { return Duration(detail::checked_sub(ns_, o.ns_)); }
  Duration operator*(double f) const { return Duration(static_cast<int64_t>(static_cast<double>(ns_) * f)); }
  double operator/(Duration o) const { return static_cast<double>(ns_) / static_cast<double>(o.ns_); }
  auto operator<=>(const Duration&) const = default;

 private:
  explicit constexpr Duration(int64_t ns) : ns_(ns) {}
  int64_t ns_;
};

// Absolute simulation time, integer nanoseconds since simulation start.
class SimTime {
 public:
  constexpr SimTime() : ns_(0) {}
  static constexpr SimTime zero() { return SimTime(0); }
  static constexpr SimTime max() { return SimTime(std::numeric_limits<int64_t>::max()); }
  static constexpr SimTime from_ns(int64_t ns) { return SimTime(ns); }

  constexpr int64_t ns() const { return ns_; }
  constexpr double to_seconds() const { return static_cast<double>(ns_) * 1e-9; }

  SimTime operator+(Duration d) const { return SimTime(detail::checked_add(ns_, d.ns())); }
  SimTime operator-(Duration d) const { return SimTime(detail::checked_sub(ns_, d.ns())); }
  Duration operator-(SimTime o) const { return Duration::nanos(detail::checked_sub(ns_, o.ns_)); }
  auto operator<=>(const SimTime&) const = default;

 private:
  explicit constexpr SimTime(int64_t ns) : ns_(ns) {}
  int64_t ns_;
};

}  // namespace ccsim
