#pragma once

#include <cmath>
#include <compare>
#include <limits>

namespace bvlab {

/// A radius in [0, +inf]. The logarithm is the primary coordinate so that
/// radii within 1e-18 of the unit circle keep full relative accuracy in
/// 1 - r; the plain value is cached alongside.
class Radius {
 public:
  constexpr Radius() = default;

  static Radius from_log(double log_r) { return Radius(log_r, std::exp(log_r)); }
  static Radius from_value(double r) {
    if (r == 0.0) return zero();
    if (std::isinf(r)) return infinity();
    return Radius(std::log(r), r);
  }
  /// Both coordinates given; used when deserializing.
  static Radius from_parts(double log_r, double r) { return Radius(log_r, r); }
  static constexpr Radius zero() {
    return Radius(-std::numeric_limits<double>::infinity(), 0.0);
  }
  static constexpr Radius infinity() {
    return Radius(std::numeric_limits<double>::infinity(),
                  std::numeric_limits<double>::infinity());
  }

  double log() const { return log_; }
  double value() const { return value_; }
  /// 1 - r, accurate for r close to 1.
  double one_minus() const { return -std::expm1(log_); }
  bool is_zero() const { return std::isinf(log_) && log_ < 0; }
  bool is_infinite() const { return std::isinf(log_) && log_ > 0; }

  /// r^e. 0^e and inf^e follow the limits for e > 0 and e < 0.
  double pow(long double e) const {
    if (e == 0) return 1.0;
    if (is_zero()) return e > 0 ? 0.0 : std::numeric_limits<double>::infinity();
    if (is_infinite()) return e > 0 ? std::numeric_limits<double>::infinity() : 0.0;
    return static_cast<double>(std::exp(static_cast<long double>(log_) * e));
  }

  /// r^(1/d)
  Radius root(long double d) const {
    if (is_zero() || is_infinite()) return *this;
    return from_log(static_cast<double>(static_cast<long double>(log_) / d));
  }

  friend bool operator==(const Radius& a, const Radius& b) { return a.log_ == b.log_; }
  friend auto operator<=>(const Radius& a, const Radius& b) { return a.log_ <=> b.log_; }

 private:
  constexpr Radius(double log_r, double r) : log_(log_r), value_(r) {}
  double log_ = -std::numeric_limits<double>::infinity();
  double value_ = 0.0;
};

}  // namespace bvlab
