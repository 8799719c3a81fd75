#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace bvlab {

using cplx = std::complex<double>;

/// Integer angular frequency. All frequency arithmetic goes through the
/// checked helpers below.
using Freq = std::int64_t;

inline constexpr Freq kFreqMax = std::numeric_limits<Freq>::max();

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  virtual const char* kind() const noexcept { return "error"; }
};

/// Invalid input: bad parameters, violated preconditions.
class DomainError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "domain"; }
};

/// A construction would need frequencies beyond 64-bit range, or a
/// requested accuracy is out of reach.
class CapacityError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "capacity"; }
};

/// The Laurent truncation does not resolve the finest scale probed.
class UnresolvedScaleError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "unresolved_scale"; }
};

/// The exponent e = 0 logarithmic case of the Cauchy transform.
class UnsupportedTermError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "unsupported_term"; }
};

class DivergentMomentError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "divergent_moment"; }
};

class OverlappingSupportError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "overlapping_support"; }
};

inline Freq checked_add(Freq a, Freq b) {
  Freq out;
  if (__builtin_add_overflow(a, b, &out)) {
    throw CapacityError("frequency overflow in addition: " + std::to_string(a) +
                        " + " + std::to_string(b));
  }
  return out;
}

inline Freq checked_sub(Freq a, Freq b) {
  Freq out;
  if (__builtin_sub_overflow(a, b, &out)) {
    throw CapacityError("frequency overflow in subtraction: " + std::to_string(a) +
                        " - " + std::to_string(b));
  }
  return out;
}

inline Freq checked_mul(Freq a, Freq b) {
  Freq out;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw CapacityError("frequency overflow in multiplication: " + std::to_string(a) +
                        " * " + std::to_string(b));
  }
  return out;
}

/// base^exp with overflow check.
inline Freq checked_pow(Freq base, int exp) {
  Freq out = 1;
  for (int i = 0; i < exp; ++i) out = checked_mul(out, base);
  return out;
}

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace bvlab
