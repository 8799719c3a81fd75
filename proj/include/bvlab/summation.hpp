#pragma once

#include <cmath>
#include <complex>

namespace bvlab {

// Neumaier's variant of Kahan summation. Order-dependent like any float sum;
// callers fix the order.
class CompensatedSum {
 public:
  CompensatedSum& add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
    return *this;
  }
  CompensatedSum& operator+=(double x) { return add(x); }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class CompensatedComplexSum {
 public:
  CompensatedComplexSum& add(std::complex<double> z) {
    re_.add(z.real());
    im_.add(z.imag());
    return *this;
  }
  CompensatedComplexSum& operator+=(std::complex<double> z) { return add(z); }
  std::complex<double> value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum re_;
  CompensatedSum im_;
};

}  // namespace bvlab
