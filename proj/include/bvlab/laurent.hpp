#pragma once

#include <map>
#include <optional>

#include "bvlab/common.hpp"
#include "bvlab/summation.hpp"

namespace bvlab {

/// Block structure of an eventually z^d-self-similar series: block l covers
/// frequencies [first * base^l, first * base^(l+1)).
struct SelfSimilarity {
  Freq base = 2;
  Freq first = 1;
};

/// g(z) = sum_k b_k z^(-k) on |z| > 1, sparse in k. Frequencies above
/// max_freq are unknown (truncated); a series built from finitely many terms
/// uses the default max_freq, meaning "complete".
///
/// Frequency 0 (a value at infinity) is allowed; it only appears for the
/// degree-2 lacunary vector field.
class ExteriorLaurent {
 public:
  ExteriorLaurent() = default;
  explicit ExteriorLaurent(Freq max_freq) : max_freq_(max_freq) {}

  /// Adds c to b_k. Returns false (and stores nothing) when k > max_freq.
  bool add(Freq k, cplx c);

  const std::map<Freq, cplx>& coeffs() const { return coeffs_; }
  Freq max_freq() const { return max_freq_; }
  bool empty() const { return coeffs_.empty(); }
  std::size_t size() const { return coeffs_.size(); }
  cplx coeff(Freq k) const;

  /// Smallest and largest stored frequency (0 when empty).
  Freq min_stored() const { return coeffs_.empty() ? 0 : coeffs_.begin()->first; }
  Freq max_stored() const { return coeffs_.empty() ? 0 : coeffs_.rbegin()->first; }

  cplx operator()(cplx z) const;

  std::optional<SelfSimilarity> self_similarity;

 private:
  std::map<Freq, cplx> coeffs_;
  Freq max_freq_ = kFreqMax;
};

/// Accumulates Laurent coefficients in a fixed order with compensated sums,
/// then freezes them into an ExteriorLaurent.
class LaurentBuilder {
 public:
  void add(Freq k, cplx c) { acc_[k].add(c); }

  /// Coefficients with modulus below `floor` are dropped; frequencies above
  /// max_freq are dropped and their squared modulus reported.
  ExteriorLaurent build(Freq max_freq, double floor = 0.0, double* dropped_mass = nullptr) const;

 private:
  std::map<Freq, CompensatedComplexSum> acc_;
};

/// Termwise z-derivative: b_k z^-k -> -k b_k z^-(k+1).
ExteriorLaurent laurent_derivative(const ExteriorLaurent& g);

/// c * g
ExteriorLaurent scaled(const ExteriorLaurent& g, cplx c);

/// a + b; max_freq is the smaller of the two.
ExteriorLaurent sum(const ExteriorLaurent& a, const ExteriorLaurent& b);

/// a * b truncated at max_freq. Coefficients below `floor` in modulus are
/// dropped from the result.
ExteriorLaurent laurent_product(const ExteriorLaurent& a, const ExteriorLaurent& b, Freq max_freq,
                                double floor = 0.0, double* dropped_mass = nullptr);

/// sum_k |b_k|^2 with compensated summation.
double coefficient_mass(const ExteriorLaurent& g);

/// Interior power series sum_k a_k z^k, k >= 0.
class TaylorSeries {
 public:
  void add(Freq k, cplx c);
  const std::map<Freq, cplx>& coeffs() const { return coeffs_; }
  cplx coeff(Freq k) const;
  bool empty() const { return coeffs_.empty(); }
  cplx operator()(cplx z) const;

 private:
  std::map<Freq, cplx> coeffs_;
};

/// z^(-k) for |z| > 0 with the phase reduced in extended precision.
cplx inverse_power(cplx z, Freq k);

}  // namespace bvlab
