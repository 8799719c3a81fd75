#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "bvlab/common.hpp"

namespace bvlab {

/// phi(e^it) = sum_m c_m e^imt, a trigonometric polynomial on the circle.
struct CirclePotential {
  std::map<Freq, cplx> coeffs;

  cplx mean() const;
  cplx operator()(cplx z) const;
  /// Copy with c_0 removed.
  CirclePotential centered() const;
};

/// B(z) = z^(d-m) prod_i (z - a_i)/(1 - conj(a_i) z), m = zeros.size().
/// B(0) = 0, so Lebesgue measure on the circle is invariant.
struct BlaschkeMap {
  int d = 2;
  std::vector<cplx> zeros;

  void validate() const;
  cplx operator()(cplx z) const;
  /// |B'(z)| for |z| = 1.
  double abs_derivative(cplx z) const;
  bool is_power() const { return zeros.empty(); }
};

struct BirkhoffVariance {
  double value = 0.0;
  /// var_1 .. var_n
  std::vector<double> by_n;
};

/// (1/n) int |S_n phi|^2 dm under z -> z^d, by exact frequency bookkeeping.
BirkhoffVariance birkhoff_variance_exact(const CirclePotential& phi, int d, int n);

struct MonteCarloEstimate {
  double estimate = 0.0;
  double stderr_ = 0.0;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
};

inline constexpr std::int64_t kMonteCarloChunk = 4096;

/// Sample mean of |S_n phi|^2 / n over Lebesgue-random starts. Chunk c
/// draws from mt19937_64 seeded with seed_seq{seed, c}, so the result does
/// not depend on the thread count.
MonteCarloEstimate birkhoff_variance_mc(const CirclePotential& phi, const BlaschkeMap& B, int n,
                                        std::int64_t samples, std::uint64_t seed,
                                        bool parallel = true);

/// Orbit average of log|B'| over n steps from random starts.
MonteCarloEstimate log_deriv_orbit_mc(const BlaschkeMap& B, int n, std::int64_t samples,
                                      std::uint64_t seed);

struct CoboundaryCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
};

/// var(h)/log d for h = z^-(d-1) against sigma^2 of the unit lacunary series.
CoboundaryCheck coboundary_check(int d, int n);

/// int log|B'| dm: log d for z^d, else a 4096-point circle rule.
double log_deriv_mean(const BlaschkeMap& B);

struct MeanRelation {
  double lhs = 0.0;
  /// (j, R = 1 + 10^-j, circle average of log(1/(|z|-1)) over 2 pi |log(R-1)|)
  struct Sample {
    int j;
    double R;
    double rhs;
  };
  std::vector<Sample> samples;
  double extrapolated = 0.0;
  double residual = 0.0;
};

/// The mean relation for B = z^2, h = log 2, g = log(1/(|z|-1)).
MeanRelation mean_relation_check(int j_lo = 2, int j_hi = 8);

/// Kolmogorov-Smirnov statistic of the angles of B^n(z) for uniform starts.
double invariance_ks_statistic(const BlaschkeMap& B, int n, std::int64_t samples,
                               std::uint64_t seed);

}  // namespace bvlab
