#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bvlab/laurent.hpp"
#include "bvlab/radius.hpp"

namespace bvlab {

enum class VarianceMethod { lacunary_exact, block_increment, block_mass, cesaro4 };

std::string to_string(VarianceMethod m);

/// value == diagnostics.back().second whenever diagnostics is non-empty.
/// per_block holds the raw per-scale quantities the running estimates
/// average over.
struct VarianceEstimate {
  double value = 0.0;
  VarianceMethod method = VarianceMethod::lacunary_exact;
  std::vector<std::pair<int, double>> diagnostics;
  std::vector<double> per_block;
  bool converged = false;
  double tolerance = 1e-3;
};

/// Relative tolerance between consecutive running estimates.
inline constexpr double kVarianceTolerance = 1e-3;

/// (1/2pi) int |g(R e^it)|^2 dt = sum |b_k|^2 R^-2k.
double integral_means(const ExteriorLaurent& g, Radius R);
double integral_means(const ExteriorLaurent& g, double R);

/// I(R_hi) - I(R_lo) for R_lo < R_hi, without cancellation.
double integral_means_increment(const ExteriorLaurent& g, Radius R_lo, Radius R_hi);

/// log(1/(R-1)) accurate for R close to 1.
double log_inverse_gap(Radius R);

/// sigma^2 of a series with geometric frequency ratio d and coefficient
/// moduli c_n: Cesaro mean of |c_n|^2 over log d.
VarianceEstimate variance_lacunary(const std::vector<double>& moduli, double d);

/// Block-increment estimator over radii R_l = R0^(1/d^l), l = 0..n_blocks.
VarianceEstimate variance_block(const ExteriorLaurent& g, int d, double R0, int n_blocks);

/// Per-block coefficient mass over log d. Blocks come from g.self_similarity;
/// n_blocks < 0 uses every block up to the last stored frequency.
VarianceEstimate variance_block_mass(const ExteriorLaurent& g, int d, int n_blocks = -1);

/// Fourth-order Cesaro average (8/3) <|v'''/rho*^2|^2> on the fundamental
/// annuli A(R0^(1/d^(l+1)), R0^(1/d^l)), averaged against rho* dm.
VarianceEstimate cesaro_sigma4(const ExteriorLaurent& v, double R0, int d, int n_annuli = 8);

/// The same, taking v''' directly.
VarianceEstimate cesaro_sigma4_from_third(const ExteriorLaurent& v3, double R0, int d,
                                          int n_annuli = 8);

/// b_k z^-k -> b_k (-k)(-k-1)(-k-2) z^-(k+3)
ExteriorLaurent third_derivative(const ExteriorLaurent& g);

/// Least-squares slope of I(R) against log(1/(R-1)) over n_pts radii with
/// R-1 geometric in [R_lo-1, R_hi-1].
double growth_slope(const ExteriorLaurent& g, double R_lo, double R_hi, int n_pts);

/// |(1/4r) d/dr (r d/dr M(r)) - sum k^2 |a_k|^2 r^(2k-2)| with
/// M(r) = sum |a_k|^2 r^2k.
double hardy_check(const TaylorSeries& g, double r);

/// sup of (|z|^2 - 1)|g'(z)| over radii x n_theta angles.
double bloch_seminorm(const ExteriorLaurent& g, const std::vector<double>& radii, int n_theta = 256);

/// Default grid: R-1 geometric in [1e-4, 10].
double bloch_seminorm(const ExteriorLaurent& g);

/// Largest gap R-1 the truncation resolves: 10 / max_freq.
void require_resolved(const ExteriorLaurent& g, Radius R_final, const char* who);

/// Running tail averages (last ceil(n/2) entries) plus convergence flag.
VarianceEstimate tail_average_estimate(const std::vector<double>& per_block, VarianceMethod m,
                                       double scale = 1.0);

}  // namespace bvlab
