#pragma once

#include <complex>
#include <vector>

namespace bvlab {

/// 4 (rho0^(1/d) - rho0)^2 / log d
double sigma2_shell(double d, double rho0);

/// d^(d/(1-d)), the maximiser of sigma2_shell in rho0.
double optimal_rho0(double d);

/// 4 d^(2/(1-d)) (d-1)^2 / (d^2 log d)
double sigma2_optimal(double d);

/// k^2 coefficient of the dimension bound obtained from the lambda-lemma:
/// (d-1)^2 / (d^2 log d).
double lambda_lemma_coeff(double d);

struct DegreeOptimum {
  double d = 0.0;
  double value = 0.0;
};

/// max of sigma2_optimal over integers lo..hi (first maximiser on ties).
DegreeOptimum best_integer_degree(int lo = 2, int hi = 64);

/// max of sigma2_optimal over real d in (lo, hi).
DegreeOptimum best_real_degree(double lo = 2.0, double hi = 64.0);

/// 1 + |t|^2 (d-1)^2 / (4 d^2 log d), second order in t.
double julia_dim_t(int d, std::complex<double> t);

/// 1 + sigma2_optimal(d) k^2
double julia_dim_k(int d, double k);

/// c_d = d^(1/(d-1)) / 2
double distortion_constant(int d);

/// 1 + (1 - sqrt(1 - |t|^2))^2 / |t|^2, continuous at t = 0.
double smirnov_bound_t(std::complex<double> t);

/// 1 + k^2
double smirnov_bound_k(double k);

/// Gamma(2+m)^2 Gamma(m)^2 / (Gamma(2m) Gamma(m/2+1)^4)
double pointwise_sigma_bound(int m);

struct DimensionRow {
  double d = 0.0;
  double lambda_lemma_coeff = 0.0;
  double improved_coeff = 0.0;
  double c_d = 0.0;
  double optimal_rho0 = 0.0;
};

DimensionRow dimension_row(double d);

/// Rows for d = 2, 3, 4, 20.
std::vector<DimensionRow> table2();

/// Truncation toward zero at `digits` decimals, the way the table prints.
double display_truncate(double x, int digits = 4);

}  // namespace bvlab
