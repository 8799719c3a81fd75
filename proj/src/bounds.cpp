#include "bvlab/bounds.hpp"

#include <boost/math/tools/minima.hpp>
#include <cmath>

#include "bvlab/common.hpp"

namespace bvlab {

namespace {

void require_degree(double d) {
  if (!(d > 1.0)) throw DomainError("degree must exceed 1");
}

}  // namespace

double sigma2_shell(double d, double rho0) {
  require_degree(d);
  if (!(rho0 > 0.0 && rho0 < 1.0)) throw DomainError("rho0 must lie in (0, 1)");
  const double D = std::pow(rho0, 1.0 / d) - rho0;
  return 4.0 * D * D / std::log(d);
}

double optimal_rho0(double d) {
  require_degree(d);
  return std::pow(d, d / (1.0 - d));
}

double sigma2_optimal(double d) {
  require_degree(d);
  return 4.0 * std::pow(d, 2.0 / (1.0 - d)) * (d - 1.0) * (d - 1.0) / (d * d * std::log(d));
}

double lambda_lemma_coeff(double d) {
  require_degree(d);
  return (d - 1.0) * (d - 1.0) / (d * d * std::log(d));
}

DegreeOptimum best_integer_degree(int lo, int hi) {
  if (lo < 2 || hi < lo) throw DomainError("best_integer_degree: need 2 <= lo <= hi");
  DegreeOptimum best{static_cast<double>(lo), sigma2_optimal(lo)};
  for (int d = lo + 1; d <= hi; ++d) {
    const double v = sigma2_optimal(d);
    if (v > best.value) best = {static_cast<double>(d), v};
  }
  return best;
}

DegreeOptimum best_real_degree(double lo, double hi) {
  if (!(lo > 1.0 && hi > lo)) throw DomainError("best_real_degree: need 1 < lo < hi");
  const auto [x, fx] = boost::math::tools::brent_find_minima(
      [](double d) { return -sigma2_optimal(d); }, lo, hi, 40);
  return {x, -fx};
}

double julia_dim_t(int d, std::complex<double> t) {
  return 1.0 + std::norm(t) * lambda_lemma_coeff(d) / 4.0;
}

double julia_dim_k(int d, double k) { return 1.0 + sigma2_optimal(d) * k * k; }

double distortion_constant(int d) {
  require_degree(d);
  return std::pow(static_cast<double>(d), 1.0 / (d - 1.0)) / 2.0;
}

double smirnov_bound_t(std::complex<double> t) {
  const double a = std::norm(t);
  if (!(a < 1.0)) throw DomainError("smirnov_bound_t: need |t| < 1");
  if (a == 0.0) return 1.0;
  // 1 - sqrt(1 - a) = a / (1 + sqrt(1 - a))
  const double s = 1.0 / (1.0 + std::sqrt(1.0 - a));
  return 1.0 + a * s * s;
}

double smirnov_bound_k(double k) { return 1.0 + k * k; }

double pointwise_sigma_bound(int m) {
  if (m < 1) throw DomainError("pointwise_sigma_bound: need m >= 1");
  const double x = m;
  if (m <= 20) {
    const double g2m = std::tgamma(2.0 + x);
    const double gm = std::tgamma(x);
    const double gh = std::tgamma(x / 2.0 + 1.0);
    return (g2m * g2m) * (gm * gm) / (std::tgamma(2.0 * x) * (gh * gh) * (gh * gh));
  }
  const double lg = 2.0 * std::lgamma(2.0 + x) + 2.0 * std::lgamma(x) - std::lgamma(2.0 * x) -
                    4.0 * std::lgamma(x / 2.0 + 1.0);
  return std::exp(lg);
}

DimensionRow dimension_row(double d) {
  DimensionRow row;
  row.d = d;
  row.lambda_lemma_coeff = lambda_lemma_coeff(d);
  row.improved_coeff = sigma2_optimal(d);
  row.c_d = std::pow(d, 1.0 / (d - 1.0)) / 2.0;
  row.optimal_rho0 = optimal_rho0(d);
  return row;
}

std::vector<DimensionRow> table2() {
  std::vector<DimensionRow> rows;
  for (double d : {2.0, 3.0, 4.0, 20.0}) rows.push_back(dimension_row(d));
  return rows;
}

double display_truncate(double x, int digits) {
  const double scale = std::pow(10.0, digits);
  return std::trunc(x * scale * (1.0 + 1e-15)) / scale;
}

}  // namespace bvlab
