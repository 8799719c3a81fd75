#include "bvlab/kernels.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "bvlab/variance.hpp"

namespace bvlab {

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

std::vector<double> integral_means_grid(const ExteriorLaurent& g, const std::vector<Radius>& radii) {
  return parallel_map(radii.size(), [&](std::size_t i) { return integral_means(g, radii[i]); });
}

std::vector<double> integral_means_grid_serial(const ExteriorLaurent& g,
                                               const std::vector<Radius>& radii) {
  return serial_map(radii.size(), [&](std::size_t i) { return integral_means(g, radii[i]); });
}

namespace {

double ring_sup(const ExteriorLaurent& gp, Radius R, int n_theta) {
  const double weight = std::expm1(2.0 * R.log());
  double best = 0.0;
  for (int a = 0; a < n_theta; ++a) {
    const double th = 2.0 * kPi * a / n_theta;
    best = std::max(best, weight * std::abs(gp(std::polar(R.value(), th))));
  }
  return best;
}

}  // namespace

double bloch_sup_grid(const ExteriorLaurent& g_prime, const std::vector<Radius>& radii,
                      int n_theta) {
  const auto rows = parallel_map(radii.size(),
                                 [&](std::size_t i) { return ring_sup(g_prime, radii[i], n_theta); });
  return rows.empty() ? 0.0 : *std::max_element(rows.begin(), rows.end());
}

double bloch_sup_grid_serial(const ExteriorLaurent& g_prime, const std::vector<Radius>& radii,
                             int n_theta) {
  double best = 0.0;
  for (const auto& R : radii) best = std::max(best, ring_sup(g_prime, R, n_theta));
  return best;
}

}  // namespace bvlab
