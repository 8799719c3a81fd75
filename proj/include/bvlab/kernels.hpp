#pragma once

#include <cstddef>
#include <vector>

#include "bvlab/laurent.hpp"
#include "bvlab/radius.hpp"

namespace bvlab {

/// Number of OpenMP threads in use (1 when built without OpenMP).
int max_threads();

/// Index-parallel map: out[i] = f(i). Each slot is written by exactly one
/// thread, so results do not depend on the thread count.
template <class F>
auto parallel_map(std::size_t n, F f) -> std::vector<decltype(f(std::size_t{}))> {
  std::vector<decltype(f(std::size_t{}))> out(n);
  const long long count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (long long i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
  return out;
}

template <class F>
auto serial_map(std::size_t n, F f) -> std::vector<decltype(f(std::size_t{}))> {
  std::vector<decltype(f(std::size_t{}))> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
  return out;
}

/// I(R) = sum |b_k|^2 R^-2k at every radius.
std::vector<double> integral_means_grid(const ExteriorLaurent& g, const std::vector<Radius>& radii);
std::vector<double> integral_means_grid_serial(const ExteriorLaurent& g,
                                               const std::vector<Radius>& radii);

/// max over points of (|z|^2 - 1)|g'(z)|, points given as (radius, angle).
double bloch_sup_grid(const ExteriorLaurent& g_prime, const std::vector<Radius>& radii,
                      int n_theta);
double bloch_sup_grid_serial(const ExteriorLaurent& g_prime, const std::vector<Radius>& radii,
                             int n_theta);

}  // namespace bvlab
