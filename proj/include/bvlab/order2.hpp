#pragma once

#include <optional>
#include <vector>

#include "bvlab/annular.hpp"
#include "bvlab/constructions.hpp"
#include "bvlab/variance.hpp"

namespace bvlab {

/// Coefficients below this modulus are dropped from Laurent products.
inline constexpr double kOrder2Floor = 1e-14;

struct Order2Field {
  ExteriorLaurent w;
  /// Squared modulus of dropped coefficients above max_freq.
  double dropped_mass = 0.0;
};

/// w = S(mu S mu) - (1/2)(S mu)^2 on the exterior disk, truncated at max_freq.
Order2Field order2_field(const PiecewiseField& mu, Freq max_freq);

struct Order2Report {
  double first_order = 0.0;
  double second_order = 0.0;
  double total = 0.0;
  ShellParams params;
  /// Shells actually built: those with 2 n_j <= max_freq.
  int shells_used = 0;
  Freq max_freq = 0;
  double dropped_mass = 0.0;
  VarianceEstimate first_estimate;
  VarianceEstimate second_estimate;
  /// Relative change of total when J and max_freq are doubled; absent
  /// without refinement.
  std::optional<double> stability;
  std::optional<double> refined_total;
};

/// Number of shells whose doubled frequency fits under max_freq.
int order2_shell_count(const ShellParams& params);

Order2Report order2_bound(const ShellParams& params, bool refine = false);

struct SearchGrid {
  std::vector<int> d;
  /// Empty optional means the optimal rho0 for that d.
  std::vector<std::optional<double>> rho0;
  /// Empty optional means the default n0.
  std::vector<std::optional<std::int64_t>> n0;
  int J = 8;
  Freq max_freq = 1'000'000'000'000'000'000;
};

/// Every valid grid point, sorted by total descending (grid order on ties).
std::vector<Order2Report> parameter_search(const SearchGrid& grid, bool parallel = true);

}  // namespace bvlab
