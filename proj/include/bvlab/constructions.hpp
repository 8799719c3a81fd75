#pragma once

#include <optional>
#include <vector>

#include "bvlab/annular.hpp"
#include "bvlab/laurent.hpp"

namespace bvlab {

/// First-shell frequency of the standard construction: d - 1, or 2 for d = 2
/// (where n_j = 2^(j+1)).
std::int64_t default_n0(int d);

/// Shell coefficient (conj z/|z|)^(n_j - 2) on A(r_j, r_{j+1}),
/// n_j = n0 d^j, r_j = rho0^(1/n_j).
struct ShellParams {
  int d = 20;
  double rho0 = 0.0;
  std::optional<std::int64_t> n0;
  int J = 24;
  Freq max_freq = kFreqMax;

  std::int64_t first_frequency() const { return n0 ? *n0 : default_n0(d); }
  bool standard() const { return first_frequency() == default_n0(d); }
  /// n_j; throws CapacityError on overflow.
  Freq frequency(int j) const;
  /// r_j, for any j >= 0 (no overflow: computed from log rho0 / n0 / d^j).
  Radius radius(int j) const;
  /// rho0^(1/d) - rho0
  double gap() const;
  /// Shells j < J with n_j - 1 <= max_freq, the ones that reach the stored
  /// part of the exterior transforms.
  int resolved_shells() const;
  void validate() const;

  /// The optimal rho0 for degree d.
  static ShellParams optimal(int d, int J = 24);
};

PiecewiseField build_shell(const ShellParams& params);

/// Exterior Cauchy transform and Beurling transform of the resolved shells,
/// with block structure (base d, first n0) attached to the latter.
ExteriorLaurent shell_cauchy(const ShellParams& params);
ExteriorLaurent shell_beurling(const ShellParams& params);

struct IdentityCheck {
  double residual = 0.0;
  /// Modulus of the omitted shells j >= J at the smallest |z|.
  double tail_bound = 0.0;
};

/// max |C mu(z) + (2d/(d-1)) (rho0^(1/d) - rho0) v(z)| over samples |z| > 1.
/// For d = 2 the constant term of v is dropped.
IdentityCheck shell_cauchy_identity_check(const ShellParams& params, const std::vector<cplx>& zs);

struct VectorField {
  ExteriorLaurent v;
  ExteriorLaurent v_prime;
};

/// v(z) = -(z/d) sum_{n<N} z^(-(d-1)d^n) / d^n and v'.
VectorField lacunary_vector_field(int d, int N);

/// |v(z^d) - d z^(d-1) v(z) - z|
double functional_equation_residual(const ExteriorLaurent& v, int d, cplx z);

/// The exact value of that residual for the N-term field: |z|^(d - (d-1)d^N) / d^N.
double functional_equation_tail(int d, int N, cplx z);

struct PerturbationSpec {
  int d = 3;
  /// Coefficients of Q, lowest degree first; deg Q <= d - 2.
  std::vector<cplx> q;
  int K = 8;
  void validate() const;
};

/// v(z) = (z/d) sum_{k<K} Q(z^(d^k)) / (d^k z^(d^(k+1)))
ExteriorLaurent perturbation_vector_field(const PerturbationSpec& spec);

/// The K summands v_k of that series.
std::vector<ExteriorLaurent> perturbation_blocks(const PerturbationSpec& spec);

/// max over k of |v_{k+1}(z) - v_k(z^d)/(d z^(d-1))|
double periodicity_residual(const PerturbationSpec& spec, cplx z);

/// Smallest N with sum_{j >= N+1} (rho1/r1)^j <= eps.
int truncation_order(double rho1, double r1, double eps);

struct TruncationResult {
  PiecewiseField field;
  int N = 0;
  /// Bound on sup |mu~ - mu| (sum of correction moduli, before rescaling).
  double correction_sup = 0.0;
  bool rescaled = false;
};

/// Cancels every exterior Cauchy coefficient b_j, j >= N+1, of mu with unit-
/// modulus blocks on A(rho0, r1), rho0 and rho1 being the support radii of mu.
/// With rescale the result is divided by 1 + eps.
TruncationResult truncate_to_polynomial(const PiecewiseField& mu, double r1, double eps,
                                        bool rescale = false);

/// sum_{k<K} (z^(d^k))^* mu0 for mu0 supported in one fundamental annulus.
PiecewiseField periodise(const PiecewiseField& mu0, int d, int K);

}  // namespace bvlab
