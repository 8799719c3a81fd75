#pragma once

#include <vector>

#include "bvlab/common.hpp"
#include "bvlab/laurent.hpp"
#include "bvlab/radius.hpp"

namespace bvlab {

/// coeff * conj(z)^p * z^q * |z|^gamma on r_in <= |z| < r_out, zero elsewhere.
///
/// The angular frequency is q - p and the radial degree p + q + gamma, so the
/// value is coeff * |z|^(p+q+gamma) * e^{i (q-p) arg z}. gamma is kept in
/// extended precision: deep shells carry integer exponents near 1e18.
struct MonomialTerm {
  cplx coeff{1.0, 0.0};
  std::int64_t p = 0;
  std::int64_t q = 0;
  long double gamma = 0;
  Radius r_in = Radius::zero();
  Radius r_out = Radius::infinity();

  Freq frequency() const { return checked_sub(q, p); }
  long double radial_degree() const {
    return static_cast<long double>(p) + static_cast<long double>(q) + gamma;
  }
  /// Half-open support test on log|z|.
  bool supports(double log_abs_z) const {
    return r_in.log() <= log_abs_z && log_abs_z < r_out.log();
  }
  cplx value(cplx z) const;
};

/// The unit-modulus building block (conj(z)/|z|)^(n-2) on A(r, rho).
MonomialTerm basic_coefficient(std::int64_t n, Radius r, Radius rho, cplx coeff = {1.0, 0.0});

/// Indicator of the annulus A(r, rho).
MonomialTerm annulus_indicator(Radius r, Radius rho, cplx coeff = {1.0, 0.0});

/// Finite sum of monomial terms. Terms are kept sorted by
/// (frequency, support, radial degree, ...) so evaluation order, and hence
/// every floating-point result, is independent of construction order.
class PiecewiseField {
 public:
  PiecewiseField() = default;
  explicit PiecewiseField(std::vector<MonomialTerm> terms);

  const std::vector<MonomialTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  cplx operator()(cplx z) const;

  /// Sorted distinct finite positive breakpoints.
  std::vector<Radius> breakpoints() const;
  /// Largest finite r_out (zero radius when empty).
  Radius outer_radius() const;
  /// Smallest r_in.
  Radius inner_radius() const;
  bool bounded() const;

  /// max |field| over a probe set: n_r log-spaced radii inside every
  /// breakpoint interval times n_theta angles.
  double sampled_sup(int n_r = 7, int n_theta = 64) const;

 private:
  std::vector<MonomialTerm> terms_;
};

PiecewiseField operator+(const PiecewiseField& a, const PiecewiseField& b);
PiecewiseField scaled(const PiecewiseField& f, cplx c);

/// Merges terms that agree as functions (same frequency, radial degree and
/// support) into one canonical term; drops zero terms.
PiecewiseField simplify(const PiecewiseField& f);

cplx eval(const PiecewiseField& field, cplx z);

/// (1/pi) * integral of term(w) * w^j dm(w).
cplx moment(const MonomialTerm& term, Freq j);

/// Laurent expansion of the Cauchy transform on |z| > outer radius.
/// Frequencies above max_freq are dropped.
ExteriorLaurent cauchy_exterior(const PiecewiseField& field, Freq max_freq = kFreqMax,
                                double* dropped_mass = nullptr);

/// The Cauchy transform on the whole plane, as a piecewise field that is
/// continuous across every breakpoint and vanishes at infinity.
///
/// The e = 0 exponent (a term whose radial integrand is s^-1) would need
/// log|z| factors, which the term class cannot hold; it raises
/// UnsupportedTermError. The unit-modulus shell blocks always have e = n > 0.
PiecewiseField cauchy_full(const PiecewiseField& field);

/// Termwise Wirtinger derivative d/dz, valid away from breakpoints
/// (distributional boundary contributions are not represented).
PiecewiseField derivative_z(const PiecewiseField& field);

/// S(field) = d/dz of the Cauchy transform, everywhere off breakpoints.
PiecewiseField beurling(const PiecewiseField& field);

/// Laurent route for S on the exterior: derivative of cauchy_exterior.
ExteriorLaurent beurling_exterior(const PiecewiseField& field, Freq max_freq = kFreqMax,
                                  double* dropped_mass = nullptr);

/// Restriction of a field to |z| > outer radius as a Laurent series. Throws
/// DomainError if the exterior part is not a holomorphic polynomial in 1/z.
ExteriorLaurent exterior_part(const PiecewiseField& field);

/// Taylor coefficients c_k = (k+1)/pi * integral mu(w) conj(w)^k dm(w).
TaylorSeries bergman_project(const PiecewiseField& field);

/// Pointwise product; supports intersect, exponents add.
PiecewiseField multiply(const PiecewiseField& f, const PiecewiseField& g);

/// (f^* mu)(z) = mu(z^d) * conj(f'(z)) / f'(z) for f(z) = z^d.
PiecewiseField pullback_power(const PiecewiseField& field, int d);

/// mu_0(w) = mu(conj(w)).
PiecewiseField reflect_conjugate(const PiecewiseField& field);

}  // namespace bvlab
