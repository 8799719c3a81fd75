#include "bvlab/variance.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <fmt/format.h>

#include "bvlab/kernels.hpp"
#include "bvlab/summation.hpp"

namespace bvlab {

std::string to_string(VarianceMethod m) {
  switch (m) {
    case VarianceMethod::lacunary_exact: return "lacunary_exact";
    case VarianceMethod::block_increment: return "block_increment";
    case VarianceMethod::block_mass: return "block_mass";
    case VarianceMethod::cesaro4: return "cesaro4";
  }
  return "unknown";
}

double integral_means(const ExteriorLaurent& g, Radius R) {
  if (!(R.log() > 0)) throw DomainError("integral_means: need R > 1");
  const long double x = R.log();
  CompensatedSum acc;
  for (const auto& [k, b] : g.coeffs()) {
    acc.add(std::norm(b) * static_cast<double>(std::exp(-2.0L * static_cast<long double>(k) * x)));
  }
  return acc.value();
}

double integral_means(const ExteriorLaurent& g, double R) {
  return integral_means(g, Radius::from_value(R));
}

double integral_means_increment(const ExteriorLaurent& g, Radius R_lo, Radius R_hi) {
  if (!(R_lo.log() > 0) || !(R_lo < R_hi)) {
    throw DomainError("integral_means_increment: need 1 < R_lo < R_hi");
  }
  const long double x_lo = R_lo.log();
  const long double gap = static_cast<long double>(R_hi.log()) - x_lo;
  CompensatedSum acc;
  for (const auto& [k, b] : g.coeffs()) {
    const long double kk = static_cast<long double>(k);
    const long double w = std::exp(-2.0L * kk * x_lo) * -std::expm1(-2.0L * kk * gap);
    acc.add(std::norm(b) * static_cast<double>(w));
  }
  return acc.value();
}

double log_inverse_gap(Radius R) { return -std::log(std::expm1(R.log())); }

void require_resolved(const ExteriorLaurent& g, Radius R_final, const char* who) {
  if (g.max_freq() == kFreqMax) return;
  const double gap = std::expm1(R_final.log());
  const double need = 10.0 / gap;
  if (static_cast<double>(g.max_freq()) < need) {
    throw UnresolvedScaleError(fmt::format("{}: max_freq {} does not resolve R-1 = {:.3g} (need >= {:.3g})", who,
                                           g.max_freq(), gap, need));
  }
}

VarianceEstimate tail_average_estimate(const std::vector<double>& per_block, VarianceMethod m,
                                       double scale) {
  VarianceEstimate est;
  est.method = m;
  est.per_block = per_block;
  est.tolerance = kVarianceTolerance;
  for (std::size_t i = 0; i < per_block.size(); ++i) {
    const std::size_t len = (i + 2) / 2;
    CompensatedSum acc;
    for (std::size_t j = i + 1 - len; j <= i; ++j) acc.add(per_block[j]);
    est.diagnostics.emplace_back(static_cast<int>(i), scale * acc.value() / static_cast<double>(len));
  }
  if (est.diagnostics.empty()) {
    est.converged = true;
    return est;
  }
  est.value = est.diagnostics.back().second;
  if (est.diagnostics.size() >= 2) {
    const double prev = est.diagnostics[est.diagnostics.size() - 2].second;
    const double diff = std::abs(est.value - prev);
    est.converged = diff <= est.tolerance * std::abs(est.value) || (est.value == 0.0 && prev == 0.0);
  }
  return est;
}

VarianceEstimate variance_lacunary(const std::vector<double>& moduli, double d) {
  if (!(d > 1.0)) throw DomainError("variance_lacunary: need d > 1");
  std::vector<double> sq;
  sq.reserve(moduli.size());
  for (double c : moduli) sq.push_back(c * c);
  return tail_average_estimate(sq, VarianceMethod::lacunary_exact, 1.0 / std::log(d));
}

namespace {

std::vector<Radius> block_radii(double R0, int d, int n) {
  if (!(R0 > 1.0)) throw DomainError("need R0 > 1");
  if (d < 2) throw DomainError("need d >= 2");
  std::vector<Radius> radii;
  const long double x0 = std::log(static_cast<long double>(R0));
  for (int l = 0; l <= n; ++l) {
    radii.push_back(Radius::from_log(static_cast<double>(x0 / std::pow(static_cast<long double>(d), l))));
  }
  return radii;
}

}  // namespace

VarianceEstimate variance_block(const ExteriorLaurent& g, int d, double R0, int n_blocks) {
  if (n_blocks < 1) throw DomainError("variance_block: need n_blocks >= 1");
  const auto radii = block_radii(R0, d, n_blocks);
  require_resolved(g, radii.back(), "variance_block");
  const auto per = parallel_map(static_cast<std::size_t>(n_blocks), [&](std::size_t l) {
    const double inc = integral_means_increment(g, radii[l + 1], radii[l]);
    const double den = log_inverse_gap(radii[l + 1]) - log_inverse_gap(radii[l]);
    return inc / den;
  });
  return tail_average_estimate(per, VarianceMethod::block_increment);
}

VarianceEstimate variance_block_mass(const ExteriorLaurent& g, int d, int n_blocks) {
  if (d < 2) throw DomainError("variance_block_mass: need d >= 2");
  if (g.empty()) return tail_average_estimate({}, VarianceMethod::block_mass);
  if (!g.self_similarity) throw DomainError("variance_block_mass: series has no block structure");
  const auto ss = *g.self_similarity;
  const Freq top = std::min(g.max_freq(), g.max_stored());
  std::vector<std::pair<Freq, Freq>> edges;
  Freq lo = ss.first;
  for (int l = 0; n_blocks < 0 || l < n_blocks; ++l) {
    if (n_blocks < 0 && lo > top) break;
    Freq hi;
    if (__builtin_mul_overflow(lo, ss.base, &hi)) hi = kFreqMax;
    if (n_blocks >= 0 && hi - 1 > g.max_freq()) {
      throw UnresolvedScaleError("variance_block_mass: block " + std::to_string(l) +
                                 " extends past max_freq " + std::to_string(g.max_freq()));
    }
    edges.emplace_back(lo, hi);
    if (hi == kFreqMax) break;
    lo = hi;
  }
  std::vector<double> mass;
  mass.reserve(edges.size());
  const auto& c = g.coeffs();
  for (const auto& [a, b] : edges) {
    CompensatedSum acc;
    for (auto it = c.lower_bound(a); it != c.end() && it->first < b; ++it) acc.add(std::norm(it->second));
    mass.push_back(acc.value());
  }
  return tail_average_estimate(mass, VarianceMethod::block_mass, 1.0 / std::log(static_cast<double>(d)));
}

ExteriorLaurent third_derivative(const ExteriorLaurent& g) {
  ExteriorLaurent out(g.max_freq() == kFreqMax ? kFreqMax : checked_add(g.max_freq(), 3));
  for (const auto& [k, b] : g.coeffs()) {
    if (k == 0) continue;
    const long double kk = static_cast<long double>(k);
    const double f = static_cast<double>(-kk * (kk + 1) * (kk + 2));
    out.add(checked_add(k, 3), f * b);
  }
  out.self_similarity = g.self_similarity;
  return out;
}

VarianceEstimate cesaro_sigma4_from_third(const ExteriorLaurent& v3, double R0, int d,
                                          int n_annuli) {
  if (n_annuli < 1) throw DomainError("cesaro_sigma4: need n_annuli >= 1");
  const auto radii = block_radii(R0, d, n_annuli);
  require_resolved(v3, radii.back(), "cesaro_sigma4");
  std::vector<std::pair<double, double>> weights;
  for (const auto& [k, c] : v3.coeffs()) weights.emplace_back(static_cast<double>(k), std::norm(c));

  auto integrand = [&](double u) {
    const double s = std::exp(u);
    const long double lr = std::log1p(static_cast<long double>(s));
    const double h = s * (2.0 + s);
    const double jac = h * h * h / 8.0 * (1.0 + s) * s;
    CompensatedSum acc;
    for (const auto& [k, w] : weights) {
      acc.add(w * static_cast<double>(std::exp(-2.0L * k * lr)));
    }
    return acc.value() * jac;
  };

  const auto per = parallel_map(static_cast<std::size_t>(n_annuli), [&](std::size_t l) {
    const Radius outer = radii[l];
    const Radius inner = radii[l + 1];
    const double u_lo = std::log(std::expm1(inner.log()));
    const double u_hi = std::log(std::expm1(outer.log()));
    const double num = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        integrand, u_lo, u_hi, 20, 1e-12);
    const double den = std::log(std::expm1(2.0 * outer.log())) - std::log(std::expm1(2.0 * inner.log()));
    return 8.0 / 3.0 * num / den;
  });
  return tail_average_estimate(per, VarianceMethod::cesaro4);
}

VarianceEstimate cesaro_sigma4(const ExteriorLaurent& v, double R0, int d, int n_annuli) {
  return cesaro_sigma4_from_third(third_derivative(v), R0, d, n_annuli);
}

double growth_slope(const ExteriorLaurent& g, double R_lo, double R_hi, int n_pts) {
  if (!(R_lo > 1.0) || !(R_hi > R_lo) || n_pts < 2) {
    throw DomainError("growth_slope: need 1 < R_lo < R_hi and n_pts >= 2");
  }
  const double a = std::log(R_lo - 1.0);
  const double b = std::log(R_hi - 1.0);
  std::vector<Radius> radii;
  std::vector<double> xs;
  for (int i = 0; i < n_pts; ++i) {
    const double lg = a + (b - a) * i / (n_pts - 1);
    radii.push_back(Radius::from_log(std::log1p(std::exp(lg))));
    xs.push_back(-lg);
  }
  const auto ys = integral_means_grid(g, radii);
  CompensatedSum sx, sy;
  for (int i = 0; i < n_pts; ++i) {
    sx.add(xs[i]);
    sy.add(ys[i]);
  }
  const double mx = sx.value() / n_pts;
  const double my = sy.value() / n_pts;
  CompensatedSum sxy, sxx;
  for (int i = 0; i < n_pts; ++i) {
    sxy.add((xs[i] - mx) * (ys[i] - my));
    sxx.add((xs[i] - mx) * (xs[i] - mx));
  }
  return sxy.value() / sxx.value();
}

double hardy_check(const TaylorSeries& g, double r) {
  if (!(r > 0.0)) throw DomainError("hardy_check: need r > 0");
  // Left side: apply (1/4r) d/dr r d/dr to each |a_k|^2 r^2k in turn.
  CompensatedSum lhs;
  for (const auto& [k, a] : g.coeffs()) {
    const double kk = static_cast<double>(k);
    const double r_dM = 2.0 * kk * std::norm(a) * std::pow(r, 2.0 * kk);
    const double d_r_dM = 2.0 * kk * r_dM / r;
    lhs.add(d_r_dM / (4.0 * r));
  }
  TaylorSeries gp;
  for (const auto& [k, a] : g.coeffs()) {
    if (k > 0) gp.add(k - 1, static_cast<double>(k) * a);
  }
  CompensatedSum rhs;
  for (const auto& [k, a] : gp.coeffs()) rhs.add(std::norm(a) * std::pow(r, 2.0 * static_cast<double>(k)));
  return std::abs(lhs.value() - rhs.value());
}

double bloch_seminorm(const ExteriorLaurent& g, const std::vector<double>& radii, int n_theta) {
  std::vector<Radius> rs;
  for (double R : radii) {
    if (!(R > 1.0)) throw DomainError("bloch_seminorm: radii must exceed 1");
    rs.push_back(Radius::from_value(R));
  }
  return bloch_sup_grid(laurent_derivative(g), rs, n_theta);
}

double bloch_seminorm(const ExteriorLaurent& g) {
  std::vector<double> radii;
  for (int i = 0; i <= 60; ++i) radii.push_back(1.0 + std::pow(10.0, -4.0 + 5.0 * i / 60.0));
  return bloch_seminorm(g, radii);
}

}  // namespace bvlab
