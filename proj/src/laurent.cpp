#include "bvlab/laurent.hpp"

#include <cmath>

namespace bvlab {

namespace {

constexpr long double kTwoPiL = 6.283185307179586476925286766559L;

cplx polar_power(double log_abs, double arg, long double k) {
  const double mag = static_cast<double>(std::exp(k * static_cast<long double>(log_abs)));
  if (mag == 0.0) return {0.0, 0.0};
  const long double phase = std::fmod(k * static_cast<long double>(arg), kTwoPiL);
  const double ph = static_cast<double>(phase);
  return {mag * std::cos(ph), mag * std::sin(ph)};
}

}  // namespace

cplx inverse_power(cplx z, Freq k) {
  if (k == 0) return {1.0, 0.0};
  return polar_power(std::log(std::abs(z)), std::arg(z), -static_cast<long double>(k));
}

bool ExteriorLaurent::add(Freq k, cplx c) {
  if (k < 0) throw DomainError("ExteriorLaurent: negative frequency " + std::to_string(k));
  if (k > max_freq_) return false;
  coeffs_[k] += c;
  return true;
}

cplx ExteriorLaurent::coeff(Freq k) const {
  auto it = coeffs_.find(k);
  return it == coeffs_.end() ? cplx{} : it->second;
}

cplx ExteriorLaurent::operator()(cplx z) const {
  const double la = std::log(std::abs(z));
  const double arg = std::arg(z);
  CompensatedComplexSum acc;
  for (const auto& [k, b] : coeffs_) {
    acc.add(b * polar_power(la, arg, -static_cast<long double>(k)));
  }
  return acc.value();
}

ExteriorLaurent LaurentBuilder::build(Freq max_freq, double floor, double* dropped_mass) const {
  ExteriorLaurent g(max_freq);
  CompensatedSum dropped;
  for (const auto& [k, acc] : acc_) {
    const cplx c = acc.value();
    if (std::abs(c) < floor || c == cplx{}) continue;
    if (!g.add(k, c)) dropped.add(std::norm(c));
  }
  if (dropped_mass != nullptr) *dropped_mass = dropped.value();
  return g;
}

ExteriorLaurent laurent_derivative(const ExteriorLaurent& g) {
  ExteriorLaurent out(g.max_freq() == kFreqMax ? kFreqMax : checked_add(g.max_freq(), 1));
  for (const auto& [k, b] : g.coeffs()) {
    if (k == 0) continue;
    out.add(checked_add(k, 1), -static_cast<double>(k) * b);
  }
  if (g.self_similarity) out.self_similarity = g.self_similarity;
  return out;
}

ExteriorLaurent scaled(const ExteriorLaurent& g, cplx c) {
  ExteriorLaurent out(g.max_freq());
  for (const auto& [k, b] : g.coeffs()) out.add(k, c * b);
  out.self_similarity = g.self_similarity;
  return out;
}

ExteriorLaurent sum(const ExteriorLaurent& a, const ExteriorLaurent& b) {
  LaurentBuilder acc;
  for (const auto& [k, c] : a.coeffs()) acc.add(k, c);
  for (const auto& [k, c] : b.coeffs()) acc.add(k, c);
  auto out = acc.build(std::min(a.max_freq(), b.max_freq()));
  if (a.self_similarity) out.self_similarity = a.self_similarity;
  return out;
}

ExteriorLaurent laurent_product(const ExteriorLaurent& a, const ExteriorLaurent& b, Freq max_freq,
                                double floor, double* dropped_mass) {
  LaurentBuilder acc;
  for (const auto& [ka, ca] : a.coeffs()) {
    for (const auto& [kb, cb] : b.coeffs()) {
      Freq k;
      if (__builtin_add_overflow(ka, kb, &k)) {
        if (max_freq == kFreqMax) throw CapacityError("laurent_product: frequency overflow");
        continue;  // beyond any representable cutoff
      }
      acc.add(k, ca * cb);
    }
  }
  return acc.build(std::min({max_freq, a.max_freq(), b.max_freq()}), floor, dropped_mass);
}

double coefficient_mass(const ExteriorLaurent& g) {
  CompensatedSum acc;
  for (const auto& [k, b] : g.coeffs()) acc.add(std::norm(b));
  return acc.value();
}

void TaylorSeries::add(Freq k, cplx c) {
  if (k < 0) throw DomainError("TaylorSeries: negative power " + std::to_string(k));
  coeffs_[k] += c;
}

cplx TaylorSeries::coeff(Freq k) const {
  auto it = coeffs_.find(k);
  return it == coeffs_.end() ? cplx{} : it->second;
}

cplx TaylorSeries::operator()(cplx z) const {
  CompensatedComplexSum acc;
  if (z == cplx{}) return coeff(0);
  const double la = std::log(std::abs(z));
  const double arg = std::arg(z);
  for (const auto& [k, a] : coeffs_) {
    acc.add(a * polar_power(la, arg, static_cast<long double>(k)));
  }
  return acc.value();
}

}  // namespace bvlab
