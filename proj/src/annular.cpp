#include "bvlab/annular.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "bvlab/summation.hpp"

namespace bvlab {

namespace {

constexpr long double kTwoPiL = 6.283185307179586476925286766559L;

bool term_less(const MonomialTerm& a, const MonomialTerm& b) {
  const Freq fa = a.q - a.p;
  const Freq fb = b.q - b.p;
  const auto ka = std::make_tuple(fa, a.r_in.log(), a.r_out.log(), a.radial_degree(), a.p,
                                  a.coeff.real(), a.coeff.imag());
  const auto kb = std::make_tuple(fb, b.r_in.log(), b.r_out.log(), b.radial_degree(), b.p,
                                  b.coeff.real(), b.coeff.imag());
  return ka < kb;
}

/// b^e - a^e without cancellation for thin annuli.
double pow_diff(Radius b, Radius a, long double e) {
  if (a.is_zero() || b.is_infinite()) return b.pow(e) - a.pow(e);
  const long double span = static_cast<long double>(b.log()) - static_cast<long double>(a.log());
  return a.pow(e) * static_cast<double>(std::expm1(e * span));
}

/// integral_a^b s^(E-1) ds
double radial_integral(Radius a, Radius b, long double E) {
  if (a.is_zero() && E <= 0) {
    throw DivergentMomentError("radial integral diverges at 0 (exponent " +
                               std::to_string(static_cast<double>(E)) + ")");
  }
  if (b.is_infinite() && E >= 0) {
    throw DivergentMomentError("radial integral diverges at infinity (exponent " +
                               std::to_string(static_cast<double>(E)) + ")");
  }
  if (E == 0) return b.log() - a.log();
  return pow_diff(b, a, E) / static_cast<double>(E);
}

MonomialTerm make_term(cplx c, std::int64_t p, std::int64_t q, long double gamma, Radius lo,
                       Radius hi) {
  MonomialTerm t;
  t.coeff = c;
  t.p = p;
  t.q = q;
  t.gamma = gamma;
  t.r_in = lo;
  t.r_out = hi;
  return t;
}

void push_nonzero(std::vector<MonomialTerm>& out, MonomialTerm t) {
  if (t.coeff != cplx{} && t.r_in < t.r_out) out.push_back(t);
}

void require_bounded(const PiecewiseField& f, const char* who) {
  if (!f.bounded()) throw DomainError(std::string(who) + ": field has unbounded support");
}

}  // namespace

cplx MonomialTerm::value(cplx z) const {
  const double az = std::abs(z);
  const double la = az == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(az);
  if (!supports(la)) return {};
  const long double alpha = radial_degree();
  if (az == 0.0) {
    if (alpha > 0) return {};
    if (alpha == 0) return coeff;
    return {std::numeric_limits<double>::infinity(), 0.0};
  }
  const double mag = static_cast<double>(std::exp(alpha * static_cast<long double>(la)));
  const long double nu = static_cast<long double>(frequency());
  const double ph = static_cast<double>(std::fmod(nu * static_cast<long double>(std::arg(z)), kTwoPiL));
  return coeff * cplx{mag * std::cos(ph), mag * std::sin(ph)};
}

MonomialTerm basic_coefficient(std::int64_t n, Radius r, Radius rho, cplx coeff) {
  if (n < 2) throw DomainError("basic_coefficient: n must be >= 2");
  if (!(r < rho)) throw DomainError("basic_coefficient: need r < rho");
  return make_term(coeff, n - 2, 0, -static_cast<long double>(n - 2), r, rho);
}

MonomialTerm annulus_indicator(Radius r, Radius rho, cplx coeff) {
  if (!(r < rho)) throw DomainError("annulus_indicator: need r < rho");
  return make_term(coeff, 0, 0, 0, r, rho);
}

PiecewiseField::PiecewiseField(std::vector<MonomialTerm> terms) : terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    if (t.p < 0) throw DomainError("MonomialTerm: p must be >= 0");
    if (!(t.r_in < t.r_out)) throw DomainError("MonomialTerm: need r_in < r_out");
  }
  std::stable_sort(terms_.begin(), terms_.end(), term_less);
}

cplx PiecewiseField::operator()(cplx z) const {
  CompensatedComplexSum acc;
  for (const auto& t : terms_) acc.add(t.value(z));
  return acc.value();
}

cplx eval(const PiecewiseField& field, cplx z) { return field(z); }

std::vector<Radius> PiecewiseField::breakpoints() const {
  std::vector<Radius> out;
  for (const auto& t : terms_) {
    if (!t.r_in.is_zero()) out.push_back(t.r_in);
    if (!t.r_out.is_infinite()) out.push_back(t.r_out);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Radius PiecewiseField::outer_radius() const {
  Radius r = Radius::zero();
  for (const auto& t : terms_) {
    if (!t.r_out.is_infinite()) r = std::max(r, t.r_out);
    if (!t.r_in.is_zero()) r = std::max(r, t.r_in);
  }
  return r;
}

Radius PiecewiseField::inner_radius() const {
  if (terms_.empty()) return Radius::zero();
  Radius r = Radius::infinity();
  for (const auto& t : terms_) r = std::min(r, t.r_in);
  return r;
}

bool PiecewiseField::bounded() const {
  return std::none_of(terms_.begin(), terms_.end(),
                      [](const MonomialTerm& t) { return t.r_out.is_infinite(); });
}

double PiecewiseField::sampled_sup(int n_r, int n_theta) const {
  if (terms_.empty()) return 0.0;
  auto bps = breakpoints();
  std::vector<double> logs;
  if (bps.empty()) {
    logs = {-1.0, 0.0, 1.0};
  } else {
    std::vector<double> edges;
    edges.push_back(bps.front().log() - 1.0);
    for (const auto& b : bps) edges.push_back(b.log());
    edges.push_back(bps.back().log() + 1.0);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
      for (int k = 0; k < n_r; ++k) {
        const double s = (k + 0.5) / n_r;
        logs.push_back(edges[i] + s * (edges[i + 1] - edges[i]));
      }
    }
  }
  double best = 0.0;
  for (double lr : logs) {
    const double r = std::exp(lr);
    for (int a = 0; a < n_theta; ++a) {
      const double th = 2.0 * kPi * (a + 0.25) / n_theta;
      best = std::max(best, std::abs((*this)(std::polar(r, th))));
    }
  }
  return best;
}

PiecewiseField operator+(const PiecewiseField& a, const PiecewiseField& b) {
  std::vector<MonomialTerm> terms = a.terms();
  terms.insert(terms.end(), b.terms().begin(), b.terms().end());
  return PiecewiseField(std::move(terms));
}

PiecewiseField scaled(const PiecewiseField& f, cplx c) {
  std::vector<MonomialTerm> terms = f.terms();
  for (auto& t : terms) t.coeff *= c;
  return PiecewiseField(std::move(terms));
}

PiecewiseField simplify(const PiecewiseField& f) {
  using Key = std::tuple<Freq, long double, double, double>;
  std::map<Key, std::pair<CompensatedComplexSum, MonomialTerm>> groups;
  for (const auto& t : f.terms()) {
    const Key key{t.frequency(), t.radial_degree(), t.r_in.log(), t.r_out.log()};
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) it->second.second = t;
    it->second.first.add(t.coeff);
  }
  std::vector<MonomialTerm> out;
  for (auto& [key, group] : groups) {
    const auto& [nu, alpha, lin, lout] = key;
    MonomialTerm t = group.second;
    t.coeff = group.first.value();
    if (t.coeff == cplx{}) continue;
    t.p = nu < 0 ? -nu : 0;
    t.q = nu > 0 ? nu : 0;
    t.gamma = alpha - static_cast<long double>(t.p) - static_cast<long double>(t.q);
    out.push_back(t);
  }
  return PiecewiseField(std::move(out));
}

cplx moment(const MonomialTerm& term, Freq j) {
  if (j != checked_sub(term.p, term.q)) return {};
  const long double e = static_cast<long double>(term.p) + static_cast<long double>(term.q) +
                        static_cast<long double>(j) + term.gamma + 2;
  return 2.0 * term.coeff * radial_integral(term.r_in, term.r_out, e);
}

ExteriorLaurent cauchy_exterior(const PiecewiseField& field, Freq max_freq, double* dropped_mass) {
  require_bounded(field, "cauchy_exterior");
  LaurentBuilder acc;
  for (const auto& t : field.terms()) {
    const Freq nu = t.frequency();
    if (nu > 0) continue;
    acc.add(checked_sub(1, nu), moment(t, -nu));
  }
  return acc.build(max_freq, 0.0, dropped_mass);
}

PiecewiseField cauchy_full(const PiecewiseField& field) {
  require_bounded(field, "cauchy_full");
  std::vector<MonomialTerm> out;
  for (const auto& t : field.terms()) {
    const Freq nu = t.frequency();
    const long double e = 2.0L * static_cast<long double>(t.p) + t.gamma + 2;
    if (e == 0) {
      throw UnsupportedTermError(
          "cauchy_full: exponent e = 2p + gamma + 2 = 0 needs logarithmic terms");
    }
    const Freq q = checked_sub(nu, 1);
    const cplx c2e = 2.0 * t.coeff / static_cast<double>(e);
    const Radius a = t.r_in;
    const Radius b = t.r_out;
    if (nu <= 0) {
      // Contributions from |w| < |z| only: (2c/e) z^(nu-1) (min(|z|,b)^e - a^e).
      if (a.is_zero() && e < 0) {
        throw DivergentMomentError("cauchy_full: term not integrable at the origin");
      }
      push_nonzero(out, make_term(c2e, 0, q, e, a, b));
      if (!a.is_zero()) push_nonzero(out, make_term(-c2e * a.pow(e), 0, q, 0, a, b));
      push_nonzero(out, make_term(c2e * pow_diff(b, a, e), 0, q, 0, b, Radius::infinity()));
    } else {
      // Contributions from |w| > |z| only: -(2c/e) z^(nu-1) (b^e - max(|z|,a)^e).
      if (!a.is_zero()) {
        push_nonzero(out, make_term(-c2e * pow_diff(b, a, e), 0, q, 0, Radius::zero(), a));
      }
      push_nonzero(out, make_term(-c2e * b.pow(e), 0, q, 0, a, b));
      push_nonzero(out, make_term(c2e, 0, q, e, a, b));
    }
  }
  return PiecewiseField(std::move(out));
}

PiecewiseField derivative_z(const PiecewiseField& field) {
  std::vector<MonomialTerm> out;
  for (const auto& t : field.terms()) {
    if (t.q != 0) {
      push_nonzero(out, make_term(t.coeff * static_cast<double>(t.q), t.p, checked_sub(t.q, 1),
                                  t.gamma, t.r_in, t.r_out));
    }
    if (t.gamma != 0) {
      push_nonzero(out, make_term(t.coeff * static_cast<double>(t.gamma / 2), checked_add(t.p, 1),
                                  t.q, t.gamma - 2, t.r_in, t.r_out));
    }
  }
  return PiecewiseField(std::move(out));
}

PiecewiseField beurling(const PiecewiseField& field) {
  return simplify(derivative_z(cauchy_full(field)));
}

ExteriorLaurent beurling_exterior(const PiecewiseField& field, Freq max_freq,
                                  double* dropped_mass) {
  require_bounded(field, "beurling_exterior");
  LaurentBuilder acc;
  for (const auto& t : field.terms()) {
    const Freq nu = t.frequency();
    if (nu > 0) continue;
    const Freq k = checked_sub(1, nu);
    acc.add(checked_add(k, 1), -static_cast<double>(k) * moment(t, -nu));
  }
  return acc.build(max_freq, 0.0, dropped_mass);
}

ExteriorLaurent exterior_part(const PiecewiseField& field) {
  LaurentBuilder acc;
  for (const auto& t : field.terms()) {
    if (!t.r_out.is_infinite()) continue;
    const Freq nu = t.frequency();
    if (t.radial_degree() != static_cast<long double>(nu) || nu > 0) {
      throw DomainError("exterior_part: exterior term is not a power of 1/z");
    }
    acc.add(-nu, t.coeff);
  }
  return acc.build(kFreqMax);
}

TaylorSeries bergman_project(const PiecewiseField& field) {
  TaylorSeries out;
  std::map<Freq, CompensatedComplexSum> acc;
  for (const auto& t : field.terms()) {
    if (t.r_out.log() > 1e-15) throw DomainError("bergman_project: support leaves the unit disk");
    const Freq nu = t.frequency();
    if (nu < 0) continue;
    const long double E = t.radial_degree() + static_cast<long double>(nu) + 2;
    acc[nu].add(static_cast<double>(nu + 1) * 2.0 * t.coeff * radial_integral(t.r_in, t.r_out, E));
  }
  for (const auto& [k, s] : acc) {
    if (s.value() != cplx{}) out.add(k, s.value());
  }
  return out;
}

PiecewiseField multiply(const PiecewiseField& f, const PiecewiseField& g) {
  std::vector<MonomialTerm> out;
  for (const auto& a : f.terms()) {
    for (const auto& b : g.terms()) {
      const Radius lo = std::max(a.r_in, b.r_in);
      const Radius hi = std::min(a.r_out, b.r_out);
      if (!(lo < hi)) continue;
      push_nonzero(out, make_term(a.coeff * b.coeff, checked_add(a.p, b.p), checked_add(a.q, b.q),
                                  a.gamma + b.gamma, lo, hi));
    }
  }
  return PiecewiseField(std::move(out));
}

PiecewiseField pullback_power(const PiecewiseField& field, int d) {
  if (d < 2) throw DomainError("pullback_power: d must be >= 2");
  std::vector<MonomialTerm> out;
  out.reserve(field.size());
  for (const auto& t : field.terms()) {
    out.push_back(make_term(t.coeff, checked_add(checked_mul(d, t.p), d - 1),
                            checked_sub(checked_mul(d, t.q), d - 1),
                            static_cast<long double>(d) * t.gamma, t.r_in.root(d),
                            t.r_out.root(d)));
  }
  return PiecewiseField(std::move(out));
}

PiecewiseField reflect_conjugate(const PiecewiseField& field) {
  std::vector<MonomialTerm> out;
  out.reserve(field.size());
  for (const auto& t : field.terms()) {
    const Freq nu = -t.frequency();
    const std::int64_t p = nu < 0 ? -nu : 0;
    const std::int64_t q = nu > 0 ? nu : 0;
    const long double gamma =
        t.radial_degree() - static_cast<long double>(p) - static_cast<long double>(q);
    out.push_back(make_term(t.coeff, p, q, gamma, t.r_in, t.r_out));
  }
  return PiecewiseField(std::move(out));
}

}  // namespace bvlab
