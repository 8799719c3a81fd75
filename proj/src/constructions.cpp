#include "bvlab/constructions.hpp"

#include <algorithm>
#include <cmath>

#include "bvlab/bounds.hpp"
#include "bvlab/summation.hpp"

namespace bvlab {

std::int64_t default_n0(int d) { return d == 2 ? 2 : d - 1; }

Freq ShellParams::frequency(int j) const {
  return checked_mul(first_frequency(), checked_pow(d, j));
}

Radius ShellParams::radius(int j) const {
  const long double n = static_cast<long double>(first_frequency()) *
                        std::pow(static_cast<long double>(d), static_cast<long double>(j));
  return Radius::from_log(static_cast<double>(std::log(static_cast<long double>(rho0)) / n));
}

double ShellParams::gap() const { return std::pow(rho0, 1.0 / d) - rho0; }

void ShellParams::validate() const {
  if (d < 2) throw DomainError("shell: d must be >= 2");
  if (!(rho0 > 0.0 && rho0 < 1.0)) throw DomainError("shell: rho0 must lie in (0, 1)");
  if (first_frequency() < 2) throw DomainError("shell: n0 must be >= 2");
  if (J < 0) throw DomainError("shell: J must be >= 0");
  if (max_freq < 1) throw DomainError("shell: max_freq must be >= 1");
  if (J > 0 && max_freq == kFreqMax) (void)frequency(J - 1);
}

int ShellParams::resolved_shells() const {
  int j = 0;
  Freq n = first_frequency();
  for (; j < J; ++j) {
    if (n - 1 > max_freq) break;
    if (__builtin_mul_overflow(n, Freq{d}, &n)) return j + 1;
  }
  return j;
}

ShellParams ShellParams::optimal(int d, int J) {
  ShellParams p;
  p.d = d;
  p.rho0 = optimal_rho0(d);
  p.J = J;
  return p;
}

PiecewiseField build_shell(const ShellParams& params) {
  params.validate();
  std::vector<MonomialTerm> terms;
  terms.reserve(static_cast<std::size_t>(params.J));
  for (int j = 0; j < params.J; ++j) {
    terms.push_back(basic_coefficient(params.frequency(j), params.radius(j), params.radius(j + 1)));
  }
  return PiecewiseField(std::move(terms));
}

namespace {

PiecewiseField resolved_shell(const ShellParams& params) {
  params.validate();
  ShellParams used = params;
  used.J = params.resolved_shells();
  return build_shell(used);
}

}  // namespace

ExteriorLaurent shell_cauchy(const ShellParams& params) {
  return cauchy_exterior(resolved_shell(params), params.max_freq);
}

ExteriorLaurent shell_beurling(const ShellParams& params) {
  auto s = beurling_exterior(resolved_shell(params), params.max_freq);
  s.self_similarity = SelfSimilarity{params.d, params.first_frequency()};
  return s;
}

IdentityCheck shell_cauchy_identity_check(const ShellParams& params, const std::vector<cplx>& zs) {
  params.validate();
  if (!params.standard()) throw DomainError("identity check needs the standard n0");
  const int d = params.d;
  const int shift = d == 2 ? 1 : 0;
  const auto cmu = cauchy_exterior(build_shell(params));
  auto v = lacunary_vector_field(d, params.J + shift).v;
  const double D = params.gap();
  const cplx factor = -2.0 * d / (d - 1.0) * D;
  IdentityCheck out;
  double r_min = std::numeric_limits<double>::infinity();
  for (const auto& z : zs) {
    if (!(std::abs(z) > 1.0)) throw DomainError("identity check: need |z| > 1");
    r_min = std::min(r_min, std::abs(z));
    cplx rhs = factor * v(z);
    if (shift) rhs -= factor * v.coeff(0);
    out.residual = std::max(out.residual, std::abs(cmu(z) - rhs));
  }
  if (!zs.empty()) {
    CompensatedSum tail;
    const double lr = std::log(r_min);
    for (int j = params.J; j < params.J + 64; ++j) {
      const long double n = static_cast<long double>(params.first_frequency()) *
                            std::pow(static_cast<long double>(d), static_cast<long double>(j));
      const long double term = 2.0L * D / n * std::exp(-(n - 1) * lr);
      if (term < 1e-300L) break;
      tail.add(static_cast<double>(term));
    }
    out.tail_bound = tail.value();
  }
  return out;
}

VectorField lacunary_vector_field(int d, int N) {
  if (d < 2) throw DomainError("lacunary_vector_field: d must be >= 2");
  if (N < 0) throw DomainError("lacunary_vector_field: N must be >= 0");
  VectorField out;
  for (int n = 0; n < N; ++n) {
    const Freq dn = checked_pow(d, n);
    const Freq k = checked_sub(checked_mul(d - 1, dn), 1);
    const double c = -std::pow(static_cast<double>(d), -(n + 1.0));
    out.v.add(k, c);
    if (k > 0) out.v_prime.add(checked_add(k, 1), -static_cast<double>(k) * c);
  }
  out.v_prime.self_similarity = SelfSimilarity{d, default_n0(d)};
  return out;
}

double functional_equation_residual(const ExteriorLaurent& v, int d, cplx z) {
  const cplx zd = std::pow(z, d);
  return std::abs(v(zd) - static_cast<double>(d) * std::pow(z, d - 1) * v(z) - z);
}

double functional_equation_tail(int d, int N, cplx z) {
  const long double dN = std::pow(static_cast<long double>(d), static_cast<long double>(N));
  const long double e = d - (d - 1) * dN;
  return static_cast<double>(std::exp(e * std::log(static_cast<long double>(std::abs(z)))) / dN);
}

void PerturbationSpec::validate() const {
  if (d < 2) throw DomainError("perturbation: d must be >= 2");
  if (K < 0) throw DomainError("perturbation: K must be >= 0");
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] != cplx{} && static_cast<int>(i) > d - 2) {
      throw DomainError("perturbation: deg Q must be <= d - 2");
    }
  }
}

std::vector<ExteriorLaurent> perturbation_blocks(const PerturbationSpec& spec) {
  spec.validate();
  std::vector<ExteriorLaurent> out;
  for (int k = 0; k < spec.K; ++k) {
    ExteriorLaurent vk;
    const Freq dk = checked_pow(spec.d, k);
    const Freq dk1 = checked_mul(dk, spec.d);
    const double scale = std::pow(static_cast<double>(spec.d), -(k + 1.0));
    for (std::size_t i = 0; i < spec.q.size(); ++i) {
      if (spec.q[i] == cplx{}) continue;
      const Freq f = checked_sub(checked_sub(dk1, checked_mul(static_cast<Freq>(i), dk)), 1);
      vk.add(f, scale * spec.q[i]);
    }
    out.push_back(std::move(vk));
  }
  return out;
}

ExteriorLaurent perturbation_vector_field(const PerturbationSpec& spec) {
  LaurentBuilder acc;
  for (const auto& vk : perturbation_blocks(spec)) {
    for (const auto& [k, c] : vk.coeffs()) acc.add(k, c);
  }
  return acc.build(kFreqMax);
}

double periodicity_residual(const PerturbationSpec& spec, cplx z) {
  const auto blocks = perturbation_blocks(spec);
  const cplx zd = std::pow(z, spec.d);
  const cplx denom = static_cast<double>(spec.d) * std::pow(z, spec.d - 1);
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < blocks.size(); ++k) {
    worst = std::max(worst, std::abs(blocks[k + 1](z) - blocks[k](zd) / denom));
  }
  return worst;
}

int truncation_order(double rho1, double r1, double eps) {
  if (!(rho1 > 0.0 && rho1 < r1)) throw DomainError("truncation: need 0 < rho1 < r1");
  if (!(eps > 0.0)) throw DomainError("truncation: need eps > 0");
  const double q = rho1 / r1;
  constexpr int kMaxOrder = 1 << 20;
  // sum_{j >= N+1} q^j = q^(N+1) / (1 - q)
  for (int N = 0; N <= kMaxOrder; ++N) {
    if (std::pow(q, N + 1.0) / (1.0 - q) <= eps) return N;
  }
  throw CapacityError("truncation: eps unreachable below N = " + std::to_string(kMaxOrder));
}

TruncationResult truncate_to_polynomial(const PiecewiseField& mu, double r1, double eps,
                                        bool rescale) {
  if (mu.empty()) return {mu, 0, 0.0, false};
  const Radius rho0 = mu.inner_radius();
  const Radius rho1 = mu.outer_radius();
  if (rho0.is_zero()) throw DomainError("truncation: support must avoid the origin");
  if (!mu.bounded()) throw DomainError("truncation: support must be bounded");
  const Radius R1 = Radius::from_value(r1);
  if (!(rho1 < R1)) throw DomainError("truncation: need rho1 < r1");
  if (!(R1.log() < 0)) throw DomainError("truncation: need r1 < 1");
  if (mu.sampled_sup() > 1.0 + 1e-12) throw DomainError("truncation: need |mu| <= 1");

  TruncationResult out;
  out.N = truncation_order(rho1.value(), r1, eps);
  const auto b = cauchy_exterior(mu);
  std::vector<MonomialTerm> terms = mu.terms();
  CompensatedSum sup;
  for (const auto& [j, bj] : b.coeffs()) {
    if (j < out.N + 1) continue;
    const Freq n = checked_add(j, 1);
    // basic block mu_n on A(rho0, r1) has Cauchy coefficient (2/n)(r1^n - rho0^n) at z^-j
    const long double e = static_cast<long double>(n);
    const double span = static_cast<double>(
        rho0.pow(e) * std::expm1(e * (static_cast<long double>(R1.log()) - rho0.log())));
    const cplx c = -bj / (2.0 / static_cast<double>(n) * span);
    sup.add(std::abs(c));
    terms.push_back(basic_coefficient(n, rho0, R1, c));
  }
  out.correction_sup = sup.value();
  out.field = PiecewiseField(std::move(terms));
  if (rescale) {
    out.field = scaled(out.field, 1.0 / (1.0 + eps));
    out.rescaled = true;
  }
  return out;
}

PiecewiseField periodise(const PiecewiseField& mu0, int d, int K) {
  if (d < 2) throw DomainError("periodise: d must be >= 2");
  if (K < 0) throw DomainError("periodise: K must be >= 0");
  if (mu0.empty() || K == 0) return K == 0 ? PiecewiseField{} : mu0;
  const Radius inner = mu0.inner_radius();
  const Radius outer = mu0.outer_radius();
  if (inner.is_zero() || !mu0.bounded() || !(outer.log() < 0)) {
    throw DomainError("periodise: support must lie in an annulus inside the unit disk");
  }
  if (outer.log() > inner.log() / d * (1.0 - 1e-12)) {
    throw OverlappingSupportError("periodise: support exceeds the fundamental annulus A(r, r^(1/d))");
  }
  std::vector<MonomialTerm> terms;
  PiecewiseField layer = mu0;
  for (int k = 0; k < K; ++k) {
    terms.insert(terms.end(), layer.terms().begin(), layer.terms().end());
    if (k + 1 < K) layer = pullback_power(layer, d);
  }
  return PiecewiseField(std::move(terms));
}

}  // namespace bvlab
