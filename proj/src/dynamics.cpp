#include "bvlab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "bvlab/kernels.hpp"
#include "bvlab/summation.hpp"
#include "bvlab/variance.hpp"

namespace bvlab {

namespace {

constexpr long double kTwoPiL = 6.283185307179586476925286766559L;

cplx unit_power(double t, Freq m) {
  const double ph = static_cast<double>(std::fmod(static_cast<long double>(m) * t, kTwoPiL));
  return {std::cos(ph), std::sin(ph)};
}

}  // namespace

cplx CirclePotential::mean() const {
  auto it = coeffs.find(0);
  return it == coeffs.end() ? cplx{} : it->second;
}

cplx CirclePotential::operator()(cplx z) const {
  const double t = std::arg(z);
  CompensatedComplexSum acc;
  for (const auto& [m, c] : coeffs) acc.add(c * unit_power(t, m));
  return acc.value();
}

CirclePotential CirclePotential::centered() const {
  CirclePotential out = *this;
  out.coeffs.erase(0);
  return out;
}

void BlaschkeMap::validate() const {
  if (d < 2) throw DomainError("blaschke: degree must be >= 2");
  if (static_cast<int>(zeros.size()) > d - 1) {
    throw DomainError("blaschke: need a zero at the origin (at most d - 1 other zeros)");
  }
  for (const auto& a : zeros) {
    if (!(std::abs(a) < 1.0)) throw DomainError("blaschke: zeros must lie in the unit disk");
  }
}

cplx BlaschkeMap::operator()(cplx z) const {
  cplx w = std::pow(z, d - static_cast<int>(zeros.size()));
  for (const auto& a : zeros) w *= (z - a) / (1.0 - std::conj(a) * z);
  return w;
}

double BlaschkeMap::abs_derivative(cplx z) const {
  // |B| = 1 on the circle, so |B'| = |B'/B|.
  cplx ld = static_cast<double>(d - static_cast<int>(zeros.size())) / z;
  for (const auto& a : zeros) ld += 1.0 / (z - a) + std::conj(a) / (1.0 - std::conj(a) * z);
  return std::abs(ld);
}

BirkhoffVariance birkhoff_variance_exact(const CirclePotential& phi, int d, int n) {
  if (d < 2) throw DomainError("birkhoff: d must be >= 2");
  if (n < 1) throw DomainError("birkhoff: n must be >= 1");
  if (std::abs(phi.mean()) > 0.0) throw DomainError("birkhoff: potential must have mean zero");
  // frequency m d^k is keyed as (m', a + k) with m = m' d^a and d not dividing m'
  using Key = std::pair<Freq, long long>;
  std::vector<std::pair<Key, cplx>> base;
  for (const auto& [m, c] : phi.coeffs) {
    if (m == 0 || c == cplx{}) continue;
    Freq r = m;
    long long a = 0;
    while (r % d == 0) {
      r /= d;
      ++a;
    }
    base.push_back({{r, a}, c});
  }
  std::map<Key, CompensatedComplexSum> acc;
  BirkhoffVariance out;
  for (int k = 0; k < n; ++k) {
    for (const auto& [key, c] : base) acc[{key.first, key.second + k}].add(c);
    CompensatedSum total;
    for (const auto& [key, s] : acc) total.add(std::norm(s.value()));
    out.by_n.push_back(total.value() / (k + 1));
  }
  out.value = out.by_n.back();
  return out;
}

namespace {

struct ChunkSums {
  CompensatedSum x;
  CompensatedSum xx;
};

template <class Sample>
MonteCarloEstimate run_chunks(std::int64_t samples, std::uint64_t seed, bool parallel,
                              Sample sample) {
  if (samples < 2) throw DomainError("monte carlo: need at least 2 samples");
  const std::int64_t chunks = (samples + kMonteCarloChunk - 1) / kMonteCarloChunk;
  auto run = [&](std::size_t c) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
    const std::int64_t lo = static_cast<std::int64_t>(c) * kMonteCarloChunk;
    const std::int64_t hi = std::min(samples, lo + kMonteCarloChunk);
    ChunkSums s;
    for (std::int64_t i = lo; i < hi; ++i) {
      const double x = sample(std::polar(1.0, angle(rng)));
      s.x.add(x);
      s.xx.add(x * x);
    }
    return s;
  };
  const auto parts = parallel ? parallel_map(static_cast<std::size_t>(chunks), run)
                              : serial_map(static_cast<std::size_t>(chunks), run);
  CompensatedSum x, xx;
  for (const auto& p : parts) {
    x.add(p.x.value());
    xx.add(p.xx.value());
  }
  const double N = static_cast<double>(samples);
  const double mean = x.value() / N;
  const double var = std::max(0.0, (xx.value() - N * mean * mean) / (N - 1.0));
  MonteCarloEstimate out;
  out.estimate = mean;
  out.stderr_ = std::sqrt(var / N);
  out.samples = samples;
  out.seed = seed;
  return out;
}

cplx step(const BlaschkeMap& B, cplx z) {
  const cplx w = B(z);
  return w / std::abs(w);
}

}  // namespace

MonteCarloEstimate birkhoff_variance_mc(const CirclePotential& phi, const BlaschkeMap& B, int n,
                                        std::int64_t samples, std::uint64_t seed, bool parallel) {
  B.validate();
  if (n < 1) throw DomainError("birkhoff: n must be >= 1");
  const CirclePotential psi = phi.centered();
  return run_chunks(samples, seed, parallel, [&](cplx z) {
    CompensatedComplexSum s;
    for (int k = 0; k < n; ++k) {
      s.add(psi(z));
      z = step(B, z);
    }
    return std::norm(s.value()) / n;
  });
}

MonteCarloEstimate log_deriv_orbit_mc(const BlaschkeMap& B, int n, std::int64_t samples,
                                      std::uint64_t seed) {
  B.validate();
  if (n < 1) throw DomainError("orbit average: n must be >= 1");
  return run_chunks(samples, seed, true, [&](cplx z) {
    CompensatedSum s;
    for (int k = 0; k < n; ++k) {
      s.add(std::log(B.abs_derivative(z)));
      z = step(B, z);
    }
    return s.value() / n;
  });
}

double log_deriv_mean(const BlaschkeMap& B) {
  B.validate();
  if (B.is_power()) return std::log(static_cast<double>(B.d));
  constexpr int kPoints = 4096;
  CompensatedSum acc;
  for (int i = 0; i < kPoints; ++i) {
    acc.add(std::log(B.abs_derivative(std::polar(1.0, 2.0 * kPi * i / kPoints))));
  }
  return acc.value() / kPoints;
}

CoboundaryCheck coboundary_check(int d, int n) {
  CirclePotential h;
  h.coeffs[-(d - 1)] = 1.0;
  CoboundaryCheck out;
  out.lhs = birkhoff_variance_exact(h, d, n).value / log_deriv_mean(BlaschkeMap{d, {}});
  out.rhs = variance_lacunary(std::vector<double>(static_cast<std::size_t>(n), 1.0), d).value;
  out.residual = std::abs(out.lhs - out.rhs);
  return out;
}

MeanRelation mean_relation_check(int j_lo, int j_hi) {
  if (j_lo < 1 || j_hi <= j_lo) throw DomainError("mean relation: need 1 <= j_lo < j_hi");
  MeanRelation out;
  const BlaschkeMap B{2, {}};
  out.lhs = std::log(2.0) / log_deriv_mean(B);
  constexpr int kPoints = 4096;
  for (int j = j_lo; j <= j_hi; ++j) {
    const double gap = std::pow(10.0, -j);
    const double R = 1.0 + gap;
    CompensatedSum acc;
    for (int i = 0; i < kPoints; ++i) {
      const cplx z = std::polar(R, 2.0 * kPi * i / kPoints);
      acc.add(-std::log(std::abs(z) - 1.0) * R);
    }
    const double circle = 2.0 * kPi * acc.value() / kPoints;
    out.samples.push_back({j, R, circle / (2.0 * kPi * std::abs(std::log(gap)))});
  }
  // quadratic Neville extrapolation in h = 1/j over the three finest radii
  std::vector<double> h, p;
  const std::size_t first = out.samples.size() > 3 ? out.samples.size() - 3 : 0;
  for (std::size_t i = first; i < out.samples.size(); ++i) {
    h.push_back(1.0 / out.samples[i].j);
    p.push_back(out.samples[i].rhs);
  }
  const std::size_t m = p.size();
  for (std::size_t k = 1; k < m; ++k) {
    for (std::size_t i = 0; i + k < m; ++i) {
      p[i] = (h[i] * p[i + 1] - h[i + k] * p[i]) / (h[i] - h[i + k]);
    }
  }
  out.extrapolated = p[0];
  out.residual = std::abs(out.extrapolated - out.lhs);
  return out;
}

double invariance_ks_statistic(const BlaschkeMap& B, int n, std::int64_t samples,
                               std::uint64_t seed) {
  B.validate();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
  std::vector<double> u;
  u.reserve(static_cast<std::size_t>(samples));
  for (std::int64_t i = 0; i < samples; ++i) {
    cplx z = std::polar(1.0, angle(rng));
    for (int k = 0; k < n; ++k) z = step(B, z);
    double t = std::arg(z) / (2.0 * kPi);
    if (t < 0) t += 1.0;
    u.push_back(t);
  }
  std::sort(u.begin(), u.end());
  const double N = static_cast<double>(u.size());
  double D = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    D = std::max({D, (i + 1) / N - u[i], u[i] - i / N});
  }
  return D;
}

}  // namespace bvlab
