#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bvlab/dynamics.hpp"
#include "support/testing.hpp"

using namespace bvlab;

namespace {

CirclePotential potential(std::initializer_list<std::pair<Freq, cplx>> terms) {
  CirclePotential phi;
  for (const auto& [m, c] : terms) phi.coeffs[m] = c;
  return phi;
}

// (1/n) (1/2pi) int |sum_{k<n} phi(z^(d^k))|^2 dt on a uniform rule fine
// enough to be exact for the frequencies involved.
double birkhoff_quadrature(const CirclePotential& phi, int d, int n, int points) {
  double acc = 0.0;
  for (int i = 0; i < points; ++i) {
    const double t = 2 * kPi * i / points;
    cplx s{};
    long double angle = t;
    for (int k = 0; k < n; ++k) {
      s += phi(std::polar(1.0, static_cast<double>(std::fmod(angle, 2 * kPi))));
      angle *= d;
    }
    acc += std::norm(s);
  }
  return acc / points / n;
}

CirclePotential random_potential(testing::Gen& gen) {
  CirclePotential phi;
  const int terms = static_cast<int>(gen.integer(1, 4));
  for (int i = 0; i < terms; ++i) {
    Freq m = gen.integer(-6, 6);
    if (m == 0) m = 1;
    phi.coeffs[m] += gen.unit() * gen.uniform(0.2, 1.0);
  }
  return phi;
}

}  // namespace

TEST_CASE("potentials") {
  const auto phi = potential({{0, 2.0}, {1, {0.0, 1.0}}, {-2, 0.5}});
  CHECK(phi.mean() == cplx(2.0));
  const cplx z = std::polar(1.0, 0.7);
  CHECK(std::abs(phi(z) - (2.0 + cplx(0, 1) * z + 0.5 / (z * z))) < 1e-14);
  CHECK(phi.centered().mean() == cplx{});
  CHECK(phi.centered().coeffs.size() == 2);
}

TEST_CASE("Blaschke maps") {
  BlaschkeMap B{3, {0.3, cplx(-0.2, 0.5)}};
  B.validate();
  testing::Gen gen(1);
  for (int i = 0; i < 50; ++i) {
    const cplx z = gen.unit();
    CHECK(std::abs(std::abs(B(z)) - 1.0) < 1e-12);
    const double h = 1e-6;
    const cplx dz = z * cplx(0, h);
    const double fd = std::abs((B(z * std::polar(1.0, h)) - B(z * std::polar(1.0, -h))) / (2.0 * dz));
    CHECK(B.abs_derivative(z) == doctest::Approx(fd).epsilon(1e-6));
  }
  CHECK(B(0.0) == cplx{});
  CHECK_THROWS_AS((BlaschkeMap{2, {1.0}}.validate()), DomainError);
  CHECK_THROWS_AS((BlaschkeMap{2, {0.1, 0.2}}.validate()), DomainError);
  CHECK_THROWS_AS((BlaschkeMap{1, {}}.validate()), DomainError);
  CHECK(BlaschkeMap{4, {}}.is_power());
}

TEST_CASE("exact Birkhoff variance") {
  for (int d : {2, 3, 5}) {
    const auto phi = potential({{-(d - 1), 1.0}});
    for (int n : {1, 2, 7, 20}) {
      const auto v = birkhoff_variance_exact(phi, d, n);
      CHECK(v.value == doctest::Approx(1.0).epsilon(1e-15));
      CHECK(v.by_n.size() == static_cast<std::size_t>(n));
    }
  }
  CHECK(birkhoff_variance_exact(CirclePotential{}, 2, 10).value == 0.0);

  testing::Gen gen(31);
  for (int t = 0; t < 6; ++t) {
    const auto phi = random_potential(gen);
    const int d = static_cast<int>(gen.integer(2, 3));
    const int n = 6;
    const auto v = birkhoff_variance_exact(phi, d, n);
    CHECK(v.value == doctest::Approx(birkhoff_quadrature(phi, d, n, 8192)).epsilon(1e-10));
    for (int m = 1; m <= n; ++m) {
      CHECK(v.by_n[m - 1] == doctest::Approx(birkhoff_quadrature(phi, d, m, 8192)).epsilon(1e-10));
    }
  }
  CHECK_THROWS_AS(birkhoff_variance_exact(potential({{0, 1.0}}), 2, 3), DomainError);
}

TEST_CASE("finite-n variances form a Cauchy sequence") {
  testing::Gen gen(12);
  for (int d : {2, 3}) {
    for (int t = 0; t < 5; ++t) {
      const auto phi = random_potential(gen);
      const auto v = birkhoff_variance_exact(phi, d, 32);
      // Frequencies are at most 6, so correlations vanish from lag 3 on.
      double prev = std::numeric_limits<double>::infinity();
      for (int n = 4; n <= 16; n *= 2) {
        const double diff = std::abs(v.by_n[2 * n - 1] - v.by_n[n - 1]);
        CHECK(diff <= prev + 1e-12);
        prev = diff;
      }
    }
  }
}

TEST_CASE("Monte Carlo Birkhoff variance") {
  const auto phi = potential({{-1, 1.0}, {1, 1.0}});
  const double exact = birkhoff_variance_exact(phi, 2, 10).value;
  CHECK(exact == doctest::Approx(2.0));
  const BlaschkeMap sq{2, {}};
  const auto mc = birkhoff_variance_mc(phi, sq, 10, 100000, 7);
  CHECK(std::abs(mc.estimate - exact) < 3 * mc.stderr_);
  CHECK(mc.samples == 100000);
  CHECK(mc.seed == 7);

  const auto inv = birkhoff_variance_mc(potential({{-1, 1.0}}), sq, 10, 50000, 3);
  CHECK(std::abs(inv.estimate - 1.0) < 3 * inv.stderr_ + 1e-12);

  const auto cst = birkhoff_variance_mc(potential({{0, 4.0}}).centered(), sq, 10, 1000, 1);
  CHECK(cst.estimate == 0.0);

  const auto again = birkhoff_variance_mc(phi, sq, 10, 100000, 7);
  CHECK(again.estimate == mc.estimate);
  CHECK(again.stderr_ == mc.stderr_);
  const auto serial = birkhoff_variance_mc(phi, sq, 10, 100000, 7, false);
  CHECK(serial.estimate == mc.estimate);
  CHECK(birkhoff_variance_mc(phi, sq, 10, 100000, 8).estimate != mc.estimate);

  const BlaschkeMap B{2, {0.3}};
  const auto re = potential({{1, 0.5}, {-1, 0.5}});
  const auto v10 = birkhoff_variance_mc(re, B, 10, 40000, 5);
  const auto v20 = birkhoff_variance_mc(re, B, 20, 40000, 5);
  CHECK(std::isfinite(v10.estimate));
  CHECK(v10.estimate > 0.0);
  CHECK(std::abs(v20.estimate - v10.estimate) < 0.1 * v10.estimate + 3 * (v10.stderr_ + v20.stderr_));
}

TEST_CASE("virtual coboundary") {
  for (int d : {2, 3, 20}) {
    const auto c = coboundary_check(d, 20);
    CHECK(c.rhs == doctest::Approx(1.0 / std::log(d)).epsilon(1e-15));
    CHECK(c.residual <= 1e-12);
  }
  CHECK(coboundary_check(2, 20).lhs == doctest::Approx(1.4427).epsilon(1e-4));
  CHECK(coboundary_check(3, 1).residual <= 1e-12);
}

TEST_CASE("mean of log |B'|") {
  CHECK(log_deriv_mean(BlaschkeMap{2, {}}) == std::log(2.0));
  CHECK(log_deriv_mean(BlaschkeMap{20, {}}) == std::log(20.0));
  const BlaschkeMap B{2, {0.5}};
  const double mean = log_deriv_mean(B);
  CHECK(mean > 0.0);
  const auto orbit = log_deriv_orbit_mc(B, 20, 50000, 11);
  CHECK(std::abs(orbit.estimate - mean) < 3 * orbit.stderr_);
  // a zero at the origin changes nothing
  CHECK(log_deriv_mean(BlaschkeMap{3, {0.0}}) == doctest::Approx(std::log(3.0)).epsilon(1e-12));
}

TEST_CASE("mean relation") {
  const auto m = mean_relation_check();
  CHECK(m.lhs == 1.0);
  REQUIRE(m.samples.size() == 7);
  for (const auto& s : m.samples) CHECK(s.R == doctest::Approx(1.0 + std::pow(10.0, -s.j)).epsilon(1e-15));
  CHECK(std::abs(m.samples[4].rhs - 1.0) < 1e-2);
  CHECK(m.residual <= 1e-4);
  CHECK(m.residual == std::abs(m.extrapolated - m.lhs));
}

TEST_CASE("Lebesgue measure is invariant") {
  const double critical = 1.628 / std::sqrt(1e5);
  CHECK(invariance_ks_statistic(BlaschkeMap{2, {}}, 10, 100000, 2) < critical);
  CHECK(invariance_ks_statistic(BlaschkeMap{3, {0.3, cplx(0, -0.6)}}, 5, 100000, 2) < critical);
}
