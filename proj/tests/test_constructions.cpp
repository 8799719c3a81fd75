#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>

#include "bvlab/bounds.hpp"
#include "bvlab/constructions.hpp"
#include "bvlab/variance.hpp"
#include "support/testing.hpp"

using namespace bvlab;

TEST_CASE("shell parameters") {
  auto p = ShellParams::optimal(3, 10);
  CHECK(p.first_frequency() == 2);
  CHECK(p.rho0 == doctest::Approx(std::pow(3.0, -1.5)).epsilon(1e-14));
  for (int j = 0; j < p.J; ++j) {
    CHECK(p.frequency(j + 1) > p.frequency(j));
    CHECK(p.radius(j) < p.radius(j + 1));
    CHECK(p.radius(j).value() < 1.0);
    CHECK(std::pow(p.radius(j).value(), static_cast<double>(p.frequency(j))) == doctest::Approx(p.rho0).epsilon(1e-12));
  }
  CHECK(p.radius(0).value() == doctest::Approx(std::sqrt(p.rho0)).epsilon(1e-14));

  ShellParams two;
  two.d = 2;
  two.rho0 = 0.25;
  two.J = 5;
  for (int j = 0; j < 5; ++j) {
    CHECK(two.frequency(j) == Freq(2) << j);
    CHECK(two.radius(j).value() == doctest::Approx(std::pow(0.25, std::pow(2.0, -(j + 1.0)))).epsilon(1e-14));
  }

  ShellParams bad = p;
  bad.rho0 = 1.0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = p;
  bad.d = 1;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = p;
  bad.J = 80;
  CHECK_THROWS_AS(bad.validate(), CapacityError);
  bad = p;
  bad.n0 = 1;
  CHECK_THROWS_AS(bad.validate(), DomainError);

  auto wide = ShellParams::optimal(20, 40);
  wide.max_freq = 1'000'000'000;
  wide.validate();
  CHECK(wide.resolved_shells() == 6);
  CHECK(shell_beurling(wide).size() == 6);
  CHECK(shell_beurling(wide).max_stored() <= wide.max_freq);
  CHECK_THROWS_AS(build_shell(wide), CapacityError);
  wide.max_freq = kFreqMax;
  CHECK_THROWS_AS(wide.validate(), CapacityError);
}

TEST_CASE("shells are unit-modulus on disjoint annuli") {
  const auto p = ShellParams::optimal(4, 6);
  const auto mu = build_shell(p);
  CHECK(mu.size() == 6);
  testing::Gen gen(3);
  for (int i = 0; i < 50; ++i) {
    const double r = gen.uniform(p.radius(0).value(), p.radius(6).value());
    const cplx z = std::polar(r, gen.uniform(0, 2 * kPi));
    CHECK(std::abs(mu(z)) == doctest::Approx(1.0).epsilon(1e-13));
  }
  CHECK(mu(0.5 * p.radius(0).value()) == cplx{});
  CHECK(mu(p.radius(6).value() + 1e-9) == cplx{});
  CHECK(mu(1.5) == cplx{});

  ShellParams empty = p;
  empty.J = 0;
  CHECK(build_shell(empty).empty());
}

TEST_CASE("Cauchy transform of the shell is a multiple of the lacunary field") {
  ShellParams p;
  p.d = 3;
  p.rho0 = 0.2;
  p.J = 30;
  const auto chk = shell_cauchy_identity_check(p, {cplx(1.5), std::polar(1.5, 2.0), std::polar(4.0, -1.0)});
  CHECK(chk.residual <= 1e-10);
  CHECK(chk.tail_bound < 1e-10);

  const auto far = shell_cauchy_identity_check(p, {cplx(1e6)});
  CHECK(far.residual < 1e-12);
  CHECK(std::abs(shell_cauchy(p)(cplx(1e6))) < 1e-5);

  auto p20 = ShellParams::optimal(20, 5);
  const auto near = shell_cauchy_identity_check(p20, {cplx(1.05), std::polar(1.05, 0.3)});
  CHECK(near.residual <= near.tail_bound + 1e-14);

  ShellParams p2;
  p2.d = 2;
  p2.rho0 = 0.25;
  p2.J = 40;
  CHECK(shell_cauchy_identity_check(p2, {cplx(1.3), std::polar(2.0, 1.0)}).residual < 1e-10);
  CHECK_THROWS_AS(shell_cauchy_identity_check(p2, {cplx(0.9)}), DomainError);
}

TEST_CASE("Beurling coefficients of the shell approach 2 D") {
  for (int d : {3, 4, 20}) {
    const auto p = ShellParams::optimal(d, 8);
    const auto s = shell_beurling(p);
    const auto vp = lacunary_vector_field(d, 8).v_prime;
    const double D = p.gap();
    const double factor = -2.0 * d / (d - 1.0) * D;
    for (const auto& [k, b] : s.coeffs()) {
      CHECK(std::abs(b - factor * vp.coeff(k)) < 1e-12);
    }
    const auto& [n_last, b_last] = *s.coeffs().rbegin();
    CHECK(std::abs(b_last) == doctest::Approx(2 * D * (1 - 1.0 / n_last)).epsilon(1e-12));
  }
}

TEST_CASE("lacunary vector field") {
  const auto vf = lacunary_vector_field(2, 5);
  const cplx z = std::polar(1.2, 1.0);
  CHECK(functional_equation_residual(vf.v, 2, z) <= functional_equation_tail(2, 5, z) * (1 + 1e-9));
  CHECK(functional_equation_residual(vf.v, 2, z) == doctest::Approx(functional_equation_tail(2, 5, z)).epsilon(1e-9));
  const auto deep = lacunary_vector_field(2, 12);
  CHECK(functional_equation_residual(deep.v, 2, z) < 1e-15);

  for (auto [d, N] : {std::pair{2, 60}, {3, 38}, {5, 26}}) {
    const auto v = lacunary_vector_field(d, N).v_prime;
    std::vector<double> moduli;
    for (const auto& [k, b] : v.coeffs()) moduli.push_back(std::abs(b));
    const double expect = (d - 1.0) * (d - 1.0) / (d * d * std::log(d));
    CHECK(variance_lacunary(moduli, d).value == doctest::Approx(expect).epsilon(1e-8));
  }
  CHECK(variance_lacunary({0.5, 0.5}, 2).value == doctest::Approx(0.3607).epsilon(1e-3));

  const auto none = lacunary_vector_field(3, 0);
  CHECK(none.v.empty());
  CHECK(none.v_prime.empty());
  CHECK_THROWS_AS(lacunary_vector_field(2, 70), CapacityError);
}

TEST_CASE("perturbation vector fields") {
  for (int d : {2, 3, 4}) {
    PerturbationSpec spec;
    spec.d = d;
    spec.q = {0.0, -1.0};
    if (d == 2) spec.q = {-1.0};
    spec.K = 10;
    if (d == 2) {
      // deg Q <= 0, so Q = -1 and v = -(z/2) sum z^(-2^(k+1)) / 2^k
      const auto v = perturbation_vector_field(spec);
      for (int k = 0; k < 10; ++k) {
        CHECK(std::abs(v.coeff((Freq(2) << k) - 1) + std::pow(2.0, -(k + 1.0))) < 1e-15);
      }
      continue;
    }
    // Q(z) = -z gives the lacunary field.
    const auto v = perturbation_vector_field(spec);
    const auto lac = lacunary_vector_field(d, 10).v;
    CHECK(v.size() == lac.size());
    for (const auto& [k, c] : lac.coeffs()) CHECK(std::abs(v.coeff(k) - c) < 1e-15);
  }

  PerturbationSpec zero;
  zero.d = 3;
  zero.q = {0.0};
  CHECK(perturbation_vector_field(zero).empty());

  PerturbationSpec s4;
  s4.d = 4;
  s4.q = {1.0, 0.0, 1.0};
  s4.K = 5;
  std::set<Freq> want;
  for (int k = 0; k < 5; ++k) {
    Freq dk = 1;
    for (int i = 0; i < k; ++i) dk *= 4;
    for (int deg : {0, 2}) want.insert(4 * dk - deg * dk - 1);
  }
  std::set<Freq> got;
  const auto v4 = perturbation_vector_field(s4);
  for (const auto& [k, c] : v4.coeffs()) got.insert(k);
  CHECK(got == want);

  testing::Gen gen(8);
  for (int t = 0; t < 5; ++t) {
    PerturbationSpec spec;
    spec.d = static_cast<int>(gen.integer(3, 6));
    for (int i = 0; i <= spec.d - 2; ++i) spec.q.push_back(gen.unit());
    spec.K = 6;
    CHECK(periodicity_residual(spec, gen.point(1.05, 1.6)) <= 1e-10);
  }

  PerturbationSpec bad;
  bad.d = 3;
  bad.q = {0.0, 0.0, 1.0};
  CHECK_THROWS_AS(perturbation_vector_field(bad), DomainError);
}

TEST_CASE("truncation to a polynomial Cauchy transform") {
  CHECK(truncation_order(0.5, 0.7, 0.01) == 17);
  CHECK_THROWS_AS(truncation_order(0.7, 0.5, 0.01), DomainError);
  CHECK_THROWS_AS(truncation_order(0.5, 0.5000001, 1e-300), CapacityError);

  const auto mu = PiecewiseField({basic_coefficient(3, Radius::from_value(0.3), Radius::from_value(0.32)),
                                  basic_coefficient(5, Radius::from_value(0.36), Radius::from_value(0.4)),
                                  basic_coefficient(7, Radius::from_value(0.4), Radius::from_value(0.45), {0.0, -1.0}),
                                  basic_coefficient(30, Radius::from_value(0.45), Radius::from_value(0.5), 0.2),
                                  basic_coefficient(40, Radius::from_value(0.32), Radius::from_value(0.36), 0.5)});
  const auto out = truncate_to_polynomial(mu, 0.7, 0.01);
  CHECK(out.N == 17);
  const auto b = cauchy_exterior(out.field);
  const auto b0 = cauchy_exterior(mu);
  for (const auto& [k, c] : b.coeffs()) {
    if (k > out.N + 1) CHECK(std::abs(c) < 1e-12);
    if (k <= out.N) CHECK(std::abs(c - b0.coeff(k)) < 1e-15);
  }
  CHECK(out.correction_sup <= 0.01);
  CHECK(out.field.sampled_sup() <= 1.0 + 0.01 + 1e-12);
  CHECK(out.field.inner_radius().value() == doctest::Approx(0.3));
  CHECK(out.field.outer_radius().value() == doctest::Approx(0.7));
  CHECK(cauchy_full(out.field)(0.0) == cauchy_full(mu)(0.0));

  const auto scaled_out = truncate_to_polynomial(mu, 0.7, 0.01, true);
  CHECK(scaled_out.rescaled);
  CHECK(scaled_out.field.sampled_sup() <= 1.0 + 1e-12);

  const auto poly = PiecewiseField({basic_coefficient(3, Radius::from_value(0.3), Radius::from_value(0.5))});
  const auto same = truncate_to_polynomial(poly, 0.7, 0.01);
  CHECK(same.correction_sup == 0.0);
  CHECK(same.field.size() == poly.size());

  CHECK_THROWS_AS(truncate_to_polynomial(mu, 0.45, 0.01), DomainError);
}

TEST_CASE("periodisation under z^d") {
  const auto p = ShellParams::optimal(3, 4);
  const auto shell = build_shell(p);
  const auto innermost = std::min_element(shell.terms().begin(), shell.terms().end(),
                                          [](const auto& a, const auto& b) { return a.r_in < b.r_in; });
  const auto first = PiecewiseField({*innermost});
  const auto per = periodise(first, 3, 4);
  CHECK(per.size() == 4);
  testing::Gen gen(21);
  for (int i = 0; i < 100; ++i) {
    const cplx z = testing::probe_off_breakpoints(gen, shell, 0.4, 1.0, 1e-9);
    CHECK(std::abs(per(z) - shell(z)) < 1e-12);
  }
  const auto three = periodise(first, 3, 3);
  auto layers = three.terms();
  CHECK(layers.size() == 3);
  std::sort(layers.begin(), layers.end(), [](const auto& a, const auto& b) { return a.r_in < b.r_in; });
  for (std::size_t k = 0; k + 1 < layers.size(); ++k) {
    CHECK(layers[k].r_out.log() <= layers[k + 1].r_in.log() * (1 - 1e-12));
  }
  CHECK(periodise(first, 3, 1).size() == 1);
  CHECK(std::abs(periodise(first, 3, 1)(0.6) - first(0.6)) == 0.0);
  CHECK(periodise(first, 3, 0).empty());

  const auto wide = PiecewiseField({basic_coefficient(2, Radius::from_value(0.2), Radius::from_value(0.9))});
  CHECK_THROWS_AS(periodise(wide, 3, 2), OverlappingSupportError);
}
