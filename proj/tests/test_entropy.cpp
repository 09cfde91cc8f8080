#include <array>
#include <cmath>
#include <limits>

#include "doctest.h"
#include "oracles.hpp"
#include "qfent/entropy.hpp"

using namespace qfent;

namespace {
const double inf = std::numeric_limits<double>::infinity();
}

TEST_CASE("order parsing") {
  CHECK(Order::parse("1").kind() == Order::Kind::von_neumann);
  CHECK(Order::parse("1.0").kind() == Order::Kind::von_neumann);
  CHECK(Order::parse("inf").kind() == Order::Kind::infinite);
  CHECK(Order::parse("infinity").kind() == Order::Kind::infinite);
  CHECK(Order::parse("2.5").value() == 2.5);
  CHECK_THROWS_AS(Order::parse("0"), Error);
  CHECK_THROWS_AS(Order::parse("-1"), Error);
  CHECK_THROWS_AS(Order::parse("two"), Error);
  CHECK_THROWS_AS(Order::of(std::nan("")), Error);
}

TEST_CASE("per-mode terms") {
  for (double a : {0.3, 1.0, 2.0, 7.0, inf}) {
    const auto o = std::isinf(a) ? Order::infinity() : Order::of(a);
    CHECK(renyi_term(0.5, o) == doctest::Approx(ref::ln2).epsilon(1e-15));
    CHECK(renyi_term(0.0, o) == 0.0);
    CHECK(renyi_term(1.0, o) == 0.0);
    for (double q : {0.01, 0.2, 0.45}) {
      CHECK(renyi_term(q, o) == doctest::Approx(ref::renyi(q, a)).epsilon(1e-13));
      CHECK(renyi_term(q, o) == doctest::Approx(renyi_term(1.0 - q, o)).epsilon(1e-13));
    }
  }
  // orders close to 1 use the finite branch and approach the von Neumann value
  CHECK(renyi_term(0.3, Order::of(1.0 + 1e-7)) ==
        doctest::Approx(renyi_term(0.3, Order::von_neumann())).epsilon(1e-6));
}

TEST_CASE("h function") {
  CHECK(h_of_value(0.5) == 0.0);
  CHECK(h_of_value(1.0 / (1.0 + std::exp(1.0))) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(h_of_value(0.9) == doctest::Approx(std::log(9.0)).epsilon(1e-14));
  CHECK(h_of_value(0.9) == doctest::Approx(2.19722).epsilon(1e-5));
  CHECK(std::isinf(h_of_value(0.0)));
  CHECK(std::isinf(h_of_value(1.0)));
  CHECK(h_of_value(0.5 + 1e-12) == doctest::Approx(4e-12).epsilon(1e-6));
  auto q = make_cosine_thermal_symbol(1, 1.0, 0.0);
  const std::array<double, 1> x{0.0};
  CHECK(h_function(q, x) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("g term matches its definition") {
  for (double q : {0.05, 0.3, 0.5}) {
    for (double a : {0.25, 1.0, 4.0}) {
      const double h = -std::log(std::min(q / (1 - q), (1 - q) / q));
      CHECK(g_term(q, a) == doctest::Approx(std::log1p(std::exp(-a * h)) / a).epsilon(1e-14));
    }
  }
  CHECK(g_term(0.0, 2.0) == 0.0);
}

TEST_CASE("densities of constant symbols") {
  for (double a : {0.5, 1.0, 2.0, 3.0, inf}) {
    const auto o = std::isinf(a) ? Order::infinity() : Order::of(a);
    CHECK(renyi_density(make_constant_symbol(1, 0.5), o).value == doctest::Approx(ref::ln2).epsilon(1e-14));
    CHECK(renyi_density(make_constant_symbol(1, 0.0), o).value == 0.0);
    CHECK(renyi_density(make_constant_symbol(2, 1.0), o).value == 0.0);
  }
}

TEST_CASE("thermal densities against an independent rule and ordering") {
  auto q = make_cosine_thermal_symbol(1, 2.0, 0.0);
  double prev = inf;
  for (double a : {0.5, 1.0, 2.0, 3.0, 10.0, inf}) {
    const auto o = std::isinf(a) ? Order::infinity() : Order::of(a);
    const auto e = renyi_density(q, o);
    const double expect = std::isinf(a) ? ref::half_filled_inf_density(2.0)
                                        : ref::renyi_density([](double x) { return ref::fermi_cos(x, 2.0, 0.0); }, a);
    CAPTURE(a);
    CHECK(std::abs(e.value - expect) < 1e-9);
    CHECK(e.quad_error <= 1e-10);
    CHECK(e.value >= 0.0);
    CHECK(e.value <= ref::ln2);
    CHECK(e.value <= prev + 1e-12);
    prev = e.value;
  }
}

TEST_CASE("particle-hole symmetry and dimension consistency") {
  auto q = make_cosine_thermal_symbol(1, 0.5, 0.3);
  auto flipped = Symbol::closed_form(1, [q](std::span<const double> x) { return 1.0 - q(x); }, "flip");
  auto lifted = Symbol::closed_form(
      2, [q](std::span<const double> x) { return q(x.subspan(0, 1)); }, "lift");
  for (double a : {1.0, 2.0, inf}) {
    const auto o = std::isinf(a) ? Order::infinity() : Order::of(a);
    const auto e = renyi_density(q, o);
    const auto f = renyi_density(flipped, o);
    const auto l = renyi_density(lifted, o);
    CHECK(std::abs(e.value - f.value) <= e.quad_error + f.quad_error + 1e-14);
    CHECK(std::abs(e.value - l.value) <= e.quad_error + l.quad_error + 1e-14);
  }
}

TEST_CASE("degenerate symbols give finite entropies") {
  auto cosine = Symbol::closed_form(
      1, [](std::span<const double> x) { return 0.5 * (1.0 + std::cos(2.0 * ref::pi * x[0])); }, "cos");
  for (auto o : {Order::von_neumann(), Order::of(2.0), Order::infinity()}) {
    const auto e = renyi_density(cosine, o);
    CHECK(std::isfinite(e.value));
    CHECK(e.value > 0.0);
  }
  // -int log(q^2 + (1-q)^2) with q = (1 + cos)/2 equals -int log((1 + cos^2)/2) = log 2 - 2 log((1 + sqrt 2)/2)
  const double s2 = ref::ln2 - 2.0 * std::log((1.0 + std::sqrt(2.0)) / 2.0);
  CHECK(renyi_density(cosine, Order::of(2.0)).value == doctest::Approx(s2).epsilon(1e-10));
}

TEST_CASE("g function forms") {
  SUBCASE("constant half") {
    auto q = make_constant_symbol(1, 0.5);
    CHECK(g_function(q, 1.0, {}, GForm::integral).value == doctest::Approx(ref::ln2).epsilon(1e-14));
    CHECK(g_function(q, 1.0, {}, GForm::defining).value == doctest::Approx(ref::ln2).epsilon(1e-14));
    CHECK(g_function(q, 2.0, {}, GForm::integral).value == doctest::Approx(ref::ln2 / 2).epsilon(1e-14));
    CHECK(g_function(q, 2.0, {}, GForm::defining).value == doctest::Approx(ref::ln2 / 2).epsilon(1e-14));
  }
  SUBCASE("thermal chain consistency over the alpha grid") {
    auto q = make_cosine_thermal_symbol(1, 2.0, 0.0);
    for (double a : {0.25, 0.5, 1.0, 2.0, 3.0, 5.0, 10.0}) {
      const auto c = g_consistency(q, a);
      CAPTURE(a);
      CHECK(c.consistent);
      CHECK(c.difference <= c.tolerance);
    }
    const double g1 = g_function(q, 1.0).value, g2 = g_function(q, 2.0).value, g3 = g_function(q, 3.0).value;
    CHECK(g1 - g2 >= 0.0);
    CHECK(g2 - g3 >= 0.0);
  }
  CHECK_THROWS_AS(g_function(make_constant_symbol(1, 0.5), 0.0), Error);
}

TEST_CASE("quadrature engine") {
  QuadratureSpec spec;
  auto e = integrate<double>([](double x) { return std::exp(x); }, 0.0, 1.0, spec);
  CHECK(e.value == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));
  auto sq = integrate_cube<double>(
      2, [](std::span<const double> x) { return x[0] * x[1] * x[1]; }, spec);
  CHECK(sq.value == doctest::Approx(1.0 / 6.0).epsilon(1e-14));

  QuadratureSpec tight;
  tight.abs_tol = 1e-14;
  tight.max_panels = 8;
  try {
    integrate<double>([](double x) { return x < 0.3 ? 0.0 : 1.0; }, 0.0, 1.0, tight);
    FAIL("expected the panel cap to trip");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::quadrature);
    CHECK(std::isfinite(err.estimate()));
  }
  QuadratureSpec bad;
  bad.abs_tol = 0.0;
  CHECK_THROWS_AS(bad.validate(), Error);
}
