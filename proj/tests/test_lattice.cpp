#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "oracles.hpp"
#include "qfent/lattice.hpp"

using namespace qfent;

namespace {

Symbol raised_cosine() {
  FourierTable t(1, 1);
  const std::array<int, 1> j0{0}, jp{1}, jm{-1};
  t.at(j0) = 0.5;
  t.at(jp) = 0.25;
  t.at(jm) = 0.25;
  return Symbol::from_fourier(std::move(t), "cosine");
}

}  // namespace

TEST_CASE("local entropies from spectra") {
  const std::vector<double> half(6, 0.5);
  for (auto o : {Order::of(0.5), Order::von_neumann(), Order::of(2.0), Order::infinity()})
    CHECK(local_renyi(half, o) == doctest::Approx(6.0 * ref::ln2).epsilon(1e-14));
  const std::vector<double> pair{0.25, 0.75};
  CHECK(local_renyi(pair, Order::of(2.0)) == doctest::Approx(2.0 * std::log(8.0 / 5.0)).epsilon(1e-14));
  CHECK(local_renyi(pair, Order::of(2.0)) == doctest::Approx(0.9400).epsilon(1e-4));
  const std::vector<double> pure{0.0, 1.0};
  for (auto o : {Order::of(3.0), Order::von_neumann(), Order::infinity()}) CHECK(local_renyi(pure, o) == 0.0);
}

TEST_CASE("local spectrum") {
  auto s = local_spectrum(raised_cosine(), 2);
  REQUIRE(s.eigenvalues.size() == 2);
  CHECK(s.eigenvalues[0] == doctest::Approx(0.25));
  CHECK(s.eigenvalues[1] == doctest::Approx(0.75));
  auto q2 = local_spectrum(make_cosine_thermal_symbol(2, 1.0, 0.0), 3);
  CHECK(q2.eigenvalues.size() == 9);
  CHECK(q2.dimension == 2);
}

TEST_CASE("per-site ordering in alpha at finite size") {
  auto q = make_cosine_thermal_symbol(1, 2.0, 0.0);
  for (int L : {4, 16, 40}) {
    const auto s = local_spectrum(q, L);
    double prev = 1e300;
    for (auto o : {Order::of(0.5), Order::von_neumann(), Order::of(2.0), Order::of(3.0), Order::infinity()}) {
      const double v = local_renyi(s.eigenvalues, o) / L;
      CHECK(v <= prev + 1e-14);
      prev = v;
    }
  }
}

TEST_CASE("density convergence") {
  SUBCASE("constant symbol has zero gap") {
    const std::vector<int> Ls{1, 2, 8};
    auto t = density_convergence(make_constant_symbol(1, 0.5), Order::of(2.0), Ls);
    for (const auto& r : t.rows) CHECK(std::abs(r.gap) <= 1e-14);
    CHECK(t.pass);
  }
  SUBCASE("raised cosine on two sites") {
    const std::vector<int> Ls{2};
    auto t = density_convergence(raised_cosine(), Order::of(2.0), Ls);
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0].per_site == doctest::Approx(std::log(8.0 / 5.0)).epsilon(1e-12));
    const double s2 = ref::ln2 - 2.0 * std::log((1.0 + std::sqrt(2.0)) / 2.0);
    CHECK(t.density.value == doctest::Approx(s2).epsilon(1e-9));
  }
  SUBCASE("thermal chain sweep") {
    const std::vector<int> Ls{128, 8, 16, 64, 32};
    auto q = make_cosine_thermal_symbol(1, 2.0, 0.0);
    for (auto o : {Order::von_neumann(), Order::of(2.0), Order::infinity()}) {
      auto t = density_convergence(q, o, Ls);
      REQUIRE(t.rows.size() == 5);
      CHECK(t.rows.front().L == 8);
      CHECK(std::abs(t.rows.back().gap) < std::abs(t.rows.front().gap));
      CHECK(std::abs(t.rows.back().gap) <= 5e-3);
      CHECK(t.pass);
      CHECK(std::abs(t.extrapolated - t.density.value) <= 3.0 * t.extrapolation_error + 1e-12);
      // the density agrees with an independent midpoint rule
      const double a = o.kind() == Order::Kind::infinite ? std::numeric_limits<double>::infinity() : o.value();
      const double expect = std::isinf(a)
                                ? ref::half_filled_inf_density(2.0)
                                : ref::renyi_density([](double x) { return ref::fermi_cos(x, 2.0, 0.0); }, a);
      CHECK(t.density.value == doctest::Approx(expect).epsilon(1e-9));
    }
  }
  SUBCASE("periodic boxes converge faster") {
    const std::vector<int> Ls{8, 32};
    auto q = make_cosine_thermal_symbol(1, 2.0, 0.0);
    auto open = density_convergence(q, Order::von_neumann(), Ls);
    auto periodic = density_convergence(q, Order::von_neumann(), Ls, {}, 5e-3, Boundary::periodic);
    CHECK(std::abs(periodic.rows.back().gap) < std::abs(open.rows.back().gap));
  }
}

TEST_CASE("Wick oracle") {
  SUBCASE("single mode") {
    Eigen::MatrixXcd m(1, 1);
    m(0, 0) = 0.3;
    auto rho = wick_density_matrix(m);
    REQUIRE(rho.rho.rows() == 2);
    CHECK(rho.rho(0, 0).real() == doctest::Approx(0.7).epsilon(1e-14));
    CHECK(rho.rho(1, 1).real() == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(std::abs(rho.rho(0, 1)) < 1e-15);
  }
  SUBCASE("two modes of the raised cosine") {
    auto r = wick_oracle(raised_cosine(), 2);
    CHECK(r.pass);
    std::vector<double> expect{1.0 / 16, 3.0 / 16, 3.0 / 16, 9.0 / 16};
    REQUIRE(r.rho_spectrum.size() == 4);
    for (int i = 0; i < 4; ++i) CHECK(r.rho_spectrum[i] == doctest::Approx(expect[i]).epsilon(1e-12));
    // tr rho^2 from the matrix itself
    Eigen::MatrixXcd m(2, 2);
    m << 0.5, 0.25, 0.25, 0.5;
    auto rho = wick_density_matrix(m);
    const double tr2 = (rho.rho * rho.rho).trace().real();
    CHECK(tr2 == doctest::Approx(std::exp(-local_renyi(std::vector<double>{0.25, 0.75}, Order::of(2.0))))
                     .epsilon(1e-10));
  }
  SUBCASE("complex two-point matrix") {
    Eigen::MatrixXcd m(3, 3);
    m << 0.6, std::complex<double>(0.1, 0.2), 0.05, std::complex<double>(0.1, -0.2), 0.4,
        std::complex<double>(0.0, 0.1), 0.05, std::complex<double>(0.0, -0.1), 0.3;
    auto r = wick_oracle(m);
    CHECK(r.pass);
    CHECK(r.spectrum_deviation <= 1e-10);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
    std::vector<double> lam(es.eigenvalues().data(), es.eigenvalues().data() + 3);
    for (int i = 0; i < 3; ++i) CHECK(r.mode_eigenvalues[i] == doctest::Approx(lam[i]).epsilon(1e-12));
  }
  SUBCASE("bundled symbols up to four sites") {
    std::vector<Symbol> symbols{make_cosine_thermal_symbol(1, 2.0, 0.0), raised_cosine(),
                                make_cosine_thermal_symbol(1, 0.5, 0.3), make_cosine_thermal_symbol(2, 1.5, 0.2)};
    const std::vector<Order> orders{Order::of(2.0), Order::of(3.0), Order::von_neumann()};
    for (const auto& q : symbols) {
      for (int n = 1; n <= 4; ++n) {
        auto r = wick_oracle(q, n, {}, orders);
        CAPTURE(n);
        CHECK(r.pass);
        CHECK(r.spectrum_deviation <= 1e-8);
        CHECK(std::abs(r.trace - 1.0) <= 1e-10);
        CHECK(r.min_eigenvalue >= -1e-10);
        for (const auto& c : r.comparisons) CHECK(c.difference <= 1e-8);
      }
    }
  }
  SUBCASE("rejects too many sites") {
    CHECK_THROWS_AS(wick_oracle(raised_cosine(), 5), Error);
  }
}
