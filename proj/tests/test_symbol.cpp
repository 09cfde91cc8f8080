#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "qfent/entropy.hpp"
#include "qfent/symbol.hpp"
#include "qfent/symbol_config.hpp"

using namespace qfent;

namespace {

double at(const Symbol& q, double x) {
  const std::array<double, 1> p{x};
  return q(p);
}

Symbol cosine_table() {
  FourierTable t(1, 1);
  const std::array<int, 1> j0{0}, jp{1}, jm{-1};
  t.at(j0) = 0.5;
  t.at(jp) = 0.25;
  t.at(jm) = 0.25;
  return Symbol::from_fourier(std::move(t), "cosine");
}

Symbol identity_symbol() {
  return Symbol::closed_form(1, [](std::span<const double> x) { return x[0]; }, "identity");
}

}  // namespace

TEST_CASE("thermal symbol with flat dispersion is half filled") {
  for (double beta : {0.1, 1.0, 7.0}) {
    auto q = make_thermal_symbol(1, [](std::span<const double>) { return 0.0; }, beta, 0.0);
    for (double x : {0.0, 0.3, 0.9}) CHECK(at(q, x) == doctest::Approx(0.5).epsilon(1e-15));
  }
}

TEST_CASE("cosine thermal symbol at the origin") {
  auto q = make_cosine_thermal_symbol(1, 1.0, 0.0);
  CHECK(at(q, 0.0) == doctest::Approx(1.0 / (1.0 + std::exp(1.0))).epsilon(1e-15));
  CHECK(at(q, 0.0) == doctest::Approx(0.26894).epsilon(1e-5));
}

TEST_CASE("thermal symbol rejects non-finite dispersion") {
  auto q = make_thermal_symbol(1, [](std::span<const double>) { return std::nan(""); }, 1.0, 0.0);
  CHECK_THROWS_AS(at(q, 0.2), Error);
}

TEST_CASE("half filling coefficient of the beta=2 chain") {
  auto q = make_cosine_thermal_symbol(1, 2.0, 0.0);
  auto c = fourier_coefficients(q, 0);
  const std::array<int, 1> j0{0};
  CHECK(std::abs(c.table.get(j0) - std::complex<double>(0.5, 0.0)) < 1e-10);
  // q(x) + q(x + 1/2) = 1 pointwise
  for (double x : {0.05, 0.21, 0.37}) CHECK(at(q, x) + at(q, x + 0.5) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("fourier coefficients of simple symbols") {
  SUBCASE("constant") {
    auto c = fourier_coefficients(make_constant_symbol(1, 0.5), 3);
    for (int j = -3; j <= 3; ++j) {
      const std::array<int, 1> jj{j};
      CHECK(std::abs(c.table.get(jj) - std::complex<double>(j == 0 ? 0.5 : 0.0, 0.0)) < 1e-12);
    }
  }
  SUBCASE("raised cosine round trip") {
    auto c = fourier_coefficients(cosine_table(), 4);
    const double expect[] = {0.0, 0.0, 0.0, 0.25, 0.5, 0.25, 0.0, 0.0, 0.0};
    for (int j = -4; j <= 4; ++j) {
      const std::array<int, 1> jj{j};
      CHECK(std::abs(c.table.get(jj) - std::complex<double>(expect[j + 4], 0.0)) < 1e-9);
    }
    CHECK(c.table.hermitian_defect() < 1e-10);
  }
  SUBCASE("thermal beta=1 first coefficient against trapezoid") {
    auto q = make_cosine_thermal_symbol(1, 1.0, 0.0);
    auto c = fourier_coefficients(q, 2);
    const std::array<int, 1> j1{1};
    const auto expect = ref::fourier([](double x) { return ref::fermi_cos(x, 1.0, 0.0); }, 1);
    CHECK(c.table.get(j1).real() < 0.0);
    CHECK(std::abs(c.table.get(j1) - expect) < 1e-10);
    CHECK(c.table.hermitian_defect() < 1e-10);
  }
}

TEST_CASE("fourier table validation") {
  FourierTable t(1, 1);
  const std::array<int, 1> j0{0}, jp{1};
  t.at(j0) = 0.5;
  t.at(jp) = {0.1, 0.05};  // Q_{-1} left at zero
  CHECK_THROWS_AS(Symbol::from_fourier(t, "bad"), Error);
}

TEST_CASE("range guard") {
  auto slightly = Symbol::closed_form(1, [](std::span<const double>) { return 1.0 + 5e-10; }, "edge");
  CHECK(at(slightly, 0.1) == 1.0);
  auto outside = Symbol::closed_form(1, [](std::span<const double>) { return 1.01; }, "out");
  try {
    at(outside, 0.1);
    FAIL("expected a range violation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::range_violation);
  }
}

TEST_CASE("box restrictions") {
  SUBCASE("constant symbol gives half identity") {
    auto r = restrict_to_box(make_constant_symbol(1, 0.5), 4);
    CHECK((r.matrix - 0.5 * Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
    for (double l : r.eigenvalues) CHECK(l == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("raised cosine on two sites") {
    auto r = restrict_to_box(cosine_table(), 2);
    Eigen::Matrix2cd expect;
    expect << 0.5, 0.25, 0.25, 0.5;
    CHECK((r.matrix - expect).cwiseAbs().maxCoeff() < 1e-12);
    REQUIRE(r.eigenvalues.size() == 2);
    CHECK(r.eigenvalues[0] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(r.eigenvalues[1] == doctest::Approx(0.75).epsilon(1e-12));
  }
  SUBCASE("thermal chain spectrum is strictly inside the range of q") {
    auto q = make_cosine_thermal_symbol(1, 2.0, 0.0);
    auto r = restrict_to_box(q, 32);
    const double lo = 1.0 / (1.0 + std::exp(2.0)), hi = 1.0 / (1.0 + std::exp(-2.0));
    REQUIRE(r.eigenvalues.size() == 32);
    CHECK(std::is_sorted(r.eigenvalues.begin(), r.eigenvalues.end()));
    CHECK(r.eigenvalues.front() > lo);
    CHECK(r.eigenvalues.back() < hi);
    CHECK(r.max_clamp <= 1e-9);
    double trace = 0.0;
    for (double l : r.eigenvalues) trace += l;
    CHECK(trace / 32.0 == doctest::Approx(0.5).epsilon(1e-9));
  }
  SUBCASE("periodic box diagonalises to grid samples") {
    auto q = make_cosine_thermal_symbol(1, 2.0, 0.0);
    auto r = restrict_to_box(q, 16, {}, Boundary::periodic);
    std::vector<double> samples;
    for (int k = 0; k < 16; ++k) samples.push_back(ref::fermi_cos(k / 16.0, 2.0, 0.0));
    std::sort(samples.begin(), samples.end());
    for (int k = 0; k < 16; ++k) CHECK(r.eigenvalues[k] == doctest::Approx(samples[k]).epsilon(1e-9));
  }
  SUBCASE("two dimensional trace identity and block structure") {
    auto q = make_cosine_thermal_symbol(2, 1.5, 0.2);
    auto r = restrict_to_box(q, 4);
    const auto q00 = fourier_coefficients(q, 0).table.data()[0].real();
    CHECK(r.matrix.rows() == 16);
    CHECK((r.matrix - r.matrix.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    double trace = 0.0;
    for (double l : r.eigenvalues) trace += l;
    CHECK(trace / 16.0 == doctest::Approx(q00).epsilon(1e-9));
    // site (0,1) to (1,1) is a unit step in the slow index: same entry as (0,0) to (1,0)
    CHECK(std::abs(r.matrix(1, 5) - r.matrix(0, 4)) < 1e-12);
  }
  CHECK_THROWS_AS(restrict_to_box(make_constant_symbol(1, 0.5), 0), Error);
}

TEST_CASE("distribution function") {
  SUBCASE("constant") {
    auto d = distribution_function(make_constant_symbol(1, 0.5), 100);
    CHECK(d(0.49) == 0.0);
    CHECK(d(0.5) == 1.0);
    CHECK(d(1.0) == 1.0);
  }
  SUBCASE("identity is uniform") {
    auto d = distribution_function(identity_symbol(), 1000);
    for (double y : {0.1, 0.25, 0.5, 0.9}) CHECK(std::abs(d(y) - y) <= 1e-3);
    CHECK(d(1.0) == 1.0);
  }
  SUBCASE("non-decreasing") {
    auto d = distribution_function(make_cosine_thermal_symbol(1, 2.0, 0.0), 500);
    double prev = 0.0;
    for (int k = 0; k <= 100; ++k) {
      const double v = d(k / 100.0);
      CHECK(v >= prev);
      prev = v;
    }
  }
}

TEST_CASE("rearrangements") {
  auto thermal = make_cosine_thermal_symbol(1, 2.0, 0.0);
  SUBCASE("zero translation is the identity") {
    auto r = rearrange(thermal, Rearrangement::translation({0.0, 0.0, 0.0}));
    for (double x : {0.0, 0.13, 0.77}) CHECK(at(r, x) == at(thermal, x));
  }
  SUBCASE("reflection of an even symbol") {
    auto c = cosine_table();
    auto r = rearrange(c, Rearrangement::reflection());
    for (double x : {0.1, 0.3, 0.45}) CHECK(at(r, x) == doctest::Approx(at(c, x)).epsilon(1e-14));
  }
  SUBCASE("translated and reflected symbols share distribution and entropies") {
    const int samples = 100000;
    const double tol = 2.0 / std::sqrt(static_cast<double>(samples));
    auto base = distribution_function(thermal, samples);
    auto shifted = rearrange(thermal, Rearrangement::translation({1.0 / 3.0, 0.0, 0.0}));
    auto grid = rearrange(Symbol::from_grid(1, 8, {0.1, 0.2, 0.4, 0.7, 0.9, 0.7, 0.4, 0.2}, "g"),
                          Rearrangement::reflection());
    CHECK(distribution_distance(base, distribution_function(shifted, samples)) <= tol);
    CHECK(distribution_distance(distribution_function(grid, samples),
                                distribution_function(Symbol::from_grid(1, 8, {0.1, 0.2, 0.4, 0.7, 0.9, 0.7, 0.4, 0.2}, "g"),
                                                      samples)) <= tol);
    for (auto a : {Order::von_neumann(), Order::of(2.0), Order::infinity()}) {
      const auto e0 = renyi_density(thermal, a);
      const auto e1 = renyi_density(shifted, a);
      CHECK(std::abs(e0.value - e1.value) <= e0.quad_error + e1.quad_error + 1e-12);
    }
  }
  SUBCASE("coordinate permutation in two dimensions") {
    auto q = Symbol::closed_form(
        2, [](std::span<const double> x) { return 0.2 + 0.5 * x[0] * x[0] + 0.1 * x[1]; }, "poly");
    auto p = rearrange(q, Rearrangement::coordinate_permutation({1, 0, 2}));
    const std::array<double, 2> a{0.3, 0.6}, b{0.6, 0.3};
    CHECK(p(a) == doctest::Approx(q(b)).epsilon(1e-15));
    CHECK(distribution_distance(distribution_function(q, 300), distribution_function(p, 300)) <= 2.0 / 300.0);
  }
  CHECK_THROWS_AS(Rearrangement::parse_kind("shear"), Error);
}

TEST_CASE("kernel measure") {
  CHECK(kernel_measure(make_constant_symbol(1, 0.0), 100) == 1.0);
  CHECK(kernel_measure(make_constant_symbol(1, 0.5), 100) == 0.0);
  CHECK(kernel_measure(cosine_table(), 1000, 1e-3) < 0.05);
}

TEST_CASE("symbol config files") {
  SUBCASE("constant") {
    auto q = parse_symbol_config("kind = constant\nvalue = 0.3\n");
    CHECK(q.dimension() == 1);
    CHECK(at(q, 0.4) == 0.3);
  }
  SUBCASE("cosine thermal with comments and label") {
    auto q = parse_symbol_config("# chain\nkind = cosine-thermal   # trailing\nbeta = 1\nlabel = hot\n");
    CHECK(q.label() == "hot");
    CHECK(at(q, 0.0) == doctest::Approx(1.0 / (1.0 + std::exp(1.0))).epsilon(1e-15));
  }
  SUBCASE("inline coefficients") {
    auto q = parse_symbol_config("kind = fourier-table\ncoefficients = 0 0.5 0; 1 0.25 0; -1 0.25 0\n");
    CHECK(at(q, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(at(q, 0.5) == doctest::Approx(0.0).epsilon(1e-15));
  }
  SUBCASE("grid") {
    auto q = parse_symbol_config("kind = grid\nsamples = 0.2, 0.6\n");
    CHECK(at(q, 0.0) == doctest::Approx(0.2));
    CHECK(at(q, 0.25) == doctest::Approx(0.4));
  }
  SUBCASE("errors") {
    auto kind_of = [](const std::string& text) {
      try {
        parse_symbol_config(text);
      } catch (const Error& e) {
        return e.kind();
      }
      return ErrorKind::invalid_argument;
    };
    CHECK(kind_of("kind = constant\nvalue = 0.5\ncolour = red\n") == ErrorKind::config);
    CHECK(kind_of("value = 0.5\n") == ErrorKind::config);
    CHECK(kind_of("kind = constant\nvalue = half\n") == ErrorKind::config);
    CHECK(kind_of("kind = constant\nvalue = 0.5\nbeta = 2\n") == ErrorKind::config);
    CHECK(kind_of("kind = cosine-thermal\nbeta = -1\n") == ErrorKind::config);
    CHECK(kind_of("kind = constant\nvalue = 0.5\nvalue = 0.4\n") == ErrorKind::config);
    CHECK(kind_of("kind = constant\ndimension = 4\nvalue = 0.5\n") == ErrorKind::config);
    CHECK(kind_of("kind = fourier-table\n") == ErrorKind::config);
  }
  SUBCASE("missing file is an io error") {
    try {
      load_symbol_file("/nonexistent/symbol.sym");
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::io);
      CHECK(std::string(e.what()).find("/nonexistent/symbol.sym") != std::string::npos);
    }
  }
}

TEST_CASE("coefficient CSV round trip") {
  auto c = fourier_coefficients(make_cosine_thermal_symbol(1, 1.0, 0.0), 3);
  std::stringstream ss;
  write_fourier_csv(ss, c.table);
  CHECK(ss.str().rfind("j,re,im\n", 0) == 0);
  auto back = read_fourier_csv(ss, 1);
  REQUIRE(back.size() == c.table.size());
  for (std::size_t i = 0; i < back.size(); ++i) CHECK(back.data()[i] == c.table.data()[i]);

  auto c2 = fourier_coefficients(make_cosine_thermal_symbol(2, 1.0, 0.0), 1);
  std::stringstream s2;
  write_fourier_csv(s2, c2.table);
  CHECK(s2.str().rfind("j1,j2,re,im\n", 0) == 0);
  auto back2 = read_fourier_csv(s2, 2);
  for (std::size_t i = 0; i < back2.size(); ++i) CHECK(back2.data()[i] == c2.table.data()[i]);

  std::stringstream bad("k,re,im\n0,0.5,0\n");
  CHECK_THROWS_AS(read_fourier_csv(bad, 1), Error);
}

TEST_CASE("bundled symbol files load") {
  const std::string dir = QFENT_DATA_DIR "/symbols/";
  for (const char* name : {"constant_half.sym", "thermal_beta2.sym", "cosine.sym", "cosine_csv.sym",
                           "thermal_beta05_mu03.sym", "grid_bump.sym", "thermal_2d.sym"}) {
    CAPTURE(name);
    CHECK_NOTHROW(load_symbol_file(dir + name));
  }
  auto a = load_symbol_file(dir + "cosine.sym");
  auto b = load_symbol_file(dir + "cosine_csv.sym");
  for (double x : {0.0, 0.2, 0.7}) CHECK(at(a, x) == at(b, x));
}
