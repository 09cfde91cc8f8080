#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "qfent/qfent.h"

extern "C" int capi_smoke_c(void);

namespace {

const double ln2 = std::log(2.0);

struct SymbolGuard {
  qfent_symbol* q = nullptr;
  ~SymbolGuard() { qfent_symbol_free(q); }
};

struct SchemeGuard {
  qfent_scheme* s = nullptr;
  ~SchemeGuard() { qfent_scheme_free(s); }
};

double identity_fn(const double* x, int, void*) { return x[0]; }
double exp_fn(double x, void*) { return std::exp(-x); }

}  // namespace

TEST_CASE("header compiles and works from C") { CHECK(capi_smoke_c() == 0); }

TEST_CASE("status strings and version") {
  CHECK(std::string(qfent_version()).size() > 0);
  CHECK(std::string(qfent_status_string(QFENT_OK)) == "ok");
  CHECK(std::string(qfent_status_string(static_cast<qfent_status>(99))).size() > 0);
  double a = 0.0;
  CHECK(qfent_parse_order("inf", &a) == QFENT_OK);
  CHECK(std::isinf(a));
  CHECK(qfent_parse_order("1", &a) == QFENT_OK);
  CHECK(a == 1.0);
  CHECK(qfent_parse_order("nope", &a) == QFENT_ERR_INVALID_ARGUMENT);
  CHECK(std::string(qfent_last_error()).size() > 0);
}

TEST_CASE("null arguments are rejected") {
  CHECK(qfent_symbol_constant(1, 0.5, nullptr) == QFENT_ERR_INVALID_ARGUMENT);
  qfent_entropy e;
  CHECK(qfent_renyi_density(nullptr, 2.0, nullptr, &e) == QFENT_ERR_INVALID_ARGUMENT);
  qfent_symbol_free(nullptr);
  qfent_scheme_free(nullptr);
}

TEST_CASE("symbol construction and evaluation") {
  SymbolGuard c;
  REQUIRE(qfent_symbol_constant(1, 0.5, &c.q) == QFENT_OK);
  CHECK(qfent_symbol_dimension(c.q) == 1);
  double x = 0.3, v = 0.0;
  CHECK(qfent_symbol_eval(c.q, &x, &v) == QFENT_OK);
  CHECK(v == 0.5);

  SymbolGuard bad;
  CHECK(qfent_symbol_constant(1, 1.5, &bad.q) == QFENT_ERR_RANGE);
  CHECK(bad.q == nullptr);

  SymbolGuard id;
  REQUIRE(qfent_symbol_closed_form(1, identity_fn, nullptr, "id", &id.q) == QFENT_OK);
  CHECK(std::string(qfent_symbol_label(id.q)) == "id");
  const double levels[] = {0.25, 0.5};
  double cdf[2];
  CHECK(qfent_distribution_function(id.q, 1000, levels, 2, cdf) == QFENT_OK);
  CHECK(cdf[0] == doctest::Approx(0.25).epsilon(1e-2));
  CHECK(cdf[1] == doctest::Approx(0.5).epsilon(1e-2));

  SymbolGuard refl;
  REQUIRE(qfent_symbol_rearrange(id.q, QFENT_REFLECTION, nullptr, nullptr, &refl.q) == QFENT_OK);
  x = 0.25;
  CHECK(qfent_symbol_eval(refl.q, &x, &v) == QFENT_OK);
  CHECK(v == doctest::Approx(0.75));

  const double re[] = {0.25, 0.5, 0.25}, im[] = {0.0, 0.0, 0.0};
  SymbolGuard f;
  REQUIRE(qfent_symbol_from_fourier(1, 1, re, im, "cos", &f.q) == QFENT_OK);
  double eig[4];
  size_t count = 0;
  double clamp = 0.0;
  CHECK(qfent_restrict_to_box(f.q, 2, nullptr, QFENT_OPEN, eig, 4, &count, &clamp) == QFENT_OK);
  REQUIRE(count == 2);
  CHECK(eig[0] == doctest::Approx(0.25));
  CHECK(eig[1] == doctest::Approx(0.75));
  CHECK(qfent_restrict_to_box(f.q, 8, nullptr, QFENT_OPEN, eig, 4, &count, &clamp) == QFENT_ERR_BUFFER_TOO_SMALL);
  CHECK(count == 8);

  double cre[5], cim[5], err = 0.0;
  CHECK(qfent_fourier_coefficients(f.q, 2, nullptr, cre, cim, 5, &err) == QFENT_OK);
  CHECK(cre[1] == doctest::Approx(0.25));
  CHECK(std::abs(cre[0]) < 1e-12);

  const double samples[] = {0.2, 0.6};
  SymbolGuard g;
  REQUIRE(qfent_symbol_from_grid(1, 2, samples, 2, "grid", &g.q) == QFENT_OK);
  x = 0.25;
  CHECK(qfent_symbol_eval(g.q, &x, &v) == QFENT_OK);
  CHECK(v == doctest::Approx(0.4));
}

TEST_CASE("loading files") {
  SymbolGuard q;
  CHECK(qfent_symbol_load(QFENT_DATA_DIR "/symbols/thermal_beta2.sym", &q.q) == QFENT_OK);
  SymbolGuard missing;
  CHECK(qfent_symbol_load("/does/not/exist.sym", &missing.q) == QFENT_ERR_IO);
  CHECK(std::string(qfent_last_error()).find("/does/not/exist.sym") != std::string::npos);
  SymbolGuard parsed;
  CHECK(qfent_symbol_parse("kind = constant\nvalue = 0.5\nfoo = 1\n", nullptr, &parsed.q) == QFENT_ERR_CONFIG);

  const std::string path = "capi_coefficients.csv";
  CHECK(qfent_fourier_write_csv(q.q, 2, nullptr, path.c_str()) == QFENT_OK);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "j,re,im");
  in.close();
  std::remove(path.c_str());
}

TEST_CASE("entropy and g functions") {
  SymbolGuard q;
  REQUIRE(qfent_symbol_cosine_thermal(1, 2.0, 0.0, 1.0, &q.q) == QFENT_OK);
  qfent_entropy e1, e2, einf;
  REQUIRE(qfent_renyi_density(q.q, 1.0, nullptr, &e1) == QFENT_OK);
  REQUIRE(qfent_renyi_density(q.q, 2.0, nullptr, &e2) == QFENT_OK);
  REQUIRE(qfent_renyi_density(q.q, INFINITY, nullptr, &einf) == QFENT_OK);
  CHECK(e1.value == doctest::Approx(0.511571).epsilon(1e-6));
  CHECK(e1.value > e2.value);
  CHECK(e2.value > einf.value);

  qfent_entropy gd, gi;
  CHECK(qfent_g_function(q.q, 2.0, nullptr, QFENT_G_DEFINING, &gd) == QFENT_OK);
  CHECK(qfent_g_function(q.q, 2.0, nullptr, QFENT_G_INTEGRAL, &gi) == QFENT_OK);
  CHECK(gd.value == doctest::Approx(einf.value - 0.5 * e2.value).epsilon(1e-13));
  CHECK(std::abs(gd.value - gi.value) < 1e-9);
  qfent_g_check check;
  CHECK(qfent_g_consistency(q.q, 0.5, nullptr, &check) == QFENT_OK);
  CHECK(check.consistent == 1);

  double h = 0.0, x = 0.0;
  CHECK(qfent_h_function(q.q, &x, &h) == QFENT_OK);
  CHECK(h == doctest::Approx(2.0));
  CHECK(qfent_renyi_term(0.5, 3.0) == doctest::Approx(ln2));
  CHECK(std::isinf(qfent_h_of_value(0.0)));
  CHECK(qfent_g_term(0.5, 2.0) == doctest::Approx(ln2 / 2.0));
  CHECK(qfent_log_min_ratio(0.5) == 0.0);
}

TEST_CASE("Laplace functions") {
  CHECK(qfent_step_k(3.5) == 5.0 / 6.0);
  CHECK(std::isnan(qfent_step_k(-1.0)));
  CHECK(std::abs(qfent_laplace_of_k(1.0) - std::log1p(std::exp(-1.0))) < 1e-12);
  CHECK(qfent_kernel_term(0.5, 1.0) == doctest::Approx(ln2));

  SymbolGuard q;
  REQUIRE(qfent_symbol_cosine_thermal(1, 2.0, 0.0, 1.0, &q.q) == QFENT_OK);
  qfent_quad_spec spec = qfent_quad_spec_default();
  spec.abs_tol = 1e-6;
  double g = 0.0, err = 0.0;
  CHECK(qfent_g_kernel(q.q, 5.0, &spec, &g, &err) == QFENT_OK);
  CHECK(g > 0.0);
  CHECK(qfent_g_kernel_laplace(q.q, 1.0, 1e-7, nullptr, &g, &err) == QFENT_OK);
  qfent_entropy gi;
  REQUIRE(qfent_g_function(q.q, 1.0, nullptr, QFENT_G_INTEGRAL, &gi) == QFENT_OK);
  CHECK(std::abs(g - gi.value) < 1e-6);
  double asym = 0.0;
  CHECK(qfent_g_kernel_asymptote(q.q, 1024, &asym) == QFENT_OK);
  CHECK(asym == doctest::Approx(ln2));

  qfent_monotonicity_order orders[9];
  int pass = 0, first = -1;
  CHECK(qfent_check_monotonicity(exp_fn, nullptr, 0.0, 10.0, 0.1, 8, 1e-15, orders, &pass, &first) == QFENT_OK);
  CHECK(pass == 1);
  CHECK(first == -1);
  CHECK(qfent_check_g_monotonicity(q.q, 0.5, 10.0, 0.25, 6, nullptr, orders, &pass, &first) == QFENT_OK);
  CHECK(pass == 1);
  CHECK(qfent_check_monotonicity(exp_fn, nullptr, 0.0, 10.0, 0.1, 20, 0.0, orders, &pass, &first) ==
        QFENT_ERR_INVALID_ARGUMENT);
}

TEST_CASE("schemes") {
  CHECK(qfent_basis(2.0, std::log(2.0)) == doctest::Approx(0.5));
  CHECK(qfent_basis_ratio(2.0, 0.5, 0.0) == doctest::Approx(4.0));
  qfent_scheme_kind kind;
  CHECK(qfent_parse_scheme_kind("shifted", &kind) == QFENT_OK);
  CHECK(kind == QFENT_SHIFTED);
  CHECK(qfent_parse_scheme_kind("bogus", &kind) == QFENT_ERR_INVALID_ARGUMENT);

  SchemeGuard s;
  REQUIRE(qfent_scheme_solve(QFENT_SHIFTED, 2, nullptr, &s.s) == QFENT_OK);
  qfent_scheme_info info;
  REQUIRE(qfent_scheme_get_info(s.s, &info) == QFENT_OK);
  CHECK(info.n == 2);
  CHECK(info.has_c0 == 1);
  CHECK(info.has_alpha == 0);
  double gamma[2];
  CHECK(qfent_scheme_gamma(s.s, gamma, 1) == QFENT_ERR_BUFFER_TOO_SMALL);
  REQUIRE(qfent_scheme_gamma(s.s, gamma, 2) == QFENT_OK);
  CHECK(gamma[0] == doctest::Approx(2.219).epsilon(0.005 / 2.219));
  CHECK(info.c0 + gamma[0] + gamma[1] == doctest::Approx(1.0).epsilon(1e-6));
  std::vector<double> et(info.extrema_count), er(info.extrema_count);
  CHECK(qfent_scheme_extrema(s.s, et.data(), er.data(), et.size()) == QFENT_OK);
  CHECK(et.size() >= 3);
  CHECK(std::string(qfent_scheme_method(s.s)).size() > 0);
  qfent_certificate cert;
  CHECK(qfent_scheme_certify(s.s, 100000, 1e-5, &cert) == QFENT_OK);
  CHECK(cert.pass == 1);

  SchemeGuard c;
  REQUIRE(qfent_scheme_solve(QFENT_CONTROLLED, 1, nullptr, &c.s) == QFENT_OK);
  REQUIRE(qfent_scheme_get_info(c.s, &info) == QFENT_OK);
  CHECK(info.alpha == doctest::Approx(0.661).epsilon(0.01));
  CHECK(info.certified_bound == info.residual * ln2);
  double raw = 0.0, normed = 0.0;
  CHECK(qfent_scheme_residual(c.s, 1.0, &raw, &normed) == QFENT_OK);
  CHECK(normed == doctest::Approx(raw / qfent_basis(info.alpha, 1.0)));
  const double t[] = {0.0, 1.0, 2.0};
  double scaled[3];
  CHECK(qfent_scheme_profile(c.s, t, 3, nullptr, nullptr, scaled) == QFENT_OK);
  CHECK(std::abs(scaled[0]) <= info.certified_bound * (1 + 1e-6));

  SymbolGuard half;
  REQUIRE(qfent_symbol_constant(1, 0.5, &half.q) == QFENT_OK);
  qfent_application app;
  qfent_entropy renyi[1];
  CHECK(qfent_scheme_apply(c.s, half.q, nullptr, &app, renyi, 1) == QFENT_OK);
  CHECK(app.within_bound == 1);
  CHECK(renyi[0].value == doctest::Approx(ln2));

  SchemeGuard at;
  CHECK(qfent_scheme_solve_controlled_at(2, 0.5, nullptr, &at.s) == QFENT_OK);
  SchemeGuard none;
  CHECK(qfent_scheme_solve(QFENT_PLAIN, 0, nullptr, &none.s) == QFENT_ERR_INVALID_ARGUMENT);
}

TEST_CASE("finite boxes") {
  const double lam[] = {0.25, 0.75};
  double v = 0.0;
  CHECK(qfent_local_renyi(lam, 2, 2.0, &v) == QFENT_OK);
  CHECK(v == doctest::Approx(2.0 * std::log(1.6)));

  SymbolGuard q;
  REQUIRE(qfent_symbol_cosine_thermal(1, 2.0, 0.0, 1.0, &q.q) == QFENT_OK);
  const int Ls[] = {8, 16, 32};
  qfent_convergence_row rows[3];
  qfent_convergence summary;
  CHECK(qfent_density_convergence(q.q, 1.0, Ls, 3, nullptr, 5e-3, QFENT_OPEN, rows, &summary) == QFENT_OK);
  CHECK(rows[2].L == 32);
  CHECK(std::abs(rows[2].gap) < std::abs(rows[0].gap));
  CHECK(summary.decreasing == 1);

  qfent_oracle_report rep;
  const double alphas[] = {2.0, 3.0, 1.0, INFINITY};
  CHECK(qfent_wick_oracle(q.q, 3, nullptr, alphas, 4, 1e-8, &rep) == QFENT_OK);
  CHECK(rep.pass == 1);
  CHECK(rep.sites == 3);
  CHECK(rep.comparison_count == 4);
  CHECK(rep.spectrum_deviation < 1e-8);
  CHECK(qfent_wick_oracle(q.q, 5, nullptr, nullptr, 0, 1e-8, &rep) == QFENT_ERR_INVALID_ARGUMENT);
}
