#include "qfent/qfent.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <new>
#include <string>

#include "qfent/approx.hpp"
#include "qfent/entropy.hpp"
#include "qfent/laplace.hpp"
#include "qfent/lattice.hpp"
#include "qfent/symbol.hpp"
#include "qfent/symbol_config.hpp"

struct qfent_symbol {
  qfent::Symbol sym;
};

struct qfent_scheme {
  qfent::ApproxScheme scheme;
};

namespace {

thread_local std::string g_error;
thread_local double g_estimate = std::numeric_limits<double>::quiet_NaN();

qfent_status status_of(qfent::ErrorKind kind) {
  using qfent::ErrorKind;
  switch (kind) {
    case ErrorKind::invalid_argument: return QFENT_ERR_INVALID_ARGUMENT;
    case ErrorKind::config: return QFENT_ERR_CONFIG;
    case ErrorKind::io: return QFENT_ERR_IO;
    case ErrorKind::range_violation: return QFENT_ERR_RANGE;
    case ErrorKind::quadrature: return QFENT_ERR_QUADRATURE;
    case ErrorKind::convergence: return QFENT_ERR_CONVERGENCE;
    case ErrorKind::eigensolver: return QFENT_ERR_EIGENSOLVER;
    case ErrorKind::oracle: return QFENT_ERR_ORACLE;
  }
  return QFENT_ERR_INTERNAL;
}

qfent_status fail(qfent_status s, std::string msg, double estimate = std::numeric_limits<double>::quiet_NaN()) {
  g_error = std::move(msg);
  g_estimate = estimate;
  return s;
}

struct BufferTooSmall : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class F>
qfent_status guarded(F&& body) {
  g_error.clear();
  g_estimate = std::numeric_limits<double>::quiet_NaN();
  try {
    body();
    return QFENT_OK;
  } catch (const qfent::Error& e) {
    return fail(status_of(e.kind()), e.what(), e.estimate());
  } catch (const BufferTooSmall& e) {
    return fail(QFENT_ERR_BUFFER_TOO_SMALL, e.what());
  } catch (const std::bad_alloc&) {
    return fail(QFENT_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(QFENT_ERR_INTERNAL, e.what());
  }
}

void require(bool cond, const char* what) {
  if (!cond) throw qfent::Error(qfent::ErrorKind::invalid_argument, what);
}

void require_capacity(size_t have, size_t need) {
  if (have < need) {
    throw BufferTooSmall("output buffer holds " + std::to_string(have) + " entries, need " + std::to_string(need));
  }
}

// Scalar entry points report failure as NaN plus the last-error message.
template <class F>
double scalar(F&& body) {
  double v = std::numeric_limits<double>::quiet_NaN();
  if (guarded([&] { v = body(); }) != QFENT_OK) return std::numeric_limits<double>::quiet_NaN();
  return v;
}

qfent::QuadratureSpec to_spec(const qfent_quad_spec* s) {
  qfent::QuadratureSpec out;
  if (s) {
    out.initial_panels = s->initial_panels;
    out.abs_tol = s->abs_tol;
    out.max_depth = s->max_depth;
    out.max_panels = s->max_panels;
  }
  out.validate();
  return out;
}

qfent::SolverOptions to_options(const qfent_solver_options* o) {
  qfent::SolverOptions out;
  if (o) {
    out.domain_cap = o->domain_cap;
    out.grid_points = o->grid_points;
    out.max_iterations = o->max_iterations;
    out.level_tol = o->level_tol;
    out.alpha_lo = o->alpha_lo;
    out.alpha_hi = o->alpha_hi;
    out.alpha_tol = o->alpha_tol;
  }
  return out;
}

double order_value(const qfent::Order& o) {
  return o.kind() == qfent::Order::Kind::infinite ? std::numeric_limits<double>::infinity() : o.value();
}

qfent_entropy to_c(const qfent::EntropyValue& v) { return {order_value(v.order), v.value, v.quad_error}; }

qfent::Symbol::Callback wrap(qfent_symbol_fn f, void* user) {
  return [f, user](std::span<const double> x) { return f(x.data(), static_cast<int>(x.size()), user); };
}

qfent_status make_symbol(qfent_symbol** out, qfent::Symbol s) {
  *out = new qfent_symbol{std::move(s)};
  return QFENT_OK;
}

void fill_orders(const std::vector<qfent::MonotonicityOrder>& src, qfent_monotonicity_order* dst) {
  for (size_t i = 0; i < src.size(); ++i) {
    dst[i] = {src[i].order, src[i].min_value, src[i].argmin, src[i].tolerance, src[i].pass ? 1 : 0};
  }
}

}  // namespace

extern "C" {

const char* qfent_version(void) { return "0.1.0"; }

const char* qfent_status_string(qfent_status status) {
  switch (status) {
    case QFENT_OK: return "ok";
    case QFENT_ERR_INVALID_ARGUMENT: return "invalid argument";
    case QFENT_ERR_CONFIG: return "configuration error";
    case QFENT_ERR_IO: return "i/o error";
    case QFENT_ERR_RANGE: return "range violation";
    case QFENT_ERR_QUADRATURE: return "quadrature did not converge";
    case QFENT_ERR_CONVERGENCE: return "solver did not converge";
    case QFENT_ERR_EIGENSOLVER: return "eigensolver failure";
    case QFENT_ERR_ORACLE: return "oracle failure";
    case QFENT_ERR_BUFFER_TOO_SMALL: return "buffer too small";
    case QFENT_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* qfent_last_error(void) { return g_error.c_str(); }
double qfent_last_error_estimate(void) { return g_estimate; }

qfent_status qfent_parse_order(const char* token, double* alpha) {
  return guarded([&] {
    require(token && alpha, "null argument");
    *alpha = order_value(qfent::Order::parse(token));
  });
}

qfent_quad_spec qfent_quad_spec_default(void) {
  const qfent::QuadratureSpec d;
  return {d.initial_panels, d.abs_tol, d.max_depth, d.max_panels};
}

// ---- symbols

qfent_status qfent_symbol_load(const char* path, qfent_symbol** out) {
  return guarded([&] {
    require(path && out, "null argument");
    make_symbol(out, qfent::load_symbol_file(path));
  });
}

qfent_status qfent_symbol_parse(const char* text, const char* base_dir, qfent_symbol** out) {
  return guarded([&] {
    require(text && out, "null argument");
    make_symbol(out, qfent::parse_symbol_config(text, base_dir ? base_dir : ""));
  });
}

qfent_status qfent_symbol_constant(int dimension, double value, qfent_symbol** out) {
  return guarded([&] {
    require(out, "null argument");
    make_symbol(out, qfent::make_constant_symbol(dimension, value));
  });
}

qfent_status qfent_symbol_cosine_thermal(int dimension, double beta, double mu, double hopping, qfent_symbol** out) {
  return guarded([&] {
    require(out, "null argument");
    make_symbol(out, qfent::make_cosine_thermal_symbol(dimension, beta, mu, hopping));
  });
}

qfent_status qfent_symbol_thermal(int dimension, qfent_symbol_fn dispersion, void* user, double beta, double mu,
                                  qfent_symbol** out) {
  return guarded([&] {
    require(dispersion && out, "null argument");
    make_symbol(out, qfent::make_thermal_symbol(dimension, wrap(dispersion, user), beta, mu));
  });
}

qfent_status qfent_symbol_closed_form(int dimension, qfent_symbol_fn f, void* user, const char* label,
                                      qfent_symbol** out) {
  return guarded([&] {
    require(f && out, "null argument");
    make_symbol(out, qfent::Symbol::closed_form(dimension, wrap(f, user), label ? label : "closed-form"));
  });
}

qfent_status qfent_symbol_from_fourier(int dimension, int cutoff, const double* re, const double* im,
                                       const char* label, qfent_symbol** out) {
  return guarded([&] {
    require(re && out, "null argument");
    qfent::FourierTable table(dimension, cutoff);
    for (size_t i = 0; i < table.size(); ++i) table.data()[i] = {re[i], im ? im[i] : 0.0};
    make_symbol(out, qfent::Symbol::from_fourier(std::move(table), label ? label : "fourier-table"));
  });
}

qfent_status qfent_symbol_from_grid(int dimension, int n_per_dim, const double* samples, size_t count,
                                    const char* label, qfent_symbol** out) {
  return guarded([&] {
    require(samples && out, "null argument");
    make_symbol(out, qfent::Symbol::from_grid(dimension, n_per_dim, std::vector<double>(samples, samples + count),
                                              label ? label : "grid"));
  });
}

void qfent_symbol_free(qfent_symbol* q) { delete q; }

int qfent_symbol_dimension(const qfent_symbol* q) { return q ? q->sym.dimension() : 0; }

const char* qfent_symbol_label(const qfent_symbol* q) { return q ? q->sym.label().c_str() : ""; }

qfent_status qfent_symbol_eval(const qfent_symbol* q, const double* x, double* value) {
  return guarded([&] {
    require(q && x && value, "null argument");
    *value = q->sym(std::span<const double>(x, static_cast<size_t>(q->sym.dimension())));
  });
}

qfent_status qfent_symbol_rearrange(const qfent_symbol* q, qfent_rearrangement kind, const double* shift,
                                    const int* perm, qfent_symbol** out) {
  return guarded([&] {
    require(q && out, "null argument");
    const int d = q->sym.dimension();
    qfent::Rearrangement map;
    switch (kind) {
      case QFENT_TRANSLATION: {
        require(shift, "translation needs a shift vector");
        std::array<double, qfent::kMaxDimension> c{};
        for (int k = 0; k < d; ++k) c[k] = shift[k];
        map = qfent::Rearrangement::translation(c);
        break;
      }
      case QFENT_REFLECTION:
        map = qfent::Rearrangement::reflection();
        break;
      case QFENT_PERMUTATION: {
        require(perm, "permutation needs an index vector");
        std::array<int, qfent::kMaxDimension> p{0, 1, 2};
        for (int k = 0; k < d; ++k) p[k] = perm[k];
        map = qfent::Rearrangement::coordinate_permutation(p);
        break;
      }
      default:
        throw qfent::Error(qfent::ErrorKind::invalid_argument, "unsupported rearrangement kind");
    }
    make_symbol(out, qfent::rearrange(q->sym, map));
  });
}

qfent_status qfent_fourier_coefficients(const qfent_symbol* q, int cutoff, const qfent_quad_spec* spec, double* re,
                                        double* im, size_t capacity, double* quad_error) {
  return guarded([&] {
    require(q && re && im, "null argument");
    auto c = qfent::fourier_coefficients(q->sym, cutoff, to_spec(spec));
    require_capacity(capacity, c.table.size());
    for (size_t i = 0; i < c.table.size(); ++i) {
      re[i] = c.table.data()[i].real();
      im[i] = c.table.data()[i].imag();
    }
    if (quad_error) *quad_error = c.quad_error;
  });
}

qfent_status qfent_fourier_write_csv(const qfent_symbol* q, int cutoff, const qfent_quad_spec* spec,
                                     const char* path) {
  return guarded([&] {
    require(q && path, "null argument");
    auto c = qfent::fourier_coefficients(q->sym, cutoff, to_spec(spec));
    std::ofstream f(path);
    if (!f) throw qfent::Error(qfent::ErrorKind::io, std::string("cannot write ") + path);
    qfent::write_fourier_csv(f, c.table);
  });
}

qfent_status qfent_restrict_to_box(const qfent_symbol* q, int L, const qfent_quad_spec* spec,
                                   qfent_boundary boundary, double* eigenvalues, size_t capacity, size_t* count,
                                   double* max_clamp) {
  return guarded([&] {
    require(q && eigenvalues, "null argument");
    require(L >= 1, "box side must be at least 1");
    size_t need = 1;
    for (int k = 0; k < q->sym.dimension(); ++k) need *= static_cast<size_t>(L);
    if (count) *count = need;
    require_capacity(capacity, need);
    auto r = qfent::restrict_to_box(q->sym, L, to_spec(spec),
                                    boundary == QFENT_PERIODIC ? qfent::Boundary::periodic : qfent::Boundary::open);
    std::copy(r.eigenvalues.begin(), r.eigenvalues.end(), eigenvalues);
    if (max_clamp) *max_clamp = r.max_clamp;
  });
}

qfent_status qfent_distribution_function(const qfent_symbol* q, int samples, const double* levels, size_t count,
                                         double* values) {
  return guarded([&] {
    require(q && levels && values, "null argument");
    auto df = qfent::distribution_function(q->sym, samples);
    for (size_t i = 0; i < count; ++i) values[i] = df(levels[i]);
  });
}

qfent_status qfent_kernel_measure(const qfent_symbol* q, int samples, double eps, double* measure) {
  return guarded([&] {
    require(q && measure, "null argument");
    *measure = qfent::kernel_measure(q->sym, samples, eps);
  });
}

// ---- entropy

qfent_status qfent_renyi_density(const qfent_symbol* q, double alpha, const qfent_quad_spec* spec,
                                 qfent_entropy* out) {
  return guarded([&] {
    require(q && out, "null argument");
    *out = to_c(qfent::renyi_density(q->sym, qfent::Order::of(alpha), to_spec(spec)));
  });
}

double qfent_renyi_term(double q, double alpha) {
  return scalar([&] { return qfent::renyi_term(q, qfent::Order::of(alpha)); });
}

double qfent_log_min_ratio(double q) {
  return scalar([&] { return qfent::log_min_ratio(q); });
}
double qfent_h_of_value(double q) {
  return scalar([&] { return qfent::h_of_value(q); });
}

double qfent_g_term(double q, double alpha) {
  return scalar([&] { return qfent::g_term(q, alpha); });
}

qfent_status qfent_g_function(const qfent_symbol* q, double alpha, const qfent_quad_spec* spec, qfent_g_form form,
                              qfent_entropy* out) {
  return guarded([&] {
    require(q && out, "null argument");
    auto v = qfent::g_function(q->sym, alpha, to_spec(spec),
                               form == QFENT_G_DEFINING ? qfent::GForm::defining : qfent::GForm::integral);
    *out = {alpha, v.value, v.quad_error};
  });
}

qfent_status qfent_g_consistency(const qfent_symbol* q, double alpha, const qfent_quad_spec* spec,
                                 qfent_g_check* out) {
  return guarded([&] {
    require(q && out, "null argument");
    auto c = qfent::g_consistency(q->sym, alpha, to_spec(spec));
    *out = {c.alpha, c.defining.value, c.integral.value, c.difference, c.tolerance, c.consistent ? 1 : 0};
  });
}

qfent_status qfent_h_function(const qfent_symbol* q, const double* x, double* h) {
  return guarded([&] {
    require(q && x && h, "null argument");
    *h = qfent::h_function(q->sym, std::span<const double>(x, static_cast<size_t>(q->sym.dimension())));
  });
}

// ---- Laplace

double qfent_step_k(double t) {
  return scalar([&] { return qfent::step_k(t); });
}

double qfent_laplace_of_k(double s) {
  return scalar([&] { return qfent::laplace_of_k(s); });
}

double qfent_kernel_term(double q, double t) {
  return scalar([&] { return qfent::kernel_term(q, t); });
}

qfent_status qfent_g_kernel_asymptote(const qfent_symbol* q, int samples, double* value) {
  return guarded([&] {
    require(q && value, "null argument");
    *value = qfent::g_kernel_asymptote(q->sym, samples);
  });
}

qfent_status qfent_g_kernel(const qfent_symbol* q, double t, const qfent_quad_spec* spec, double* value,
                            double* quad_error) {
  return guarded([&] {
    require(q && value, "null argument");
    auto e = qfent::g_kernel(q->sym, t, to_spec(spec));
    *value = e.value;
    if (quad_error) *quad_error = e.error;
  });
}

qfent_status qfent_g_kernel_laplace(const qfent_symbol* q, double alpha, double tol, const qfent_quad_spec* spec,
                                    double* value, double* error) {
  return guarded([&] {
    require(q && value, "null argument");
    auto e = qfent::g_kernel_laplace(q->sym, alpha, tol, to_spec(spec));
    *value = e.value;
    if (error) *error = e.error;
  });
}

qfent_status qfent_check_monotonicity(qfent_real_fn f, void* user, double lo, double hi, double step, int max_order,
                                      double noise, qfent_monotonicity_order* orders, int* pass,
                                      int* first_failure) {
  return guarded([&] {
    require(f && orders, "null argument");
    auto rep = qfent::check_complete_monotonicity([&](double x) { return f(x, user); }, lo, hi, step, max_order,
                                                  noise);
    fill_orders(rep.orders, orders);
    if (pass) *pass = rep.pass ? 1 : 0;
    if (first_failure) *first_failure = rep.first_failure;
  });
}

qfent_status qfent_check_g_monotonicity(const qfent_symbol* q, double lo, double hi, double step, int max_order,
                                        const qfent_quad_spec* spec, qfent_monotonicity_order* orders, int* pass,
                                        int* first_failure) {
  return guarded([&] {
    require(q && orders, "null argument");
    auto rep = qfent::check_g_monotonicity(q->sym, lo, hi, step, max_order, to_spec(spec));
    fill_orders(rep.orders, orders);
    if (pass) *pass = rep.pass ? 1 : 0;
    if (first_failure) *first_failure = rep.first_failure;
  });
}

// ---- schemes

qfent_solver_options qfent_solver_options_default(void) {
  const qfent::SolverOptions d;
  return {d.domain_cap, d.grid_points, d.max_iterations, d.level_tol, d.alpha_lo, d.alpha_hi, d.alpha_tol};
}

qfent_status qfent_parse_scheme_kind(const char* name, qfent_scheme_kind* kind) {
  return guarded([&] {
    require(name && kind, "null argument");
    *kind = static_cast<qfent_scheme_kind>(qfent::parse_scheme_kind(name));
  });
}

double qfent_basis(double alpha, double t) {
  return scalar([&] { return qfent::eval_basis(alpha, t); });
}
double qfent_basis_ratio(double m, double alpha, double t) {
  return scalar([&] { return qfent::basis_ratio(m, alpha, t); });
}

qfent_status qfent_scheme_solve(qfent_scheme_kind kind, int n, const qfent_solver_options* opt, qfent_scheme** out) {
  return guarded([&] {
    require(out, "null argument");
    require(kind >= QFENT_PLAIN && kind <= QFENT_CONTROLLED, "unknown scheme kind");
    *out = new qfent_scheme{qfent::solve_scheme(static_cast<qfent::SchemeKind>(kind), n, to_options(opt))};
  });
}

qfent_status qfent_scheme_solve_controlled_at(int n, double alpha, const qfent_solver_options* opt,
                                              qfent_scheme** out) {
  return guarded([&] {
    require(out, "null argument");
    *out = new qfent_scheme{qfent::solve_controlled_at(n, alpha, to_options(opt))};
  });
}

void qfent_scheme_free(qfent_scheme* s) { delete s; }

qfent_status qfent_scheme_get_info(const qfent_scheme* s, qfent_scheme_info* info) {
  return guarded([&] {
    require(s && info, "null argument");
    const auto& a = s->scheme;
    info->kind = static_cast<qfent_scheme_kind>(a.kind);
    info->n = a.n;
    info->has_c0 = a.c0.has_value();
    info->c0 = a.c0.value_or(std::numeric_limits<double>::quiet_NaN());
    info->has_alpha = a.alpha.has_value();
    info->alpha = a.alpha.value_or(std::numeric_limits<double>::quiet_NaN());
    info->residual = a.residual;
    info->has_bound = a.certified_bound.has_value();
    info->certified_bound = a.certified_bound.value_or(std::numeric_limits<double>::quiet_NaN());
    info->spread = a.spread;
    info->condition = a.condition;
    info->domain_cap = a.domain_cap;
    info->tail_bound = a.tail_bound;
    info->iterations = a.iterations;
    info->extrema_count = a.extrema_t.size();
  });
}

qfent_status qfent_scheme_gamma(const qfent_scheme* s, double* gamma, size_t capacity) {
  return guarded([&] {
    require(s && gamma, "null argument");
    require_capacity(capacity, s->scheme.gamma.size());
    std::copy(s->scheme.gamma.begin(), s->scheme.gamma.end(), gamma);
  });
}

qfent_status qfent_scheme_extrema(const qfent_scheme* s, double* t, double* r, size_t capacity) {
  return guarded([&] {
    require(s && t && r, "null argument");
    require_capacity(capacity, s->scheme.extrema_t.size());
    std::copy(s->scheme.extrema_t.begin(), s->scheme.extrema_t.end(), t);
    std::copy(s->scheme.extrema_r.begin(), s->scheme.extrema_r.end(), r);
  });
}

const char* qfent_scheme_method(const qfent_scheme* s) { return s ? s->scheme.method.c_str() : ""; }

qfent_status qfent_scheme_residual(const qfent_scheme* s, double t, double* raw, double* normed) {
  return guarded([&] {
    require(s, "null argument");
    if (raw) *raw = qfent::scheme_residual(s->scheme, t);
    if (normed) *normed = qfent::scheme_normed_residual(s->scheme, t);
  });
}

qfent_status qfent_scheme_profile(const qfent_scheme* s, const double* t, size_t count, double* raw, double* normed,
                                  double* scaled) {
  return guarded([&] {
    require(s && t, "null argument");
    auto prof = qfent::residual_profile(s->scheme, std::span<const double>(t, count));
    for (size_t i = 0; i < prof.size(); ++i) {
      if (raw) raw[i] = prof[i].raw;
      if (normed) normed[i] = prof[i].normed;
      if (scaled) scaled[i] = prof[i].scaled;
    }
  });
}

qfent_status qfent_scheme_certify(const qfent_scheme* s, int points, double rel_tol, qfent_certificate* out) {
  return guarded([&] {
    require(s && out, "null argument");
    auto c = qfent::certify_equioscillation(s->scheme, points, rel_tol);
    *out = {c.alternations, c.max_abs, c.min_peak, c.spread, c.pass ? 1 : 0};
  });
}

qfent_status qfent_scheme_apply(const qfent_scheme* s, const qfent_symbol* q, const qfent_quad_spec* spec,
                                qfent_application* out, qfent_entropy* renyi, size_t capacity) {
  return guarded([&] {
    require(s && q && out, "null argument");
    auto a = qfent::apply_scheme(s->scheme, q->sym, to_spec(spec));
    if (renyi) {
      require_capacity(capacity, a.renyi.size());
      for (size_t i = 0; i < a.renyi.size(); ++i) renyi[i] = to_c(a.renyi[i]);
    }
    *out = {a.estimate,
            a.true_value,
            a.true_error,
            a.quad_error,
            a.bound.has_value(),
            a.bound.value_or(std::numeric_limits<double>::quiet_NaN()),
            a.within_bound ? 1 : 0};
  });
}

// ---- finite boxes

qfent_status qfent_local_renyi(const double* eigenvalues, size_t count, double alpha, double* value) {
  return guarded([&] {
    require((eigenvalues || count == 0) && value, "null argument");
    *value = qfent::local_renyi(std::span<const double>(eigenvalues, count), qfent::Order::of(alpha));
  });
}

qfent_status qfent_density_convergence(const qfent_symbol* q, double alpha, const int* L, size_t count,
                                       const qfent_quad_spec* spec, double threshold, qfent_boundary boundary,
                                       qfent_convergence_row* rows, qfent_convergence* summary) {
  return guarded([&] {
    require(q && L && rows && summary, "null argument");
    auto t = qfent::density_convergence(q->sym, qfent::Order::of(alpha), std::span<const int>(L, count),
                                        to_spec(spec), threshold,
                                        boundary == QFENT_PERIODIC ? qfent::Boundary::periodic : qfent::Boundary::open);
    for (size_t i = 0; i < t.rows.size(); ++i) rows[i] = {t.rows[i].L, t.rows[i].per_site, t.rows[i].gap};
    *summary = {to_c(t.density), t.extrapolated, t.extrapolation_error, t.threshold, t.decreasing ? 1 : 0,
                t.pass ? 1 : 0};
  });
}

qfent_status qfent_wick_oracle(const qfent_symbol* q, int n, const qfent_quad_spec* spec, const double* alphas,
                               size_t order_count, double tol, qfent_oracle_report* out) {
  return guarded([&] {
    require(q && out, "null argument");
    require(order_count <= QFENT_ORACLE_MAX_ORDERS, "too many orders for the oracle report");
    std::vector<qfent::Order> orders;
    if (alphas) {
      for (size_t i = 0; i < order_count; ++i) orders.push_back(qfent::Order::of(alphas[i]));
    }
    auto r = qfent::wick_oracle(q->sym, n, to_spec(spec), orders, tol);
    *out = qfent_oracle_report{};
    out->sites = r.sites;
    std::copy(r.mode_eigenvalues.begin(), r.mode_eigenvalues.end(), out->mode_eigenvalues);
    std::copy(r.rho_spectrum.begin(), r.rho_spectrum.end(), out->rho_spectrum);
    std::copy(r.product_spectrum.begin(), r.product_spectrum.end(), out->product_spectrum);
    out->spectrum_deviation = r.spectrum_deviation;
    out->trace = r.trace;
    out->min_eigenvalue = r.min_eigenvalue;
    out->hermiticity_defect = r.hermiticity_defect;
    out->comparison_count = static_cast<int>(r.comparisons.size());
    for (size_t i = 0; i < r.comparisons.size(); ++i) {
      const auto& c = r.comparisons[i];
      out->comparisons[i] = {order_value(c.order), c.from_rho, c.from_modes, c.difference};
    }
    out->tolerance = r.tolerance;
    out->pass = r.pass ? 1 : 0;
  });
}

}  // extern "C"
