#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qfent/entropy.hpp"
#include "qfent/quadrature.hpp"
#include "qfent/symbol.hpp"

namespace qfent {

/// f_alpha(t) = alpha/(alpha-1) (e^{-t} - e^{-alpha t}), f_1(t) = t e^{-t}.
/// Every member has unit integral over [0, inf).
double eval_basis(double alpha, double t);

/// f_m(t) / f_alpha(t), continued to t = 0 by its limit m / alpha.
double basis_ratio(double m, double alpha, double t);

namespace detail {
/// (1 - e^{-z}) / z with the value 1 at z = 0.
long double phi(long double z);
/// f_a(t) / (t e^{-t}) = a phi((a-1) t); finite at t = 0 (value a).
long double basis_shape(long double a, long double t);
}  // namespace detail

enum class SchemeKind { plain, shifted, controlled };

std::string to_string(SchemeKind kind);
SchemeKind parse_scheme_kind(const std::string& name);

struct SolverOptions {
  /// Sup-norms are taken on [0, cap]; for the controlled kind the cap is
  /// domain_cap / min(1, 1 - alpha) because the ratios decay like e^{-(1-alpha) t}.
  double domain_cap = 40.0;
  int grid_points = 4000;
  int max_iterations = 60;
  double level_tol = 1e-8;
  /// Outer search over the fractional order (controlled kind).
  double alpha_lo = 0.05;
  double alpha_hi = 0.95;
  double alpha_tol = 1e-4;
};

/// Estimate s ~ c0 log 2 + sum_i gamma_i s(i+1).
struct ApproxScheme {
  SchemeKind kind = SchemeKind::plain;
  int n = 0;
  std::vector<double> gamma;     // gamma[i] multiplies s(i+2)
  std::optional<double> c0;      // shifted kind
  std::optional<double> alpha;   // controlled kind
  double residual = 0.0;         // sup-norm of the (ratio) residual
  std::optional<double> certified_bound;  // controlled: residual * log 2
  std::vector<double> extrema_t;  // alternation points of the final fit
  std::vector<double> extrema_r;  // signed residual there
  double spread = 0.0;            // relative spread of the extremal magnitudes
  double condition = 0.0;         // 1 / rcond of the final reference system
  double domain_cap = 0.0;
  double tail_bound = 0.0;        // bound on |residual| beyond domain_cap
  int iterations = 0;
  std::string method;
};

ApproxScheme solve_plain(int n, const SolverOptions& opt = {});
/// Same fit as solve_plain with c0 = 1 - sum gamma attached.
ApproxScheme solve_shifted(int n, const SolverOptions& opt = {});
ApproxScheme solve_controlled(int n, const SolverOptions& opt = {});
ApproxScheme solve_scheme(SchemeKind kind, int n, const SolverOptions& opt = {});

/// Inner problem of the controlled scheme at a fixed fractional order.
ApproxScheme solve_controlled_at(int n, double alpha, const SolverOptions& opt = {},
                                 std::span<const double> warm_refs = {});

/// f_1 - sum gamma_i f_{i+1}.
double scheme_residual(const ApproxScheme& s, double t);
/// The quantity whose sup-norm is `residual`: the plain residual, or the
/// plain residual divided by f_alpha for the controlled kind.
double scheme_normed_residual(const ApproxScheme& s, double t);

struct ResidualSample {
  double t = 0.0;
  double raw = 0.0;     // f_1 - sum gamma_i f_{i+1}
  double normed = 0.0;  // raw / f_alpha (controlled) or raw
  double scaled = 0.0;  // normed * log 2 (controlled) or raw; extrema equal the bound
};

std::vector<ResidualSample> residual_profile(const ApproxScheme& s, std::span<const double> t_grid);

struct EquioscillationCertificate {
  int alternations = 0;
  double max_abs = 0.0;
  double min_peak = 0.0;  // smallest magnitude among the alternating near-maximal peaks
  double spread = 0.0;
  std::vector<double> peaks_t;
  bool pass = false;
};

/// Dense re-evaluation of the residual on a uniform grid of [0, domain_cap],
/// independent of the solver: counts sign-alternating peaks whose magnitude
/// is within rel_tol of the maximum. Passes with at least n + 1 of them.
EquioscillationCertificate certify_equioscillation(const ApproxScheme& s, int points = 200000,
                                                   double rel_tol = 1e-5);

struct SchemeApplication {
  double estimate = 0.0;
  double true_value = 0.0;  // s_q(1)
  double true_error = 0.0;
  double quad_error = 0.0;  // propagated quadrature error of estimate and true value
  std::optional<double> bound;
  bool within_bound = true;  // controlled: true_error <= bound + 10 quad_error
  std::vector<EntropyValue> renyi;  // s(2) .. s(n+1)
};

SchemeApplication apply_scheme(const ApproxScheme& s, const Symbol& q, const QuadratureSpec& spec = {});

}  // namespace qfent
