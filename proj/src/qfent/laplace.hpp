#pragma once

#include <functional>
#include <vector>

#include "qfent/quadrature.hpp"
#include "qfent/symbol.hpp"

namespace qfent {

/// k(t) = sum_{1 <= j <= floor(t)} (-1)^{j+1} / j; zero for t < 1, log 2 at +inf.
double step_k(double t);

/// int_0^inf k(t) exp(-s t) dt by exact integration over each [l, l+1),
/// summed until the tail bound log 2 exp(-s T) / s drops below 1e-12
/// (and at least up to T = max(50/s, 50)). Closed form: log(1 + e^{-s}) / s.
double laplace_of_k(double s);

/// Per-mode kernel k(t/h) with k(t/inf) = 0 and k(t/0) = log 2 for t > 0.
double kernel_term(double q, double t);

/// G(t) = int k(t / h(x)) dx. The integrand jumps wherever t / h(x) crosses
/// an integer, so tolerances much below 1e-7 can exhaust the panel cap.
Estimate<double> g_kernel(const Symbol& q, double t, const QuadratureSpec& spec = {});

/// log 2 times the measure of {h < inf}, the t -> inf limit of G.
double g_kernel_asymptote(const Symbol& q, int samples = 4096);

/// int_0^T G(t) exp(-alpha t) dt with T chosen so that the dropped tail,
/// bounded by log 2 exp(-alpha T) / alpha, is below tol / 1000. The t-integral
/// is done per x over the steps of k(t/h(x)) and then integrated over x to
/// max(spec.abs_tol, tol / 100). The returned error includes the tail bound.
Estimate<double> g_kernel_laplace(const Symbol& q, double alpha, double tol, const QuadratureSpec& spec = {});

struct MonotonicityOrder {
  int order = 0;
  double min_value = 0.0;  // min over the grid of (-1)^n Delta^n f / step^n
  double argmin = 0.0;
  double tolerance = 0.0;  // noise * 2^n / step^n
  bool pass = false;
};

struct MonotonicityReport {
  double lo = 0.0, hi = 0.0, step = 0.0;
  double noise = 0.0;
  std::vector<MonotonicityOrder> orders;  // n = 0 .. max_order
  bool pass = false;
  int first_failure = -1;
};

/// Finite-difference test of (-1)^n f^(n) >= 0 on the grid lo, lo+step, ...
/// up to hi. `noise` is the absolute evaluation error of f. max_order <= 12.
MonotonicityReport check_complete_monotonicity(const std::function<double(double)>& f, double lo, double hi,
                                               double step, int max_order, double noise);

/// The same check applied to g_q (integral form); noise is the largest
/// quadrature error seen plus rounding of the values.
MonotonicityReport check_g_monotonicity(const Symbol& q, double lo, double hi, double step, int max_order,
                                        const QuadratureSpec& spec = {});

}  // namespace qfent
