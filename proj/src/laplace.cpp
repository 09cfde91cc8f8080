#include "qfent/laplace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "qfent/entropy.hpp"

namespace qfent {

namespace {

constexpr double kLog2 = std::numbers::ln2;
constexpr std::size_t kTableSize = std::size_t{1} << 16;

// Partial sums k(m), m = 0..kTableSize. Accumulated in compensated long
// double and rounded once, so each entry is the double nearest to the exact
// rational (k(3) == 5.0 / 6.0, for instance).
const std::vector<double>& partial_sums() {
  static const std::vector<double> table = [] {
    std::vector<double> t(kTableSize + 1, 0.0);
    long double sum = 0.0L, comp = 0.0L;
    for (std::size_t j = 1; j <= kTableSize; ++j) {
      const long double term = ((j % 2 == 1) ? 1.0L : -1.0L) / static_cast<long double>(j) - comp;
      const long double next = sum + term;
      comp = (next - sum) - term;
      sum = next;
      t[j] = static_cast<double>(sum);
    }
    return t;
  }();
  return table;
}

struct Kahan {
  double sum = 0.0, comp = 0.0;
  void add(double v) {
    const double y = v - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

}  // namespace

double step_k(double t) {
  if (std::isnan(t) || t < 0.0) throw Error(ErrorKind::invalid_argument, "step_k needs t >= 0");
  if (t < 1.0) return 0.0;
  if (std::isinf(t) || t >= 9.0e15) return kLog2;
  const double m = std::floor(t);
  if (m <= static_cast<double>(kTableSize)) return partial_sums()[static_cast<std::size_t>(m)];
  // Beyond the table: Euler-Boole expansion of the remainder,
  // sum_{j>m} (-1)^{j+1}/j = (-1)^m (1/(2N) + 1/(4N^2) - 1/(8N^4) + 1/(4N^6)), N = m+1.
  const double n = m + 1.0;
  const double n2 = n * n;
  const double rem = 1.0 / (2.0 * n) + 1.0 / (4.0 * n2) - 1.0 / (8.0 * n2 * n2) + 1.0 / (4.0 * n2 * n2 * n2);
  const bool even = std::fmod(m, 2.0) == 0.0;
  return even ? kLog2 - rem : kLog2 + rem;
}

double laplace_of_k(double s) {
  if (!(s > 0.0) || !std::isfinite(s)) throw Error(ErrorKind::invalid_argument, "laplace_of_k needs s > 0");
  const double T = std::max(50.0 / s, 50.0);
  const double width = -std::expm1(-s);  // 1 - e^{-s}
  Kahan acc;
  for (std::size_t l = 1;; ++l) {
    const double lo = static_cast<double>(l);
    // int_l^{l+1} e^{-st} dt = e^{-ls} (1 - e^{-s}) / s
    acc.add(step_k(lo) * std::exp(-lo * s) * width / s);
    const double upper = lo + 1.0;
    if (upper >= T && kLog2 * std::exp(-s * upper) / s < 1e-12) break;
  }
  return acc.sum;
}

double kernel_term(double q, double t) {
  const double h = h_of_value(q);
  if (std::isinf(h)) return 0.0;
  if (h == 0.0) return t > 0.0 ? kLog2 : 0.0;
  return step_k(t / h);
}

Estimate<double> g_kernel(const Symbol& q, double t, const QuadratureSpec& spec) {
  if (std::isnan(t) || t < 0.0) throw Error(ErrorKind::invalid_argument, "g_kernel needs t >= 0");
  return integrate_cube<double>(
      q.dimension(), [&](std::span<const double> x) { return kernel_term(q(x), t); }, spec);
}

double g_kernel_asymptote(const Symbol& q, int samples) {
  return kLog2 * (1.0 - kernel_measure(q, samples, 0.0));
}

namespace {

constexpr std::size_t kStepCap = 4096;

// int_0^T k(t/h) e^{-alpha t} dt for one mode, with the rigorous bound for
// replacing k by log 2 past kStepCap steps (alternating, decreasing terms).
// Full steps weigh r^l (1 - r) / alpha with r = e^{-alpha h}.
Estimate<double> mode_laplace(double h, double alpha, double T) {
  if (std::isinf(h)) return {0.0, 0.0};
  const double eT = std::exp(-alpha * T);
  if (h == 0.0) return {kLog2 * -std::expm1(-alpha * T) / alpha, 0.0};
  const double r = std::exp(-alpha * h);
  const double full = -std::expm1(-alpha * h) / alpha;
  const double steps = std::floor(T / h);
  const double direct = std::min(steps, static_cast<double>(kStepCap));
  const auto& table = partial_sums();
  Kahan acc;
  double p = r;  // r^l
  for (double l = 1.0; l <= direct; l += 1.0, p *= r) {
    if (l * h >= T) break;
    const double w = (l + 1.0) * h <= T ? p * full : (p - eT) / alpha;
    acc.add(table[static_cast<std::size_t>(l)] * w);
  }
  double err = 0.0;
  if (steps > direct) {
    const double l0 = direct + 1.0;
    const double start = std::exp(-alpha * l0 * h);
    acc.add(kLog2 * (start - eT) / alpha);
    err = (start - std::max(eT, start * r)) / alpha / l0;
  }
  return {acc.sum, err};
}

}  // namespace

Estimate<double> g_kernel_laplace(const Symbol& q, double alpha, double tol, const QuadratureSpec& spec) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw Error(ErrorKind::invalid_argument, "alpha must be positive");
  if (!(tol > 0.0)) throw Error(ErrorKind::invalid_argument, "tolerance must be positive");
  const double T = std::max(1.0, std::log(1000.0 * kLog2 / (alpha * tol)) / alpha);
  const double tail = kLog2 * std::exp(-alpha * T) / alpha;
  QuadratureSpec inner = spec;
  inner.abs_tol = std::max(spec.abs_tol, tol / 100.0);
  auto est = integrate_cube<double>(
      q.dimension(),
      [&](std::span<const double> x) { return mode_laplace(h_of_value(q(x)), alpha, T); }, inner);
  est.error += tail;
  return est;
}

MonotonicityReport check_complete_monotonicity(const std::function<double(double)>& f, double lo, double hi,
                                               double step, int max_order, double noise) {
  if (!(step > 0.0)) throw Error(ErrorKind::invalid_argument, "grid step must be positive");
  if (max_order < 0 || max_order > 12) throw Error(ErrorKind::invalid_argument, "max_order must be in [0, 12]");
  if (!(hi > lo)) throw Error(ErrorKind::invalid_argument, "empty monotonicity range");
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  if (count <= static_cast<std::size_t>(max_order)) {
    throw Error(ErrorKind::invalid_argument, "grid too short for the requested order");
  }

  std::vector<double> grid(count), diff(count);
  for (std::size_t i = 0; i < count; ++i) {
    grid[i] = lo + static_cast<double>(i) * step;
    diff[i] = f(grid[i]);
  }

  MonotonicityReport report;
  report.lo = lo;
  report.hi = grid.back();
  report.step = step;
  report.noise = noise;
  report.pass = true;
  // diff holds Delta^n f / step^n, shrinking by one entry per order.
  for (int n = 0; n <= max_order; ++n) {
    if (n > 0) {
      for (std::size_t i = 0; i + n < count; ++i) diff[i] = (diff[i + 1] - diff[i]) / step;
    }
    MonotonicityOrder o;
    o.order = n;
    o.min_value = std::numeric_limits<double>::infinity();
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    for (std::size_t i = 0; i + n < count; ++i) {
      const double v = sign * diff[i];
      if (v < o.min_value) {
        o.min_value = v;
        o.argmin = grid[i];
      }
    }
    o.tolerance = noise * std::pow(2.0 / step, n);
    o.pass = o.min_value >= -o.tolerance;
    if (!o.pass && report.first_failure < 0) report.first_failure = n;
    report.pass = report.pass && o.pass;
    report.orders.push_back(o);
  }
  return report;
}

MonotonicityReport check_g_monotonicity(const Symbol& q, double lo, double hi, double step, int max_order,
                                        const QuadratureSpec& spec) {
  double noise = 0.0;
  auto f = [&](double a) {
    const auto g = g_function(q, a, spec, GForm::integral);
    noise = std::max(noise, g.quad_error + 4.0 * std::numeric_limits<double>::epsilon() * std::abs(g.value));
    return g.value;
  };
  // Evaluate once to learn the noise level, then rerun the differences with it.
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i) values[i] = f(lo + static_cast<double>(i) * step);
  auto lookup = [&](double a) {
    const auto i = static_cast<std::size_t>(std::llround((a - lo) / step));
    return values.at(i);
  };
  return check_complete_monotonicity(lookup, lo, hi, step, max_order, noise);
}

}  // namespace qfent
