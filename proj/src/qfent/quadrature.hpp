#pragma once

// Adaptive Gauss-Legendre quadrature on [a,b] and on the unit cube [0,1]^d.
//
// Each panel carries the 16-point rule on the whole panel and on its two
// halves; |whole - halves| is the panel's error estimate and the halves are
// what gets summed. The panel with the largest estimate is bisected until the
// total estimate drops below the absolute tolerance. Hitting the depth or
// panel cap throws Error(ErrorKind::quadrature) carrying the estimate.
//
// The value type V is either double or an Eigen column vector (used for
// computing many Fourier coefficients over one mesh).

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <queue>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include <Eigen/Core>

#include "qfent/error.hpp"

namespace qfent {

struct QuadratureSpec {
  int initial_panels = 4;
  double abs_tol = 1e-10;
  int max_depth = 48;
  std::size_t max_panels = std::size_t{1} << 16;

  void validate() const;
};

template <class V>
struct Estimate {
  V value{};
  double error = 0.0;
};

namespace detail {

/// 16-point Gauss-Legendre nodes/weights on [-1,1], full (not half) arrays.
const std::array<double, 16>& gl_nodes();
const std::array<double, 16>& gl_weights();

inline double magnitude(double v) { return std::abs(v); }

template <class Derived>
double magnitude(const Eigen::MatrixBase<Derived>& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

inline bool all_finite(double v) { return std::isfinite(v); }

template <class Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& v) {
  return v.allFinite();
}

template <class T>
struct is_estimate : std::false_type {};
template <class V>
struct is_estimate<Estimate<V>> : std::true_type {};

// Gauss rule on [a,b]. Inner error estimates (nested integrals) are summed
// with the same weights.
template <class V, class F>
Estimate<V> gauss16(F& f, double a, double b) {
  const auto& x = gl_nodes();
  const auto& w = gl_weights();
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  Estimate<V> out;
  for (std::size_t i = 0; i < 16; ++i) {
    const double t = mid + half * x[i];
    auto r = f(t);
    V val;
    double inner = 0.0;
    if constexpr (is_estimate<decltype(r)>::value) {
      val = std::move(r.value);
      inner = r.error;
    } else {
      val = std::move(r);
    }
    if (!all_finite(val)) {
      throw Error(ErrorKind::range_violation, "non-finite integrand at t = " + std::to_string(t));
    }
    if (i == 0) {
      out.value = (w[i] * half) * val;
    } else {
      out.value += (w[i] * half) * val;
    }
    out.error += w[i] * half * inner;
  }
  return out;
}

}  // namespace detail

/// Adaptive integral of f over [a,b]. f returns V or Estimate<V>.
template <class V, class F>
Estimate<V> integrate(F&& f, double a, double b, const QuadratureSpec& spec) {
  spec.validate();
  struct Panel {
    double a, b;
    int depth;
    V coarse, left, right;
    double err, inner;
  };
  std::vector<Panel> panels;
  auto make_panel = [&](double lo, double hi, int depth, V coarse) {
    const double m = 0.5 * (lo + hi);
    auto l = detail::gauss16<V>(f, lo, m);
    auto r = detail::gauss16<V>(f, m, hi);
    V fine = l.value + r.value;
    const double err = detail::magnitude(V(coarse - fine));
    return Panel{lo, hi, depth, std::move(coarse), std::move(l.value), std::move(r.value), err,
                 l.error + r.error};
  };

  auto cmp = [&](std::size_t i, std::size_t j) { return panels[i].err < panels[j].err; };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(cmp)> worst(cmp);

  double total_err = 0.0;
  const int n0 = spec.initial_panels;
  for (int k = 0; k < n0; ++k) {
    const double lo = a + (b - a) * k / n0;
    const double hi = (k + 1 == n0) ? b : a + (b - a) * (k + 1) / n0;
    auto whole = detail::gauss16<V>(f, lo, hi);
    panels.push_back(make_panel(lo, hi, 0, std::move(whole.value)));
    total_err += panels.back().err;
    worst.push(panels.size() - 1);
  }

  // Panels that have been split are marked by err < 0 and skipped in sums.
  while (total_err > spec.abs_tol) {
    const std::size_t idx = worst.top();
    worst.pop();
    Panel p = panels[idx];
    if (p.depth >= spec.max_depth || panels.size() + 2 > spec.max_panels) {
      char msg[128];
      std::snprintf(msg, sizeof msg, "adaptive quadrature did not reach tolerance %.3g (estimate %.3g)",
                    spec.abs_tol, total_err);
      throw Error(ErrorKind::quadrature, msg, total_err);
    }
    const double m = 0.5 * (p.a + p.b);
    total_err -= p.err;
    panels[idx].err = -1.0;
    panels.push_back(make_panel(p.a, m, p.depth + 1, std::move(p.left)));
    total_err += panels.back().err;
    worst.push(panels.size() - 1);
    panels.push_back(make_panel(m, p.b, p.depth + 1, std::move(p.right)));
    total_err += panels.back().err;
    worst.push(panels.size() - 1);
    // Guard against drift in the running sum.
    if (total_err <= spec.abs_tol) {
      total_err = 0.0;
      for (const auto& q : panels) {
        if (q.err >= 0.0) total_err += q.err;
      }
    }
  }

  Estimate<V> out;
  bool first = true;
  double disc = 0.0, inner = 0.0;
  for (const auto& p : panels) {
    if (p.err < 0.0) continue;
    if (first) {
      out.value = p.left + p.right;
      first = false;
    } else {
      out.value += p.left + p.right;
    }
    disc += p.err;
    inner += p.inner;
  }
  out.error = disc + inner;
  return out;
}

namespace detail {

template <class V, class F>
Estimate<V> integrate_cube_level(int level, int dim, std::array<double, 3>& x, F& f,
                                 const QuadratureSpec& spec) {
  if (level == dim - 1) {
    return integrate<V>(
        [&](double t) {
          x[level] = t;
          return f(std::span<const double>(x.data(), static_cast<std::size_t>(dim)));
        },
        0.0, 1.0, spec);
  }
  return integrate<V>(
      [&](double t) {
        x[level] = t;
        return integrate_cube_level<V>(level + 1, dim, x, f, spec);
      },
      0.0, 1.0, spec);
}

}  // namespace detail

/// Iterated adaptive integral over [0,1]^dim, dim in {1,2,3}. The tolerance is
/// split evenly across the nesting levels.
template <class V, class F>
Estimate<V> integrate_cube(int dim, F&& f, const QuadratureSpec& spec) {
  if (dim < 1 || dim > 3) {
    throw Error(ErrorKind::invalid_argument, "integration dimension must be 1, 2 or 3");
  }
  QuadratureSpec level_spec = spec;
  level_spec.abs_tol = spec.abs_tol / dim;
  std::array<double, 3> x{};
  return detail::integrate_cube_level<V>(0, dim, x, f, level_spec);
}

}  // namespace qfent
