#include "qfent/remez.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "qfent/error.hpp"

namespace qfent::remez {

namespace {

using MatrixR = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
using VectorR = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

struct Grid {
  std::vector<Real> t;
  MatrixR basis;  // rows: grid points
  VectorR target;
};

// Quadratic spacing: the extrema of every residual in this package cluster
// near the origin.
Grid make_grid(const Problem& p, int points) {
  Grid g;
  const int N = std::max(points, 4 * (p.n + 2));
  g.t.resize(static_cast<std::size_t>(N) + 1);
  g.basis.resize(N + 1, p.n);
  g.target.resize(N + 1);
  std::vector<Real> row(static_cast<std::size_t>(p.n));
  for (int k = 0; k <= N; ++k) {
    const Real u = static_cast<Real>(k) / N;
    const Real t = p.lo + (p.hi - p.lo) * u * u;
    g.t[static_cast<std::size_t>(k)] = t;
    Real f = 0;
    p.eval(t, f, row);
    g.target(k) = f;
    for (int i = 0; i < p.n; ++i) g.basis(k, i) = row[static_cast<std::size_t>(i)];
  }
  return g;
}

struct Extremum {
  Real t;
  Real r;
};

Real golden_max(const std::function<Real(Real)>& f, Real a, Real b) {
  const Real inv_phi = (std::sqrt(5.0L) - 1.0L) / 2.0L;
  Real c = b - inv_phi * (b - a);
  Real d = a + inv_phi * (b - a);
  Real fc = f(c), fd = f(d);
  for (int it = 0; it < 200 && (b - a) > 1e-15L * (1.0L + std::abs(a)); ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return (fc > fd) ? c : d;
}

std::vector<Extremum> find_extrema(const Problem& p, std::span<const double> coeffs, const Grid& g, Real* grid_max) {
  VectorR c(p.n);
  for (int i = 0; i < p.n; ++i) c(i) = coeffs[static_cast<std::size_t>(i)];
  const VectorR r = g.target - g.basis * c;
  const Eigen::Index N = r.size() - 1;
  if (grid_max) *grid_max = r.cwiseAbs().maxCoeff();

  std::vector<Extremum> out;
  if (p.lo_endpoint_active && r(0) != 0 && (r(0) > 0 ? r(0) >= r(1) : r(0) <= r(1))) {
    out.push_back({g.t[0], r(0)});
  }
  for (Eigen::Index k = 1; k < N; ++k) {
    const bool is_max = r(k) > 0 && r(k) >= r(k - 1) && r(k) >= r(k + 1);
    const bool is_min = r(k) < 0 && r(k) <= r(k - 1) && r(k) <= r(k + 1);
    if (!is_max && !is_min) continue;
    const Real s = is_max ? 1.0L : -1.0L;
    auto f = [&](Real t) { return s * residual(p, coeffs, t); };
    const Real a = g.t[static_cast<std::size_t>(k - 1)];
    const Real b = g.t[static_cast<std::size_t>(k + 1)];
    Real t = golden_max(f, a, b);
    Real v = residual(p, coeffs, t);
    if (s * v < s * r(k)) {
      t = g.t[static_cast<std::size_t>(k)];
      v = r(k);
    }
    out.push_back({t, v});
  }
  std::sort(out.begin(), out.end(), [](const Extremum& a, const Extremum& b) { return a.t < b.t; });
  return out;
}

std::vector<Extremum> alternating(const std::vector<Extremum>& ext) {
  std::vector<Extremum> alt;
  for (const auto& e : ext) {
    if (!alt.empty() && std::signbit(alt.back().r) == std::signbit(e.r)) {
      if (std::abs(e.r) > std::abs(alt.back().r)) alt.back() = e;
    } else {
      alt.push_back(e);
    }
  }
  return alt;
}

// n+1 consecutive alternating extrema containing the largest one, with the
// largest smallest magnitude.
std::vector<Extremum> choose_window(const std::vector<Extremum>& alt, int n) {
  const std::size_t m = static_cast<std::size_t>(n) + 1;
  std::size_t imax = 0;
  for (std::size_t i = 1; i < alt.size(); ++i) {
    if (std::abs(alt[i].r) > std::abs(alt[imax].r)) imax = i;
  }
  std::size_t best = 0;
  Real best_min = -1;
  for (std::size_t s = 0; s + m <= alt.size(); ++s) {
    if (imax < s || imax >= s + m) continue;
    Real mn = std::numeric_limits<Real>::infinity();
    for (std::size_t i = s; i < s + m; ++i) mn = std::min(mn, std::abs(alt[i].r));
    if (mn > best_min) {
      best_min = mn;
      best = s;
    }
  }
  return {alt.begin() + static_cast<std::ptrdiff_t>(best), alt.begin() + static_cast<std::ptrdiff_t>(best + m)};
}

std::vector<double> lawson(const Problem& p, const Grid& g, int iterations) {
  const Eigen::Index rows = g.target.size();
  VectorR w = VectorR::Constant(rows, 1.0L / rows);
  VectorR c = VectorR::Zero(p.n);
  for (int it = 0; it < iterations; ++it) {
    const VectorR sw = w.cwiseSqrt();
    const MatrixR A = sw.asDiagonal() * g.basis;
    const VectorR b = sw.cwiseProduct(g.target);
    c = A.colPivHouseholderQr().solve(b);
    const VectorR r = (g.target - g.basis * c).cwiseAbs();
    w = w.cwiseProduct(r);
    const Real total = w.sum();
    if (!(total > 0) || !std::isfinite(static_cast<double>(total))) break;
    w /= total;
  }
  return std::vector<double>(c.data(), c.data() + c.size());
}

std::vector<double> refs_from(const Problem& p, std::span<const double> coeffs, const Grid& g) {
  const auto alt = alternating(find_extrema(p, coeffs, g, nullptr));
  if (static_cast<int>(alt.size()) < p.n + 1) return {};
  std::vector<double> refs;
  for (const auto& e : choose_window(alt, p.n)) refs.push_back(static_cast<double>(e.t));
  return refs;
}

bool usable_refs(const Problem& p, std::span<const double> refs) {
  if (static_cast<int>(refs.size()) != p.n + 1) return false;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    if (!(refs[i] >= p.lo && refs[i] <= p.hi)) return false;
    if (i > 0 && !(refs[i] > refs[i - 1])) return false;
  }
  return true;
}

struct Attempt {
  bool converged = false;
  Solution sol;
  std::size_t alternations = 0;
};

Attempt exchange(const Problem& p, const Options& opt, const Grid& g, std::vector<double> refs) {
  Attempt at;
  const int n = p.n;
  std::vector<Real> row(static_cast<std::size_t>(n));
  for (int it = 1; it <= opt.max_iterations; ++it) {
    MatrixR A(n + 1, n + 1);
    VectorR rhs(n + 1);
    for (int k = 0; k <= n; ++k) {
      Real f = 0;
      p.eval(refs[static_cast<std::size_t>(k)], f, row);
      for (int i = 0; i < n; ++i) A(k, i) = row[static_cast<std::size_t>(i)];
      A(k, n) = (k % 2 == 0) ? 1.0L : -1.0L;
      rhs(k) = f;
    }
    Eigen::PartialPivLU<MatrixR> lu(A);
    const VectorR x = lu.solve(rhs);
    if (!x.allFinite()) break;

    at.sol.coeffs.assign(x.data(), x.data() + n);
    at.sol.rcond = static_cast<double>(lu.rcond());
    at.sol.iterations = it;

    Real grid_max = 0;
    const auto alt = alternating(find_extrema(p, at.sol.coeffs, g, &grid_max));
    at.alternations = alt.size();
    if (static_cast<int>(alt.size()) < n + 1) break;
    const auto window = choose_window(alt, n);

    Real top = grid_max, low = std::numeric_limits<Real>::infinity();
    for (const auto& e : alt) top = std::max(top, std::abs(e.r));
    for (const auto& e : window) low = std::min(low, std::abs(e.r));

    at.sol.level = static_cast<double>(top);
    at.sol.spread = static_cast<double>((top - low) / top);
    at.sol.refs.clear();
    at.sol.ref_values.clear();
    for (const auto& e : window) {
      at.sol.refs.push_back(static_cast<double>(e.t));
      at.sol.ref_values.push_back(static_cast<double>(e.r));
    }
    if (at.sol.spread < opt.level_tol) {
      at.converged = true;
      return at;
    }
    refs = at.sol.refs;
  }
  return at;
}

}  // namespace

Real residual(const Problem& p, std::span<const double> coeffs, Real t) {
  std::vector<Real> row(static_cast<std::size_t>(p.n));
  Real f = 0;
  p.eval(t, f, row);
  Real r = f;
  for (int i = 0; i < p.n; ++i) r -= static_cast<Real>(coeffs[static_cast<std::size_t>(i)]) * row[static_cast<std::size_t>(i)];
  return r;
}

Solution solve(const Problem& p, const Options& opt, std::span<const double> initial_refs) {
  if (p.n < 1) throw Error(ErrorKind::invalid_argument, "minimax problem needs at least one basis function");
  if (!(p.hi > p.lo)) throw Error(ErrorKind::invalid_argument, "empty minimax domain");
  const Grid g = make_grid(p, opt.grid_points);

  std::vector<double> refs;
  if (usable_refs(p, initial_refs)) {
    refs.assign(initial_refs.begin(), initial_refs.end());
  } else {
    refs = refs_from(p, lawson(p, g, opt.lawson_iterations), g);
  }

  Attempt at;
  if (!refs.empty()) {
    at = exchange(p, opt, g, refs);
    if (at.converged) {
      at.sol.method = "exchange";
      return at.sol;
    }
  }
  // Fallback: reseed from a longer Lawson run.
  refs = refs_from(p, lawson(p, g, 8 * opt.lawson_iterations), g);
  if (!refs.empty()) {
    at = exchange(p, opt, g, refs);
    if (at.converged) {
      at.sol.method = "exchange+lawson";
      return at.sol;
    }
  }
  std::ostringstream os;
  os << "minimax exchange did not converge (n = " << p.n << ", last spread " << at.sol.spread << ", "
     << at.alternations << " alternating extrema, level " << at.sol.level << ")";
  throw Error(ErrorKind::convergence, os.str(), at.sol.spread);
}

}  // namespace qfent::remez
