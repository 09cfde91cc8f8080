#include "qfent/approx.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "qfent/remez.hpp"

namespace qfent {

namespace {

using remez::Real;

constexpr double kLog2 = std::numbers::ln2;
constexpr int kMaxTerms = 10;

void check_terms(int n) {
  if (n < 1 || n > kMaxTerms) {
    throw Error(ErrorKind::invalid_argument, "number of Renyi terms must be in [1, 10] (got " + std::to_string(n) + ")");
  }
}

remez::Options remez_options(const SolverOptions& opt) {
  remez::Options r;
  r.grid_points = opt.grid_points;
  r.max_iterations = opt.max_iterations;
  r.level_tol = opt.level_tol;
  return r;
}

remez::Problem plain_problem(int n, double cap) {
  remez::Problem p;
  p.n = n;
  p.lo = 0.0;
  p.hi = cap;
  p.lo_endpoint_active = false;
  p.eval = [n](Real t, Real& target, std::span<Real> basis) {
    const Real w = t * std::exp(-t);
    target = w;
    for (int i = 0; i < n; ++i) basis[static_cast<std::size_t>(i)] = w * detail::basis_shape(i + 2, t);
  };
  return p;
}

remez::Problem controlled_problem(int n, double alpha, double cap) {
  remez::Problem p;
  p.n = n;
  p.lo = 0.0;
  p.hi = cap;
  p.lo_endpoint_active = true;
  const Real a = alpha;
  p.eval = [n, a](Real t, Real& target, std::span<Real> basis) {
    const Real inv = 1.0L / detail::basis_shape(a, t);
    target = inv;
    for (int i = 0; i < n; ++i) basis[static_cast<std::size_t>(i)] = detail::basis_shape(i + 2, t) * inv;
  };
  return p;
}

double controlled_cap(const SolverOptions& opt, double alpha) { return opt.domain_cap / std::min(1.0, 1.0 - alpha); }

// Every term of the residual decays monotonically past the cap.
double tail_bound(const remez::Problem& p, std::span<const double> coeffs) {
  std::vector<Real> row(static_cast<std::size_t>(p.n));
  Real f = 0;
  p.eval(p.hi, f, row);
  Real b = std::abs(f);
  for (int i = 0; i < p.n; ++i) b += std::abs(static_cast<Real>(coeffs[static_cast<std::size_t>(i)]) * row[static_cast<std::size_t>(i)]);
  return static_cast<double>(b);
}

ApproxScheme from_solution(SchemeKind kind, int n, const remez::Solution& sol, const remez::Problem& p) {
  ApproxScheme s;
  s.kind = kind;
  s.n = n;
  s.gamma = sol.coeffs;
  s.residual = sol.level;
  s.extrema_t = sol.refs;
  s.extrema_r = sol.ref_values;
  s.spread = sol.spread;
  s.condition = sol.rcond > 0.0 ? 1.0 / sol.rcond : std::numeric_limits<double>::infinity();
  s.domain_cap = p.hi;
  s.tail_bound = tail_bound(p, sol.coeffs);
  s.iterations = sol.iterations;
  s.method = sol.method;
  return s;
}

}  // namespace

std::string to_string(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::plain: return "plain";
    case SchemeKind::shifted: return "shifted";
    case SchemeKind::controlled: return "controlled";
  }
  return "?";
}

SchemeKind parse_scheme_kind(const std::string& name) {
  if (name == "plain") return SchemeKind::plain;
  if (name == "shifted") return SchemeKind::shifted;
  if (name == "controlled") return SchemeKind::controlled;
  throw Error(ErrorKind::invalid_argument, "unknown scheme kind '" + name + "'");
}

ApproxScheme solve_plain(int n, const SolverOptions& opt) {
  check_terms(n);
  const auto p = plain_problem(n, opt.domain_cap);
  return from_solution(SchemeKind::plain, n, remez::solve(p, remez_options(opt)), p);
}

ApproxScheme solve_shifted(int n, const SolverOptions& opt) {
  ApproxScheme s = solve_plain(n, opt);
  s.kind = SchemeKind::shifted;
  double sum = 0.0;
  for (double g : s.gamma) sum += g;
  s.c0 = 1.0 - sum;
  return s;
}

ApproxScheme solve_controlled_at(int n, double alpha, const SolverOptions& opt, std::span<const double> warm_refs) {
  check_terms(n);
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::invalid_argument, "fractional order must lie in (0,1)");
  const auto p = controlled_problem(n, alpha, controlled_cap(opt, alpha));
  ApproxScheme s = from_solution(SchemeKind::controlled, n, remez::solve(p, remez_options(opt), warm_refs), p);
  s.alpha = alpha;
  s.certified_bound = s.residual * kLog2;
  return s;
}

ApproxScheme solve_controlled(int n, const SolverOptions& opt) {
  check_terms(n);
  if (!(opt.alpha_lo > 0.0 && opt.alpha_hi < 1.0 && opt.alpha_lo < opt.alpha_hi)) {
    throw Error(ErrorKind::invalid_argument, "alpha search bracket must lie inside (0,1)");
  }
  std::map<double, ApproxScheme> solved;
  std::vector<double> last_refs;
  auto inner = [&](double a) -> double {
    if (auto it = solved.find(a); it != solved.end()) return it->second.residual;
    // Warm start from the closest order solved so far.
    std::span<const double> warm;
    double best_gap = std::numeric_limits<double>::infinity();
    for (const auto& [b, s] : solved) {
      if (std::abs(b - a) < best_gap) {
        best_gap = std::abs(b - a);
        warm = s.extrema_t;
      }
    }
    try {
      auto s = solve_controlled_at(n, a, opt, warm);
      const double r = s.residual;
      solved.emplace(a, std::move(s));
      return r;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::convergence) throw;
      return std::numeric_limits<double>::infinity();
    }
  };

  // Coarse scan to bracket the minimum, then golden section.
  const int steps = std::max(4, static_cast<int>(std::round((opt.alpha_hi - opt.alpha_lo) / 0.05)));
  std::vector<double> grid(static_cast<std::size_t>(steps) + 1);
  std::vector<double> vals(grid.size());
  for (int k = 0; k <= steps; ++k) {
    grid[static_cast<std::size_t>(k)] = opt.alpha_lo + (opt.alpha_hi - opt.alpha_lo) * k / steps;
    vals[static_cast<std::size_t>(k)] = inner(grid[static_cast<std::size_t>(k)]);
  }
  const auto kmin = static_cast<std::size_t>(std::min_element(vals.begin(), vals.end()) - vals.begin());
  if (!std::isfinite(vals[kmin])) {
    throw Error(ErrorKind::convergence, "controlled scheme: inner problem failed on the whole alpha bracket");
  }
  double a = grid[kmin == 0 ? 0 : kmin - 1];
  double b = grid[std::min(kmin + 1, grid.size() - 1)];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = inner(c), fd = inner(d);
  while (b - a > opt.alpha_tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = inner(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = inner(d);
    }
  }
  auto best = std::min_element(solved.begin(), solved.end(),
                               [](const auto& x, const auto& y) { return x.second.residual < y.second.residual; });
  return best->second;
}

ApproxScheme solve_scheme(SchemeKind kind, int n, const SolverOptions& opt) {
  switch (kind) {
    case SchemeKind::plain: return solve_plain(n, opt);
    case SchemeKind::shifted: return solve_shifted(n, opt);
    case SchemeKind::controlled: return solve_controlled(n, opt);
  }
  throw Error(ErrorKind::invalid_argument, "unknown scheme kind");
}

double scheme_residual(const ApproxScheme& s, double t) {
  long double r = 1.0L;
  for (int i = 0; i < s.n; ++i) r -= s.gamma[static_cast<std::size_t>(i)] * detail::basis_shape(i + 2, t);
  return static_cast<double>(r * t * std::exp(-static_cast<long double>(t)));
}

double scheme_normed_residual(const ApproxScheme& s, double t) {
  if (s.kind != SchemeKind::controlled) return scheme_residual(s, t);
  const long double a = *s.alpha;
  long double r = 1.0L;
  for (int i = 0; i < s.n; ++i) r -= s.gamma[static_cast<std::size_t>(i)] * detail::basis_shape(i + 2, t);
  return static_cast<double>(r / detail::basis_shape(a, t));
}

std::vector<ResidualSample> residual_profile(const ApproxScheme& s, std::span<const double> t_grid) {
  std::vector<ResidualSample> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) {
    if (std::isnan(t) || t < 0.0) throw Error(ErrorKind::invalid_argument, "profile grid needs t >= 0");
    ResidualSample r;
    r.t = t;
    r.raw = scheme_residual(s, t);
    r.normed = scheme_normed_residual(s, t);
    r.scaled = s.kind == SchemeKind::controlled ? r.normed * kLog2 : r.raw;
    out.push_back(r);
  }
  return out;
}

EquioscillationCertificate certify_equioscillation(const ApproxScheme& s, int points, double rel_tol) {
  if (points < 16) throw Error(ErrorKind::invalid_argument, "certificate needs at least 16 points");
  const double cap = s.domain_cap > 0.0 ? s.domain_cap : 40.0;
  std::vector<double> v(static_cast<std::size_t>(points) + 1);
  for (int k = 0; k <= points; ++k) v[static_cast<std::size_t>(k)] = scheme_normed_residual(s, cap * k / points);

  struct Peak {
    double t, r;
  };
  std::vector<Peak> peaks;
  EquioscillationCertificate c;
  for (double x : v) c.max_abs = std::max(c.max_abs, std::abs(x));
  if (s.kind == SchemeKind::controlled && v[0] != 0.0 && std::abs(v[0]) >= std::abs(v[1]) &&
      std::signbit(v[0]) == std::signbit(v[1])) {
    peaks.push_back({0.0, v[0]});
  }
  const double h = cap / points;
  for (std::size_t k = 1; k + 1 < v.size(); ++k) {
    const bool is_max = v[k] > 0 && v[k] >= v[k - 1] && v[k] >= v[k + 1];
    const bool is_min = v[k] < 0 && v[k] <= v[k - 1] && v[k] <= v[k + 1];
    if (!is_max && !is_min) continue;
    // Vertex of the parabola through the three samples.
    const double curv = v[k + 1] - 2.0 * v[k] + v[k - 1];
    double peak = v[k], tp = h * static_cast<double>(k);
    if (curv != 0.0) {
      const double slope = v[k + 1] - v[k - 1];
      peak = v[k] - slope * slope / (8.0 * curv);
      tp -= h * slope / (2.0 * curv);
    }
    peaks.push_back({tp, peak});
    c.max_abs = std::max(c.max_abs, std::abs(peak));
  }

  std::vector<Peak> alt;
  for (const auto& p : peaks) {
    if (std::abs(p.r) < (1.0 - rel_tol) * c.max_abs) continue;
    if (!alt.empty() && std::signbit(alt.back().r) == std::signbit(p.r)) {
      if (std::abs(p.r) > std::abs(alt.back().r)) alt.back() = p;
    } else {
      alt.push_back(p);
    }
  }
  c.alternations = static_cast<int>(alt.size());
  c.min_peak = c.max_abs;
  for (const auto& p : alt) {
    c.min_peak = std::min(c.min_peak, std::abs(p.r));
    c.peaks_t.push_back(p.t);
  }
  c.spread = c.max_abs > 0.0 ? (c.max_abs - c.min_peak) / c.max_abs : 0.0;
  c.pass = c.alternations >= s.n + 1 && c.spread <= rel_tol;
  return c;
}

SchemeApplication apply_scheme(const ApproxScheme& s, const Symbol& q, const QuadratureSpec& spec) {
  if (static_cast<int>(s.gamma.size()) != s.n || s.n < 1) {
    throw Error(ErrorKind::invalid_argument, "scheme is not solved");
  }
  SchemeApplication app;
  const auto vn = renyi_density(q, Order::von_neumann(), spec);
  app.true_value = vn.value;
  app.quad_error = vn.quad_error;
  app.estimate = s.c0 ? *s.c0 * kLog2 : 0.0;
  for (int i = 0; i < s.n; ++i) {
    const auto e = renyi_density(q, Order::of(i + 2.0), spec);
    const double g = s.gamma[static_cast<std::size_t>(i)];
    app.estimate += g * e.value;
    app.quad_error += std::abs(g) * e.quad_error;
    app.renyi.push_back(e);
  }
  app.true_error = std::abs(app.estimate - app.true_value);
  if (s.certified_bound) {
    app.bound = s.certified_bound;
    app.within_bound = app.true_error <= *s.certified_bound + 10.0 * app.quad_error;
  }
  return app;
}

}  // namespace qfent
