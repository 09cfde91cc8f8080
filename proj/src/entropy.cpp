#include "qfent/entropy.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace qfent {

Order Order::of(double alpha) {
  if (std::isnan(alpha) || !(alpha > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "entropy order must be positive");
  }
  if (std::isinf(alpha)) return infinity();
  if (alpha == 1.0) return von_neumann();
  return Order(Kind::finite, alpha);
}

Order Order::infinity() { return Order(Kind::infinite, std::numeric_limits<double>::infinity()); }

Order Order::parse(std::string_view token) {
  std::string t(token);
  t.erase(0, t.find_first_not_of(" \t"));
  t.erase(t.find_last_not_of(" \t") + 1);
  if (t == "inf" || t == "infinity" || t == "Inf" || t == "INF") return infinity();
  double v = 0.0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc{} || p != t.data() + t.size()) {
    throw Error(ErrorKind::invalid_argument, "cannot parse entropy order '" + t + "'");
  }
  return of(v);
}

std::string Order::to_string() const {
  switch (kind_) {
    case Kind::infinite: return "inf";
    case Kind::von_neumann: return "1";
    default: break;
  }
  std::ostringstream os;
  os.precision(17);
  os << value_;
  return os.str();
}

double log_min_ratio(double q) {
  const double m = std::min(q, 1.0 - q);
  if (m <= 0.0) return -std::numeric_limits<double>::infinity();
  const double big = 1.0 - m;
  // log(m / (1-m)); near q = 1/2 through log1p of the small gap 1 - 2m.
  if (m > 0.25) return std::log1p(-(1.0 - 2.0 * m) / big);
  return std::log(m) - std::log1p(-m);
}

double h_of_value(double q) { return -log_min_ratio(q); }

double renyi_term(double q, const Order& alpha) {
  const double m = std::min(q, 1.0 - q);
  if (m <= 0.0) return 0.0;
  const double log_big = std::log1p(-m);
  switch (alpha.kind()) {
    case Order::Kind::von_neumann:
      return -(m * std::log(m) + (1.0 - m) * log_big);
    case Order::Kind::infinite:
      return -log_big;
    case Order::Kind::finite:
      break;
  }
  const double a = alpha.value();
  // q^a + (1-q)^a = M^a (1 + r^a) with M = max, r = min/max.
  const double ra = std::exp(a * log_min_ratio(q));
  return -(a * log_big + std::log1p(ra)) / (a - 1.0);
}

double g_term(double q, double alpha) {
  const double lr = log_min_ratio(q);
  if (std::isinf(lr)) return 0.0;
  return std::log1p(std::exp(alpha * lr)) / alpha;
}

EntropyValue renyi_density(const Symbol& q, const Order& alpha, const QuadratureSpec& spec) {
  auto est = integrate_cube<double>(
      q.dimension(), [&](std::span<const double> x) { return renyi_term(q(x), alpha); }, spec);
  return {alpha, est.value, est.error};
}

double h_function(const Symbol& q, std::span<const double> x) { return h_of_value(q(x)); }

EntropyValue g_function(const Symbol& q, double alpha, const QuadratureSpec& spec, GForm form) {
  const Order order = Order::of(alpha);
  if (order.kind() == Order::Kind::infinite) throw Error(ErrorKind::invalid_argument, "g needs a finite order");
  if (form == GForm::integral) {
    auto est = integrate_cube<double>(
        q.dimension(), [&](std::span<const double> x) { return g_term(q(x), alpha); }, spec);
    return {order, est.value, est.error};
  }
  const auto s_inf = renyi_density(q, Order::infinity(), spec);
  if (order.kind() == Order::Kind::von_neumann) return {order, s_inf.value, s_inf.quad_error};
  const double w = (alpha - 1.0) / alpha;
  const auto s_a = renyi_density(q, order, spec);
  return {order, s_inf.value - w * s_a.value, s_inf.quad_error + std::abs(w) * s_a.quad_error};
}

GConsistency g_consistency(const Symbol& q, double alpha, const QuadratureSpec& spec) {
  GConsistency c;
  c.alpha = alpha;
  c.defining = g_function(q, alpha, spec, GForm::defining);
  c.integral = g_function(q, alpha, spec, GForm::integral);
  c.difference = std::abs(c.defining.value - c.integral.value);
  const double scale = std::max({1.0, std::abs(c.defining.value), std::abs(c.integral.value)});
  c.tolerance = c.defining.quad_error + c.integral.quad_error + 64.0 * std::numeric_limits<double>::epsilon() * scale;
  c.consistent = c.difference <= c.tolerance;
  return c;
}

}  // namespace qfent
