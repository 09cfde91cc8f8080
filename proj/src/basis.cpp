#include <cmath>

#include "qfent/approx.hpp"
#include "qfent/error.hpp"

namespace qfent {

namespace detail {

long double phi(long double z) {
  if (std::abs(z) < 1e-4L) return 1.0L - z / 2.0L + z * z / 6.0L - z * z * z / 24.0L;
  return -std::expm1(-z) / z;
}

long double basis_shape(long double a, long double t) { return a * phi((a - 1.0L) * t); }

}  // namespace detail

double eval_basis(double alpha, double t) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw Error(ErrorKind::invalid_argument, "basis order must be positive");
  if (std::isnan(t) || t < 0.0) throw Error(ErrorKind::invalid_argument, "basis argument must be >= 0");
  if (alpha == 1.0) return t * std::exp(-t);
  if (t * std::max(1.0, alpha) < 700.0) {
    const long double tl = t;
    return static_cast<double>(tl * std::exp(-tl) * detail::basis_shape(alpha, tl));
  }
  return alpha / (alpha - 1.0) * (std::exp(-t) - std::exp(-alpha * t));
}

double basis_ratio(double m, double alpha, double t) {
  if (!(m > 0.0) || !(alpha > 0.0)) throw Error(ErrorKind::invalid_argument, "basis orders must be positive");
  if (std::isnan(t) || t < 0.0) throw Error(ErrorKind::invalid_argument, "basis argument must be >= 0");
  return static_cast<double>(detail::basis_shape(m, t) / detail::basis_shape(alpha, t));
}

}  // namespace qfent
