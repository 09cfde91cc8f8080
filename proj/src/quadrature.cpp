#include "qfent/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>

namespace qfent {

void QuadratureSpec::validate() const {
  if (!(abs_tol > 0.0)) throw Error(ErrorKind::invalid_argument, "quadrature tolerance must be positive");
  if (initial_panels < 1) throw Error(ErrorKind::invalid_argument, "initial_panels must be >= 1");
  if (max_depth < 0) throw Error(ErrorKind::invalid_argument, "max_depth must be >= 0");
  if (max_panels < static_cast<std::size_t>(initial_panels)) {
    throw Error(ErrorKind::invalid_argument, "max_panels smaller than initial_panels");
  }
}

namespace detail {
namespace {

struct Rule {
  std::array<double, 16> x{};
  std::array<double, 16> w{};
};

// Boost stores the non-negative half of the symmetric rule.
Rule build_rule() {
  using G = boost::math::quadrature::gauss<double, 16>;
  const auto& xs = G::abscissa();
  const auto& ws = G::weights();
  Rule r;
  std::size_t k = 0;
  for (std::size_t i = xs.size(); i-- > 0;) {
    r.x[k] = -xs[i];
    r.w[k] = ws[i];
    ++k;
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    r.x[k] = xs[i];
    r.w[k] = ws[i];
    ++k;
  }
  return r;
}

const Rule& rule() {
  static const Rule r = build_rule();
  return r;
}

}  // namespace

const std::array<double, 16>& gl_nodes() { return rule().x; }
const std::array<double, 16>& gl_weights() { return rule().w; }

}  // namespace detail
}  // namespace qfent
