#include "qfent/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <variant>

#include <Eigen/Eigenvalues>

namespace qfent {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_dimension(int d) {
  if (d < 1 || d > kMaxDimension) {
    throw Error(ErrorKind::invalid_argument, "symbol dimension must be 1, 2 or 3 (got " + std::to_string(d) + ")");
  }
}

std::size_t ipow(std::size_t base, int e) {
  std::size_t r = 1;
  for (int k = 0; k < e; ++k) r *= base;
  return r;
}

double wrap_unit(double x) {
  double r = x - std::floor(x);
  return r >= 1.0 ? 0.0 : r;
}

}  // namespace

// ---------------------------------------------------------------------------
// FourierTable

FourierTable::FourierTable(int dimension, int cutoff) : dim_(dimension), cutoff_(cutoff) {
  check_dimension(dimension);
  if (cutoff < 0) throw Error(ErrorKind::invalid_argument, "Fourier cutoff must be >= 0");
  data_.assign(ipow(static_cast<std::size_t>(2 * cutoff + 1), dimension), {0.0, 0.0});
}

bool FourierTable::contains(std::span<const int> j) const noexcept {
  if (static_cast<int>(j.size()) != dim_) return false;
  return std::all_of(j.begin(), j.end(), [&](int v) { return std::abs(v) <= cutoff_; });
}

std::size_t FourierTable::index(std::span<const int> j) const {
  if (!contains(j)) throw Error(ErrorKind::invalid_argument, "Fourier index outside table");
  const std::size_t side = 2 * cutoff_ + 1;
  std::size_t flat = 0;
  for (int v : j) flat = flat * side + static_cast<std::size_t>(v + cutoff_);
  return flat;
}

std::array<int, kMaxDimension> FourierTable::multi_index(std::size_t flat) const {
  const std::size_t side = 2 * cutoff_ + 1;
  std::array<int, kMaxDimension> j{};
  for (int k = dim_ - 1; k >= 0; --k) {
    j[k] = static_cast<int>(flat % side) - cutoff_;
    flat /= side;
  }
  return j;
}

std::complex<double> FourierTable::get(std::span<const int> j) const {
  if (!contains(j)) return {0.0, 0.0};
  return data_[index(j)];
}

double FourierTable::hermitian_defect() const {
  double worst = 0.0;
  for (std::size_t f = 0; f < data_.size(); ++f) {
    auto j = multi_index(f);
    std::array<int, kMaxDimension> neg{};
    for (int k = 0; k < dim_; ++k) neg[k] = -j[k];
    const auto other = data_[index(std::span<const int>(neg.data(), dim_))];
    worst = std::max(worst, std::abs(other - std::conj(data_[f])));
  }
  return worst;
}

double FourierTable::evaluate(std::span<const double> x) const {
  double acc = 0.0;
  for (std::size_t f = 0; f < data_.size(); ++f) {
    if (data_[f] == std::complex<double>{}) continue;
    auto j = multi_index(f);
    double phase = 0.0;
    for (int k = 0; k < dim_; ++k) phase += j[k] * x[k];
    acc += std::real(data_[f] * std::polar(1.0, kTwoPi * phase));
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Symbol

struct GridData {
  int n = 0;
  std::vector<double> samples;
};

struct Symbol::Impl {
  int dimension = 1;
  std::string label;
  std::variant<Callback, FourierTable, GridData> eval;
};

namespace {

double grid_interpolate(const GridData& g, int dim, std::span<const double> x) {
  std::array<int, kMaxDimension> lo{};
  std::array<double, kMaxDimension> frac{};
  for (int k = 0; k < dim; ++k) {
    const double s = wrap_unit(x[k]) * g.n;
    const double fl = std::floor(s);
    lo[k] = static_cast<int>(fl) % g.n;
    frac[k] = s - fl;
  }
  double acc = 0.0;
  for (int corner = 0; corner < (1 << dim); ++corner) {
    double w = 1.0;
    std::size_t flat = 0;
    for (int k = 0; k < dim; ++k) {
      const bool up = (corner >> k) & 1;
      w *= up ? frac[k] : 1.0 - frac[k];
      flat = flat * g.n + static_cast<std::size_t>((lo[k] + (up ? 1 : 0)) % g.n);
    }
    if (w != 0.0) acc += w * g.samples[flat];
  }
  return acc;
}

}  // namespace

Symbol Symbol::closed_form(int dimension, Callback f, std::string label) {
  check_dimension(dimension);
  if (!f) throw Error(ErrorKind::invalid_argument, "empty symbol callback");
  auto impl = std::make_shared<Impl>();
  impl->dimension = dimension;
  impl->label = std::move(label);
  impl->eval = std::move(f);
  return Symbol(std::move(impl));
}

Symbol Symbol::from_fourier(FourierTable table, std::string label) {
  const double defect = table.hermitian_defect();
  if (defect > 1e-12) {
    throw Error(ErrorKind::invalid_argument,
                "Fourier table violates Hermitian symmetry (defect " + std::to_string(defect) + ")");
  }
  auto impl = std::make_shared<Impl>();
  impl->dimension = table.dimension();
  impl->label = std::move(label);
  impl->eval = std::move(table);
  return Symbol(std::move(impl));
}

Symbol Symbol::from_grid(int dimension, int n_per_dim, std::vector<double> samples, std::string label) {
  check_dimension(dimension);
  if (n_per_dim < 1) throw Error(ErrorKind::invalid_argument, "grid needs at least one sample per dimension");
  if (samples.size() != ipow(static_cast<std::size_t>(n_per_dim), dimension)) {
    throw Error(ErrorKind::invalid_argument, "grid sample count must be n^d (got " +
                                                 std::to_string(samples.size()) + ")");
  }
  for (double v : samples) {
    if (!std::isfinite(v) || v < -kRangeGuard || v > 1.0 + kRangeGuard) {
      throw Error(ErrorKind::range_violation, "grid sample outside [0,1]: " + std::to_string(v));
    }
  }
  auto impl = std::make_shared<Impl>();
  impl->dimension = dimension;
  impl->label = std::move(label);
  impl->eval = GridData{n_per_dim, std::move(samples)};
  return Symbol(std::move(impl));
}

int Symbol::dimension() const noexcept { return impl_->dimension; }

SymbolKind Symbol::kind() const noexcept {
  switch (impl_->eval.index()) {
    case 0: return SymbolKind::closed_form;
    case 1: return SymbolKind::fourier_table;
    default: return SymbolKind::grid;
  }
}

const std::string& Symbol::label() const noexcept { return impl_->label; }

Symbol Symbol::with_label(std::string label) const {
  auto impl = std::make_shared<Impl>(*impl_);
  impl->label = std::move(label);
  return Symbol(std::move(impl));
}

double Symbol::raw(std::span<const double> x) const {
  const int d = impl_->dimension;
  if (static_cast<int>(x.size()) < d) throw Error(ErrorKind::invalid_argument, "point has too few coordinates");
  return std::visit(
      [&](const auto& e) -> double {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, Callback>) {
          return e(x.first(d));
        } else if constexpr (std::is_same_v<T, FourierTable>) {
          return e.evaluate(x);
        } else {
          return grid_interpolate(e, d, x);
        }
      },
      impl_->eval);
}

double Symbol::operator()(std::span<const double> x) const {
  const double v = raw(x);
  if (!std::isfinite(v) || v < -kRangeGuard || v > 1.0 + kRangeGuard) {
    std::ostringstream os;
    os << "symbol '" << impl_->label << "' value " << v << " outside [0,1]";
    throw Error(ErrorKind::range_violation, os.str());
  }
  return std::clamp(v, 0.0, 1.0);
}

const FourierTable* Symbol::fourier_table() const noexcept {
  return std::get_if<FourierTable>(&impl_->eval);
}

// ---------------------------------------------------------------------------
// Constructors

Symbol make_thermal_symbol(int dimension, Symbol::Callback dispersion, double beta, double mu, std::string label) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw Error(ErrorKind::invalid_argument, "beta must be positive");
  if (!std::isfinite(mu)) throw Error(ErrorKind::invalid_argument, "mu must be finite");
  auto f = [dispersion = std::move(dispersion), beta, mu](std::span<const double> x) {
    const double e = dispersion(x);
    if (!std::isfinite(e)) throw Error(ErrorKind::range_violation, "non-finite dispersion value");
    const double z = beta * (e - mu);
    if (z > 0.0) {
      const double ez = std::exp(-z);
      return ez / (1.0 + ez);
    }
    return 1.0 / (1.0 + std::exp(z));
  };
  return Symbol::closed_form(dimension, std::move(f), std::move(label));
}

Symbol make_cosine_thermal_symbol(int dimension, double beta, double mu, double hopping) {
  auto disp = [dimension, hopping](std::span<const double> x) {
    double e = 0.0;
    for (int k = 0; k < dimension; ++k) e += hopping * std::cos(kTwoPi * x[k]);
    return e;
  };
  std::ostringstream label;
  label << "cosine-thermal(d=" << dimension << ",beta=" << beta << ",mu=" << mu << ")";
  return make_thermal_symbol(dimension, disp, beta, mu, label.str());
}

Symbol make_constant_symbol(int dimension, double value) {
  if (!std::isfinite(value) || value < -kRangeGuard || value > 1.0 + kRangeGuard) {
    throw Error(ErrorKind::range_violation, "constant symbol value outside [0,1]");
  }
  std::ostringstream label;
  label << "constant(" << value << ")";
  return Symbol::closed_form(
      dimension, [value](std::span<const double>) { return value; }, label.str());
}

// ---------------------------------------------------------------------------
// Fourier coefficients

namespace {

// Level k integrates over x_k; the result is indexed (j_k, ..., j_{d-1}) with
// j_k slowest, so the outermost level yields the row-major table layout.
Estimate<Eigen::VectorXcd> fourier_level(const Symbol& q, int level, int cutoff, std::array<double, kMaxDimension>& x,
                                         const QuadratureSpec& spec) {
  const int d = q.dimension();
  const int side = 2 * cutoff + 1;
  auto integrand = [&](double t) -> Estimate<Eigen::VectorXcd> {
    x[level] = t;
    Estimate<Eigen::VectorXcd> inner;
    if (level == d - 1) {
      inner.value = Eigen::VectorXcd::Ones(1) * q(std::span<const double>(x.data(), d));
    } else {
      inner = fourier_level(q, level + 1, cutoff, x, spec);
    }
    const Eigen::Index m = inner.value.size();
    Eigen::VectorXcd out(side * m);
    for (int j = -cutoff; j <= cutoff; ++j) {
      const std::complex<double> phase = std::polar(1.0, -kTwoPi * j * t);
      out.segment((j + cutoff) * m, m) = phase * inner.value;
    }
    return {std::move(out), inner.error};
  };
  return integrate<Eigen::VectorXcd>(integrand, 0.0, 1.0, spec);
}

}  // namespace

FourierCoefficients fourier_coefficients(const Symbol& q, int cutoff, const QuadratureSpec& spec) {
  if (cutoff < 0) throw Error(ErrorKind::invalid_argument, "Fourier cutoff must be >= 0");
  QuadratureSpec level_spec = spec;
  level_spec.abs_tol = spec.abs_tol / q.dimension();
  // Panels narrower than one period of the fastest mode.
  level_spec.initial_panels = std::max(spec.initial_panels, cutoff + 1);
  std::array<double, kMaxDimension> x{};
  auto est = fourier_level(q, 0, cutoff, x, level_spec);

  FourierCoefficients out{FourierTable(q.dimension(), cutoff), est.error};
  for (std::size_t f = 0; f < out.table.size(); ++f) out.table.data()[f] = est.value[static_cast<Eigen::Index>(f)];
  return out;
}

// ---------------------------------------------------------------------------
// Toeplitz restriction

namespace {

std::array<int, kMaxDimension> site_of(std::size_t s, int L, int d) {
  std::array<int, kMaxDimension> n{};
  for (int k = d - 1; k >= 0; --k) {
    n[k] = static_cast<int>(s % static_cast<std::size_t>(L));
    s /= static_cast<std::size_t>(L);
  }
  return n;
}

std::size_t box_sites(int L, int d) {
  if (L < 1) throw Error(ErrorKind::invalid_argument, "box side L must be >= 1");
  const std::size_t N = ipow(static_cast<std::size_t>(L), d);
  if (N > 4096) throw Error(ErrorKind::invalid_argument, "box has more than 4096 sites");
  return N;
}

void diagonalise(ToeplitzRestriction& out) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(out.matrix, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::eigensolver, "Hermitian eigensolver failed");
  const auto& ev = solver.eigenvalues();
  out.eigenvalues.resize(static_cast<std::size_t>(ev.size()));
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    const double v = ev[i];
    if (!(v >= -kRangeGuard && v <= 1.0 + kRangeGuard)) {
      throw Error(ErrorKind::range_violation,
                  "restricted symbol has eigenvalue " + std::to_string(v) + " outside [0,1]");
    }
    const double c = std::clamp(v, 0.0, 1.0);
    out.max_clamp = std::max(out.max_clamp, std::abs(c - v));
    out.eigenvalues[static_cast<std::size_t>(i)] = c;
  }
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end());
}

}  // namespace

ToeplitzRestriction restrict_table_to_box(const FourierTable& table, int L) {
  const int d = table.dimension();
  const std::size_t N = box_sites(L, d);
  ToeplitzRestriction out;
  out.dimension = d;
  out.L = L;
  out.boundary = Boundary::open;
  out.matrix.resize(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
  for (std::size_t a = 0; a < N; ++a) {
    const auto na = site_of(a, L, d);
    for (std::size_t b = 0; b < N; ++b) {
      const auto nb = site_of(b, L, d);
      std::array<int, kMaxDimension> diff{};
      for (int k = 0; k < d; ++k) diff[k] = nb[k] - na[k];
      out.matrix(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
          table.get(std::span<const int>(diff.data(), static_cast<std::size_t>(d)));
    }
  }
  diagonalise(out);
  return out;
}

ToeplitzRestriction restrict_to_box(const Symbol& q, int L, const QuadratureSpec& spec, Boundary boundary) {
  const int d = q.dimension();
  const std::size_t N = box_sites(L, d);

  if (boundary == Boundary::open) {
    if (const auto* t = q.fourier_table()) return restrict_table_to_box(*t, L);
    auto c = fourier_coefficients(q, L - 1, spec);
    auto out = restrict_table_to_box(c.table, L);
    out.coefficient_error = c.quad_error;
    return out;
  }

  // Circulant: M = F^* diag(q(m/L)) F with the discrete Fourier basis.
  ToeplitzRestriction out;
  out.dimension = d;
  out.L = L;
  out.boundary = boundary;
  out.matrix.resize(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
  std::vector<double> samples(N);
  for (std::size_t m = 0; m < N; ++m) {
    const auto nm = site_of(m, L, d);
    std::array<double, kMaxDimension> x{};
    for (int k = 0; k < d; ++k) x[k] = static_cast<double>(nm[k]) / L;
    samples[m] = q(std::span<const double>(x.data(), static_cast<std::size_t>(d)));
  }
  const double inv = 1.0 / static_cast<double>(N);
  for (std::size_t a = 0; a < N; ++a) {
    const auto na = site_of(a, L, d);
    for (std::size_t b = 0; b < N; ++b) {
      const auto nb = site_of(b, L, d);
      std::complex<double> acc{0.0, 0.0};
      for (std::size_t m = 0; m < N; ++m) {
        const auto nm = site_of(m, L, d);
        double phase = 0.0;
        for (int k = 0; k < d; ++k) phase += static_cast<double>((nb[k] - na[k]) * nm[k]) / L;
        acc += samples[m] * std::polar(1.0, -kTwoPi * phase);
      }
      out.matrix(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = acc * inv;
    }
  }
  diagonalise(out);
  return out;
}

// ---------------------------------------------------------------------------
// Distribution function

DistributionFunction::DistributionFunction(std::vector<double> sorted_values) : sorted_(std::move(sorted_values)) {
  if (sorted_.empty()) throw Error(ErrorKind::invalid_argument, "empty distribution");
  if (!std::is_sorted(sorted_.begin(), sorted_.end())) std::sort(sorted_.begin(), sorted_.end());
}

double DistributionFunction::operator()(double y) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), y);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

std::vector<double> DistributionFunction::evaluate(std::span<const double> levels) const {
  std::vector<double> out;
  out.reserve(levels.size());
  for (double y : levels) out.push_back((*this)(y));
  return out;
}

namespace {

std::vector<double> midpoint_samples(const Symbol& q, int samples) {
  if (samples < 1) throw Error(ErrorKind::invalid_argument, "samples must be >= 1");
  const int d = q.dimension();
  const std::size_t N = ipow(static_cast<std::size_t>(samples), d);
  std::vector<double> values(N);
  std::array<double, kMaxDimension> x{};
  for (std::size_t s = 0; s < N; ++s) {
    std::size_t r = s;
    for (int k = d - 1; k >= 0; --k) {
      x[k] = (static_cast<double>(r % samples) + 0.5) / samples;
      r /= samples;
    }
    values[s] = q(std::span<const double>(x.data(), d));
  }
  return values;
}

}  // namespace

DistributionFunction distribution_function(const Symbol& q, int samples) {
  auto v = midpoint_samples(q, samples);
  std::sort(v.begin(), v.end());
  return DistributionFunction(std::move(v));
}

double distribution_distance(const DistributionFunction& a, const DistributionFunction& b) {
  // The sup of |F_a - F_b| is attained at a jump of either function.
  double worst = 0.0;
  for (const auto* src : {&a, &b}) {
    for (double y : src->sorted_values()) worst = std::max(worst, std::abs(a(y) - b(y)));
  }
  return worst;
}

double kernel_measure(const Symbol& q, int samples, double eps) {
  const auto v = midpoint_samples(q, samples);
  const auto hits = std::count_if(v.begin(), v.end(), [eps](double y) { return y <= eps || y >= 1.0 - eps; });
  return static_cast<double>(hits) / static_cast<double>(v.size());
}

// ---------------------------------------------------------------------------
// Rearrangements

Rearrangement Rearrangement::translation(std::array<double, kMaxDimension> c) {
  Rearrangement r;
  r.kind = Kind::translation;
  r.shift = c;
  return r;
}

Rearrangement Rearrangement::reflection() {
  Rearrangement r;
  r.kind = Kind::reflection;
  return r;
}

Rearrangement Rearrangement::coordinate_permutation(std::array<int, kMaxDimension> p) {
  Rearrangement r;
  r.kind = Kind::permutation;
  r.permutation = p;
  return r;
}

Rearrangement::Kind Rearrangement::parse_kind(const std::string& name) {
  if (name == "translation") return Kind::translation;
  if (name == "reflection") return Kind::reflection;
  if (name == "permutation") return Kind::permutation;
  throw Error(ErrorKind::invalid_argument, "unsupported rearrangement '" + name + "'");
}

Symbol rearrange(const Symbol& q, const Rearrangement& map) {
  const int d = q.dimension();
  Symbol::Callback f;
  std::string tag;
  switch (map.kind) {
    case Rearrangement::Kind::translation: {
      f = [q, c = map.shift, d](std::span<const double> x) {
        std::array<double, kMaxDimension> y{};
        for (int k = 0; k < d; ++k) y[k] = wrap_unit(x[k] + c[k]);
        return q.raw(std::span<const double>(y.data(), d));
      };
      tag = "translated";
      break;
    }
    case Rearrangement::Kind::reflection: {
      f = [q, d](std::span<const double> x) {
        std::array<double, kMaxDimension> y{};
        for (int k = 0; k < d; ++k) y[k] = wrap_unit(1.0 - x[k]);
        return q.raw(std::span<const double>(y.data(), d));
      };
      tag = "reflected";
      break;
    }
    case Rearrangement::Kind::permutation: {
      std::array<bool, kMaxDimension> seen{};
      for (int k = 0; k < d; ++k) {
        const int p = map.permutation[k];
        if (p < 0 || p >= d || seen[p]) throw Error(ErrorKind::invalid_argument, "not a coordinate permutation");
        seen[p] = true;
      }
      f = [q, p = map.permutation, d](std::span<const double> x) {
        std::array<double, kMaxDimension> y{};
        for (int k = 0; k < d; ++k) y[k] = x[p[k]];
        return q.raw(std::span<const double>(y.data(), d));
      };
      tag = "permuted";
      break;
    }
    default:
      throw Error(ErrorKind::invalid_argument, "unsupported rearrangement");
  }
  return Symbol::closed_form(d, std::move(f), tag + "(" + q.label() + ")");
}

}  // namespace qfent
