#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "qfent/quadrature.hpp"

namespace qfent {

inline constexpr int kMaxDimension = 3;

/// Values of q within this distance outside [0,1] are clamped, anything
/// further out is a range violation.
inline constexpr double kRangeGuard = 1e-9;

/// Fourier coefficients Q_j = <e_0, Q e_j> for |j|_inf <= cutoff, stored
/// densely in row-major order of (j_0, ..., j_{d-1}), j_0 slowest.
class FourierTable {
 public:
  FourierTable(int dimension, int cutoff);

  int dimension() const noexcept { return dim_; }
  int cutoff() const noexcept { return cutoff_; }
  std::size_t size() const noexcept { return data_.size(); }

  bool contains(std::span<const int> j) const noexcept;
  std::size_t index(std::span<const int> j) const;
  std::array<int, kMaxDimension> multi_index(std::size_t flat) const;

  std::complex<double>& at(std::span<const int> j) { return data_[index(j)]; }
  /// Zero outside the stored range.
  std::complex<double> get(std::span<const int> j) const;

  std::vector<std::complex<double>>& data() noexcept { return data_; }
  const std::vector<std::complex<double>>& data() const noexcept { return data_; }

  /// max_j |Q_{-j} - conj(Q_j)|
  double hermitian_defect() const;

  /// Real part of sum_j Q_j exp(2 pi i j.x).
  double evaluate(std::span<const double> x) const;

 private:
  int dim_;
  int cutoff_;
  std::vector<std::complex<double>> data_;
};

enum class SymbolKind { closed_form, fourier_table, grid };

/// The Fourier function q : [0,1]^d -> [0,1] of a shift-invariant quasi-free
/// state. Immutable; copies share the evaluator.
class Symbol {
 public:
  using Callback = std::function<double(std::span<const double>)>;

  static Symbol closed_form(int dimension, Callback f, std::string label);
  /// Requires Hermitian symmetry Q_{-j} = conj(Q_j) to 1e-12.
  static Symbol from_fourier(FourierTable table, std::string label);
  /// Periodic samples q(k/n) on an n^d grid (row-major), multilinear
  /// interpolation in between.
  static Symbol from_grid(int dimension, int n_per_dim, std::vector<double> samples, std::string label);

  int dimension() const noexcept;
  SymbolKind kind() const noexcept;
  const std::string& label() const noexcept;
  Symbol with_label(std::string label) const;

  /// q(x) clamped to [0,1]; throws range_violation outside the guard band or
  /// for non-finite values.
  double operator()(std::span<const double> x) const;
  double raw(std::span<const double> x) const;

  /// Non-null only for SymbolKind::fourier_table.
  const FourierTable* fourier_table() const noexcept;

 private:
  struct Impl;
  explicit Symbol(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// q(x) = 1 / (1 + exp(beta (dispersion(x) - mu))).
Symbol make_thermal_symbol(int dimension, Symbol::Callback dispersion, double beta, double mu,
                           std::string label = "thermal");

/// Thermal symbol of nearest-neighbour hopping, dispersion sum_k hopping*cos(2 pi x_k).
Symbol make_cosine_thermal_symbol(int dimension, double beta, double mu, double hopping = 1.0);

Symbol make_constant_symbol(int dimension, double value);

struct FourierCoefficients {
  FourierTable table;
  double quad_error = 0.0;
};

/// Q_j = int q(x) exp(-2 pi i j.x) dx for |j|_inf <= cutoff, by the adaptive
/// quadrature engine (always from the evaluator, also for table symbols).
FourierCoefficients fourier_coefficients(const Symbol& q, int cutoff, const QuadratureSpec& spec = {});

enum class Boundary { open, periodic };

/// Restriction of the symbol to a box of L^d sites. Sites are enumerated
/// row-major, site (n_0,...,n_{d-1}) -> sum_k n_k L^{d-1-k}; entries are
/// M_{s,s'} = Q_{n'-n} (open) or the periodised coefficients (periodic).
struct ToeplitzRestriction {
  int dimension = 1;
  int L = 0;
  Boundary boundary = Boundary::open;
  Eigen::MatrixXcd matrix;
  std::vector<double> eigenvalues;  // ascending, clamped to [0,1]
  double max_clamp = 0.0;           // largest shift applied by the clamp
  double coefficient_error = 0.0;   // quadrature error of the entries
};

ToeplitzRestriction restrict_to_box(const Symbol& q, int L, const QuadratureSpec& spec = {},
                                    Boundary boundary = Boundary::open);

/// Open-boundary restriction from a coefficient table (entries beyond the
/// table's cutoff are zero).
ToeplitzRestriction restrict_table_to_box(const FourierTable& table, int L);

/// Empirical distribution function gamma_q(y) = |{x : q(x) <= y}| over the
/// midpoint grid with `samples` points per dimension.
class DistributionFunction {
 public:
  explicit DistributionFunction(std::vector<double> sorted_values);

  double operator()(double y) const;
  std::vector<double> evaluate(std::span<const double> levels) const;
  std::size_t sample_count() const noexcept { return sorted_.size(); }
  const std::vector<double>& sorted_values() const noexcept { return sorted_; }

 private:
  std::vector<double> sorted_;
};

DistributionFunction distribution_function(const Symbol& q, int samples);

/// Largest pointwise gap between two empirical CDFs (Kolmogorov distance).
double distribution_distance(const DistributionFunction& a, const DistributionFunction& b);

/// Fraction of midpoint-grid samples with q <= eps or q >= 1 - eps.
double kernel_measure(const Symbol& q, int samples, double eps = 0.0);

/// Measure-preserving maps of the torus.
struct Rearrangement {
  enum class Kind { translation, reflection, permutation };
  Kind kind = Kind::translation;
  std::array<double, kMaxDimension> shift{};
  std::array<int, kMaxDimension> permutation{0, 1, 2};

  static Rearrangement translation(std::array<double, kMaxDimension> c);
  static Rearrangement reflection();
  static Rearrangement coordinate_permutation(std::array<int, kMaxDimension> p);
  /// "translation", "reflection" or "permutation"; anything else throws.
  static Kind parse_kind(const std::string& name);
};

/// q composed with the map.
Symbol rearrange(const Symbol& q, const Rearrangement& map);

}  // namespace qfent
