#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "qfent/entropy.hpp"
#include "qfent/symbol.hpp"

namespace qfent {

struct LocalSpectrum {
  int dimension = 1;
  int L = 0;
  std::vector<double> eigenvalues;  // ascending, in [0,1]
};

LocalSpectrum local_spectrum(const ToeplitzRestriction& r);
LocalSpectrum local_spectrum(const Symbol& q, int L, const QuadratureSpec& spec = {},
                             Boundary boundary = Boundary::open);

/// Entropy of the quasi-free state on the box, from the restricted spectrum:
/// sum over modes of the per-mode Renyi term (0 log 0 = 0).
double local_renyi(std::span<const double> eigenvalues, const Order& alpha);

struct ConvergenceRow {
  int L = 0;
  double per_site = 0.0;  // S_L / L^d
  double gap = 0.0;       // per_site - density
};

struct ConvergenceTable {
  Order order = Order::von_neumann();
  EntropyValue density;
  std::vector<ConvergenceRow> rows;
  double extrapolated = 0.0;        // Richardson in 1/L from the two largest L
  double extrapolation_error = 0.0;
  double threshold = 0.0;
  bool decreasing = false;          // |gap| at the largest L below |gap| at the smallest
  bool pass = false;                // decreasing (or zero) and final |gap| <= threshold
};

/// Per-site local entropies for growing boxes against the infinite-volume
/// density. Boxes are diagonalised concurrently.
ConvergenceTable density_convergence(const Symbol& q, const Order& alpha, std::span<const int> L_list,
                                     const QuadratureSpec& spec = {}, double threshold = 5e-3,
                                     Boundary boundary = Boundary::open);

/// Density matrix on 2^n x 2^n occupation space, modes in Jordan-Wigner order.
struct OracleDensityMatrix {
  int sites = 0;
  Eigen::MatrixXcd rho;
};

/// rho determined by its moments: every normal-ordered monomial
/// c+_{a1}..c+_{ak} c_{bk}..c_{b1} has expectation det[M_{b_l a_k}] when the
/// numbers of creators and annihilators agree and 0 otherwise, where
/// M_{jk} = <e_j, Q e_k> is the two-point matrix. n = M.rows() <= 4.
OracleDensityMatrix wick_density_matrix(const Eigen::MatrixXcd& two_point);

struct OracleComparison {
  Order order = Order::von_neumann();
  double from_rho = 0.0;    // -1/(a-1) log tr rho^a, or -tr rho log rho
  double from_modes = 0.0;  // local_renyi of the two-point spectrum
  double difference = 0.0;
};

struct OracleReport {
  int sites = 0;
  std::vector<double> mode_eigenvalues;
  std::vector<double> rho_spectrum;      // ascending
  std::vector<double> product_spectrum;  // prod_j lambda_j^e_j (1-lambda_j)^(1-e_j), ascending
  double spectrum_deviation = 0.0;
  double trace = 0.0;
  double min_eigenvalue = 0.0;
  double hermiticity_defect = 0.0;
  std::vector<OracleComparison> comparisons;
  double tolerance = 0.0;
  bool pass = false;
};

/// Builds rho for the first n sites (row-major order) of the smallest box
/// holding n sites and compares it with the product formula. Orders default
/// to {2, 3, 1}.
OracleReport wick_oracle(const Symbol& q, int n, const QuadratureSpec& spec = {}, std::span<const Order> orders = {},
                         double tol = 1e-8);
OracleReport wick_oracle(const Eigen::MatrixXcd& two_point, std::span<const Order> orders = {}, double tol = 1e-8);

}  // namespace qfent
