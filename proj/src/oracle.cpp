#include "qfent/lattice.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace qfent {

namespace {

constexpr int kMaxOracleSites = 4;

// Annihilator of mode j in the occupation basis (bit j of the index is n_j),
// with the Jordan-Wigner sign from the occupied modes below j.
Eigen::MatrixXd annihilator(int n, int j) {
  const int D = 1 << n;
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(D, D);
  for (int s = 0; s < D; ++s) {
    if (!((s >> j) & 1)) continue;
    const int sign = (std::popcount(static_cast<unsigned>(s & ((1 << j) - 1))) & 1) ? -1 : 1;
    c(s ^ (1 << j), s) = sign;
  }
  return c;
}

std::vector<int> modes_of(int mask, int n) {
  std::vector<int> out;
  for (int j = 0; j < n; ++j) {
    if ((mask >> j) & 1) out.push_back(j);
  }
  return out;
}

std::vector<double> sorted_real_spectrum(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::eigensolver, "oracle eigensolver failed");
  std::vector<double> v(solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size());
  std::sort(v.begin(), v.end());
  return v;
}

double entropy_from_rho(const Eigen::MatrixXcd& rho, std::span<const double> spectrum, const Order& alpha) {
  switch (alpha.kind()) {
    case Order::Kind::von_neumann: {
      double s = 0.0;
      for (double mu : spectrum) {
        if (mu > 0.0) s -= mu * std::log(mu);
      }
      return s;
    }
    case Order::Kind::infinite:
      return -std::log(*std::max_element(spectrum.begin(), spectrum.end()));
    case Order::Kind::finite:
      break;
  }
  const double a = alpha.value();
  double tr = 0.0;
  if (a == std::round(a) && a >= 2.0 && a <= 16.0) {
    Eigen::MatrixXcd p = rho;
    for (int k = 1; k < static_cast<int>(a); ++k) p = p * rho;
    tr = p.trace().real();
  } else {
    for (double mu : spectrum) {
      if (mu > 0.0) tr += std::pow(mu, a);
    }
  }
  return -std::log(tr) / (a - 1.0);
}

}  // namespace

OracleDensityMatrix wick_density_matrix(const Eigen::MatrixXcd& M) {
  const int n = static_cast<int>(M.rows());
  if (n < 1 || n > kMaxOracleSites || M.cols() != M.rows()) {
    throw Error(ErrorKind::invalid_argument, "oracle needs a square two-point matrix with 1..4 sites");
  }
  const int D = 1 << n;
  const int dim = D * D;

  std::vector<Eigen::MatrixXd> c;
  for (int j = 0; j < n; ++j) c.push_back(annihilator(n, j));

  // One equation tr(rho X) = omega(X) per monomial; rho is unknown, vec(rho)
  // stored row-major.
  Eigen::MatrixXd system(dim, dim);
  Eigen::MatrixXd rhs(dim, 2);
  int row = 0;
  for (int A = 0; A < D; ++A) {
    const auto a = modes_of(A, n);
    Eigen::MatrixXd creators = Eigen::MatrixXd::Identity(D, D);
    for (int i : a) creators = creators * c[i].transpose();
    for (int B = 0; B < D; ++B) {
      const auto b = modes_of(B, n);
      Eigen::MatrixXd X = creators;
      for (auto it = b.rbegin(); it != b.rend(); ++it) X = X * c[*it];

      std::complex<double> expectation{0.0, 0.0};
      if (a.size() == b.size()) {
        const int k = static_cast<int>(a.size());
        if (k == 0) {
          expectation = 1.0;
        } else {
          Eigen::MatrixXcd block(k, k);
          for (int i = 0; i < k; ++i) {
            for (int l = 0; l < k; ++l) block(i, l) = M(b[l], a[i]);
          }
          expectation = block.determinant();
        }
      }
      for (int s = 0; s < D; ++s) {
        for (int t = 0; t < D; ++t) system(row, s * D + t) = X(t, s);
      }
      rhs(row, 0) = expectation.real();
      rhs(row, 1) = expectation.imag();
      ++row;
    }
  }

  const Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
  if (!lu.isInvertible()) throw Error(ErrorKind::oracle, "monomial system is singular");
  const Eigen::MatrixXd sol = lu.solve(rhs);

  OracleDensityMatrix out;
  out.sites = n;
  out.rho.resize(D, D);
  for (int s = 0; s < D; ++s) {
    for (int t = 0; t < D; ++t) out.rho(s, t) = {sol(s * D + t, 0), sol(s * D + t, 1)};
  }
  return out;
}

OracleReport wick_oracle(const Eigen::MatrixXcd& two_point, std::span<const Order> orders, double tol) {
  static const Order kDefaultOrders[] = {Order::of(2.0), Order::of(3.0), Order::von_neumann()};
  if (orders.empty()) orders = kDefaultOrders;

  auto dm = wick_density_matrix(two_point);
  OracleReport rep;
  rep.sites = dm.sites;
  rep.tolerance = tol;
  rep.hermiticity_defect = (dm.rho - dm.rho.adjoint()).cwiseAbs().maxCoeff();
  const Eigen::MatrixXcd rho = 0.5 * (dm.rho + dm.rho.adjoint());

  const Eigen::MatrixXcd M = 0.5 * (two_point + two_point.adjoint());
  rep.mode_eigenvalues = sorted_real_spectrum(M);
  for (double& lam : rep.mode_eigenvalues) lam = std::clamp(lam, 0.0, 1.0);
  rep.rho_spectrum = sorted_real_spectrum(rho);

  const int D = 1 << rep.sites;
  for (int e = 0; e < D; ++e) {
    double p = 1.0;
    for (int j = 0; j < rep.sites; ++j) {
      const double lam = rep.mode_eigenvalues[static_cast<std::size_t>(j)];
      p *= ((e >> j) & 1) ? lam : 1.0 - lam;
    }
    rep.product_spectrum.push_back(p);
  }
  std::sort(rep.product_spectrum.begin(), rep.product_spectrum.end());
  for (int e = 0; e < D; ++e) {
    rep.spectrum_deviation = std::max(rep.spectrum_deviation, std::abs(rep.rho_spectrum[e] - rep.product_spectrum[e]));
  }
  rep.trace = rho.trace().real();
  rep.min_eigenvalue = rep.rho_spectrum.front();

  bool ok = std::abs(rep.trace - 1.0) <= 1e-10 && rep.min_eigenvalue >= -1e-10 && rep.spectrum_deviation <= tol;
  for (const auto& alpha : orders) {
    OracleComparison cmp;
    cmp.order = alpha;
    cmp.from_rho = entropy_from_rho(rho, rep.rho_spectrum, alpha);
    cmp.from_modes = local_renyi(rep.mode_eigenvalues, alpha);
    cmp.difference = std::abs(cmp.from_rho - cmp.from_modes);
    ok = ok && cmp.difference <= tol;
    rep.comparisons.push_back(cmp);
  }
  rep.pass = ok;
  return rep;
}

OracleReport wick_oracle(const Symbol& q, int n, const QuadratureSpec& spec, std::span<const Order> orders,
                         double tol) {
  if (n < 1 || n > kMaxOracleSites) throw Error(ErrorKind::invalid_argument, "oracle site count must be 1..4");
  const int d = q.dimension();
  int L = 1;
  while (static_cast<int>(std::lround(std::pow(L, d))) < n) ++L;
  const auto r = restrict_to_box(q, L, spec);
  return wick_oracle(Eigen::MatrixXcd(r.matrix.topLeftCorner(n, n)), orders, tol);
}

}  // namespace qfent
