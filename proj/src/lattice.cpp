#include "qfent/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <optional>

namespace qfent {

LocalSpectrum local_spectrum(const ToeplitzRestriction& r) {
  return LocalSpectrum{r.dimension, r.L, r.eigenvalues};
}

LocalSpectrum local_spectrum(const Symbol& q, int L, const QuadratureSpec& spec, Boundary boundary) {
  return local_spectrum(restrict_to_box(q, L, spec, boundary));
}

double local_renyi(std::span<const double> eigenvalues, const Order& alpha) {
  // Kahan sum; boxes can hold thousands of modes with terms of similar size.
  double sum = 0.0, comp = 0.0;
  for (double lam : eigenvalues) {
    const double y = renyi_term(lam, alpha) - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

ConvergenceTable density_convergence(const Symbol& q, const Order& alpha, std::span<const int> L_list,
                                     const QuadratureSpec& spec, double threshold, Boundary boundary) {
  if (L_list.empty()) throw Error(ErrorKind::invalid_argument, "need at least one box size");
  std::vector<int> sizes(L_list.begin(), L_list.end());
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  if (sizes.front() < 1) throw Error(ErrorKind::invalid_argument, "box sizes must be >= 1");

  ConvergenceTable out;
  out.order = alpha;
  out.threshold = threshold;
  out.density = renyi_density(q, alpha, spec);

  // One coefficient table serves every open box.
  std::optional<FourierTable> table;
  if (boundary == Boundary::open) {
    if (const auto* t = q.fourier_table()) {
      table = *t;
    } else {
      auto c = fourier_coefficients(q, sizes.back() - 1, spec);
      table = std::move(c.table);
    }
  }

  std::vector<std::future<double>> jobs;
  for (int L : sizes) {
    jobs.push_back(std::async(std::launch::async, [&, L] {
      const auto r = table ? restrict_table_to_box(*table, L) : restrict_to_box(q, L, spec, boundary);
      return local_renyi(r.eigenvalues, alpha) / std::pow(static_cast<double>(L), q.dimension());
    }));
  }
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    const double per_site = jobs[k].get();
    out.rows.push_back({sizes[k], per_site, per_site - out.density.value});
  }

  // The gap behaves like c / L (boundary term); eliminate it with the two
  // largest boxes, and judge the extrapolation by the previous pair.
  auto richardson = [&](std::size_t i, std::size_t j) {
    const double L1 = out.rows[i].L, L2 = out.rows[j].L;
    return (L2 * out.rows[j].per_site - L1 * out.rows[i].per_site) / (L2 - L1);
  };
  const std::size_t m = out.rows.size();
  if (m >= 2) {
    out.extrapolated = richardson(m - 2, m - 1);
    out.extrapolation_error =
        m >= 3 ? std::abs(out.extrapolated - richardson(m - 3, m - 2)) : std::abs(out.extrapolated - out.rows.back().per_site);
  } else {
    out.extrapolated = out.rows.back().per_site;
    out.extrapolation_error = std::abs(out.rows.back().gap);
  }

  const double first = std::abs(out.rows.front().gap);
  const double last = std::abs(out.rows.back().gap);
  const double floor = 10.0 * out.density.quad_error + 1e-12;
  out.decreasing = last <= floor || (m >= 2 && last < first);
  out.pass = out.decreasing && last <= threshold;
  return out;
}

}  // namespace qfent
