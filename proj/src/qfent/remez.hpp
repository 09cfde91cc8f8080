#pragma once

// Minimax fitting of a target by a linear combination of basis
// functions on an interval, by Remez-style exchange:
//
//   1. solve sum_i c_i phi_i(t_k) + (-1)^k E = F(t_k) on n+1 references,
//   2. move the references to the alternating extrema of the new residual
//      (dense scan plus golden-section refinement),
//
// until the extremal magnitudes agree to a relative spread below level_tol.
// The basis is not assumed to be a Haar system, so the alternation count is
// checked on every pass. A Lawson (iteratively reweighted least squares) fit
// on the scan grid supplies initial references and is the fallback when an
// exchange pass loses alternation. Linear algebra runs in long double.

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace qfent::remez {

using Real = long double;

/// Writes F(t) to target and phi_i(t) to basis[i].
using Evaluator = std::function<void(Real t, Real& target, std::span<Real> basis)>;

struct Problem {
  Evaluator eval;
  int n = 1;
  double lo = 0.0;
  double hi = 40.0;
  /// Whether t = lo may be an active extremum (residual not forced to 0 there).
  bool lo_endpoint_active = false;
};

struct Options {
  int grid_points = 4000;
  int max_iterations = 60;
  double level_tol = 1e-8;
  int lawson_iterations = 400;
};

struct Solution {
  std::vector<double> coeffs;
  double level = 0.0;  // sup |residual| over scan grid and refined extrema
  std::vector<double> refs;
  std::vector<double> ref_values;  // signed residual at refs
  double spread = 0.0;             // (max - min) / max over |ref_values|
  double rcond = 0.0;              // reciprocal condition estimate of the final system
  int iterations = 0;
  std::string method;              // "exchange" or "exchange+lawson"
};

/// Residual F - sum c_i phi_i at t.
Real residual(const Problem& p, std::span<const double> coeffs, Real t);

/// Throws Error(ErrorKind::convergence) with the last spread and alternation
/// count if neither the exchange nor the Lawson-seeded retry converges.
Solution solve(const Problem& p, const Options& opt, std::span<const double> initial_refs = {});

}  // namespace qfent::remez
