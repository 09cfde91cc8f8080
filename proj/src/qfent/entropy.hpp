#pragma once

#include <span>
#include <string>
#include <string_view>

#include "qfent/quadrature.hpp"
#include "qfent/symbol.hpp"

namespace qfent {

/// Entropy order alpha in (0, inf]. alpha == 1 (von Neumann) and alpha == inf
/// are distinct kinds with their own integrands; they are never reached as a
/// numerical limit.
class Order {
 public:
  enum class Kind { finite, von_neumann, infinite };

  static Order of(double alpha);
  static Order von_neumann() { return Order(Kind::von_neumann, 1.0); }
  static Order infinity();
  /// "1", "inf"/"infinity", or a positive number.
  static Order parse(std::string_view token);

  Kind kind() const noexcept { return kind_; }
  double value() const noexcept { return value_; }
  std::string to_string() const;

 private:
  Order(Kind k, double v) : kind_(k), value_(v) {}
  Kind kind_;
  double value_;
};

struct EntropyValue {
  Order order = Order::von_neumann();
  double value = 0.0;       // nats per site
  double quad_error = 0.0;  // estimated absolute quadrature error
};

// Per-mode terms, functions of a single occupation q in [0,1]. They use
// 0 log 0 = 0 and log max{q, 1-q} = 0 at q in {0, 1}.

/// -1/(alpha-1) log(q^alpha + (1-q)^alpha) and its alpha = 1, inf branches.
double renyi_term(double q, const Order& alpha);
/// log of min{q/(1-q), (1-q)/q}, i.e. -h; -inf at q in {0,1}.
double log_min_ratio(double q);
/// h = -log min{q/(1-q), (1-q)/q}; +inf at q in {0,1}.
double h_of_value(double q);
/// (1/alpha) log(1 + exp(-alpha h)).
double g_term(double q, double alpha);

EntropyValue renyi_density(const Symbol& q, const Order& alpha, const QuadratureSpec& spec = {});

double h_function(const Symbol& q, std::span<const double> x);

enum class GForm { defining, integral };

/// g_q(alpha) = s(inf) - (alpha-1)/alpha s(alpha) (defining) or
/// (1/alpha) int log(1 + exp(-alpha h)) dx (integral).
EntropyValue g_function(const Symbol& q, double alpha, const QuadratureSpec& spec = {},
                        GForm form = GForm::integral);

struct GConsistency {
  double alpha = 0.0;
  EntropyValue defining;
  EntropyValue integral;
  double difference = 0.0;
  double tolerance = 0.0;
  bool consistent = false;
};

/// Both forms of g at alpha and whether they agree within the summed error
/// estimates (plus a few ulps of the values).
GConsistency g_consistency(const Symbol& q, double alpha, const QuadratureSpec& spec = {});

}  // namespace qfent
