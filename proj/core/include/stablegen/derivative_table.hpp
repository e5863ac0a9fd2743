#pragma once

#include <vector>

#include "stablegen/mechanism.hpp"

namespace stablegen {

// Exact symbolic term list for the n-th derivative of the stationary Laplace
// transform ubar(x) = (1 + a x^eta)^{-b/(b-1)}. A table of order n evaluates
//
//   ubar^{(n)}(x) = sum_k coeff_k * (1 + a x^eta)^{power_outer_k} * x^{power_lambda_k},
//
// and every coefficient of order n carries the sign (-1)^n, so the absolute
// value can be evaluated as a log-sum-exp. Tables are built by the term
// recurrence: differentiating C (1+a x^eta)^p x^q yields
// C p a eta (1+a x^eta)^{p-1} x^{q+eta-1} + C q (1+a x^eta)^p x^{q-1},
// with like terms (same (p, q)) merged. Order-n death-rate ratios need these
// exact forms; finite differences are kept only as a test oracle.
class DerivativeTable {
 public:
  struct Term {
    double coeff;
    double power_outer;
    double power_lambda;
  };

  static DerivativeTable for_ubar(const StableMechanism& mech, int order);

  // Table of order + 1 via the term recurrence.
  DerivativeTable next() const;

  double eval(double lambda) const;

  // log |ubar^{(order)}(lambda)| given log(lambda); usable far beyond the
  // range where eval() overflows.
  double log_abs_eval(double log_lambda) const;

  int order() const { return order_; }
  int sign() const { return order_ % 2 == 0 ? 1 : -1; }
  const std::vector<Term>& terms() const { return terms_; }

 private:
  DerivativeTable(double a, double eta, double outer0, int order, std::vector<Term> terms)
      : a_(a), eta_(eta), outer0_(outer0), order_(order), terms_(std::move(terms)) {}

  double a_;
  double eta_;
  double outer0_;  // -b/(b-1), the undifferentiated outer exponent
  int order_;
  std::vector<Term> terms_;
};

}  // namespace stablegen
