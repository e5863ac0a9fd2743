#include "stablegen/derivative_table.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "stablegen/errors.hpp"

namespace stablegen {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

DerivativeTable DerivativeTable::for_ubar(const StableMechanism& mech, int order) {
  if (mech.regime != Regime::SubCritical) {
    throw UnsupportedRegimeError("DerivativeTable: ubar needs a sub-critical mechanism");
  }
  if (order < 0) {
    throw std::domain_error("DerivativeTable: order must be nonnegative");
  }
  const double eta = mech.eta();
  const double outer0 = -mech.b / eta;
  DerivativeTable table(mech.a(), eta, outer0, 0, {Term{1.0, outer0, 0.0}});
  for (int n = 0; n < order; ++n) {
    table = table.next();
  }
  return table;
}

DerivativeTable DerivativeTable::next() const {
  const int n = order_;
  // Terms of order n+1 are indexed by how often the outer power dropped;
  // index k has powers (outer0 - k, k*eta - (n+1)).
  std::vector<double> coeff(static_cast<std::size_t>(n) + 2, 0.0);
  for (const Term& term : terms_) {
    const int k = static_cast<int>(std::lround(outer0_ - term.power_outer));
    coeff[static_cast<std::size_t>(k) + 1] += term.coeff * term.power_outer * a_ * eta_;
    coeff[static_cast<std::size_t>(k)] += term.coeff * term.power_lambda;
  }
  std::vector<Term> terms;
  terms.reserve(coeff.size());
  for (std::size_t k = 0; k < coeff.size(); ++k) {
    if (coeff[k] != 0.0) {
      terms.push_back(Term{coeff[k], outer0_ - static_cast<double>(k),
                           static_cast<double>(k) * eta_ - static_cast<double>(n + 1)});
    }
  }
  return DerivativeTable(a_, eta_, outer0_, n + 1, std::move(terms));
}

double DerivativeTable::eval(double lambda) const {
  if (!(lambda > 0.0) && order_ > 0) {
    throw std::domain_error("DerivativeTable::eval: lambda must be positive");
  }
  const double outer = 1.0 + a_ * std::pow(lambda, eta_);
  double sum = 0.0;
  for (const Term& term : terms_) {
    sum += term.coeff * std::pow(outer, term.power_outer) * std::pow(lambda, term.power_lambda);
  }
  return sum;
}

double DerivativeTable::log_abs_eval(double log_lambda) const {
  const double log_outer = detail::log1p_exp(std::log(a_) + eta_ * log_lambda);
  double peak = kNegInf;
  std::vector<double> logs;
  logs.reserve(terms_.size());
  for (const Term& term : terms_) {
    const double value = std::log(std::fabs(term.coeff)) + term.power_outer * log_outer +
                         term.power_lambda * log_lambda;
    logs.push_back(value);
    peak = std::max(peak, value);
  }
  if (peak == kNegInf) {
    return kNegInf;
  }
  double sum = 0.0;
  for (double value : logs) {
    sum += std::exp(value - peak);
  }
  const double result = peak + std::log(sum);
  if (std::isnan(result)) {
    throw EvaluationError("DerivativeTable: non-finite evaluation at order " +
                          std::to_string(order_) + ", log lambda " + std::to_string(log_lambda));
  }
  return result;
}

}  // namespace stablegen
