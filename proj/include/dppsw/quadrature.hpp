#pragma once

#include <functional>
#include <vector>

#include "dppsw/signed_log.hpp"

namespace dppsw {

/// Quadrature rule with weights kept as logs. For the log-substituted
/// Gauss-Hermite rule the far-node weights fall below exp(-745) and would
/// flush to zero as plain doubles, silently truncating integrands whose mass
/// sits far out (high moments of the log-normal weight); the log form keeps
/// those nodes usable.
struct QuadratureRule {
  enum class Kind { gauss_hermite_log_substituted, adaptive_trapezoid };

  std::vector<double> nodes;        // strictly increasing
  std::vector<double> log_weights;  // ln w_i, weights all positive
  Kind kind = Kind::gauss_hermite_log_substituted;

  int node_count() const { return static_cast<int>(nodes.size()); }
  double weight(int i) const { return std::exp(log_weights[i]); }
};

/// Gauss-Hermite rule for int f(u) e^{-u^2} du, cached by size.
const QuadratureRule& gauss_hermite(int n);

/// Gauss-Legendre rule on [lo, hi]; weights are well scaled so plain doubles.
struct LegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
LegendreRule gauss_legendre(int n, double lo, double hi);

/// int_0^inf f(z) w(z;q) dz with the Stieltjes-Wigert weight
/// w(z;q) = exp(-(ln z)^2 / (2|ln q|)) / sqrt(2 pi |ln q|).
/// Substituting z = e^s turns it into a Gaussian expectation in s with
/// variance |ln q|, handled by Gauss-Hermite nodes scaled by sqrt(2|ln q|).
/// Throws std::domain_error for q outside (0,1); a non-finite result means
/// rule_size too small or f outside the admissible class.
double integrate_against_weight(const std::function<double(double)>& f, double q,
                                int rule_size = 200);

/// Same integral for integrands supplied in signed-log form, f(z) given
/// ln z. Used where f itself would overflow a double (polynomial values at
/// far nodes).
SignedLog integrate_against_weight_sl(const std::function<SignedLog(double lnz)>& f,
                                      double q, int rule_size = 200);

/// Smallest Gauss-Hermite size whose node span covers the moment bump of
/// z^max_power against w(.;q). Integrating z^c places a Gaussian bump at
/// u = (c+1) sqrt(L/2) in the substituted variable; the rule must reach a
/// few bump widths past it.
int recommended_rule_size(double q, double max_power);

/// Trapezoid refinement until successive doublings change the result by
/// less than tol (absolute). f must be smooth on [lo, hi].
double adaptive_trapezoid(const std::function<double(double)>& f, double lo, double hi,
                          double tol = 1e-10, int max_doublings = 22);

}  // namespace dppsw
