#pragma once

#include <functional>

#include "dppsw/signed_log.hpp"

namespace dppsw {

/// q-Pochhammer symbol (a;q)_n = prod_{k=0}^{n-1} (1 - a q^k); (a;q)_0 = 1.
/// Requires 0 < q < 1; any real a (factors may be negative, sign is tracked).
SignedLog q_pochhammer(double a, double q, int n);

/// (q^c; q)_n with the factors 1 - q^{c+k} formed through expm1, which keeps
/// full precision as q -> 1 (where 1 - q^{c+k} ~ (c+k)(1-q)).
SignedLog q_pochhammer_qpow(double c, double q, int n);

/// ln (q;q)_n  (positive quantity for 0 < q < 1).
double log_qq(double q, int n);

/// Materialized record of one q-Pochhammer evaluation.
struct QPochhammer {
  double a = 0.0;
  double q = 0.0;
  int n = 0;
  SignedLog value;
};
QPochhammer q_pochhammer_full(double a, double q, int n);

/// Gaussian binomial [n l]_q = (q;q)_n / ((q;q)_l (q;q)_{n-l}).
/// Computed as a ratio of q-Pochhammer logs so the same path serves any base
/// in (0,1), including q^theta. Throws std::invalid_argument for l outside
/// [0, n].
SignedLog q_binomial(int n, int l, double q);

/// q-derivative of order n at x:
///   D_q^n f(x) = 1/((1-q)^n x^n) sum_l [(q^{-n};q)_l / (q;q)_l] q^l f(q^l x)
/// for base in (0,1). Bases > 1 (the moment identities need base q^{-theta})
/// are evaluated through the rearranged sum in base 1/q:
///   D_b^n f(x) = 1/((1-b)^n x^n) sum_l [(b^n;Q)_l / (Q;Q)_l] Q^{n l} f(x b^l),
/// Q = 1/b. Throws std::domain_error at x = 0 or base <= 0 or base == 1.
double q_derivative(const std::function<double(double)>& f, double base, int n, double x);

}  // namespace dppsw
