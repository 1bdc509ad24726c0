#include "dppsw/qseries.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace dppsw {

SignedLog q_pochhammer(double a, double q, int n) {
  if (!(q > 0.0 && q < 1.0)) throw std::domain_error("q_pochhammer: need 0 < q < 1");
  if (n < 0) throw std::invalid_argument("q_pochhammer: need n >= 0");
  SignedLog p = SignedLog::one();
  double qk = 1.0;
  for (int k = 0; k < n; ++k) {
    p *= SignedLog::from_real(1.0 - a * qk);
    qk *= q;
  }
  return p;
}

SignedLog q_pochhammer_qpow(double c, double q, int n) {
  if (!(q > 0.0 && q < 1.0)) throw std::domain_error("q_pochhammer_qpow: need 0 < q < 1");
  if (n < 0) throw std::invalid_argument("q_pochhammer_qpow: need n >= 0");
  const double lq = std::log(q);
  SignedLog p = SignedLog::one();
  for (int k = 0; k < n; ++k) {
    p *= SignedLog::from_real(-std::expm1((c + k) * lq));
    if (p.sign == 0) return p;
  }
  return p;
}

double log_qq(double q, int n) {
  const double lq = std::log(q);
  double s = 0.0;
  for (int k = 1; k <= n; ++k) s += std::log(-std::expm1(k * lq));
  return s;
}

QPochhammer q_pochhammer_full(double a, double q, int n) {
  return QPochhammer{a, q, n, q_pochhammer(a, q, n)};
}

SignedLog q_binomial(int n, int l, double q) {
  if (l < 0 || l > n) throw std::invalid_argument("q_binomial: need 0 <= l <= n");
  if (!(q > 0.0 && q < 1.0)) throw std::domain_error("q_binomial: need 0 < q < 1");
  return SignedLog(1, log_qq(q, n) - log_qq(q, l) - log_qq(q, n - l));
}

double q_derivative(const std::function<double(double)>& f, double base, int n, double x) {
  if (x == 0.0) throw std::domain_error("q_derivative: x = 0");
  if (!(base > 0.0) || base == 1.0) throw std::domain_error("q_derivative: base must be positive, != 1");
  if (n < 0) throw std::invalid_argument("q_derivative: need n >= 0");
  if (n == 0) return f(x);

  std::vector<SignedLog> terms;
  terms.reserve(n + 1);
  if (base < 1.0) {
    const double q = base;
    const double lq = std::log(q);
    for (int l = 0; l <= n; ++l) {
      SignedLog c = q_pochhammer_qpow(-n, q, l) / SignedLog(1, log_qq(q, l));
      c *= SignedLog(1, l * lq);
      c *= SignedLog::from_real(f(std::pow(q, l) * x));
      terms.push_back(c);
    }
  } else {
    const double Q = 1.0 / base;  // rearranged sum for base q^{-theta} > 1
    const double lQ = std::log(Q);
    for (int l = 0; l <= n; ++l) {
      SignedLog c = q_pochhammer_qpow(-n, Q, l) / SignedLog(1, log_qq(Q, l));
      c *= SignedLog(1, n * l * lQ);
      c *= SignedLog::from_real(f(x * std::pow(base, l)));
      terms.push_back(c);
    }
  }
  SignedLog sum = signedlog_sum(terms);
  SignedLog pref = SignedLog::from_real(1.0 - base).ipow(n) * SignedLog::from_real(x).ipow(n);
  return (sum / pref).to_real();
}

}  // namespace dppsw
