#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace dppsw {

/// A real number stored as (sign, ln|value|). Products over hundreds of
/// factors with exponents like q^{-(n+1/2)^2} stay representable where a
/// plain double would overflow near e^709.
struct SignedLog {
  int sign = 0;          // -1, 0, +1
  double logmag = -std::numeric_limits<double>::infinity();

  SignedLog() = default;
  SignedLog(int s, double lm) : sign(s), logmag(s == 0 ? -std::numeric_limits<double>::infinity() : lm) {}

  static SignedLog zero() { return SignedLog(); }
  static SignedLog one() { return SignedLog(1, 0.0); }

  static SignedLog from_real(double v) {
    if (v == 0.0) return zero();
    return SignedLog(v > 0.0 ? 1 : -1, std::log(std::abs(v)));
  }

  /// exp(x) as a SignedLog, never overflows.
  static SignedLog from_log(double x) { return SignedLog(1, x); }

  double to_real() const {
    if (sign == 0) return 0.0;
    return sign * std::exp(logmag);
  }

  bool is_zero() const { return sign == 0; }

  SignedLog operator*(const SignedLog& o) const {
    if (sign == 0 || o.sign == 0) return zero();
    return SignedLog(sign * o.sign, logmag + o.logmag);
  }
  SignedLog& operator*=(const SignedLog& o) { *this = *this * o; return *this; }

  SignedLog operator/(const SignedLog& o) const {
    if (o.sign == 0) throw std::domain_error("SignedLog: division by zero");
    if (sign == 0) return zero();
    return SignedLog(sign * o.sign, logmag - o.logmag);
  }

  SignedLog operator-() const { return SignedLog(-sign, logmag); }

  /// x^e for real e; requires a nonnegative value.
  SignedLog pow(double e) const {
    if (sign == 0) return e == 0.0 ? one() : zero();
    if (sign < 0) throw std::domain_error("SignedLog::pow of negative value");
    return SignedLog(1, e * logmag);
  }

  /// x^k for integer k (sign tracked).
  SignedLog ipow(int k) const {
    if (sign == 0) return k == 0 ? one() : zero();
    return SignedLog((sign < 0 && (k & 1)) ? -1 : 1, k * logmag);
  }

  SignedLog sqrt() const { return pow(0.5); }
};

/// Exact signed log-sum-exp over a sequence. Positive and negative parts are
/// each accumulated with Neumaier compensation after shifting by the global
/// max magnitude, so opposite-sign cancellation (the two largest terms
/// pairing off) is resolved to roundoff of the true signed sum.
inline SignedLog signedlog_sum(std::span<const SignedLog> terms) {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& t : terms)
    if (t.sign != 0 && t.logmag > m) m = t.logmag;
  if (!(m > -std::numeric_limits<double>::infinity())) return SignedLog::zero();

  double s = 0.0, comp = 0.0;  // Neumaier
  for (const auto& t : terms) {
    if (t.sign == 0) continue;
    double v = t.sign * std::exp(t.logmag - m);
    double tmp = s + v;
    if (std::abs(s) >= std::abs(v))
      comp += (s - tmp) + v;
    else
      comp += (v - tmp) + s;
    s = tmp;
  }
  s += comp;
  if (s == 0.0) return SignedLog::zero();
  return SignedLog(s > 0.0 ? 1 : -1, m + std::log(std::abs(s)));
}

inline SignedLog signedlog_sum(const std::vector<SignedLog>& terms) {
  return signedlog_sum(std::span<const SignedLog>(terms));
}

inline SignedLog operator+(const SignedLog& a, const SignedLog& b) {
  const SignedLog t[2] = {a, b};
  return signedlog_sum(std::span<const SignedLog>(t, 2));
}

inline SignedLog operator-(const SignedLog& a, const SignedLog& b) { return a + (-b); }

}  // namespace dppsw
