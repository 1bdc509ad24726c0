#include "dppsw/determinant.hpp"

#include <cmath>
#include <stdexcept>

namespace dppsw {

SignedLog det_small(SmallMatrix m) {
  const int n = m.n;
  if (n <= 0 || n > 32) throw std::invalid_argument("det_small: size must be in [1,32]");
  for (double v : m.a)
    if (!std::isfinite(v)) throw std::invalid_argument("det_small: non-finite entry");

  int sign = 1;
  SignedLog logdet = SignedLog::one();
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(m(i, k)) > std::abs(m(piv, k))) piv = i;
    if (m(piv, k) == 0.0) return SignedLog::zero();
    if (piv != k) {
      for (int j = k; j < n; ++j) std::swap(m(piv, j), m(k, j));
      sign = -sign;
    }
    double p = m(k, k);
    logdet *= SignedLog::from_real(p);
    for (int i = k + 1; i < n; ++i) {
      double f = m(i, k) / p;
      for (int j = k + 1; j < n; ++j) m(i, j) -= f * m(k, j);
      m(i, k) = 0.0;
    }
  }
  return SignedLog(sign * logdet.sign, logdet.logmag);
}

SignedLog det_small_log(int n, const std::vector<SignedLog>& entries) {
  if (n <= 0 || n > 32) throw std::invalid_argument("det_small_log: size must be in [1,32]");
  if (static_cast<int>(entries.size()) != n * n)
    throw std::invalid_argument("det_small_log: entry count mismatch");
  SmallMatrix m(n);
  double scale_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    double rowmax = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
      const SignedLog& e = entries[i * n + j];
      if (e.sign != 0 && e.logmag > rowmax) rowmax = e.logmag;
    }
    if (!(rowmax > -std::numeric_limits<double>::infinity())) return SignedLog::zero();
    for (int j = 0; j < n; ++j) {
      const SignedLog& e = entries[i * n + j];
      m(i, j) = e.sign == 0 ? 0.0 : e.sign * std::exp(e.logmag - rowmax);
    }
    scale_sum += rowmax;
  }
  SignedLog d = det_small(std::move(m));
  return SignedLog(d.sign, d.logmag + scale_sum);
}

}  // namespace dppsw
