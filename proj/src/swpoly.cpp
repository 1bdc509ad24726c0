#include "dppsw/swpoly.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "dppsw/qseries.hpp"

namespace dppsw {

namespace {

// ln (q^theta; q^theta)_n, formed through expm1 so it survives q -> 1.
double log_qq_scaled(double q, double theta, int n) {
  const double lq = std::log(q);
  double s = 0.0;
  for (int k = 1; k <= n; ++k) s += std::log(-std::expm1(k * theta * lq));
  return s;
}

double log_qbinom_scaled(double q, double theta, int n, int l) {
  return log_qq_scaled(q, theta, n) - log_qq_scaled(q, theta, l) -
         log_qq_scaled(q, theta, n - l);
}

// Coefficients never leave the log domain during evaluation, so magnitudes
// past e^700 are exact and safe; degree-24 tables at q ~ 0.22 already carry
// logmag ~ -880. The guard only rejects parameters so extreme that the
// log-magnitudes themselves lose integer precision.
void check_magnitude(const SignedLog& c) {
  if (c.sign != 0 && std::abs(c.logmag) > 1e5)
    throw std::range_error("build_table: coefficient exceeds safe signed-log range");
}

SignedLog eval_rows(const std::vector<SignedLog>& row, double power_step, double ln_x) {
  std::vector<SignedLog> terms(row.size());
  for (size_t l = 0; l < row.size(); ++l)
    terms[l] = SignedLog(row[l].sign, row[l].logmag + power_step * double(l) * ln_x);
  return signedlog_sum(terms);
}

double require_positive_x(double x, const char* who) {
  if (!(x > 0.0)) throw std::domain_error(std::string(who) + ": need x > 0");
  return std::log(x);
}

}  // namespace

PolyTable build_table(double theta, double q, int max_degree) {
  if (!(theta > 0.0)) throw std::invalid_argument("build_table: need theta > 0");
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("build_table: need 0 < q < 1");
  if (max_degree < 0 || max_degree > 32)
    throw std::invalid_argument("build_table: max_degree must be in [0,32]");

  PolyTable t;
  t.theta = theta;
  t.q = q;
  t.max_degree = max_degree;
  const double lq = std::log(q);

  for (int n = 0; n <= max_degree; ++n) {
    const double pref_T = 0.5 * log_qq(q, n) + 0.5 * (n * theta + 0.5) * lq -
                          log_qq_scaled(q, theta, n);
    const double pref_R = 0.5 * (n * theta + 0.5) * lq - 0.5 * log_qq(q, n);
    const double pref_p = 0.25 * (2 * n + 1) * lq - 0.5 * log_qq(q, n);
    std::vector<SignedLog> rowT(n + 1), rowR(n + 1), rowp(n + 1);
    for (int l = 0; l <= n; ++l) {
      const int sign = ((n + l) % 2 == 0) ? 1 : -1;
      const double binT = log_qbinom_scaled(q, theta, n, l);
      rowT[l] = SignedLog(sign, pref_T + binT + 0.5 * theta * l * (l * (theta + 1.0) + 1.0) * lq);
      rowR[l] = SignedLog(sign, pref_R + binT +
                                    0.5 * l * (l * (theta + 1.0) + (1.0 - theta) + 1.0) * lq);
      rowp[l] = SignedLog(sign, pref_p + log_qbinom_scaled(q, 1.0, n, l) +
                                    (l * double(l) + 0.5 * l) * lq);
      check_magnitude(rowT[l]);
      check_magnitude(rowR[l]);
      check_magnitude(rowp[l]);
    }
    t.coeffs_T.push_back(std::move(rowT));
    t.coeffs_R.push_back(std::move(rowR));
    t.coeffs_p.push_back(std::move(rowp));
  }
  return t;
}

SignedLog eval_T_sl(const PolyTable& t, int n, double ln_x) {
  return eval_rows(t.coeffs_T.at(n), t.theta, ln_x);
}

SignedLog eval_R_sl(const PolyTable& t, int n, double ln_x) {
  return eval_rows(t.coeffs_R.at(n), 1.0, ln_x);
}

SignedLog eval_p_sl(const PolyTable& t, int n, double ln_x) {
  return eval_rows(t.coeffs_p.at(n), 1.0, ln_x);
}

SignedLog eval_p_prime_sl(const PolyTable& t, int n, double ln_x) {
  const auto& row = t.coeffs_p.at(n);
  std::vector<SignedLog> terms;
  terms.reserve(row.size());
  for (size_t l = 1; l < row.size(); ++l)
    terms.push_back(SignedLog(row[l].sign,
                              row[l].logmag + std::log(double(l)) + (double(l) - 1.0) * ln_x));
  return signedlog_sum(terms);
}

double eval_T(const PolyTable& t, int n, double x) {
  return eval_T_sl(t, n, require_positive_x(x, "eval_T")).to_real();
}

double eval_R(const PolyTable& t, int n, double x) {
  return eval_R_sl(t, n, require_positive_x(x, "eval_R")).to_real();
}

double eval_p(const PolyTable& t, int n, double x) {
  return eval_p_sl(t, n, require_positive_x(x, "eval_p")).to_real();
}

double eval_p(double q, int n, double x) {
  PolyTable t = build_table(1.0, q, n);
  return eval_p(t, n, x);
}

double sw_recurrence_eval(double q, int n, double x) {
  if (n < 0) throw std::invalid_argument("sw_recurrence_eval: need n >= 0");
  if (!(q > 0.0 && q < 1.0)) throw std::domain_error("sw_recurrence_eval: need 0 < q < 1");
  double p0 = std::pow(q, 0.25);
  if (n == 0) return p0;
  double p1 = -std::pow(q, 0.75) / std::sqrt(1.0 - q) * (1.0 - std::pow(q, 1.5) * x);
  for (int k = 2; k <= n; ++k) {
    double qk = std::pow(q, k);
    double p2 = (std::pow(q, 2.0 * k) * x - std::sqrt(q) * (1.0 + q - qk)) /
                    std::sqrt(1.0 - qk) * p1 -
                q * q * std::sqrt(1.0 - qk / q) / std::sqrt(1.0 - qk) * p0;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

NormalizationConstants normalization_constants(double theta, double q, int max_degree) {
  if (!(theta > 0.0)) throw std::invalid_argument("normalization_constants: need theta > 0");
  if (!(q > 0.0 && q < 1.0))
    throw std::invalid_argument("normalization_constants: need 0 < q < 1");
  if (max_degree < 0 || max_degree > 32)
    throw std::invalid_argument("normalization_constants: max_degree must be in [0,32]");
  const double lq = std::log(q);
  NormalizationConstants c;
  for (int n = 0; n <= max_degree; ++n) {
    double lt = 0.5 * log_qq(q, n) +
                (-(n + 0.5) * (n + 0.5) - 0.5 * (theta - 1.0) * n * n) * lq;
    double lr = log_qq_scaled(q, theta, n) - 0.5 * log_qq(q, n) +
                (-(n * theta + 0.5) * (n * theta + 0.5) + 0.5 * n * n * theta * (theta - 1.0)) * lq;
    if (std::abs(lt) > 1e5 || std::abs(lr) > 1e5)
      throw std::range_error("normalization_constants: exceeds safe signed-log range");
    c.t_n.push_back(SignedLog(1, lt));
    c.r_n.push_back(SignedLog(1, lr));
  }
  return c;
}

}  // namespace dppsw
