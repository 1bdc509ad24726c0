#include "dppsw/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace dppsw {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Normalized Hermite functions phi_j(x) = H_j(x) e^{-x^2/2} / sqrt(2^j j! sqrt(pi)),
// phi_{j+1} = x sqrt(2/(j+1)) phi_j - sqrt(j/(j+1)) phi_{j-1}. Stable for any x.
// Returns phi_{n-1}(x), phi_n(x).
std::pair<double, double> hermite_fn_pair(int n, double x) {
  double p0 = std::pow(kPi, -0.25) * std::exp(-0.5 * x * x);
  if (n == 0) return {0.0, p0};
  double p1 = std::sqrt(2.0) * x * p0;
  for (int j = 1; j < n; ++j) {
    double p2 = x * std::sqrt(2.0 / (j + 1)) * p1 - std::sqrt(double(j) / (j + 1)) * p0;
    p0 = p1;
    p1 = p2;
  }
  return {p0, p1};
}

// Gauss-Hermite nodes by Newton iteration on the Hermite function (same zeros
// as H_n). Initial guesses march inward from the largest root.
QuadratureRule build_gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: size must be >= 1");
  QuadratureRule rule;
  rule.kind = QuadratureRule::Kind::gauss_hermite_log_substituted;
  rule.nodes.resize(n);
  rule.log_weights.resize(n);

  const int half = (n + 1) / 2;
  std::vector<double> roots(half);
  double z = 0.0;
  for (int i = 0; i < half; ++i) {
    // largest root first (i=0), then slide down (Numerical-Recipes style guesses)
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    } else if (i == 1) {
      z -= 1.14 * std::pow(n, 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * roots[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * roots[1];
    } else {
      z = 2.0 * z - roots[i - 2];
    }
    for (int it = 0; it < 100; ++it) {
      auto [pm, pn] = hermite_fn_pair(n, z);
      // phi_n'(z) = sqrt(2n) phi_{n-1}(z) - z phi_n(z)
      double dz = pn / (std::sqrt(2.0 * n) * pm - z * pn);
      z -= dz;
      if (std::abs(dz) < 1e-15 * (1.0 + std::abs(z))) break;
    }
    roots[i] = z;
  }
  // Christoffel weights: w_i = e^{-x_i^2} / sum_{j<n} phi_j(x_i)^2, kept as logs.
  auto log_weight_at = [&](double x) {
    double p0 = std::pow(kPi, -0.25) * std::exp(-0.5 * x * x);
    double s = p0 * p0;
    if (n > 1) {
      double p1 = std::sqrt(2.0) * x * p0;
      s += p1 * p1;
      for (int j = 1; j + 1 < n; ++j) {
        double p2 = x * std::sqrt(2.0 / (j + 1)) * p1 - std::sqrt(double(j) / (j + 1)) * p0;
        s += p2 * p2;
        p0 = p1;
        p1 = p2;
      }
    }
    return -x * x - std::log(s);
  };
  for (int i = 0; i < half; ++i) {
    double x = roots[i];
    double lw = log_weight_at(x);
    rule.nodes[n - 1 - i] = x;
    rule.log_weights[n - 1 - i] = lw;
    rule.nodes[i] = -x;
    rule.log_weights[i] = lw;
  }
  if (n % 2 == 1) rule.nodes[half - 1] = 0.0;  // exact symmetry
  return rule;
}

const QuadratureRule& cached_gauss_hermite(int n) {
  static std::mutex mu;
  static std::map<int, QuadratureRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) {
    it = cache.emplace(n, build_gauss_hermite(n)).first;
    // self-check: the n=0 moment of w(.;q) must come out as q^{-1/2}
    const QuadratureRule& r = it->second;
    for (double q : {0.5, 0.9}) {
      double L = -std::log(q);
      double s = 0.0;
      for (int i = 0; i < r.node_count(); ++i)
        s += std::exp(r.log_weights[i] + std::sqrt(2.0 * L) * r.nodes[i]);
      s /= std::sqrt(kPi);
      double want = std::exp(0.5 * L);
      if (!(std::abs(s - want) <= 1e-10 * want))
        throw std::runtime_error("gauss_hermite: moment self-check failed");
    }
  }
  return it->second;
}

}  // namespace

const QuadratureRule& gauss_hermite(int n) { return cached_gauss_hermite(n); }

LegendreRule gauss_legendre(int n, double lo, double hi) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: size must be >= 1");
  if (!(lo < hi)) throw std::invalid_argument("gauss_legendre: need lo < hi");
  LegendreRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    double xm = 0.5 * (hi + lo), xl = 0.5 * (hi - lo);
    double w = 2.0 * xl / ((1.0 - z * z) * pp * pp);
    r.nodes[i] = xm - xl * z;
    r.weights[i] = w;
    r.nodes[n - 1 - i] = xm + xl * z;
    r.weights[n - 1 - i] = w;
  }
  return r;
}

double integrate_against_weight(const std::function<double(double)>& f, double q,
                                int rule_size) {
  SignedLog v = integrate_against_weight_sl(
      [&f](double lnz) { return SignedLog::from_real(f(std::exp(lnz))); }, q, rule_size);
  return v.to_real();
}

SignedLog integrate_against_weight_sl(const std::function<SignedLog(double)>& f, double q,
                                      int rule_size) {
  if (!(q > 0.0 && q < 1.0)) throw std::domain_error("integrate_against_weight: need 0 < q < 1");
  const QuadratureRule& rule = gauss_hermite(rule_size);
  const double L = -std::log(q);
  const double scale = std::sqrt(2.0 * L);
  std::vector<SignedLog> terms(rule.node_count());
  for (int i = 0; i < rule.node_count(); ++i) {
    double s = scale * rule.nodes[i];
    SignedLog fv = f(s);
    terms[i] = SignedLog(fv.sign, fv.logmag + s + rule.log_weights[i]);
  }
  SignedLog total = signedlog_sum(terms);
  return total * SignedLog(1, -0.5 * std::log(kPi));
}

int recommended_rule_size(double q, double max_power) {
  const double L = -std::log(q);
  const double u_star = (max_power + 1.0) * std::sqrt(0.5 * L) + 6.0;
  int n = static_cast<int>(std::ceil(0.5 * u_star * u_star * 1.1));
  return std::max(200, n);
}

double adaptive_trapezoid(const std::function<double(double)>& f, double lo, double hi,
                          double tol, int max_doublings) {
  if (!(lo < hi)) throw std::invalid_argument("adaptive_trapezoid: need lo < hi");
  double h = hi - lo;
  double prev = 0.5 * h * (f(lo) + f(hi));
  long n = 1;
  for (int k = 0; k < max_doublings; ++k) {
    double sum = 0.0;
    double step = h / n;
    for (long i = 0; i < n; ++i) sum += f(lo + (i + 0.5) * step);
    double cur = 0.5 * (prev + step * sum);
    n *= 2;
    if (k > 3 && std::abs(cur - prev) < tol) return cur;
    prev = cur;
  }
  return prev;
}

}  // namespace dppsw
