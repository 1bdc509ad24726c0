#include "dppsw/process.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "dppsw/determinant.hpp"
#include "dppsw/qseries.hpp"
#include "dppsw/quadrature.hpp"

namespace dppsw {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_strictly_increasing(std::span<const double> v, const char* who) {
  for (size_t i = 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1]))
      throw std::invalid_argument(std::string(who) + ": points not strictly increasing");
}

double log_gaussian_p(double t, double y, double x) {
  return -(y - x) * (y - x) / (2.0 * t) - 0.5 * std::log(2.0 * kPi * t);
}

double log_geo_p(double t, double y, double x, double sigma) {
  double d = std::log(y / x);
  return -d * d / (2.0 * sigma * sigma * t) - std::log(y * sigma) -
         0.5 * std::log(2.0 * kPi * t);
}

// ln(e^u - 1) for u > 0
double log_expm1_pos(double u) { return u + std::log1p(-std::exp(-u)); }

// ln[2 sinh(u/2)] for u > 0
double log_2sinh_half(double u) { return 0.5 * u + std::log1p(-std::exp(-u)); }

SignedLog exp_matrix_det(std::span<const double> nu, std::span<const double> x) {
  const int n = static_cast<int>(nu.size());
  std::vector<SignedLog> e(n * n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) e[j * n + k] = SignedLog(1, nu[j] * x[k]);
  return det_small_log(n, e);
}

}  // namespace

Configuration Configuration::make_ordered(std::vector<double> pts, Domain dom) {
  require_strictly_increasing(pts, "Configuration");
  if (dom == Domain::positive_half_line)
    for (double p : pts)
      if (!(p > 0.0)) throw std::invalid_argument("Configuration: points must be positive");
  Configuration c;
  c.points = std::move(pts);
  c.domain = dom;
  c.ordered = true;
  return c;
}

DriftSpec DriftSpec::special(int n_particles, double sigma) {
  if (n_particles < 1) throw std::invalid_argument("DriftSpec: need N >= 1");
  if (!(sigma > 0.0)) throw std::invalid_argument("DriftSpec: need sigma > 0");
  DriftSpec d;
  d.nu.resize(n_particles);
  for (int j = 1; j <= n_particles; ++j)
    d.nu[j - 1] = sigma * (j - 0.5 * (n_particles + 1));
  return d;
}

DriftSpec DriftSpec::make(std::vector<double> nu) {
  for (size_t i = 1; i < nu.size(); ++i)
    if (nu[i] < nu[i - 1]) throw std::invalid_argument("DriftSpec: not weakly increasing");
  DriftSpec d;
  d.nu = std::move(nu);
  return d;
}

MultitimeSpec MultitimeSpec::make(std::vector<double> times,
                                  std::vector<Configuration> configs) {
  if (times.empty() || times.size() != configs.size())
    throw std::invalid_argument("MultitimeSpec: need equal nonzero times/configs");
  if (!(times[0] > 0.0)) throw std::invalid_argument("MultitimeSpec: times must be positive");
  for (size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw std::invalid_argument("MultitimeSpec: times not increasing");
  const int n = configs[0].size();
  for (const auto& c : configs)
    if (c.size() != n) throw std::invalid_argument("MultitimeSpec: configuration sizes differ");
  MultitimeSpec s;
  s.times = std::move(times);
  s.configurations = std::move(configs);
  return s;
}

double gaussian_p(double t, double y, double x) {
  if (!(t > 0.0)) throw std::domain_error("gaussian_p: need t > 0");
  return std::exp(log_gaussian_p(t, y, x));
}

double drifted_p(double t, double y, double x, double nu) {
  if (!(t > 0.0)) throw std::domain_error("drifted_p: need t > 0");
  return std::exp(nu * (y - x) - 0.5 * nu * nu * t + log_gaussian_p(t, y, x));
}

SignedLog km_lgv_det(double t, const Configuration& y, const Configuration& x) {
  if (!(t > 0.0)) throw std::domain_error("km_lgv_det: need t > 0");
  const int n = y.size();
  if (n != x.size()) throw std::invalid_argument("km_lgv_det: size mismatch");
  std::vector<SignedLog> e(n * n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      e[j * n + k] = SignedLog(1, log_gaussian_p(t, y.points[j], x.points[k]));
  return det_small_log(n, e);
}

SignedLog km_lgv_det_drift(double t, const Configuration& y, const Configuration& x,
                           const DriftSpec& nu) {
  const int n = y.size();
  if (nu.size() != n) throw std::invalid_argument("km_lgv_det_drift: drift size mismatch");
  double dot = 0.0, nn = 0.0;
  for (int j = 0; j < n; ++j) {
    dot += nu.nu[j] * (y.points[j] - x.points[j]);
    nn += nu.nu[j] * nu.nu[j];
  }
  SignedLog q = km_lgv_det(t, y, x);
  return SignedLog(q.sign, q.logmag + dot - 0.5 * nn * t);
}

double bbo_density(double t, const Configuration& y, const Configuration& x,
                   const DriftSpec& nu) {
  const int n = y.size();
  if (x.size() != n || nu.size() != n) throw std::invalid_argument("bbo_density: size mismatch");
  require_strictly_increasing(x.points, "bbo_density(x)");
  for (int i = 1; i < n; ++i)
    if (!(nu.nu[i] > nu.nu[i - 1]))
      throw std::invalid_argument(
          "bbo_density: coincident drift values; use the special-case densities");
  double nn = 0.0;
  for (double v : nu.nu) nn += v * v;
  SignedLog num = exp_matrix_det(nu.nu, y.points);
  SignedLog den = exp_matrix_det(nu.nu, x.points);
  SignedLog q = km_lgv_det(t, y, x);
  SignedLog r = num / den * q;
  return SignedLog(r.sign, r.logmag - 0.5 * t * nn).to_real();
}

double h_transform_density(double t, const Configuration& y, const Configuration& x) {
  SignedLog r = vandermonde(y) / vandermonde(x) * km_lgv_det(t, y, x);
  return r.to_real();
}

SignedLog vandermonde(const Configuration& x) {
  const int n = x.size();
  SignedLog p = SignedLog::one();
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) p *= SignedLog::from_real(x.points[k] - x.points[j]);
  return p;
}

double gue_started_at_zero(double t, const Configuration& y) {
  if (!(t > 0.0)) throw std::domain_error("gue_started_at_zero: need t > 0");
  const int n = y.size();
  double yy = 0.0;
  for (double v : y.points) yy += v * v;
  double log_c = -0.5 * n * n * std::log(t) - 0.5 * n * std::log(2.0 * kPi);
  for (int j = 1; j <= n; ++j) log_c -= std::lgamma(j);
  SignedLog h = vandermonde(y);
  return SignedLog(1, log_c + 2.0 * h.logmag - yy / (2.0 * t)).to_real();
}

double log_c_multitime(int n_particles, double a, double sigma, double t1, double tM) {
  const int N = n_particles;
  double s = 0.0;
  for (int n = 1; n < N; ++n) s -= (N - n) * log_expm1_pos(n * a * sigma);
  s -= N * (double(N) * N - 1.0) / 24.0 * (sigma * sigma * tM - 2.0 * a * sigma + a * a / t1);
  return s;
}

double multitime_density(const MultitimeSpec& spec, const ModelParams& params,
                         Prop1Form form) {
  params.validate();
  const int N = params.n_particles;
  const int M = spec.n_times();
  if (spec.configurations[0].size() != N)
    throw std::invalid_argument("multitime_density: configuration size != N");
  const double a = params.a, sigma = params.sigma;
  const double t1 = spec.times.front(), tM = spec.times.back();
  const auto& xM = spec.configurations[M - 1].points;
  const auto& x1 = spec.configurations[0].points;

  SignedLog r(1, log_c_multitime(N, a, sigma, t1, tM));
  if (form == Prop1Form::sinh_product) {
    double s = 0.0;
    for (int j = 0; j < N; ++j)
      for (int k = j + 1; k < N; ++k) s += log_2sinh_half(sigma * (xM[k] - xM[j]));
    for (int j = 0; j < N; ++j)
      for (int k = j + 1; k < N; ++k) s += log_2sinh_half(a * (x1[k] - x1[j]) / t1);
    r *= SignedLog(1, s);
  } else {
    SignedLog p = SignedLog::one();
    double sumM = 0.0, sum1 = 0.0;
    for (int j = 0; j < N; ++j) {
      sumM += sigma * xM[j];
      sum1 += a * x1[j] / t1;
    }
    p *= SignedLog(1, -0.5 * (N - 1) * (sumM + sum1));
    for (int j = 0; j < N; ++j)
      for (int k = j + 1; k < N; ++k) {
        p *= SignedLog::from_real(std::exp(sigma * xM[k]) - std::exp(sigma * xM[j]));
        p *= SignedLog::from_real(std::exp(a * x1[k] / t1) - std::exp(a * x1[j] / t1));
      }
    r *= p;
  }
  for (int m = 0; m + 1 < M; ++m)
    r *= km_lgv_det(spec.times[m + 1] - spec.times[m], spec.configurations[m + 1],
                    spec.configurations[m]);
  double s1 = 0.0;
  for (int j = 0; j < N; ++j) s1 += log_gaussian_p(t1, x1[j], 0.0);
  r *= SignedLog(1, s1);
  return r.to_real();
}

double geo_transition(double t, double y, double x, double sigma) {
  if (!(t > 0.0)) throw std::domain_error("geo_transition: need t > 0");
  if (!(x > 0.0 && y > 0.0)) throw std::domain_error("geo_transition: need x, y > 0");
  return std::exp(log_geo_p(t, y, x, sigma));
}

double geo_transition_nu(double t, double y, double x, double sigma, double nu_tilde) {
  if (!(t > 0.0)) throw std::domain_error("geo_transition_nu: need t > 0");
  if (!(x > 0.0 && y > 0.0)) throw std::domain_error("geo_transition_nu: need x, y > 0");
  double d = std::log(y / x) - nu_tilde * sigma * sigma * t;
  return std::exp(-d * d / (2.0 * sigma * sigma * t)) / (y * sigma * std::sqrt(2.0 * kPi * t));
}

double geo_p_symmetric(double t, double x, double y, double sigma, double nu_tilde) {
  if (!(t > 0.0)) throw std::domain_error("geo_p_symmetric: need t > 0");
  if (!(x > 0.0 && y > 0.0)) throw std::domain_error("geo_p_symmetric: need x, y > 0");
  double d = std::log(y) - std::log(x);
  return std::abs(sigma) / (2.0 * std::sqrt(2.0 * kPi * t)) *
         std::pow(x * y, -nu_tilde) *
         std::exp(-0.5 * sigma * sigma * nu_tilde * nu_tilde * t -
                  d * d / (2.0 * sigma * sigma * t));
}

SignedLog km_lgv_det_geo(double t, const Configuration& y, const Configuration& x,
                         double sigma) {
  if (!(t > 0.0)) throw std::domain_error("km_lgv_det_geo: need t > 0");
  const int n = y.size();
  if (n != x.size()) throw std::invalid_argument("km_lgv_det_geo: size mismatch");
  std::vector<SignedLog> e(n * n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      e[j * n + k] = SignedLog(1, log_geo_p(t, y.points[j], x.points[k], sigma));
  return det_small_log(n, e);
}

double transformed_density_y(const MultitimeSpec& spec, const ModelParams& params) {
  params.validate();
  const int N = params.n_particles;
  const int M = spec.n_times();
  const double a = params.a, sigma = params.sigma;
  const double t1 = spec.times.front(), tM = spec.times.back();
  const double theta1 = a / (sigma * t1);
  const auto& yM = spec.configurations[M - 1].points;
  const auto& y1 = spec.configurations[0].points;
  for (const auto& c : spec.configurations)
    if (c.domain != Configuration::Domain::positive_half_line)
      throw std::invalid_argument("transformed_density_y: configurations must be on R+");

  SignedLog r(1, log_c_multitime(N, a, sigma, t1, tM));
  double logyM = 0.0;
  for (int j = 0; j < N; ++j) logyM += std::log(yM[j]);
  r *= SignedLog(1, -0.5 * (N - 1) * logyM);
  for (int j = 0; j < N; ++j)
    for (int k = j + 1; k < N; ++k) r *= SignedLog::from_real(yM[k] - yM[j]);
  for (int m = 0; m + 1 < M; ++m)
    r *= km_lgv_det_geo(spec.times[m + 1] - spec.times[m], spec.configurations[m + 1],
                        spec.configurations[m], sigma);
  double s1 = 0.0;
  for (int j = 0; j < N; ++j) s1 += log_geo_p(t1, y1[j], 1.0, sigma);
  double logy1 = 0.0;
  for (int j = 0; j < N; ++j) logy1 += std::log(y1[j]);
  r *= SignedLog(1, s1 - 0.5 * (N - 1) * theta1 * logy1);
  for (int j = 0; j < N; ++j)
    for (int k = j + 1; k < N; ++k)
      r *= SignedLog::from_real(std::pow(y1[k], theta1) - std::pow(y1[j], theta1));
  return r.to_real();
}

double log_C_biorthogonal(int n_particles, double a, double sigma, double t) {
  const int N = n_particles;
  double s = 0.0;
  for (int n = 1; n < N; ++n) s -= (N - n) * log_expm1_pos(n * a * sigma);
  s -= N / 12.0 *
       ((N + 1.0) * (2.0 * N + 1.0) * sigma * sigma * t + 2.0 * (double(N) * N - 1.0) * a * sigma +
        (N - 1.0) * (2.0 * N - 1.0) * a * a / t);
  return s;
}

double biorthogonal_density_z(double t, const Configuration& z, const ModelParams& params,
                              BioForm form) {
  ModelParams p = params;
  p.t = t;
  p.validate();
  const int N = p.n_particles;
  if (z.size() != N) throw std::invalid_argument("biorthogonal_density_z: size != N");
  if (z.domain != Configuration::Domain::positive_half_line)
    throw std::invalid_argument("biorthogonal_density_z: z must be on R+");
  const double q = p.q(), theta = p.theta();

  double logw = 0.0;
  for (double zj : z.points) logw += log_weight_w(std::log(zj), q);

  if (form == BioForm::product) {
    SignedLog r(1, log_C_biorthogonal(N, p.a, p.sigma, t) + logw);
    for (int j = 0; j < N; ++j)
      for (int k = j + 1; k < N; ++k) {
        r *= SignedLog::from_real(z.points[k] - z.points[j]);
        r *= SignedLog::from_real(std::pow(z.points[k], theta) - std::pow(z.points[j], theta));
      }
    return r.to_real();
  }

  PolyTable table = build_table(theta, q, N - 1);
  std::vector<SignedLog> eT(N * N), eR(N * N);
  for (int j = 0; j < N; ++j) {
    double lz = std::log(z.points[j]);
    for (int k = 0; k < N; ++k) {
      eT[j * N + k] = eval_T_sl(table, k, lz);
      eR[j * N + k] = eval_R_sl(table, k, lz);
    }
  }
  SignedLog r = det_small_log(N, eT) * det_small_log(N, eR);
  return SignedLog(r.sign, r.logmag + logw).to_real();
}

SignedLog partition_function(const ModelParams& params) {
  params.validate();
  return SignedLog(1, -log_C_biorthogonal(params.n_particles, params.a, params.sigma, params.t));
}

SignedLog partition_function_oracle(const ModelParams& params, int rule_size) {
  params.validate();
  const int N = params.n_particles;
  if (N > 3) throw std::invalid_argument("partition_function_oracle: N <= 3 only");
  const double q = params.q(), theta = params.theta();
  const int rs = std::max(rule_size, recommended_rule_size(q, (N - 1) * (1.0 + theta)));
  std::vector<SignedLog> m(N * N);
  for (int j = 1; j <= N; ++j)
    for (int k = 1; k <= N; ++k) {
      double c = (j - 1) + theta * (k - 1);
      m[(j - 1) * N + (k - 1)] = integrate_against_weight_sl(
          [c](double lnz) { return SignedLog(1, c * lnz); }, q, rs);
    }
  return det_small_log(N, m);
}

double t0_ensemble_density(double q0, const Configuration& z) {
  if (!(q0 > 0.0 && q0 < 1.0)) throw std::domain_error("t0_ensemble_density: need 0 < q0 < 1");
  if (z.domain != Configuration::Domain::positive_half_line)
    throw std::invalid_argument("t0_ensemble_density: z must be on R+");
  const int N = z.size();
  double log_c = N * (4.0 * N * N - 1.0) / 6.0 * std::log(q0);
  for (int j = 1; j < N; ++j) log_c -= log_qq(q0, j);
  double logw = 0.0;
  for (double zj : z.points) logw += log_weight_w(std::log(zj), q0);
  SignedLog h = vandermonde(z);
  return SignedLog(1, log_c + logw + 2.0 * h.logmag).to_real();
}

double survival_probability(double T, const Configuration& x, const DriftSpec& nu,
                            int grid_size) {
  if (!(T > 0.0)) throw std::domain_error("survival_probability: need T > 0");
  const int N = x.size();
  if (nu.size() != N) throw std::invalid_argument("survival_probability: size mismatch");
  if (N > 3) throw std::invalid_argument("survival_probability: N <= 3 only (quadrature cost)");

  double lo = x.points[0] + nu.nu[0] * T, hi = x.points[N - 1] + nu.nu[N - 1] * T;
  const double pad = 10.0 * std::sqrt(T) + 2.0;
  lo -= pad;
  hi += pad;

  auto qn = [&](std::span<const double> y) {
    double dot = 0.0, nn = 0.0;
    std::vector<SignedLog> e(N * N);
    for (int j = 0; j < N; ++j) {
      dot += nu.nu[j] * (y[j] - x.points[j]);
      nn += nu.nu[j] * nu.nu[j];
      for (int k = 0; k < N; ++k)
        e[j * N + k] = SignedLog(1, log_gaussian_p(T, y[j], x.points[k]));
    }
    SignedLog d = det_small_log(N, e);
    return SignedLog(d.sign, d.logmag + dot - 0.5 * nn * T).to_real();
  };

  if (N == 1) {
    LegendreRule r = gauss_legendre(grid_size, lo, hi);
    double s = 0.0;
    for (int i = 0; i < grid_size; ++i) {
      double y[1] = {r.nodes[i]};
      s += r.weights[i] * qn(y);
    }
    return s;
  }
  if (N == 2) {
    LegendreRule outer = gauss_legendre(grid_size, lo, hi);
    double s = 0.0;
    for (int i = 0; i < grid_size; ++i) {
      double y2 = outer.nodes[i];
      if (y2 <= lo) continue;
      LegendreRule inner = gauss_legendre(grid_size, lo, y2);
      double si = 0.0;
      for (int j = 0; j < grid_size; ++j) {
        double y[2] = {inner.nodes[j], y2};
        si += inner.weights[j] * qn(y);
      }
      s += outer.weights[i] * si;
    }
    return s;
  }
  // N == 3
  LegendreRule outer = gauss_legendre(grid_size, lo, hi);
  double s = 0.0;
  for (int i = 0; i < grid_size; ++i) {
    double y3 = outer.nodes[i];
    LegendreRule mid = gauss_legendre(grid_size, lo, y3);
    double sm = 0.0;
    for (int j = 0; j < grid_size; ++j) {
      double y2 = mid.nodes[j];
      LegendreRule inner = gauss_legendre(grid_size / 2, lo, y2);
      double si = 0.0;
      for (int k = 0; k < grid_size / 2; ++k) {
        double y[3] = {inner.nodes[k], y2, y3};
        si += inner.weights[k] * qn(y);
      }
      sm += mid.weights[j] * si;
    }
    s += outer.weights[i] * sm;
  }
  return s;
}

double survival_probability_limit(const Configuration& x, const DriftSpec& nu) {
  const int n = x.size();
  if (nu.size() != n) throw std::invalid_argument("survival_probability_limit: size mismatch");
  double dot = 0.0;
  for (int j = 0; j < n; ++j) dot += nu.nu[j] * x.points[j];
  SignedLog d = exp_matrix_det(nu.nu, x.points);
  return SignedLog(d.sign, d.logmag - dot).to_real();
}

double noncolliding_geo_density(const MultitimeSpec& spec, const Configuration& x,
                                double sigma) {
  const int N = x.size();
  const int M = spec.n_times();
  if (x.domain != Configuration::Domain::positive_half_line)
    throw std::invalid_argument("noncolliding_geo_density: x must be on R+");
  for (const auto& c : spec.configurations)
    if (c.domain != Configuration::Domain::positive_half_line || c.size() != N)
      throw std::invalid_argument("noncolliding_geo_density: bad configurations");

  SignedLog r = SignedLog::one();
  const auto& yM = spec.configurations[M - 1].points;
  for (int j = 0; j < N; ++j)
    for (int k = j + 1; k < N; ++k)
      r *= SignedLog::from_real(std::log(yM[k]) - std::log(yM[j]));
  for (int m = 0; m + 1 < M; ++m)
    r *= km_lgv_det_geo(spec.times[m + 1] - spec.times[m], spec.configurations[m + 1],
                        spec.configurations[m], sigma);
  r *= km_lgv_det_geo(spec.times[0], spec.configurations[0], x, sigma);
  for (int j = 0; j < N; ++j)
    for (int k = j + 1; k < N; ++k)
      r = r / SignedLog::from_real(std::log(x.points[k]) - std::log(x.points[j]));
  return r.to_real();
}

double zero_drift_multitime_density(const MultitimeSpec& spec, const Configuration& x) {
  const int N = x.size();
  const int M = spec.n_times();
  SignedLog r = SignedLog::one();
  const auto& xM = spec.configurations[M - 1].points;
  for (int j = 0; j < N; ++j)
    for (int k = j + 1; k < N; ++k) r *= SignedLog::from_real(xM[k] - xM[j]);
  for (int m = 0; m + 1 < M; ++m)
    r *= km_lgv_det(spec.times[m + 1] - spec.times[m], spec.configurations[m + 1],
                    spec.configurations[m]);
  r *= km_lgv_det(spec.times[0], spec.configurations[0], x);
  r = r / vandermonde(x);
  return r.to_real();
}

}  // namespace dppsw
