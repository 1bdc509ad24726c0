#include "dppsw/kernel.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "dppsw/determinant.hpp"
#include "dppsw/quadrature.hpp"

namespace dppsw {

namespace {
constexpr double kPi = 3.14159265358979323846;

// Partial sums run in native doubles while every polynomial magnitude stays
// below e^650, else in SignedLog.
constexpr double kNativeCutoff = 650.0;

SignedLog pair_sum(const PolyTable& table, int n_terms, double ln_x, double ln_y) {
  std::vector<SignedLog> rj(n_terms), tj(n_terms);
  bool native_ok = true;
  for (int j = 0; j < n_terms; ++j) {
    rj[j] = eval_R_sl(table, j, ln_x);
    tj[j] = eval_T_sl(table, j, ln_y);
    double m = rj[j].logmag + tj[j].logmag;
    if (rj[j].sign != 0 && tj[j].sign != 0 && std::abs(m) > kNativeCutoff) native_ok = false;
    if (rj[j].sign != 0 && std::abs(rj[j].logmag) > kNativeCutoff) native_ok = false;
    if (tj[j].sign != 0 && std::abs(tj[j].logmag) > kNativeCutoff) native_ok = false;
  }
  if (native_ok) {
    double s = 0.0, comp = 0.0;
    for (int j = 0; j < n_terms; ++j) {
      double v = rj[j].to_real() * tj[j].to_real();
      double tmp = s + v;
      if (std::abs(s) >= std::abs(v))
        comp += (s - tmp) + v;
      else
        comp += (v - tmp) + s;
      s = tmp;
    }
    return SignedLog::from_real(s + comp);
  }
  std::vector<SignedLog> terms(n_terms);
  for (int j = 0; j < n_terms; ++j) terms[j] = rj[j] * tj[j];
  return signedlog_sum(terms);
}

}  // namespace

void ModelParams::validate() const {
  if (n_particles < 1) throw std::invalid_argument("ModelParams: need N >= 1");
  if (!(a > 0.0)) throw std::invalid_argument("ModelParams: need a > 0");
  if (!(sigma > 0.0)) throw std::invalid_argument("ModelParams: need sigma > 0");
  if (!(t > 0.0)) throw std::invalid_argument("ModelParams: need t > 0");
}

double weight_w(double z, double q) {
  if (!(z > 0.0)) throw std::domain_error("weight_w: need z > 0");
  if (!(q > 0.0 && q < 1.0)) throw std::domain_error("weight_w: need 0 < q < 1");
  return std::exp(log_weight_w(std::log(z), q));
}

double weight_w_beta(double z, double beta) {
  if (!(z > 0.0)) throw std::domain_error("weight_w_beta: need z > 0");
  if (!(beta > 0.0)) throw std::domain_error("weight_w_beta: need beta > 0");
  double lz = std::log(z);
  return beta / std::sqrt(kPi) * std::exp(-beta * beta * lz * lz);
}

double log_weight_w(double s, double q) {
  const double L = -std::log(q);
  return -s * s / (2.0 * L) - 0.5 * std::log(2.0 * kPi * L);
}

KernelHandle KernelHandle::make(const ModelParams& p) {
  p.validate();
  KernelHandle h;
  h.params = p;
  h.table = build_table(p.theta(), p.q(), p.n_particles - 1);
  h.shift = 0.5 * (p.n_particles - 1) * p.a * p.sigma +
            0.5 * (p.n_particles + 1) * p.sigma * p.sigma * p.t;
  return h;
}

SignedLog kernel_K_sl(const KernelHandle& h, double ln_x, double ln_y) {
  const double q = h.params.q();
  SignedLog s = pair_sum(h.table, h.params.n_particles, ln_x, ln_y);
  double lw = 0.5 * (log_weight_w(ln_x, q) + log_weight_w(ln_y, q));
  return SignedLog(s.sign, s.logmag + lw);
}

double kernel_K(const KernelHandle& h, double x, double y) {
  if (!(x > 0.0 && y > 0.0)) throw std::domain_error("kernel_K: need x, y > 0");
  return kernel_K_sl(h, std::log(x), std::log(y)).to_real();
}

double kernel_K_t0(double q0, int n_particles, double x, double y, T0Form form) {
  if (!(q0 > 0.0 && q0 < 1.0)) throw std::domain_error("kernel_K_t0: need 0 < q0 < 1");
  if (!(x > 0.0 && y > 0.0)) throw std::domain_error("kernel_K_t0: need x, y > 0");
  if (n_particles < 1) throw std::invalid_argument("kernel_K_t0: need N >= 1");
  static thread_local PolyTable cache;
  if (cache.q != q0 || cache.theta != 1.0 || cache.max_degree < n_particles) {
    cache = build_table(1.0, q0, std::min(32, n_particles + 1));
  }
  const double lx = std::log(x), ly = std::log(y);
  const double lw = 0.5 * (log_weight_w(lx, q0) + log_weight_w(ly, q0));

  if (form == T0Form::cd) {
    const int N = n_particles;
    // the divided difference cancels catastrophically near the diagonal;
    // switch to the confluent/sum evaluation there
    if (std::abs(x - y) >= 1e-4 * (1.0 + std::abs(x))) {
      SignedLog pNx = eval_p_sl(cache, N, lx);
      SignedLog pNy = eval_p_sl(cache, N, ly);
      SignedLog pMx = eval_p_sl(cache, N - 1, lx);
      SignedLog pMy = eval_p_sl(cache, N - 1, ly);
      SignedLog num = pNx * pMy - pMx * pNy;
      SignedLog pref(1, 0.5 * std::log1p(-std::pow(q0, N)) - 2.0 * N * std::log(q0));
      SignedLog ratio = num / SignedLog::from_real(x - y);
      SignedLog v = pref * ratio;
      return SignedLog(v.sign, v.logmag + lw).to_real();
    }
    if (x == y) {
      // confluent form with the exact coefficient-table derivative
      SignedLog pN = eval_p_sl(cache, n_particles, lx);
      SignedLog pM = eval_p_sl(cache, n_particles - 1, lx);
      SignedLog dN = eval_p_prime_sl(cache, n_particles, lx);
      SignedLog dM = eval_p_prime_sl(cache, n_particles - 1, lx);
      SignedLog num = dN * pM - dM * pN;
      SignedLog pref(1, 0.5 * std::log1p(-std::pow(q0, n_particles)) -
                            2.0 * n_particles * std::log(q0));
      SignedLog v = pref * num;
      return SignedLog(v.sign, v.logmag + lw).to_real();
    }
    // near-diagonal: fall through to the sum form
  }

  std::vector<SignedLog> terms(n_particles);
  for (int j = 0; j < n_particles; ++j)
    terms[j] = eval_p_sl(cache, j, lx) * eval_p_sl(cache, j, ly);
  SignedLog s = signedlog_sum(terms);
  return SignedLog(s.sign, s.logmag + lw).to_real();
}

SignedLog kernel_mapped_sl(const KernelHandle& h, double x, double y) {
  const double sig = h.params.sigma;
  const double lx = sig * x + h.shift;
  const double ly = sig * y + h.shift;
  SignedLog k = kernel_K_sl(h, lx, ly);
  double jac = std::log(sig) + 0.5 * sig * (x + y) + h.shift;
  return SignedLog(k.sign, k.logmag + jac);
}

double kernel_mapped(const KernelHandle& h, double x, double y) {
  return kernel_mapped_sl(h, x, y).to_real();
}

namespace {

double correlation_det(std::vector<SignedLog> entries, int n) {
  return det_small_log(n, entries).to_real();
}

}  // namespace

double correlation(const KernelHandle& h, std::span<const double> points) {
  const int n = static_cast<int>(points.size());
  if (n == 0) throw std::invalid_argument("correlation: need at least one point");
  if (n > h.params.n_particles)
    throw std::invalid_argument("correlation: more points than particles");
  std::vector<SignedLog> e(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) e[i * n + j] = kernel_mapped_sl(h, points[i], points[j]);
  return correlation_det(std::move(e), n);
}

double correlation_z(const KernelHandle& h, std::span<const double> points) {
  const int n = static_cast<int>(points.size());
  if (n == 0) throw std::invalid_argument("correlation_z: need at least one point");
  if (n > h.params.n_particles)
    throw std::invalid_argument("correlation_z: more points than particles");
  std::vector<SignedLog> e(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (!(points[i] > 0.0)) throw std::domain_error("correlation_z: need z > 0");
      e[i * n + j] = kernel_K_sl(h, std::log(points[i]), std::log(points[j]));
    }
  return correlation_det(std::move(e), n);
}

double gap_probability(const KernelHandle& h, double lo, double hi, int nystrom_size) {
  if (!(lo < hi)) throw std::invalid_argument("gap_probability: need lo < hi");
  if (nystrom_size < 4) throw std::invalid_argument("gap_probability: nystrom_size < 4");
  LegendreRule rule = gauss_legendre(nystrom_size, lo, hi);
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(nystrom_size, nystrom_size);
  std::vector<double> sqw(nystrom_size);
  for (int i = 0; i < nystrom_size; ++i) sqw[i] = std::sqrt(rule.weights[i]);
  for (int i = 0; i < nystrom_size; ++i)
    for (int j = 0; j < nystrom_size; ++j)
      m(i, j) -= sqw[i] * kernel_mapped(h, rule.nodes[i], rule.nodes[j]) * sqw[j];
  return m.partialPivLu().determinant();
}

double kernel_scaled_q1(double q, int n_particles, double xt, double yt) {
  if (!(q > 0.0 && q < 1.0)) throw std::domain_error("kernel_scaled_q1: need 0 < q < 1");
  const double g = std::sqrt(2.0 * (1.0 - q));
  const double zx = std::pow(q, -1.5) * xt * g + std::pow(q, -0.5);
  const double zy = std::pow(q, -1.5) * yt * g + std::pow(q, -0.5);
  if (!(zx > 0.0 && zy > 0.0))
    throw std::domain_error("kernel_scaled_q1: mapped point not positive");
  return kernel_K_t0(q, n_particles, zx, zy) * std::pow(q, -1.5) * g;
}

double gue_density(int n_particles, double t, double x) {
  if (!(t > 0.0)) throw std::domain_error("gue_density: need t > 0");
  const double s = std::sqrt(2.0 * t);
  double p0 = std::pow(kPi, -0.25) * std::exp(-0.5 * (x / s) * (x / s));
  double acc = p0 * p0;
  if (n_particles > 1) {
    double u = x / s;
    double p1 = std::sqrt(2.0) * u * p0;
    acc += p1 * p1;
    for (int j = 1; j + 1 < n_particles; ++j) {
      double p2 = u * std::sqrt(2.0 / (j + 1)) * p1 - std::sqrt(double(j) / (j + 1)) * p0;
      acc += p2 * p2;
      p0 = p1;
      p1 = p2;
    }
  }
  return acc / s;
}

double gue_density_cd(int n_particles, double t, double x) {
  if (!(t > 0.0)) throw std::domain_error("gue_density_cd: need t > 0");
  const double s = std::sqrt(2.0 * t);
  const double u = x / s;
  const int N = n_particles;
  double pN1 = 0.0, pN = 0.0, pNp1 = 0.0;
  {
    double p0 = std::pow(kPi, -0.25) * std::exp(-0.5 * u * u);
    double p1 = std::sqrt(2.0) * u * p0;
    if (N - 1 == 0) pN1 = p0;
    if (N == 0) pN = p0;
    if (N - 1 == 1) pN1 = p1;
    if (N == 1) pN = p1;
    if (N + 1 == 1) pNp1 = p1;
    for (int j = 1; j <= N; ++j) {
      double p2 = u * std::sqrt(2.0 / (j + 1)) * p1 - std::sqrt(double(j) / (j + 1)) * p0;
      p0 = p1;
      p1 = p2;
      if (j + 1 == N - 1) pN1 = p2;
      if (j + 1 == N) pN = p2;
      if (j + 1 == N + 1) pNp1 = p2;
    }
  }
  return (N * pN * pN - std::sqrt(double(N) * (N + 1)) * pN1 * pNp1) / s;
}

double semicircle_density(int n_particles, double t, double x) {
  if (!(t > 0.0)) throw std::domain_error("semicircle_density: need t > 0");
  double r2 = 4.0 * n_particles * t - x * x;
  if (r2 <= 0.0) return 0.0;
  return std::sqrt(r2) / (2.0 * t * kPi);
}

}  // namespace dppsw
