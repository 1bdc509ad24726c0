#pragma once

#include <span>
#include <vector>

#include "dppsw/signed_log.hpp"
#include "dppsw/swpoly.hpp"

namespace dppsw {

/// Parameters of the noncolliding Brownian motion with drift: N particles
/// started at the equidistant lattice a*(j - (N+1)/2) with drift coefficients
/// sigma*(j - (N+1)/2). Time t maps them onto the polynomial parameters
///   theta(t) = a/(sigma t),  q(t) = e^{-sigma^2 t},
/// with the special time t0 = a/sigma where theta = 1.
struct ModelParams {
  int n_particles = 1;
  double a = 1.0;
  double sigma = 1.0;
  double t = 1.0;

  double theta() const { return a / (sigma * t); }
  double q() const { return std::exp(-sigma * sigma * t); }
  double log_q() const { return -sigma * sigma * t; }
  double t0() const { return a / sigma; }

  void validate() const;
};

/// Stieltjes-Wigert weight w(z;q) = exp(-(ln z)^2/(2|ln q|)) / sqrt(2 pi |ln q|).
double weight_w(double z, double q);
/// The same weight in the (beta) parametrization w(z) = (beta/sqrt(pi)) e^{-beta^2 (ln z)^2};
/// beta = 1/(sigma sqrt(2 t)) corresponds to q = e^{-sigma^2 t}.
double weight_w_beta(double z, double beta);
/// ln w(e^s; q) — the form every kernel path actually uses.
double log_weight_w(double s, double q);

/// Immutable evaluation handle: polynomial tables at (theta(t), q(t)) up to
/// degree N-1 plus the coordinate-map constant of the mapped kernel,
/// shift = (N-1) a sigma/2 + (N+1) sigma^2 t/2. Thread-safe to share.
struct KernelHandle {
  ModelParams params;
  PolyTable table;
  double shift = 0.0;

  static KernelHandle make(const ModelParams& p);
};

/// Correlation kernel of the time-dependent biorthogonal Stieltjes-Wigert
/// ensemble on R+:
///   K_N(t; x, y) = sqrt(w(x;q) w(y;q)) sum_{j<N} R_j(x) T_j(y).
double kernel_K(const KernelHandle& h, double x, double y);
/// Same value given ln x, ln y (no overflow at extreme arguments).
SignedLog kernel_K_sl(const KernelHandle& h, double ln_x, double ln_y);

/// Kernel at the special time t0 (theta = 1), built from the classical
/// Stieltjes-Wigert polynomials: sqrt(w(x)w(y)) sum_{j<N} p_j(x) p_j(y).
enum class T0Form {
  sum,   // direct partial sum
  cd,    // Christoffel-Darboux two-term ratio; falls back to the sum (or the
         // confluent derivative form on the diagonal) when |x-y| is below
         // 1e-4 (1+|x|), where the divided difference cancels
};
double kernel_K_t0(double q0, int n_particles, double x, double y, T0Form form = T0Form::sum);

/// Mapped kernel on the real line (the determinantal kernel of the particle
/// positions themselves):
///   bK_N(t;x,y) = K_N(t; e^{sigma x + shift}, e^{sigma y + shift})
///                 * sigma e^{sigma(x+y)/2 + shift}.
double kernel_mapped(const KernelHandle& h, double x, double y);
SignedLog kernel_mapped_sl(const KernelHandle& h, double x, double y);

/// N'-point correlation function det[bK(x_j, x_k)] for distinct points on R.
double correlation(const KernelHandle& h, std::span<const double> points);
/// z-coordinate variant det[K(z_j, z_k)] on R+.
double correlation_z(const KernelHandle& h, std::span<const double> points);

/// Gap probability Det[delta - bK chi_J] for the interval J = (lo, hi):
/// Nystrom discretization det(I - W^{1/2} K W^{1/2}) on Gauss-Legendre
/// nodes over J. Throws std::invalid_argument for nystrom_size < 4.
double gap_probability(const KernelHandle& h, double lo, double hi, int nystrom_size = 64);

/// q->1 scaled kernel at the special time:
///   Ktilde(q, N; xt, yt) = K^q_N(z(xt), z(yt)) q^{-3/2} sqrt(2(1-q)),
///   z(u) = q^{-3/2} u sqrt(2(1-q)) + q^{-1/2},
/// which converges to the Hermite kernel sum_{j<N} phi_j(xt) phi_j(yt).
/// Throws std::domain_error if a mapped point is not positive.
double kernel_scaled_q1(double q, int n_particles, double xt, double yt);

/// Density of the zero-drift noncolliding Brownian motion started at 0
/// (GUE with variance t): (1/sqrt(2t)) sum_{j<N} phi_j(x/sqrt(2t))^2.
double gue_density(int n_particles, double t, double x);
/// The equivalent two-term form N phi_N^2 - sqrt(N(N+1)) phi_{N-1} phi_{N+1}.
double gue_density_cd(int n_particles, double t, double x);
/// Wigner semicircle approximation (1/(2 t pi)) sqrt((2 sqrt(Nt))^2 - x^2).
double semicircle_density(int n_particles, double t, double x);

}  // namespace dppsw
