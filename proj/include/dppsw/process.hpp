#pragma once

#include <span>
#include <vector>

#include "dppsw/kernel.hpp"
#include "dppsw/signed_log.hpp"

namespace dppsw {

/// Strictly ordered point configuration (element of the Weyl chamber), on
/// the full line or the positive half-line.
struct Configuration {
  enum class Domain { real_line, positive_half_line };

  std::vector<double> points;
  Domain domain = Domain::real_line;
  bool ordered = true;

  static Configuration make_ordered(std::vector<double> pts,
                                    Domain dom = Domain::real_line);
  int size() const { return static_cast<int>(points.size()); }
};

/// Drift coefficients, weakly increasing. The lattice process uses the
/// well-ordered pattern nu_j = sigma (j - (N+1)/2).
struct DriftSpec {
  std::vector<double> nu;

  static DriftSpec special(int n_particles, double sigma);
  static DriftSpec make(std::vector<double> nu);
  int size() const { return static_cast<int>(nu.size()); }
};

/// A sequence of strictly increasing times with one configuration per time.
struct MultitimeSpec {
  std::vector<double> times;
  std::vector<Configuration> configurations;

  static MultitimeSpec make(std::vector<double> times, std::vector<Configuration> configs);
  int n_times() const { return static_cast<int>(times.size()); }
};

/// Free Brownian transition density p(t, y|x) = e^{-(y-x)^2/2t}/sqrt(2 pi t).
double gaussian_p(double t, double y, double x);
/// Drift transform p^nu(t,y|x) = e^{nu(y-x) - nu^2 t/2} p(t,y|x).
double drifted_p(double t, double y, double x, double nu);

/// KM-LGV determinant det[p(t, y_j | x_k)].
SignedLog km_lgv_det(double t, const Configuration& y, const Configuration& x);
/// Drift transform of the KM-LGV determinant,
/// q_N^nu = e^{nu.(y-x) - |nu|^2 t/2} q_N.
SignedLog km_lgv_det_drift(double t, const Configuration& y, const Configuration& x,
                           const DriftSpec& nu);

/// BBO transition density of the drifted Brownian motions conditioned never
/// to collide:
///   e^{-t|nu|^2/2} det[e^{nu_j y_k}]/det[e^{nu_j x_k}] q_N(t,y|x).
/// Coincident drift values are rejected (std::invalid_argument); the
/// zero-drift process is served by h_transform_density.
double bbo_density(double t, const Configuration& y, const Configuration& x,
                   const DriftSpec& nu);

/// Doob h-transform density (h_N(y)/h_N(x)) q_N(t,y|x) — the nu -> 0 limit.
double h_transform_density(double t, const Configuration& y, const Configuration& x);

/// Vandermonde product prod_{j<k} (x_k - x_j).
SignedLog vandermonde(const Configuration& x);

/// Density of the noncolliding Brownian motion started at the origin
/// (eigenvalue density of the GUE with variance t, ordered):
///   c_N(t) h_N(y)^2 e^{-|y|^2/2t}.
double gue_started_at_zero(double t, const Configuration& y);

enum class Prop1Form {
  sinh_product,    // the symmetric, cancellation-free evaluation path
  exp_difference,  // the displayed exponential-difference form, for cross-checks
};

/// Multitime joint density of the special process (equidistant start, drift
/// nu_j = sigma rho_j).
double multitime_density(const MultitimeSpec& spec, const ModelParams& params,
                         Prop1Form form = Prop1Form::sinh_product);

/// ln c_N(a, sigma, t1, tM), the Prop-1 normalization constant.
double log_c_multitime(int n_particles, double a, double sigma, double t1, double tM);

/// Geometric-Brownian transition density (log-normal),
///   p_geo(t,y|x) = exp(-(ln(y/x))^2/(2 sigma^2 t)) / (y sigma sqrt(2 pi t)).
double geo_transition(double t, double y, double x, double sigma);
/// General percentage-drift form with parameter nu_tilde; nu_tilde = 0
/// recovers geo_transition.
double geo_transition_nu(double t, double y, double x, double sigma, double nu_tilde);
/// Symmetrized kernel p(t; x, y) (symmetric in x and y).
double geo_p_symmetric(double t, double x, double y, double sigma, double nu_tilde);

/// KM-LGV determinant of geometric transition densities.
SignedLog km_lgv_det_geo(double t, const Configuration& y, const Configuration& x,
                         double sigma);

/// The y-space (geometric) form of the multitime density.
double transformed_density_y(const MultitimeSpec& spec, const ModelParams& params);

enum class BioForm {
  product,        // C_N prod w(z_j) prod (z_k - z_j)(z_k^theta - z_j^theta)
  determinantal,  // prod w(z_j) det[T_{k-1}(z_j)] det[R_{m-1}(z_l)]
};

/// Single-time z-space density of the biorthogonal Stieltjes-Wigert ensemble.
double biorthogonal_density_z(double t, const Configuration& z, const ModelParams& params,
                              BioForm form = BioForm::product);

/// ln C_N(a, sigma, t) of the z-space density.
double log_C_biorthogonal(int n_particles, double a, double sigma, double t);

/// Partition function Z = 1/C_N of the Chern-Simons matrix model.
SignedLog partition_function(const ModelParams& params);
/// Brute-force companion for N <= 3: Andreief reduction of Z to the
/// determinant of pairwise moment integrals, each evaluated by quadrature.
SignedLog partition_function_oracle(const ModelParams& params, int rule_size = 500);

/// Density at the special time t0 (theta = 1):
///   c^_N(q0) prod w(z_j; q0) prod (z_k - z_j)^2.
double t0_ensemble_density(double q0, const Configuration& z);

/// Survival probability N(T, x) = int_{W_N} q_N^nu(T, y|x) dy by nested
/// Gauss-Legendre quadrature; N <= 3 (cost). grid_size is per axis.
double survival_probability(double T, const Configuration& x, const DriftSpec& nu,
                            int grid_size = 220);
/// Closed-form T -> infinity limit e^{-nu.x} det[e^{nu_j x_k}].
double survival_probability_limit(const Configuration& x, const DriftSpec& nu);

/// Multitime density of the noncolliding geometric Brownian motion
/// (log-Vandermonde ratio form), started at x in R+^N.
double noncolliding_geo_density(const MultitimeSpec& spec, const Configuration& x,
                                double sigma);

/// Multitime density of the zero-drift noncolliding Brownian motion started
/// at a fixed x (strictly ordered), used as the change-of-variables
/// cross-check for the geometric case.
double zero_drift_multitime_density(const MultitimeSpec& spec, const Configuration& x);

}  // namespace dppsw
