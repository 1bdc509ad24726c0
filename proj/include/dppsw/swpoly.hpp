#pragma once

#include <vector>

#include "dppsw/signed_log.hpp"

namespace dppsw {

/// Precomputed coefficient tables for the biorthogonal Stieltjes-Wigert pair
/// T_n(x; theta, q) (a polynomial in x^theta) and R_n(x; theta, q) (a
/// polynomial in x), together with the classical Stieltjes-Wigert p_n(x; q).
/// Degree n rows carry n+1 signed-log coefficients whose signs alternate
/// with l; all prefactors are folded in. Tables are immutable after
/// construction and safe to share across threads.
struct PolyTable {
  double theta = 1.0;
  double q = 0.5;
  int max_degree = 0;
  // coeff[n][l] multiplies x^{theta*l} for T, x^l for R and p
  std::vector<std::vector<SignedLog>> coeffs_T;
  std::vector<std::vector<SignedLog>> coeffs_R;
  std::vector<std::vector<SignedLog>> coeffs_p;
};

/// Build tables up to max_degree (<= 32). Throws std::invalid_argument for
/// parameters out of range and std::range_error if any coefficient exceeds
/// |logmag| 700 (double-precision safety margin).
PolyTable build_table(double theta, double q, int max_degree);

/// Polynomial values via signed-log accumulation of coefficient * x^power.
SignedLog eval_T_sl(const PolyTable& t, int n, double ln_x);
SignedLog eval_R_sl(const PolyTable& t, int n, double ln_x);
SignedLog eval_p_sl(const PolyTable& t, int n, double ln_x);
/// d/dx of p_n by differentiating the coefficient table (exact, no finite
/// differences).
SignedLog eval_p_prime_sl(const PolyTable& t, int n, double ln_x);

/// Convenience double-valued wrappers; x must be positive (x^theta is only
/// real for x > 0 when theta is non-integer) or std::domain_error is thrown.
double eval_T(const PolyTable& t, int n, double x);
double eval_R(const PolyTable& t, int n, double x);
double eval_p(const PolyTable& t, int n, double x);

/// Standalone Stieltjes-Wigert evaluation (builds the needed row on the fly).
double eval_p(double q, int n, double x);

/// p_n(x;q) by the three-term recurrence
///   p_n = [(q^{2n} x - q^{1/2}(1+q-q^n)) / sqrt(1-q^n)] p_{n-1}
///         - q^2 sqrt(1-q^{n-1}) / sqrt(1-q^n) p_{n-2},
/// seeded by direct evaluation of p_0, p_1. Plain double arithmetic; agrees
/// with the table route over the tested degree range.
double sw_recurrence_eval(double q, int n, double x);

/// Biorthonormality constants:
///   t_n = sqrt((q;q)_n) q^{-(n+1/2)^2 - (theta-1) n^2/2}
///   r_n = ((q^theta;q^theta)_n / sqrt((q;q)_n)) q^{-(n theta+1/2)^2 + n^2 theta(theta-1)/2}
/// (t_n is the value of int x^n T_n w dx, r_n of int x^{n theta} R_n w dx).
struct NormalizationConstants {
  std::vector<SignedLog> t_n;
  std::vector<SignedLog> r_n;
};
NormalizationConstants normalization_constants(double theta, double q, int max_degree);

}  // namespace dppsw
