#pragma once

#include <vector>

namespace dppsw {

/// Physicists' Hermite polynomial H_n by the standard recurrence
/// H_{n+1} = 2x H_n - 2n H_{n-1}.
double hermite(int n, double x);

/// Hermite function phi_n(x) = e^{-x^2/2} H_n(x) / sqrt(2^n n! sqrt(pi)),
/// evaluated by the normalized recurrence (no overflow at large n or x).
double hermite_fn(int n, double x);

/// phi_0(x), ..., phi_nmax(x) in one sweep.
std::vector<double> hermite_fn_all(int nmax, double x);

}  // namespace dppsw
