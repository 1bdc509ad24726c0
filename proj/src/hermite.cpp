#include "dppsw/hermite.hpp"

#include <cmath>
#include <stdexcept>

namespace dppsw {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double hermite(int n, double x) {
  if (n < 0) throw std::invalid_argument("hermite: need n >= 0");
  if (n == 0) return 1.0;
  double h0 = 1.0, h1 = 2.0 * x;
  for (int k = 1; k < n; ++k) {
    double h2 = 2.0 * x * h1 - 2.0 * k * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

double hermite_fn(int n, double x) {
  if (n < 0) throw std::invalid_argument("hermite_fn: need n >= 0");
  double p0 = std::pow(kPi, -0.25) * std::exp(-0.5 * x * x);
  if (n == 0) return p0;
  double p1 = std::sqrt(2.0) * x * p0;
  for (int j = 1; j < n; ++j) {
    double p2 = x * std::sqrt(2.0 / (j + 1)) * p1 - std::sqrt(double(j) / (j + 1)) * p0;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

std::vector<double> hermite_fn_all(int nmax, double x) {
  if (nmax < 0) throw std::invalid_argument("hermite_fn_all: need nmax >= 0");
  std::vector<double> out(nmax + 1);
  out[0] = std::pow(kPi, -0.25) * std::exp(-0.5 * x * x);
  if (nmax >= 1) out[1] = std::sqrt(2.0) * x * out[0];
  for (int j = 1; j < nmax; ++j)
    out[j + 1] = x * std::sqrt(2.0 / (j + 1)) * out[j] - std::sqrt(double(j) / (j + 1)) * out[j - 1];
  return out;
}

}  // namespace dppsw
