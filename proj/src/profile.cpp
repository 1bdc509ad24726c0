#include "dppsw/profile.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace dppsw {

ProfileStats profile_stats(std::span<const double> xs, std::span<const double> ys,
                           double threshold) {
  const size_t n = xs.size();
  if (n != ys.size()) throw std::invalid_argument("profile_stats: length mismatch");
  if (n < 2) throw std::invalid_argument("profile_stats: need at least 2 points");
  for (size_t i = 1; i < n; ++i)
    if (!(xs[i] > xs[i - 1])) throw std::invalid_argument("profile_stats: xs not increasing");
  for (size_t i = 0; i < n; ++i)
    if (ys[i] < 0.0) throw std::invalid_argument("profile_stats: negative density");

  ProfileStats st;
  st.threshold = threshold;
  st.grid_step = (xs[n - 1] - xs[0]) / static_cast<double>(n - 1);

  // outermost threshold crossings, linearly interpolated
  size_t first = n, last = n;
  for (size_t i = 0; i < n; ++i) {
    if (ys[i] >= threshold) {
      if (first == n) first = i;
      last = i;
    }
  }
  if (first < n) {
    double xl, xr;
    if (first == 0) {
      xl = xs[0];
    } else {
      double f = (threshold - ys[first - 1]) / (ys[first] - ys[first - 1]);
      xl = xs[first - 1] + f * (xs[first] - xs[first - 1]);
    }
    if (last == n - 1) {
      xr = xs[n - 1];
    } else {
      double f = (ys[last] - threshold) / (ys[last] - ys[last + 1]);
      xr = xs[last] + f * (xs[last + 1] - xs[last]);
    }
    st.support_width = xr - xl;
  }

  // strict local maxima with plateaus collapsed
  std::vector<double> runs;
  runs.reserve(n);
  for (size_t i = 0; i < n; ++i)
    if (runs.empty() || runs.back() != ys[i]) runs.push_back(ys[i]);
  for (size_t i = 1; i + 1 < runs.size(); ++i)
    if (runs[i] > runs[i - 1] && runs[i] > runs[i + 1]) ++st.num_local_maxima;

  return st;
}

LinearFit linear_fit(std::span<const double> ns, std::span<const double> widths) {
  const size_t n = ns.size();
  if (n != widths.size() || n < 2) throw std::invalid_argument("linear_fit: need >= 2 points");
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mx += ns[i];
    my += widths[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (ns[i] - mx) * (ns[i] - mx);
    sxy += (ns[i] - mx) * (widths[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("linear_fit: degenerate abscissae");
  LinearFit f;
  f.c1 = sxy / sxx;
  f.c2 = my - f.c1 * mx;
  return f;
}

}  // namespace dppsw
