#pragma once

#include <span>

namespace dppsw {

/// Summary of a density profile on a grid: peak count and support width at a
/// fixed threshold.
struct ProfileStats {
  int num_local_maxima = 0;
  double support_width = 0.0;  // length between the outermost threshold crossings
  double threshold = 0.0;
  double grid_step = 0.0;
};

/// support_width is measured between the outermost crossings of `threshold`
/// (linearly interpolated), reading the profile as a single interval; an
/// oscillatory profile that dips below the threshold between peaks still
/// counts the full span. Local maxima are strict, with flat runs collapsed
/// to a single candidate; runs touching the boundary never count.
/// Requires xs strictly increasing, ys same length and nonnegative.
ProfileStats profile_stats(std::span<const double> xs, std::span<const double> ys,
                           double threshold);

/// Least-squares line w = c1*n + c2. Throws std::invalid_argument for fewer
/// than two points or all-equal n.
struct LinearFit {
  double c1 = 0.0;  // slope
  double c2 = 0.0;  // intercept
};
LinearFit linear_fit(std::span<const double> ns, std::span<const double> widths);

}  // namespace dppsw
