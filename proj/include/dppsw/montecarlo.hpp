#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dppsw/kernel.hpp"

namespace dppsw {

/// Path-sampler configuration. dt defaults to 1e-3 * t and the rejection
/// horizon to t + 5 t0 when left at zero.
struct SimConfig {
  enum class Method { sde, rejection };

  ModelParams params;
  Method method = Method::sde;
  double dt = 0.0;
  double horizon_T = 0.0;
  long num_paths = 10000;
  uint64_t seed = 1;
  int threads = 0;  // 0: decide from hardware and DPPSW_THREADS

  void validate(double sample_time) const;
};

/// Monte Carlo sample set: time-t configurations plus acceptance metadata.
/// Samples are ordered by path index, so a fixed (seed, config) reproduces
/// the ensemble bit-identically regardless of thread count.
struct PathEnsemble {
  std::vector<std::vector<double>> samples;  // each strictly ordered, size N
  long accepted = 0;
  long proposed = 0;
  long aborted = 0;  // sde paths dropped on numerically singular drift
  SimConfig::Method method = SimConfig::Method::sde;
  double sample_time = 0.0;
  uint64_t seed = 0;
};

/// Doob-transform SDE sampler: Euler-Maruyama from the equidistant start
/// with drift b_j(x) = d/dx_j ln det[e^{nu_i x_k}] (the nu_j from the h
/// ratio cancels the free drift). Ordering-violating steps are retried with
/// halved dt.
PathEnsemble sample_sde(const SimConfig& cfg, double t);

/// Finite-horizon rejection sampler: free drifted paths on the dt-grid up to
/// horizon_T, rejected at the first ordering violation; accepted paths
/// contribute their time-t configuration. Throws std::runtime_error when the
/// acceptance ratio falls below 1e-4.
PathEnsemble sample_rejection(const SimConfig& cfg, double t);

/// Histogram estimate of the one-point density on the bin centers `grid`
/// (uniform spacing = bandwidth): count/(num_paths * bandwidth). Integrates
/// to N up to the mass falling outside the grid.
std::vector<double> empirical_density(const PathEnsemble& ensemble,
                                      std::span<const double> grid, double bandwidth);

/// L1 distance of two densities sampled on a common uniform grid.
double l1_distance(std::span<const double> grid, std::span<const double> f,
                   std::span<const double> g);

/// Thread cap honouring the DPPSW_THREADS environment variable.
int resolve_threads(int requested);

}  // namespace dppsw
