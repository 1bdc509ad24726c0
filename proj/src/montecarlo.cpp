#include "dppsw/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include "dppsw/rng.hpp"

namespace dppsw {

namespace {

// solve M x = rhs_cols (n columns) in place; returns false on a numerically
// singular pivot. Row-major m, all stack-friendly small n.
bool solve_small(int n, std::vector<double>& m, std::vector<double>& cols) {
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(m[i * n + k]) > std::abs(m[piv * n + k])) piv = i;
    double p = m[piv * n + k];
    if (!std::isfinite(p) || std::abs(p) < 1e-280) return false;
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(m[piv * n + j], m[k * n + j]);
      for (int j = 0; j < n; ++j) std::swap(cols[piv * n + j], cols[k * n + j]);
    }
    for (int i = k + 1; i < n; ++i) {
      double f = m[i * n + k] / p;
      if (f == 0.0) continue;
      for (int j = k; j < n; ++j) m[i * n + j] -= f * m[k * n + j];
      for (int j = 0; j < n; ++j) cols[i * n + j] -= f * cols[k * n + j];
    }
  }
  for (int k = n - 1; k >= 0; --k) {
    double p = m[k * n + k];
    for (int j = 0; j < n; ++j) {
      double s = cols[k * n + j];
      for (int i = k + 1; i < n; ++i) s -= m[k * n + i] * cols[i * n + j];
      cols[k * n + j] = s / p;
    }
  }
  return true;
}

// conditioned drift b_j = [M^{-1} diag(nu) M]_{jj}, M_{ik} = e^{nu_i x_k},
// rows scaled by their max exponent (the drift is scale-invariant).
bool conditioned_drift(int n, const std::vector<double>& nu, const std::vector<double>& x,
                       std::vector<double>& out, std::vector<double>& m,
                       std::vector<double>& cols) {
  for (int i = 0; i < n; ++i) {
    double r = nu[i] * x[0];
    for (int k = 1; k < n; ++k) r = std::max(r, nu[i] * x[k]);
    for (int k = 0; k < n; ++k) m[i * n + k] = std::exp(nu[i] * x[k] - r);
  }
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) cols[i * n + k] = nu[i] * m[i * n + k];
  if (!solve_small(n, m, cols)) return false;
  for (int j = 0; j < n; ++j) {
    out[j] = cols[j * n + j];
    if (!std::isfinite(out[j])) return false;
  }
  return true;
}

bool is_ordered(const std::vector<double>& x) {
  for (size_t i = 1; i < x.size(); ++i)
    if (!(x[i] > x[i - 1])) return false;
  return true;
}

template <typename Fn>
void parallel_blocks(long n_items, long block, int threads, Fn&& body) {
  std::atomic<long> next{0};
  auto worker = [&]() {
    for (;;) {
      long b = next.fetch_add(1);
      long lo = b * block;
      if (lo >= n_items) return;
      long hi = std::min(n_items, lo + block);
      for (long i = lo; i < hi; ++i) body(i);
    }
  };
  if (threads <= 1) {
    worker();
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

std::vector<double> lattice_start(const ModelParams& p) {
  std::vector<double> x(p.n_particles);
  for (int j = 1; j <= p.n_particles; ++j)
    x[j - 1] = p.a * (j - 0.5 * (p.n_particles + 1));
  return x;
}

std::vector<double> drift_vector(const ModelParams& p) {
  std::vector<double> nu(p.n_particles);
  for (int j = 1; j <= p.n_particles; ++j)
    nu[j - 1] = p.sigma * (j - 0.5 * (p.n_particles + 1));
  return nu;
}

}  // namespace

void SimConfig::validate(double sample_time) const {
  params.validate();
  if (!(sample_time > 0.0)) throw std::invalid_argument("SimConfig: need t > 0");
  if (num_paths < 1) throw std::invalid_argument("SimConfig: need num_paths >= 1");
  if (dt < 0.0) throw std::invalid_argument("SimConfig: need dt >= 0");
  if (method == Method::rejection && horizon_T > 0.0 && horizon_T < sample_time)
    throw std::invalid_argument("SimConfig: rejection horizon must cover the sample time");
}

int resolve_threads(int requested) {
  int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* env = std::getenv("DPPSW_THREADS")) {
    int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n, cap);
  }
  return n;
}

PathEnsemble sample_sde(const SimConfig& cfg, double t) {
  cfg.validate(t);
  const ModelParams& p = cfg.params;
  const int N = p.n_particles;
  const double dt = cfg.dt > 0.0 ? cfg.dt : 1e-3 * t;
  const int threads = resolve_threads(cfg.threads);
  const std::vector<double> x0 = lattice_start(p);
  const std::vector<double> nu = drift_vector(p);

  std::vector<std::vector<double>> results(cfg.num_paths);
  std::vector<char> ok(cfg.num_paths, 0);

  parallel_blocks(cfg.num_paths, 256, threads, [&](long path) {
    Xoshiro256pp rng(cfg.seed, static_cast<uint64_t>(path));
    std::vector<double> x = x0, b(N), trial(N), m(N * N), cols(N * N), noise(N);
    double cur = 0.0;
    bool alive = true;
    while (alive && cur < t - 1e-12 * t) {
      double h = std::min(dt, t - cur);
      if (!conditioned_drift(N, nu, x, b, m, cols)) {
        alive = false;
        break;
      }
      bool stepped = false;
      for (int attempt = 0; attempt < 44 && !stepped; ++attempt) {
        double sh = std::sqrt(h);
        for (int j = 0; j < N; ++j) noise[j] = rng.normal();
        for (int j = 0; j < N; ++j) trial[j] = x[j] + b[j] * h + sh * noise[j];
        if (is_ordered(trial)) {
          x = trial;
          cur += h;
          stepped = true;
        } else {
          h *= 0.5;  // near-collision guard: retry the step with dt/2
        }
      }
      if (!stepped) alive = false;
    }
    if (alive && is_ordered(x)) {
      results[path] = std::move(x);
      ok[path] = 1;
    }
  });

  PathEnsemble e;
  e.method = SimConfig::Method::sde;
  e.sample_time = t;
  e.seed = cfg.seed;
  e.proposed = cfg.num_paths;
  for (long i = 0; i < cfg.num_paths; ++i) {
    if (ok[i]) {
      e.samples.push_back(std::move(results[i]));
    } else {
      ++e.aborted;
    }
  }
  e.accepted = static_cast<long>(e.samples.size());
  return e;
}

PathEnsemble sample_rejection(const SimConfig& cfg, double t) {
  cfg.validate(t);
  const ModelParams& p = cfg.params;
  const int N = p.n_particles;
  const double dt = cfg.dt > 0.0 ? cfg.dt : 1e-3 * t;
  const double horizon = cfg.horizon_T > 0.0 ? cfg.horizon_T : t + 5.0 * p.t0();
  if (horizon < t) throw std::invalid_argument("sample_rejection: horizon below sample time");
  const int threads = resolve_threads(cfg.threads);
  const std::vector<double> x0 = lattice_start(p);
  const std::vector<double> nu = drift_vector(p);

  const long n1 = std::max<long>(1, static_cast<long>(std::ceil(t / dt - 1e-9)));
  const double h1 = t / n1;
  const long n2 = horizon > t
                      ? std::max<long>(1, static_cast<long>(std::ceil((horizon - t) / dt - 1e-9)))
                      : 0;
  const double h2 = n2 > 0 ? (horizon - t) / n2 : 0.0;

  // one free drifted path on the dt-grid; returns acceptance and the time-t
  // configuration
  auto run_proposal = [&](uint64_t stream, std::vector<double>& at_t) {
    Xoshiro256pp rng(cfg.seed ^ 0x517cc1b727220a95ULL, stream);
    std::vector<double> x = x0;
    double sh = std::sqrt(h1);
    for (long s = 0; s < n1; ++s) {
      for (int j = 0; j < N; ++j) x[j] += nu[j] * h1 + sh * rng.normal();
      if (!is_ordered(x)) return false;
    }
    at_t = x;
    sh = std::sqrt(h2);
    for (long s = 0; s < n2; ++s) {
      for (int j = 0; j < N; ++j) x[j] += nu[j] * h2 + sh * rng.normal();
      if (!is_ordered(x)) return false;
    }
    return true;
  };

  PathEnsemble e;
  e.method = SimConfig::Method::rejection;
  e.sample_time = t;
  e.seed = cfg.seed;

  std::vector<std::vector<double>> accepted;  // in proposal order
  long launched = 0;
  while (static_cast<long>(accepted.size()) < cfg.num_paths) {
    long remaining = cfg.num_paths - static_cast<long>(accepted.size());
    double acc_est = launched > 0 ? std::max(1e-4, double(accepted.size()) / launched) : 0.5;
    long round = std::max<long>(2048, static_cast<long>(remaining / acc_est * 1.15));
    std::vector<std::vector<double>> round_samples(round);
    std::vector<char> round_ok(round, 0);
    parallel_blocks(round, 64, threads, [&](long i) {
      std::vector<double> at_t;
      if (run_proposal(static_cast<uint64_t>(launched + i), at_t)) {
        round_samples[i] = std::move(at_t);
        round_ok[i] = 1;
      }
    });
    for (long i = 0; i < round; ++i) {
      if (static_cast<long>(accepted.size()) >= cfg.num_paths) break;
      ++e.proposed;
      if (round_ok[i]) accepted.push_back(std::move(round_samples[i]));
    }
    launched += round;
    if (launched > 20000 && double(accepted.size()) / launched < 1e-4)
      throw std::runtime_error("sample_rejection: acceptance ratio below 1e-4");
  }
  e.samples = std::move(accepted);
  e.accepted = static_cast<long>(e.samples.size());
  return e;
}

std::vector<double> empirical_density(const PathEnsemble& ensemble,
                                      std::span<const double> grid, double bandwidth) {
  if (ensemble.samples.empty()) throw std::invalid_argument("empirical_density: empty ensemble");
  if (grid.size() < 2 || !(bandwidth > 0.0))
    throw std::invalid_argument("empirical_density: bad grid/bandwidth");
  std::vector<double> out(grid.size(), 0.0);
  const double lo = grid[0] - 0.5 * bandwidth;
  const long paths = static_cast<long>(ensemble.samples.size());
  for (const auto& cfg : ensemble.samples) {
    for (double v : cfg) {
      long idx = static_cast<long>(std::floor((v - lo) / bandwidth));
      if (idx >= 0 && idx < static_cast<long>(grid.size())) out[idx] += 1.0;
    }
  }
  for (double& v : out) v /= paths * bandwidth;
  return out;
}

double l1_distance(std::span<const double> grid, std::span<const double> f,
                   std::span<const double> g) {
  if (grid.size() != f.size() || f.size() != g.size() || grid.size() < 2)
    throw std::invalid_argument("l1_distance: size mismatch");
  const double h = grid[1] - grid[0];
  double s = 0.0;
  for (size_t i = 0; i < f.size(); ++i) s += std::abs(f[i] - g[i]);
  return s * h;
}

}  // namespace dppsw
