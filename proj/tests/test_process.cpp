#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "dppsw/determinant.hpp"
#include "dppsw/process.hpp"
#include "dppsw/quadrature.hpp"

using namespace dppsw;

namespace {
constexpr double kPi = 3.14159265358979323846;

double rel(double a, double b) {
  double d = std::max(std::abs(a), std::abs(b));
  return d == 0.0 ? 0.0 : std::abs(a - b) / d;
}

Configuration cfg(std::vector<double> pts,
                  Configuration::Domain dom = Configuration::Domain::real_line) {
  return Configuration::make_ordered(std::move(pts), dom);
}

// integrate f over the ordered region {y1 < y2} in [lo,hi]^2
template <typename F>
double integrate_ordered2(F&& f, double lo, double hi, int m = 180) {
  LegendreRule outer = gauss_legendre(m, lo, hi);
  double s = 0.0;
  for (int i = 0; i < m; ++i) {
    double y2 = outer.nodes[i];
    LegendreRule inner = gauss_legendre(m, lo, y2);
    double si = 0.0;
    for (int j = 0; j < m; ++j) si += inner.weights[j] * f(inner.nodes[j], y2);
    s += outer.weights[i] * si;
  }
  return s;
}
}  // namespace

TEST_CASE("configuration and drift validation") {
  CHECK_THROWS_AS(cfg({1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(cfg({2.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(cfg({-1.0, 2.0}, Configuration::Domain::positive_half_line),
                  std::invalid_argument);
  CHECK_THROWS_AS(DriftSpec::make({1.0, 0.5}), std::invalid_argument);
  // |nu|^2 for the special spec = N(N^2-1) sigma^2 / 12
  for (int N : {2, 3, 5, 8}) {
    DriftSpec d = DriftSpec::special(N, 0.7);
    double nn = 0.0;
    for (double v : d.nu) nn += v * v;
    CHECK(nn == doctest::Approx(N * (double(N) * N - 1.0) * 0.49 / 12.0).epsilon(1e-13));
  }
}

TEST_CASE("gaussian transition density") {
  CHECK(gaussian_p(2.0, 0.7, 0.7) == doctest::Approx(1.0 / std::sqrt(4.0 * kPi)));
  CHECK_THROWS_AS(gaussian_p(0.0, 0.0, 0.0), std::domain_error);
  // normalization, free and drifted
  LegendreRule r = gauss_legendre(300, -14.0, 16.0);
  double s0 = 0.0, s1 = 0.0;
  for (int i = 0; i < 300; ++i) {
    s0 += r.weights[i] * gaussian_p(1.3, r.nodes[i], 0.4);
    s1 += r.weights[i] * drifted_p(1.3, r.nodes[i], 0.4, 0.9);
  }
  CHECK(s0 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s1 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("KM-LGV determinant") {
  // N = 1 reduces to the transition density
  CHECK(km_lgv_det(1.2, cfg({0.8}), cfg({-0.1})).to_real() ==
        doctest::Approx(gaussian_p(1.2, 0.8, -0.1)));
  // equal y entries give identical determinant rows
  {
    Configuration y;  // bypass ordering validation for the degenerate case
    y.points = {0.5, 0.5};
    SignedLog d = km_lgv_det(1.0, y, cfg({-1.0, 1.0}));
    CHECK(d.sign == 0);
  }
  // positivity on ordered configurations
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.1, 1.2);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> x(4), y(4);
    double cx = -2.0, cy = -2.0;
    for (int j = 0; j < 4; ++j) {
      cx += u(gen);
      cy += u(gen);
      x[j] = cx;
      y[j] = cy;
    }
    CHECK(km_lgv_det(0.8, cfg(y), cfg(x)).sign == 1);
  }
}

TEST_CASE("vandermonde") {
  CHECK(vandermonde(cfg({1.0, 3.5})).to_real() == doctest::Approx(2.5));
  Configuration rep;
  rep.points = {1.0, 1.0, 2.0};  // bypass ordering validation
  CHECK(vandermonde(rep).sign == 0);
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int repn = 0; repn < 40; ++repn) {
    std::vector<double> x = {u(gen), u(gen), u(gen), u(gen)};
    std::sort(x.begin(), x.end());
    SmallMatrix m(4);
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) m(j, k) = std::pow(x[j], k);
    CHECK(rel(vandermonde(cfg(x)).to_real(), det_small(m).to_real()) < 1e-10);
  }
}

TEST_CASE("BBO density") {
  // coincident drifts rejected
  CHECK_THROWS_AS(bbo_density(1.0, cfg({0.0, 1.0}), cfg({-1.0, 1.0}),
                              DriftSpec::make({0.5, 0.5})),
                  std::invalid_argument);
  // nu -> 0 limit approaches the h-transform density
  {
    double eps = 1e-4;
    auto y = cfg({-0.4, 0.9});
    auto x = cfg({-1.0, 1.0});
    double a = bbo_density(0.7, y, x, DriftSpec::make({-eps, eps}));
    double b = h_transform_density(0.7, y, x);
    CHECK(rel(a, b) < 1e-3);
  }
  // N = 2 normalization over the Weyl chamber
  {
    auto x = cfg({-1.0, 1.0});
    DriftSpec nu = DriftSpec::special(2, 1.0);
    double total = integrate_ordered2(
        [&](double y1, double y2) { return bbo_density(1.0, cfg({y1, y2}), x, nu); }, -9.0,
        10.0);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("BBO Chapman-Kolmogorov at N = 2") {
  auto x = cfg({-1.0, 1.0});
  auto y = cfg({-0.6, 1.4});
  DriftSpec nu = DriftSpec::special(2, 1.0);
  double t = 1.0, s = 0.5;
  double direct = bbo_density(t, y, x, nu);
  double composed = integrate_ordered2(
      [&](double z1, double z2) {
        return bbo_density(s, cfg({z1, z2}), x, nu) * bbo_density(t - s, y, cfg({z1, z2}), nu);
      },
      -8.0, 9.0);
  CHECK(std::abs(direct - composed) < 1e-5);
  CHECK(rel(direct, composed) < 1e-6);
}

TEST_CASE("GUE started at zero") {
  // N = 1 gaussian
  CHECK(gue_started_at_zero(1.4, cfg({0.3})) ==
        doctest::Approx(std::exp(-0.09 / 2.8) / std::sqrt(2.8 * kPi)).epsilon(1e-13));
  // N = 2 normalization over the chamber
  double total = integrate_ordered2(
      [&](double y1, double y2) { return gue_started_at_zero(1.0, cfg({y1, y2})); }, -8.0,
      8.0);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
  // marginal equals the hermite-function density (N = 2)
  for (double x : {-1.0, 0.0, 0.8, 2.0}) {
    LegendreRule r = gauss_legendre(400, -9.0, 9.0);
    double m = 0.0;
    for (int i = 0; i < 400; ++i) {
      double yv = r.nodes[i];
      if (yv > x)
        m += r.weights[i] * gue_started_at_zero(1.0, cfg({x, yv}));
      else if (yv < x)
        m += r.weights[i] * gue_started_at_zero(1.0, cfg({yv, x}));
    }
    CHECK(m == doctest::Approx(gue_density(2, 1.0, x)).epsilon(1e-7));
  }
}

TEST_CASE("multitime density forms") {
  ModelParams p1{1, 1.0, 1.0, 1.0};
  // M = 1, N = 1 gaussian
  auto spec1 = MultitimeSpec::make({1.0}, {cfg({0.4})});
  CHECK(multitime_density(spec1, p1) ==
        doctest::Approx(std::exp(-0.16 / 2.0) / std::sqrt(2.0 * kPi)).epsilon(1e-12));
  // sinh vs exponential-difference forms, N <= 5, single and multi time
  std::mt19937_64 gen(13);
  std::uniform_real_distribution<double> u(0.2, 1.1);
  for (int N : {2, 3, 5}) {
    ModelParams p{N, 1.0, 1.0, 1.0};
    for (int rep = 0; rep < 8; ++rep) {
      std::vector<double> x1(N), x2(N);
      double c1 = -0.6 * N, c2 = -0.6 * N;
      for (int j = 0; j < N; ++j) {
        c1 += u(gen);
        c2 += u(gen);
        x1[j] = c1;
        x2[j] = c2;
      }
      auto single = MultitimeSpec::make({0.8}, {cfg(x1)});
      CHECK(rel(multitime_density(single, p, Prop1Form::sinh_product),
                multitime_density(single, p, Prop1Form::exp_difference)) < 1e-10);
      auto multi = MultitimeSpec::make({0.8, 1.7}, {cfg(x1), cfg(x2)});
      CHECK(rel(multitime_density(multi, p, Prop1Form::sinh_product),
                multitime_density(multi, p, Prop1Form::exp_difference)) < 1e-10);
    }
  }
  // M = 1, N = 2 normalization
  ModelParams p2{2, 1.0, 1.0, 1.0};
  double total = integrate_ordered2(
      [&](double y1, double y2) {
        return multitime_density(MultitimeSpec::make({1.0}, {cfg({y1, y2})}), p2);
      },
      -9.0, 9.0);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
  // times must increase
  CHECK_THROWS_AS(MultitimeSpec::make({1.0, 0.5}, {cfg({0.0}), cfg({0.0})}),
                  std::invalid_argument);
}

TEST_CASE("geometric transition density") {
  double sigma = 0.8;
  // normalization (integrate in u = ln y; the linear-scale tail is heavy)
  LegendreRule r = gauss_legendre(400, std::log(2.0) - 10.0, std::log(2.0) + 10.0);
  double s = 0.0;
  for (int i = 0; i < 400; ++i) {
    double y = std::exp(r.nodes[i]);
    s += r.weights[i] * geo_transition(1.1, y, 2.0, sigma) * y;
  }
  CHECK(s == doctest::Approx(1.0).epsilon(1e-10));
  // nu_tilde = 0 recovers the driftless form
  for (double y : {0.5, 2.0, 7.0})
    CHECK(geo_transition(1.1, y, 2.0, sigma) ==
          doctest::Approx(geo_transition_nu(1.1, y, 2.0, sigma, 0.0)).epsilon(1e-14));
  // symmetrized kernel is symmetric
  for (double nu : {0.0, 0.7})
    CHECK(geo_p_symmetric(0.9, 1.7, 0.4, sigma, nu) ==
          doctest::Approx(geo_p_symmetric(0.9, 0.4, 1.7, sigma, nu)).epsilon(1e-13));
  CHECK_THROWS_AS(geo_transition(1.0, -1.0, 1.0, sigma), std::domain_error);
}

TEST_CASE("change-of-variables chain: x-space, y-space, z-space") {
  // single-time: phat(x) = ptilde(y) prod sigma y_j = P(z) prod sigma z_j
  for (int N : {2, 3}) {
    ModelParams p{N, 1.0, 0.8, 1.3};
    std::vector<double> x(N);
    for (int j = 0; j < N; ++j) x[j] = -0.7 * (N - 1) + 1.4 * j + 0.1 * (j % 2);
    auto xs = cfg(x);
    double phat = multitime_density(MultitimeSpec::make({p.t}, {xs}), p);

    std::vector<double> y(N), z(N);
    double shift = 0.5 * (N - 1) * p.a * p.sigma + 0.5 * (N + 1) * p.sigma * p.sigma * p.t;
    double jac_y = 1.0, jac_z = 1.0;
    for (int j = 0; j < N; ++j) {
      y[j] = std::exp(p.sigma * x[j]);
      z[j] = std::exp(p.sigma * x[j] + shift);
      jac_y *= p.sigma * y[j];
      jac_z *= p.sigma * z[j];
    }
    double ptilde = transformed_density_y(
        MultitimeSpec::make({p.t}, {cfg(y, Configuration::Domain::positive_half_line)}), p);
    double pz = biorthogonal_density_z(
        p.t, cfg(z, Configuration::Domain::positive_half_line), p, BioForm::product);
    CHECK(rel(phat, ptilde * jac_y) < 1e-9);
    CHECK(rel(phat, pz * jac_z) < 1e-9);
  }
}

TEST_CASE("biorthogonal density forms and the special time") {
  ModelParams p{3, 1.0, 1.0, 1.0};
  auto z = cfg({0.8, 2.1, 4.0}, Configuration::Domain::positive_half_line);
  double a = biorthogonal_density_z(1.0, z, p, BioForm::product);
  double b = biorthogonal_density_z(1.0, z, p, BioForm::determinantal);
  CHECK(rel(a, b) < 1e-8);
  // t = t0 here (a = sigma): the ensemble reduces to the squared-Vandermonde form
  double c = t0_ensemble_density(p.q(), z);
  CHECK(rel(a, c) < 1e-8);
  // N = 1: z-density is q^{1/2} w(z)
  ModelParams p1{1, 1.0, 1.0, 1.0};
  auto z1 = cfg({1.7}, Configuration::Domain::positive_half_line);
  CHECK(biorthogonal_density_z(1.0, z1, p1) ==
        doctest::Approx(std::sqrt(p1.q()) * weight_w(1.7, p1.q())).epsilon(1e-12));
}

TEST_CASE("t0 ensemble density: normalization and GUE limit") {
  // chat_1 = q0^{1/2}; single-particle density integrates to 1
  // (in u = ln z coordinates: the linear-scale tail is heavy)
  double q0 = std::exp(-1.0);
  LegendreRule r = gauss_legendre(500, -12.0, 12.0);
  double s = 0.0;
  for (int i = 0; i < 500; ++i) {
    double z = std::exp(r.nodes[i]);
    s += r.weights[i] * z *
         t0_ensemble_density(q0, cfg({z}, Configuration::Domain::positive_half_line));
  }
  CHECK(s == doctest::Approx(1.0).epsilon(1e-8));
  // GUE limit under the q -> 1 rescaling (N = 2): the mapped density
  // approaches the variance-1/2 GUE form; O(sqrt(1-q)) error at q = 0.999
  double q = 0.999;
  double g = std::sqrt(2.0 * (1.0 - q));
  double worst = 0.0;
  for (double z1t = -1.2; z1t <= 1.0; z1t += 0.4) {
    for (double z2t = z1t + 0.3; z2t <= 1.4; z2t += 0.4) {
      double z1 = std::pow(q, -1.5) * z1t * g + std::pow(q, -0.5);
      double z2 = std::pow(q, -1.5) * z2t * g + std::pow(q, -0.5);
      double mapped =
          t0_ensemble_density(q, cfg({z1, z2}, Configuration::Domain::positive_half_line)) *
          std::pow(std::pow(q, -1.5) * g, 2);
      double gue = std::pow(0.5, -2.0) / (2.0 * kPi * 1.0) *
                   std::exp(-z1t * z1t - z2t * z2t) * (z2t - z1t) * (z2t - z1t);
      worst = std::max(worst, std::abs(mapped - gue));
    }
  }
  CHECK(worst < 5e-2);
}

TEST_CASE("partition function") {
  // N = 1: Z = q^{-1/2}
  ModelParams p1{1, 1.0, 1.0, 1.0};
  CHECK(partition_function(p1).to_real() ==
        doctest::Approx(std::pow(p1.q(), -0.5)).epsilon(1e-12));
  for (auto [a, s, t] : {std::array<double, 3>{1, 1, 1}, {0.5, 0.5, 1.5}, {1, 1, 0.25}}) {
    ModelParams p2{2, a, s, t}, p3{3, a, s, t};
    CHECK(rel(partition_function(p2).to_real(), partition_function_oracle(p2).to_real()) <
          1e-6);
    CHECK(rel(partition_function(p3).to_real(), partition_function_oracle(p3).to_real()) <
          1e-5);
  }
  ModelParams p4{4, 1.0, 1.0, 1.0};
  CHECK_THROWS_AS(partition_function_oracle(p4), std::invalid_argument);
}

TEST_CASE("survival probability") {
  // N = 1: no collision possible
  CHECK(survival_probability(3.0, cfg({0.5}), DriftSpec::make({0.2})) ==
        doctest::Approx(1.0).epsilon(1e-10));
  // N = 2 approach to the closed-form limit e^{-nu.x} det[e^{nu_j x_k}] = 1 - e^{-4}
  auto x = cfg({-1.0, 1.0});
  DriftSpec nu = DriftSpec::make({-1.0, 1.0});
  double limit = survival_probability_limit(x, nu);
  CHECK(limit == doctest::Approx(0.98168436111126582).epsilon(1e-13));
  double prev = 1.0 + 1e-12;
  for (double T : {1.0, 5.0, 20.0}) {
    double s = survival_probability(T, x, nu);
    CHECK(s <= prev + 1e-9);  // monotone nonincreasing
    prev = s;
    if (T == 20.0) CHECK(rel(s, limit) < 0.01);
  }
}

TEST_CASE("noncolliding geometric Brownian motion density") {
  double sigma = 0.8;
  // N = 1 reduces to the geometric transition density
  auto spec1 = MultitimeSpec::make(
      {0.9}, {cfg({1.4}, Configuration::Domain::positive_half_line)});
  CHECK(noncolliding_geo_density(spec1, cfg({1.0}, Configuration::Domain::positive_half_line),
                                 sigma) ==
        doctest::Approx(geo_transition(0.9, 1.4, 1.0, sigma)).epsilon(1e-12));
  // equals the zero-drift real-line density mapped through y = e^{sigma x}
  {
    std::vector<double> xinit = {-0.5, 0.6}, xfin = {-0.2, 1.1};
    std::vector<double> yinit(2), yfin(2);
    double jac = 1.0;
    for (int j = 0; j < 2; ++j) {
      yinit[j] = std::exp(sigma * xinit[j]);
      yfin[j] = std::exp(sigma * xfin[j]);
      jac *= sigma * yfin[j];
    }
    auto spec_y = MultitimeSpec::make(
        {0.7}, {cfg(yfin, Configuration::Domain::positive_half_line)});
    auto spec_x = MultitimeSpec::make({0.7}, {cfg(xfin)});
    double geo = noncolliding_geo_density(
        spec_y, cfg(yinit, Configuration::Domain::positive_half_line), sigma);
    double flat = zero_drift_multitime_density(spec_x, cfg(xinit));
    CHECK(rel(geo * jac, flat) < 1e-10);
  }
  // distinct from the drifted process density at a common point
  {
    ModelParams p{2, 1.0, sigma, 0.9};
    auto ycfg = cfg({0.9, 1.8}, Configuration::Domain::positive_half_line);
    auto spec_y = MultitimeSpec::make({0.9}, {ycfg});
    double a = transformed_density_y(spec_y, p);
    std::vector<double> xinit(2);
    for (int j = 1; j <= 2; ++j) xinit[j - 1] = std::exp(sigma * p.a * (j - 1.5));
    double b = noncolliding_geo_density(
        spec_y, cfg(xinit, Configuration::Domain::positive_half_line), sigma);
    CHECK(rel(a, b) > 1e-3);
  }
}

TEST_CASE("main theorem: N-point correlation equals the Prop-1 density") {
  for (int N : {2, 3}) {
    ModelParams p{N, 1.0, 1.0, 1.0};
    KernelHandle h = KernelHandle::make(p);
    std::vector<double> x(N);
    for (int j = 0; j < N; ++j) x[j] = -1.1 * (N - 1) / 2.0 + 1.1 * j + 0.07 * j;
    double det = correlation(h, x);
    double phat = multitime_density(MultitimeSpec::make({1.0}, {cfg(x)}), p);
    CHECK(rel(det, phat) < 1e-8);
  }
}

TEST_CASE("multitime change of variables to the geometric form (M = 2)") {
  // phat(x-configs) = ptilde(y-configs) * prod_{m,j} sigma y_j^{(m)}
  ModelParams p{2, 1.0, 0.8, 1.3};
  std::vector<double> xa = {-0.9, 0.4}, xb = {-0.3, 1.2};
  double phat = multitime_density(MultitimeSpec::make({0.6, 1.3}, {cfg(xa), cfg(xb)}), p);
  std::vector<double> ya(2), yb(2);
  double jac = 1.0;
  for (int j = 0; j < 2; ++j) {
    ya[j] = std::exp(p.sigma * xa[j]);
    yb[j] = std::exp(p.sigma * xb[j]);
    jac *= p.sigma * ya[j] * p.sigma * yb[j];
  }
  double ptilde = transformed_density_y(
      MultitimeSpec::make({0.6, 1.3},
                          {cfg(ya, Configuration::Domain::positive_half_line),
                           cfg(yb, Configuration::Domain::positive_half_line)}),
      p);
  CHECK(std::abs(phat - ptilde * jac) / phat < 1e-9);
}

TEST_CASE("noncolliding geometric density matches the mapped flat one (M = 2)") {
  double sigma = 0.7;
  std::vector<double> x0 = {-0.4, 0.5}, xa = {-0.6, 0.8}, xb = {0.1, 1.5};
  auto to_y = [&](const std::vector<double>& v) {
    std::vector<double> y(v.size());
    for (size_t j = 0; j < v.size(); ++j) y[j] = std::exp(sigma * v[j]);
    return y;
  };
  auto y0 = to_y(x0), ya = to_y(xa), yb = to_y(xb);
  double jac = 1.0;
  for (double v : ya) jac *= sigma * v;
  for (double v : yb) jac *= sigma * v;
  double geo = noncolliding_geo_density(
      MultitimeSpec::make({0.5, 1.1},
                          {cfg(ya, Configuration::Domain::positive_half_line),
                           cfg(yb, Configuration::Domain::positive_half_line)}),
      cfg(y0, Configuration::Domain::positive_half_line), sigma);
  double flat = zero_drift_multitime_density(
      MultitimeSpec::make({0.5, 1.1}, {cfg(xa), cfg(xb)}), cfg(x0));
  CHECK(std::abs(geo * jac - flat) / flat < 1e-10);
}

TEST_CASE("survival probability at N = 3 approaches its closed-form limit") {
  auto x = cfg({-1.0, 0.0, 1.0});
  DriftSpec nu = DriftSpec::special(3, 1.0);
  double limit = survival_probability_limit(x, nu);
  REQUIRE(limit > 0.0);
  REQUIRE(limit < 1.0);
  double s8 = survival_probability(8.0, x, nu, 80);
  CHECK(std::abs(s8 - limit) / limit < 0.01);
  double s2 = survival_probability(2.0, x, nu, 80);
  CHECK(s2 >= s8 - 1e-6);  // nonincreasing in T
}
