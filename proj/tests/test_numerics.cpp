#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "dppsw/determinant.hpp"
#include "dppsw/profile.hpp"
#include "dppsw/quadrature.hpp"
#include "dppsw/signed_log.hpp"

using namespace dppsw;

TEST_CASE("signedlog round trip and algebra") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> mag(-600.0, 600.0);
  std::uniform_real_distribution<double> val(-5.0, 5.0);
  for (int i = 0; i < 200; ++i) {
    double v = val(gen) * std::exp(mag(gen) * 0.01);
    SignedLog s = SignedLog::from_real(v);
    CHECK(s.to_real() == doctest::Approx(v).epsilon(1e-15));
  }
  // multiplication commutative/associative on random triples
  for (int i = 0; i < 200; ++i) {
    SignedLog a(val(gen) > 0 ? 1 : -1, mag(gen));
    SignedLog b(val(gen) > 0 ? 1 : -1, mag(gen));
    SignedLog c(val(gen) > 0 ? 1 : -1, mag(gen));
    SignedLog lhs = (a * b) * c;
    SignedLog rhs = a * (b * c);
    CHECK(lhs.sign == rhs.sign);
    CHECK(lhs.logmag == doctest::Approx(rhs.logmag).epsilon(1e-14));
    SignedLog ab = a * b, ba = b * a;
    CHECK(ab.sign == ba.sign);
    CHECK(ab.logmag == doctest::Approx(ba.logmag).epsilon(1e-14));
  }
}

TEST_CASE("signedlog_sum handles the given examples") {
  {
    std::vector<SignedLog> t = {SignedLog::from_real(2.0), SignedLog::from_real(3.0)};
    CHECK(signedlog_sum(t).to_real() == doctest::Approx(5.0).epsilon(1e-15));
  }
  {
    std::vector<SignedLog> t = {SignedLog::from_real(7.0), SignedLog::from_real(-7.0)};
    CHECK(signedlog_sum(t).sign == 0);
  }
  {
    // (+,400) + (-,399) = (+, 400 + ln(1 - e^{-1})); extended-precision oracle
    std::vector<SignedLog> t = {SignedLog(1, 400.0), SignedLog(-1, 399.0)};
    SignedLog r = signedlog_sum(t);
    CHECK(r.sign == 1);
    CHECK(r.logmag == doctest::Approx(400.0 - 0.458675145387081891).epsilon(1e-14));
  }
  {
    std::vector<SignedLog> t;
    CHECK(signedlog_sum(t).sign == 0);
  }
  {
    // addition never overflows for logmag <= 700
    std::vector<SignedLog> t = {SignedLog(1, 700.0), SignedLog(1, 700.0)};
    SignedLog r = signedlog_sum(t);
    CHECK(std::isfinite(r.logmag));
    CHECK(r.logmag == doctest::Approx(700.0 + std::log(2.0)));
  }
}

TEST_CASE("moment identity for the log-substituted rule") {
  // int z^n w(z;q) dz = q^{-(n+1)^2/2}
  for (double q : {0.1, std::exp(-1.0), 0.9}) {
    for (int n = 0; n <= 12; ++n) {
      double got = integrate_against_weight([n](double z) { return std::pow(z, n); }, q, 200);
      double want = std::pow(q, -0.5 * (n + 1.0) * (n + 1.0));
      CHECK(got == doctest::Approx(want).epsilon(1e-9));
    }
  }
  // the spec's spot values
  CHECK(integrate_against_weight([](double) { return 1.0; }, std::exp(-1.0)) ==
        doctest::Approx(std::exp(0.5)).epsilon(1e-12));
  CHECK(integrate_against_weight([](double z) { return z; }, 0.5) ==
        doctest::Approx(4.0).epsilon(1e-12));
  CHECK(integrate_against_weight([](double z) { return z * z; }, 0.9) ==
        doctest::Approx(std::pow(0.9, -4.5)).epsilon(1e-12));
}

TEST_CASE("quadrature rule structure") {
  const QuadratureRule& r = gauss_hermite(200);
  REQUIRE(r.node_count() == 200);
  for (int i = 1; i < r.node_count(); ++i) CHECK(r.nodes[i] > r.nodes[i - 1]);
  for (double lw : r.log_weights) CHECK(std::isfinite(lw));  // positive weights, log form
  CHECK_THROWS_AS(integrate_against_weight([](double) { return 1.0; }, 1.5),
                  std::domain_error);
}

TEST_CASE("gauss_legendre integrates polynomials exactly") {
  LegendreRule r = gauss_legendre(12, -1.0, 3.0);
  double s = 0.0;
  for (int i = 0; i < 12; ++i) s += r.weights[i] * std::pow(r.nodes[i], 5);
  CHECK(s == doctest::Approx((std::pow(3.0, 6) - 1.0) / 6.0).epsilon(1e-13));
}

TEST_CASE("det_small basics") {
  {
    SmallMatrix m(3);
    m(0, 0) = m(1, 1) = m(2, 2) = 1.0;
    SignedLog d = det_small(m);
    CHECK(d.sign == 1);
    CHECK(d.logmag == doctest::Approx(0.0));
  }
  {
    // 2x2 cofactor oracle: nu=(-1,1), x=(-1,1) -> e^2 - e^{-2}
    SmallMatrix m(2);
    m(0, 0) = std::exp(1.0);
    m(0, 1) = std::exp(-1.0);
    m(1, 0) = std::exp(-1.0);
    m(1, 1) = std::exp(1.0);
    CHECK(det_small(m).to_real() == doctest::Approx(7.2537208156940375).epsilon(1e-14));
  }
  {
    SmallMatrix m(3);
    for (int j = 0; j < 3; ++j) {
      m(0, j) = j + 1.0;
      m(1, j) = j + 1.0;  // duplicate row
      m(2, j) = j * j + 0.5;
    }
    CHECK(det_small(m).sign == 0);
  }
}

TEST_CASE("det_small equals cofactor expansion on random 3x3") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int rep = 0; rep < 300; ++rep) {
    SmallMatrix m(3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m(i, j) = u(gen);
    double cof = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
                 m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
                 m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    double got = det_small(m).to_real();
    CHECK(got == doctest::Approx(cof).epsilon(1e-12));
  }
}

TEST_CASE("det_small_log handles entries far beyond double range") {
  // diag(e^500, e^500, e^-500): det = e^500
  std::vector<SignedLog> e(9, SignedLog::zero());
  e[0] = SignedLog(1, 500.0);
  e[4] = SignedLog(1, 500.0);
  e[8] = SignedLog(1, -500.0);
  SignedLog d = det_small_log(3, e);
  CHECK(d.sign == 1);
  CHECK(d.logmag == doctest::Approx(500.0));
}

TEST_CASE("profile_stats on shaped inputs") {
  {
    // triangular bump peaking at 1 on [-1,1]
    std::vector<double> xs, ys;
    for (int i = 0; i <= 2000; ++i) {
      double x = -1.0 + 2.0 * i / 2000.0;
      xs.push_back(x);
      ys.push_back(std::max(0.0, 1.0 - std::abs(x)));
    }
    ProfileStats st = profile_stats(xs, ys, 1e-3);
    CHECK(st.num_local_maxima == 1);
    CHECK(st.support_width == doctest::Approx(2.0 * (1.0 - 1e-3)).epsilon(1e-6));
  }
  {
    std::vector<double> xs = {0, 1, 2, 3}, ys = {0, 0, 0, 0};
    ProfileStats st = profile_stats(xs, ys, 1e-3);
    CHECK(st.num_local_maxima == 0);
    CHECK(st.support_width == 0.0);
  }
  {
    // plateau collapses to a single maximum
    std::vector<double> xs = {0, 1, 2, 3, 4, 5}, ys = {0, 2, 2, 2, 0, 0};
    CHECK(profile_stats(xs, ys, 0.5).num_local_maxima == 1);
  }
  {
    // refinement stability: halving the step moves the width < 2*step
    auto f = [](double x) { return std::exp(-x * x); };
    auto width_at = [&](int n) {
      std::vector<double> xs, ys;
      for (int i = 0; i <= n; ++i) {
        double x = -6.0 + 12.0 * i / n;
        xs.push_back(x);
        ys.push_back(f(x));
      }
      return profile_stats(xs, ys, 1e-3).support_width;
    };
    double w1 = width_at(600), w2 = width_at(1200);
    CHECK(std::abs(w2 - w1) < 2.0 * (12.0 / 600.0));
  }
}

TEST_CASE("linear_fit") {
  {
    std::vector<double> n = {1, 2, 3, 4}, w = {3, 5, 7, 9};  // 2N+1
    LinearFit f = linear_fit(n, w);
    CHECK(f.c1 == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(f.c2 == doctest::Approx(1.0).epsilon(1e-12));
  }
  {
    std::vector<double> n = {1, 3}, w = {3, 7};
    LinearFit f = linear_fit(n, w);
    CHECK(f.c1 == doctest::Approx(2.0));
    CHECK(f.c2 == doctest::Approx(1.0));
  }
  {
    std::vector<double> n = {2, 2, 2}, w = {1, 2, 3};
    CHECK_THROWS_AS(linear_fit(n, w), std::invalid_argument);
  }
}

TEST_CASE("adaptive trapezoid on a gaussian") {
  double got = adaptive_trapezoid([](double x) { return std::exp(-x * x / 2.0); }, -10.0,
                                  10.0, 1e-12);
  CHECK(got == doctest::Approx(std::sqrt(2.0 * 3.14159265358979324)).epsilon(1e-10));
}
