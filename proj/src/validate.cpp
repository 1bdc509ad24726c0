#include "dppsw/validate.hpp"

#include <cmath>
#include <functional>

#include "dppsw/hermite.hpp"
#include "dppsw/kernel.hpp"
#include "dppsw/process.hpp"
#include "dppsw/quadrature.hpp"
#include "dppsw/swpoly.hpp"

namespace dppsw {

namespace {

double rel_err(double got, double want) {
  double denom = std::max(std::abs(got), std::abs(want));
  if (denom == 0.0) return 0.0;
  return std::abs(got - want) / denom;
}

// worst |int T_n R_m w - delta_nm| over a (theta, q) grid
double biortho_worst(int deg, double coeff_perturb) {
  double worst = 0.0;
  for (double theta : {0.5, 1.0, 2.0}) {
    for (double q : {0.3, std::exp(-1.0), 0.9}) {
      PolyTable table = build_table(theta, q, deg);
      if (coeff_perturb != 0.0) {
        for (auto& c : table.coeffs_T[deg]) c.logmag += coeff_perturb;
      }
      int rs = recommended_rule_size(q, theta * deg + deg);
      for (int n = 0; n <= deg; ++n) {
        for (int m = 0; m <= deg; ++m) {
          SignedLog v = integrate_against_weight_sl(
              [&](double lnz) { return eval_T_sl(table, n, lnz) * eval_R_sl(table, m, lnz); },
              q, rs);
          double want = (n == m) ? 1.0 : 0.0;
          worst = std::max(worst, std::abs(v.to_real() - want));
        }
      }
    }
  }
  return worst;
}

}  // namespace

std::vector<CheckResult> run_validation(const ValidationOptions& opts) {
  std::vector<CheckResult> out;
  auto push = [&out](std::string name, double measured, double tol, std::string note = "") {
    CheckResult r;
    r.name = std::move(name);
    r.measured = measured;
    r.tolerance = tol;
    r.pass = measured <= tol;
    r.note = std::move(note);
    out.push_back(std::move(r));
  };

  {  // moment identity against the closed-form log-normal moments
    double worst = 0.0;
    for (double q : {0.1, std::exp(-1.0), 0.9})
      for (int n = 0; n <= 12; ++n) {
        double got = integrate_against_weight([n](double z) { return std::pow(z, n); }, q, 200);
        double want = std::pow(q, -0.5 * (n + 1.0) * (n + 1.0));
        worst = std::max(worst, rel_err(got, want));
      }
    push("moment-identity", worst, 1e-9);
  }

  {  // biorthonormality (with the optional fault hook)
    double perturb = opts.inject_fault == "ortho" ? 1e-3 : 0.0;
    push("biorthonormality", biortho_worst(8, perturb), 1e-8,
         perturb != 0.0 ? "fault injected" : "");
  }

  {  // kernel projection and trace, z-space
    double worst_proj = 0.0, worst_trace = 0.0;
    for (int N : {1, 4, 8}) {
      for (auto [a, sig, t] : {std::array<double, 3>{1, 1, 1}, {0.5, 0.5, 1.5}}) {
        ModelParams mp{N, a, sig, t};
        KernelHandle h = KernelHandle::make(mp);
        double q = mp.q(), theta = mp.theta();
        int rs = recommended_rule_size(q, (theta + 1.0) * (N - 1) + 1.0);
        SignedLog tr = integrate_against_weight_sl(
            [&](double lnz) {
              std::vector<SignedLog> terms(N);
              for (int j = 0; j < N; ++j)
                terms[j] = eval_R_sl(h.table, j, lnz) * eval_T_sl(h.table, j, lnz);
              return signedlog_sum(terms);
            },
            q, rs);
        worst_trace = std::max(worst_trace, std::abs(tr.to_real() - N));
        for (double sx : {-0.4, 0.8}) {
          for (double sy : {0.0, 1.3}) {
            double lx = sx * std::sqrt(-std::log(q)), ly = sy * std::sqrt(-std::log(q));
            SignedLog got = integrate_against_weight_sl(
                [&](double lnz) {
                  std::vector<SignedLog> tx(N), ty(N);
                  for (int j = 0; j < N; ++j) {
                    tx[j] = eval_R_sl(h.table, j, lx) * eval_T_sl(h.table, j, lnz);
                    ty[j] = eval_R_sl(h.table, j, lnz) * eval_T_sl(h.table, j, ly);
                  }
                  return signedlog_sum(tx) * signedlog_sum(ty);
                },
                q, rs);
            std::vector<SignedLog> terms(N);
            for (int j = 0; j < N; ++j)
              terms[j] = eval_R_sl(h.table, j, lx) * eval_T_sl(h.table, j, ly);
            SignedLog want = signedlog_sum(terms);
            worst_proj = std::max(worst_proj, rel_err(got.to_real(), want.to_real()));
          }
        }
      }
    }
    push("kernel-trace", worst_trace, 1e-6);
    push("kernel-projection", worst_proj, 1e-7);
  }

  {  // theta -> 1 limit of T_n toward p_n
    double q = std::exp(-1.0);
    double prev = 1e300;
    bool monotone = true;
    double last = 0.0;
    for (double eps : {0.1, 0.01, 0.001}) {
      PolyTable tt = build_table(1.0 + eps, q, 8);
      PolyTable tp = build_table(1.0, q, 8);
      double worst = 0.0;
      for (int n = 0; n <= 8; ++n)
        for (double x : {0.5, 1.0, 2.0, 5.0})
          worst = std::max(worst, std::abs(eval_T(tt, n, x) - eval_p(tp, n, x)));
      if (worst > prev) monotone = false;
      prev = worst;
      last = worst;
    }
    push("theta-limit-monotone", monotone ? 0.0 : 1.0, 0.5);
    push("theta-limit-final", last, 1e-2);
  }

  {  // q -> 1 scaled kernel toward the Hermite kernel (monotone approach)
    double prev = 1e300;
    bool monotone = true;
    for (double q : {0.9, 0.99, 0.999}) {
      double sup = 0.0;
      for (double x = -2.0; x <= 2.0; x += 0.5)
        for (double y = -2.0; y <= 2.0; y += 0.5) {
          double want = 0.0;
          for (int j = 0; j < 3; ++j) want += hermite_fn(j, x) * hermite_fn(j, y);
          sup = std::max(sup, std::abs(kernel_scaled_q1(q, 3, x, y) - want));
        }
      if (sup > prev) monotone = false;
      prev = sup;
    }
    push("q1-limit-monotone", monotone ? 0.0 : 1.0, 0.5);
  }

  {  // Christoffel-Darboux vs partial sum at q0 = e^{-1}
    double q0 = std::exp(-1.0);
    double worst = 0.0;
    for (int N : {2, 6, 10})
      for (double x : {0.4, 1.0, 3.0, 8.0})
        for (double y : {0.7, 2.0, 5.0}) {
          if (std::abs(x - y) < 1e-6) continue;
          worst = std::max(worst, rel_err(kernel_K_t0(q0, N, x, y, T0Form::cd),
                                          kernel_K_t0(q0, N, x, y, T0Form::sum)));
        }
    push("cd-consistency", worst, 1e-9);
  }

  {  // partition function closed form vs Andreief quadrature oracle
    double worst2 = 0.0, worst3 = 0.0;
    for (auto [a, sig, t] : {std::array<double, 3>{1, 1, 1}, {0.5, 0.5, 1.5}, {1, 1, 0.25}}) {
      ModelParams p2{2, a, sig, t}, p3{3, a, sig, t};
      worst2 = std::max(worst2, rel_err(partition_function(p2).to_real(),
                                        partition_function_oracle(p2).to_real()));
      worst3 = std::max(worst3, rel_err(partition_function(p3).to_real(),
                                        partition_function_oracle(p3).to_real()));
    }
    push("partition-N2", worst2, 1e-6);
    push("partition-N3", worst3, 1e-5);
  }

  {  // density-form cross-checks at a fixed configuration
    ModelParams p{3, 1.0, 1.0, 1.0};
    auto z = Configuration::make_ordered({0.8, 2.1, 4.0},
                                         Configuration::Domain::positive_half_line);
    double a_ = biorthogonal_density_z(1.0, z, p, BioForm::product);
    double b_ = biorthogonal_density_z(1.0, z, p, BioForm::determinantal);
    push("bio-product-vs-det", rel_err(a_, b_), 1e-8);
    double c_ = t0_ensemble_density(p.q(), z);  // t = t0 = 1 here
    push("t0-density-reduction", rel_err(a_, c_), 1e-8);
  }

  {  // recurrence vs coefficient-table evaluation of p_n
    double q = std::exp(-1.0);
    PolyTable t = build_table(1.0, q, 12);
    double worst = 0.0;
    for (int n = 0; n <= 12; ++n)
      for (double x : {0.5, 1.0, 5.0})
        worst = std::max(worst, rel_err(sw_recurrence_eval(q, n, x), eval_p(t, n, x)));
    push("recurrence-vs-direct", worst, 1e-10);
  }

  return out;
}

}  // namespace dppsw
