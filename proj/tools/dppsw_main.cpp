// dppsw: densities, kernels, widths, partition functions and Monte Carlo
// validation for the noncolliding Brownian motion with drift / time-dependent
// biorthogonal Stieltjes-Wigert determinantal process.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dppsw/kernel.hpp"
#include "dppsw/montecarlo.hpp"
#include "dppsw/process.hpp"
#include "dppsw/profile.hpp"
#include "dppsw/validate.hpp"

using nlohmann::json;
using namespace dppsw;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidationFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumericRange = 3;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;  // column-major, equal lengths
};

void write_csv(std::ostream& os, const Table& t) {
  for (size_t c = 0; c < t.header.size(); ++c)
    os << t.header[c] << (c + 1 < t.header.size() ? "," : "\n");
  if (t.columns.empty()) return;
  size_t rows = t.columns[0].size();
  for (size_t r = 0; r < rows; ++r)
    for (size_t c = 0; c < t.columns.size(); ++c)
      os << fmt17(t.columns[c][r]) << (c + 1 < t.columns.size() ? "," : "\n");
}

json table_to_json(const Table& t) {
  json data = json::object();
  for (size_t c = 0; c < t.header.size(); ++c) data[t.header[c]] = t.columns[c];
  return data;
}

// minimal SVG polyline chart: first column is x, the rest are series
void write_svg(std::ostream& os, const Table& t, const std::string& title) {
  const int W = 840, H = 520, ml = 70, mr = 20, mt = 40, mb = 50;
  const auto& xs = t.columns.at(0);
  double xmin = xs.front(), xmax = xs.back();
  double ymin = 0.0, ymax = -1e300;
  for (size_t c = 1; c < t.columns.size(); ++c)
    for (double v : t.columns[c]) {
      ymax = std::max(ymax, v);
      ymin = std::min(ymin, v);
    }
  if (!(ymax > ymin)) ymax = ymin + 1.0;
  ymax *= 1.05;
  auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
  auto py = [&](double y) { return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                 "#ff7f0e", "#8c564b", "#17becf"};
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\">\n";
  os << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
     << title << "</text>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr << "\" y2=\""
     << H - mb << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << H - mb
     << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 5; ++k) {
    double xv = xmin + (xmax - xmin) * k / 5.0;
    double yv = ymin + (ymax - ymin) * k / 5.0;
    os << "<text x=\"" << px(xv) << "\" y=\"" << H - mb + 18
       << "\" text-anchor=\"middle\" font-size=\"11\">" << xv << "</text>\n";
    os << "<text x=\"" << ml - 8 << "\" y=\"" << py(yv) + 4
       << "\" text-anchor=\"end\" font-size=\"11\">" << yv << "</text>\n";
  }
  for (size_t c = 1; c < t.columns.size(); ++c) {
    os << "<polyline fill=\"none\" stroke=\"" << colors[(c - 1) % 7]
       << "\" stroke-width=\"1.4\" points=\"";
    for (size_t i = 0; i < xs.size(); ++i)
      os << px(xs[i]) << "," << py(t.columns[c][i]) << " ";
    os << "\"/>\n";
    os << "<text x=\"" << W - mr - 6 << "\" y=\"" << mt + 16 * c
       << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << colors[(c - 1) % 7] << "\">"
       << t.header[c] << "</text>\n";
  }
  os << "</svg>\n";
}

struct Output {
  std::string path;  // empty or "-": stdout
  std::string format = "csv";

  void emit(const Table& t, const json& params, const json& checks,
            const std::string& title) const {
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!path.empty() && path != "-") {
      file.open(path);
      if (!file) throw std::invalid_argument("cannot open output path: " + path);
      os = &file;
    }
    if (format == "csv") {
      write_csv(*os, t);
    } else if (format == "json") {
      json j;
      j["schema_version"] = 1;
      j["params"] = params;
      j["data"] = table_to_json(t);
      j["checks"] = checks;
      *os << j.dump(2) << "\n";
    } else if (format == "svg") {
      write_svg(*os, t, title);
    } else {
      throw CLI::ValidationError("--format must be csv, json or svg");
    }
  }
};

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stoi(tok));
  }
  if (out.empty()) throw CLI::ValidationError("empty N list");
  return out;
}

struct RunConfig {
  int n = 15;
  double a = 1.0;
  double sigma = 1.0;
  double t = 1.0;
  double xmin = -25.0;
  double xmax = 25.0;
  int points = 2001;
  double eps = 1e-3;
  uint64_t seed = 1;
  long paths = 100000;
  std::string method = "sde";
  std::string n_list = "1,5,9,13,17,21,25";
  bool compare = false;
};

void apply_json_config(RunConfig& rc, const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read config file: " + path);
  json j = json::parse(f);
  if (j.contains("n")) rc.n = j["n"].get<int>();
  if (j.contains("a")) rc.a = j["a"].get<double>();
  if (j.contains("sigma")) rc.sigma = j["sigma"].get<double>();
  if (j.contains("t")) rc.t = j["t"].get<double>();
  if (j.contains("xmin")) rc.xmin = j["xmin"].get<double>();
  if (j.contains("xmax")) rc.xmax = j["xmax"].get<double>();
  if (j.contains("points")) rc.points = j["points"].get<int>();
  if (j.contains("eps")) rc.eps = j["eps"].get<double>();
  if (j.contains("seed")) rc.seed = j["seed"].get<uint64_t>();
  if (j.contains("paths")) rc.paths = j["paths"].get<long>();
  if (j.contains("method")) rc.method = j["method"].get<std::string>();
  if (j.contains("n_list")) rc.n_list = j["n_list"].get<std::string>();
}

json params_json(const RunConfig& rc) {
  return json{{"n", rc.n},           {"a", rc.a},     {"sigma", rc.sigma},
              {"t", rc.t},           {"xmin", rc.xmin}, {"xmax", rc.xmax},
              {"points", rc.points}, {"eps", rc.eps},   {"seed", rc.seed},
              {"paths", rc.paths},   {"method", rc.method}};
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / double(n - 1);
  return v;
}

// ---------------------------------------------------------------- density
int cmd_density(const RunConfig& rc, const Output& out) {
  ModelParams p{rc.n, rc.a, rc.sigma, rc.t};
  KernelHandle h = KernelHandle::make(p);
  Table t;
  t.header = {"x", "rho"};
  auto xs = linspace(rc.xmin, rc.xmax, rc.points);
  std::vector<double> rho(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) rho[i] = kernel_mapped(h, xs[i], xs[i]);
  t.columns = {xs, rho};
  if (rc.compare) {
    std::vector<double> gue(xs.size()), semi(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) {
      gue[i] = gue_density(rc.n, rc.t, xs[i]);
      semi[i] = semicircle_density(rc.n, rc.t, xs[i]);
    }
    t.header = {"x", "rho", "rho_zero_drift", "semicircle"};
    t.columns = {xs, rho, gue, semi};
  }
  double mass = 0.0;
  for (size_t i = 1; i < xs.size(); ++i)
    mass += 0.5 * (rho[i] + rho[i - 1]) * (xs[i] - xs[i - 1]);
  ProfileStats st = profile_stats(xs, rho, rc.eps);
  json checks = json::array();
  checks.push_back({{"name", "mass"}, {"value", mass}});
  checks.push_back({{"name", "local_maxima"}, {"value", st.num_local_maxima}});
  checks.push_back({{"name", "support_width"}, {"value", st.support_width}});
  out.emit(t, params_json(rc), checks, "particle density, N=" + std::to_string(rc.n));
  return kExitOk;
}

// multi-N density table used by the fig2/fig3 presets
int cmd_density_family(const RunConfig& rc, const Output& out, bool zero_drift) {
  auto ns = parse_int_list(rc.n_list);
  Table t;
  t.header = {"x"};
  auto xs = linspace(rc.xmin, rc.xmax, rc.points);
  t.columns = {xs};
  for (int n : ns) {
    std::vector<double> rho(xs.size());
    if (zero_drift) {
      for (size_t i = 0; i < xs.size(); ++i) rho[i] = gue_density(n, rc.t, xs[i]);
    } else {
      KernelHandle h = KernelHandle::make({n, rc.a, rc.sigma, rc.t});
      for (size_t i = 0; i < xs.size(); ++i) rho[i] = kernel_mapped(h, xs[i], xs[i]);
    }
    t.header.push_back("rho_N" + std::to_string(n));
    t.columns.push_back(std::move(rho));
  }
  out.emit(t, params_json(rc), json::array(),
           zero_drift ? "zero-drift density family" : "drifted density family");
  return kExitOk;
}

// ---------------------------------------------------------------- width
int cmd_width(const RunConfig& rc, const Output& out) {
  auto ns = parse_int_list(rc.n_list);
  struct Set {
    double a, sigma;
    bool zero_drift;
    std::string label;
  };
  std::vector<Set> sets = {{1.0, 1.0, false, "a1_s1"},
                           {0.5, 0.5, false, "a0.5_s0.5"},
                           {0.25, 0.25, false, "a0.25_s0.25"},
                           {0.0, 0.0, true, "zero_drift"}};
  Table t;
  t.header = {"N"};
  std::vector<double> ncol(ns.begin(), ns.end());
  t.columns = {ncol};
  json checks = json::array();
  for (const Set& s : sets) {
    std::vector<double> widths;
    for (int n : ns) {
      double halfspan;
      const double step = 0.02;
      std::vector<double> xs, rho;
      if (s.zero_drift) {
        halfspan = 2.0 * std::sqrt(n * rc.t) + 10.0;
        int m = int(2.0 * halfspan / step) + 1;
        xs = linspace(-halfspan, halfspan, m);
        rho.resize(xs.size());
        for (size_t i = 0; i < xs.size(); ++i) rho[i] = gue_density(n, rc.t, xs[i]);
      } else {
        halfspan = 0.5 * n * (s.a + s.sigma * rc.t) + 12.0 * std::sqrt(rc.t) + 4.0;
        int m = int(2.0 * halfspan / step) + 1;
        xs = linspace(-halfspan, halfspan, m);
        KernelHandle h = KernelHandle::make({n, s.a, s.sigma, rc.t});
        rho.resize(xs.size());
        for (size_t i = 0; i < xs.size(); ++i) rho[i] = kernel_mapped(h, xs[i], xs[i]);
      }
      widths.push_back(profile_stats(xs, rho, rc.eps).support_width);
    }
    t.header.push_back("width_" + s.label);
    t.columns.push_back(widths);
    // large-N linear fit (points N >= 9, matching the figure's regime)
    std::vector<double> nfit, wfit;
    for (size_t i = 0; i < ns.size(); ++i)
      if (ns[i] >= 9) {
        nfit.push_back(ns[i]);
        wfit.push_back(widths[i]);
      }
    if (nfit.size() >= 2) {
      LinearFit f = linear_fit(nfit, wfit);
      checks.push_back({{"name", "fit_" + s.label}, {"c1", f.c1}, {"c2", f.c2}});
      std::cerr << "fit " << s.label << ": c1=" << fmt17(f.c1) << " c2=" << fmt17(f.c2)
                << "\n";
    }
  }
  out.emit(t, params_json(rc), checks, "support width vs N");
  return kExitOk;
}

// ---------------------------------------------------------------- sample
int cmd_sample(const RunConfig& rc, const Output& out) {
  SimConfig cfg;
  cfg.params = {rc.n, rc.a, rc.sigma, rc.t};
  cfg.num_paths = rc.paths;
  cfg.seed = rc.seed;
  if (rc.method != "sde" && rc.method != "rejection")
    throw CLI::ValidationError("--method must be sde or rejection");
  cfg.method =
      rc.method == "rejection" ? SimConfig::Method::rejection : SimConfig::Method::sde;
  PathEnsemble e = cfg.method == SimConfig::Method::sde ? sample_sde(cfg, rc.t)
                                                        : sample_rejection(cfg, rc.t);
  // empirical vs analytic comparison on a bin grid
  KernelHandle h = KernelHandle::make(cfg.params);
  const double bw = 0.3;
  std::vector<double> grid;
  for (double x = rc.xmin + 0.5 * bw; x < rc.xmax; x += bw) grid.push_back(x);
  auto emp = empirical_density(e, grid, bw);
  std::vector<double> ana(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) ana[i] = kernel_mapped(h, grid[i], grid[i]);
  double l1 = l1_distance(grid, emp, ana);

  Table t;
  t.header = {"path"};
  std::vector<double> idx(e.samples.size());
  for (size_t i = 0; i < e.samples.size(); ++i) idx[i] = double(i);
  t.columns = {idx};
  for (int j = 0; j < rc.n; ++j) {
    std::vector<double> col(e.samples.size());
    for (size_t i = 0; i < e.samples.size(); ++i) col[i] = e.samples[i][j];
    t.header.push_back("x" + std::to_string(j + 1));
    t.columns.push_back(std::move(col));
  }
  json checks = json::array();
  checks.push_back({{"name", "l1_empirical_vs_analytic"}, {"value", l1}});
  checks.push_back({{"name", "accepted"}, {"value", e.accepted}});
  checks.push_back({{"name", "proposed"}, {"value", e.proposed}});
  checks.push_back({{"name", "aborted"}, {"value", e.aborted}});
  std::cerr << "accepted " << e.accepted << "/" << e.proposed
            << ", L1(empirical, analytic) = " << fmt17(l1) << "\n";
  out.emit(t, params_json(rc), checks, "sampled configurations");
  return kExitOk;
}

// ---------------------------------------------------------------- partition
int cmd_partition(const RunConfig& rc, const Output& out) {
  ModelParams p{rc.n, rc.a, rc.sigma, rc.t};
  SignedLog z = partition_function(p);
  json checks = json::array();
  std::ostringstream text;
  text << "ln Z = " << fmt17(z.logmag) << "\n";
  if (rc.n <= 3) {
    SignedLog oracle = partition_function_oracle(p);
    double rel = std::abs(z.to_real() - oracle.to_real()) /
                 std::max(std::abs(z.to_real()), std::abs(oracle.to_real()));
    text << "ln Z (Andreief quadrature oracle) = " << fmt17(oracle.logmag) << "\n";
    text << "relative deviation = " << fmt17(rel) << "\n";
    checks.push_back({{"name", "oracle_relative_deviation"}, {"value", rel}});
  }
  if (out.format == "json") {
    Table t;
    t.header = {"ln_Z"};
    t.columns = {{z.logmag}};
    out.emit(t, params_json(rc), checks, "partition function");
  } else {
    std::cout << text.str();
  }
  return kExitOk;
}

// ---------------------------------------------------------------- kernel-eval
int cmd_kernel_eval(const RunConfig& rc, const Output& out) {
  ModelParams p{rc.n, rc.a, rc.sigma, rc.t};
  KernelHandle h = KernelHandle::make(p);
  auto xs = linspace(rc.xmin, rc.xmax, rc.points);
  Table t;
  t.header = {"x", "y", "K"};
  std::vector<double> cx, cy, cv;
  cx.reserve(xs.size() * xs.size());
  for (double x : xs)
    for (double y : xs) {
      cx.push_back(x);
      cy.push_back(y);
      cv.push_back(kernel_mapped(h, x, y));
    }
  t.columns = {cx, cy, cv};
  out.emit(t, params_json(rc), json::array(), "mapped correlation kernel");
  return kExitOk;
}

// ---------------------------------------------------------------- validate
int cmd_validate(const Output& out, const std::string& fault) {
  ValidationOptions opts;
  opts.inject_fault = fault;
  auto results = run_validation(opts);
  bool all = true;
  json checks = json::array();
  for (const auto& r : results) {
    all = all && r.pass;
    checks.push_back({{"name", r.name},
                      {"measured", r.measured},
                      {"tolerance", r.tolerance},
                      {"pass", r.pass},
                      {"note", r.note}});
    std::cerr << (r.pass ? "[PASS] " : "[FAIL] ") << r.name
              << "  measured=" << fmt17(r.measured) << "  tol=" << fmt17(r.tolerance)
              << "\n";
  }
  json j;
  j["schema_version"] = 1;
  j["checks"] = checks;
  j["all_pass"] = all;
  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!out.path.empty() && out.path != "-") {
    file.open(out.path);
    os = &file;
  }
  *os << j.dump(2) << "\n";
  return all ? kExitOk : kExitValidationFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"noncolliding Brownian motion with drift: exact densities, "
               "Stieltjes-Wigert correlation kernels, Monte Carlo validation"};
  app.require_subcommand(1);

  RunConfig rc;
  Output out;
  std::string config_path, preset, fault;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--n", rc.n, "particle count N");
    sub->add_option("--a", rc.a, "lattice period a");
    sub->add_option("--sigma", rc.sigma, "drift scale sigma");
    sub->add_option("--t", rc.t, "time t");
    sub->add_option("--xmin", rc.xmin, "grid lower edge");
    sub->add_option("--xmax", rc.xmax, "grid upper edge");
    sub->add_option("--points", rc.points, "grid point count");
    sub->add_option("--eps", rc.eps, "width threshold epsilon");
    sub->add_option("--seed", rc.seed, "RNG seed");
    sub->add_option("--paths", rc.paths, "Monte Carlo path count");
    sub->add_option("--method", rc.method, "sampler: sde | rejection");
    sub->add_option("--n-list", rc.n_list, "comma-separated N values");
    sub->add_option("--preset", preset, "named preset: fig1 | fig2 | fig3 | fig4");
    sub->add_option("--format", out.format, "output format: csv | json | svg");
    sub->add_option("--out", out.path, "output path (default stdout)");
    sub->add_option("--config", config_path, "JSON config file (flags override)");
    return sub;
  };

  auto* density = add_common(app.add_subcommand("density", "particle density profile"));
  density->add_flag("--compare", rc.compare, "add zero-drift and semicircle columns");
  auto* width = add_common(app.add_subcommand("width", "support width vs N with linear fit"));
  auto* sample = add_common(app.add_subcommand("sample", "Monte Carlo path sampling"));
  auto* partition = add_common(app.add_subcommand("partition", "partition function ln Z"));
  auto* kernel_eval =
      add_common(app.add_subcommand("kernel-eval", "mapped kernel on a grid"));
  auto* validate = app.add_subcommand("validate", "run the invariant suite");
  validate->add_option("--out", out.path, "report path (default stdout)");
  validate->add_option("--inject-fault", fault, "testing hook: perturb a named quantity");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    // precedence: defaults < preset < config file < explicit flags.
    // CLI11 wrote explicit flags into rc already, so reapply them last.
    if (!preset.empty() || !config_path.empty()) {
      RunConfig base;
      if (preset == "fig1") {
        base.n = 15;
        base.a = base.sigma = base.t = 1.0;
        base.xmin = -25.0;
        base.xmax = 25.0;
        base.points = 2001;
      } else if (preset == "fig2" || preset == "fig3") {
        base.n_list = "1,5,9,13,17";
        base.t = 1.0;
        base.xmin = -25.0;
        base.xmax = 25.0;
        base.points = 2001;
      } else if (preset == "fig4") {
        base.t = 1.5;
        base.eps = 1e-3;
        base.n_list = "1,5,9,13,17,21,25";
      } else if (!preset.empty()) {
        throw CLI::ValidationError("unknown preset: " + preset);
      }
      if (!config_path.empty()) apply_json_config(base, config_path);
      CLI::App* active = app.get_subcommands().front();
      auto keep = [&](const char* flag) { return active->count(flag) > 0; };
      RunConfig flags = rc;
      rc = base;
      if (keep("--n")) rc.n = flags.n;
      if (keep("--a")) rc.a = flags.a;
      if (keep("--sigma")) rc.sigma = flags.sigma;
      if (keep("--t")) rc.t = flags.t;
      if (keep("--xmin")) rc.xmin = flags.xmin;
      if (keep("--xmax")) rc.xmax = flags.xmax;
      if (keep("--points")) rc.points = flags.points;
      if (keep("--eps")) rc.eps = flags.eps;
      if (keep("--seed")) rc.seed = flags.seed;
      if (keep("--paths")) rc.paths = flags.paths;
      if (keep("--method")) rc.method = flags.method;
      if (keep("--n-list")) rc.n_list = flags.n_list;
      rc.compare = flags.compare;
    }

    if (density->parsed()) {
      if (preset == "fig2") return cmd_density_family(rc, out, true);
      if (preset == "fig3") return cmd_density_family(rc, out, false);
      return cmd_density(rc, out);
    }
    if (width->parsed()) return cmd_width(rc, out);
    if (sample->parsed()) return cmd_sample(rc, out);
    if (partition->parsed()) return cmd_partition(rc, out);
    if (kernel_eval->parsed()) return cmd_kernel_eval(rc, out);
    if (validate->parsed()) return cmd_validate(out, fault);
    return kExitUsage;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::range_error& e) {
    std::cerr << "numeric range error: " << e.what() << "\n";
    return kExitNumericRange;
  } catch (const std::domain_error& e) {
    std::cerr << "numeric range error: " << e.what() << "\n";
    return kExitNumericRange;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumericRange;
  }
}
