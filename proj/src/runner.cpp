#include "runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>

#include "holomod/conventions.hpp"
#include "holomod/integrals.hpp"
#include "holomod/lie_poisson.hpp"
#include "holomod/modular.hpp"
#include "holomod/presets.hpp"

namespace holomod {

namespace {

const double kTau = 2.0 * M_PI;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

Vec random_point(std::mt19937& rng, int dim) {
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  Vec x(dim);
  for (int i = 0; i < dim; ++i) x[i] = u(rng);
  return x;
}

Polynomial random_poly(std::mt19937& rng, int dim, int degree) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> e(0, degree);
  Polynomial p(dim);
  for (int k = 0; k < 6; ++k) {
    std::vector<int> exps(static_cast<size_t>(dim));
    int budget = degree;
    for (int i = 0; i < dim; ++i) {
      exps[static_cast<size_t>(i)] = std::min(budget, e(rng));
      budget -= exps[static_cast<size_t>(i)];
    }
    p.add_term(exps, u(rng));
  }
  return p;
}

// Lazily built, label-cached paths; errors are tagged with the label.
class PathCache {
 public:
  PathCache(const Manifest& m) : m_(m) {}

  const CotangentPath& get(const PathSpec& spec) {
    auto it = cache_.find(spec.label);
    if (it != cache_.end()) return it->second;
    try {
      return cache_.emplace(spec.label, spec.build(m_.bivector, m_.numeric.samples))
          .first->second;
    } catch (const std::exception& e) {
      throw Error("path '" + spec.label + "': " + e.what());
    }
  }

 private:
  const Manifest& m_;
  std::map<std::string, CotangentPath> cache_;
};

struct SuiteContext {
  const Manifest& m;
  PathCache& paths;
  RunReport& report;
  std::mt19937& rng;
  double sigma;

  void row(const std::string& label, const std::string& suite, const std::string& metric,
           double value, double tolerance, bool pass) {
    report.rows.push_back({label, suite, metric, value, tolerance, pass});
  }
  void gated(const std::string& label, const std::string& suite, const std::string& metric,
             double value, double tolerance) {
    row(label, suite, metric, value, tolerance, std::abs(value) <= tolerance);
  }
  void info(const std::string& label, const std::string& suite, const std::string& metric,
            double value) {
    row(label, suite, metric, value, 0.0, true);
  }
};

void suite_holonomy(SuiteContext& ctx) {
  const auto& opt = ctx.m.numeric.integrator;
  for (const auto& spec : ctx.m.paths) {
    const CotangentPath& path = ctx.paths.get(spec);
    ctx.gated(spec.label, "holonomy", "cotangent_residual",
              cotangent_residual(ctx.m.bivector, path), opt.tau_cot);
    try {
      HolonomyResult res = holonomy(ctx.m.bivector, path, opt);
      ctx.gated(spec.label, "holonomy", "endpoint_drift", res.endpoint_drift, opt.tau_drift);
      ctx.gated(spec.label, "holonomy", "leaf_residual", res.leaf_residual, opt.tau_leaf);
      ctx.info(spec.label, "holonomy", "normal_rank", res.normal_map.rows());
      ctx.info(spec.label, "holonomy", "det_H",
               normal_determinant(res, ctx.m.density));
    } catch (const std::exception& e) {
      throw Error("path '" + spec.label + "': " + e.what());
    }
  }
}

void suite_theorem_main(SuiteContext& ctx) {
  VectorField v = modular_field(ctx.m.bivector, ctx.m.density);
  for (const auto& spec : ctx.m.paths) {
    const CotangentPath& path = ctx.paths.get(spec);
    if (!path.base_closed()) continue;
    try {
      HolonomyResult res = holonomy(ctx.m.bivector, path, ctx.m.numeric.integrator);
      double det = normal_determinant(res, ctx.m.density);
      double integral = ctx.sigma * path_integral(v, path, ctx.sigma);
      ctx.info(spec.label, "theorem-main", "det_H", det);
      ctx.info(spec.label, "theorem-main", "modular_integral", integral);
      ctx.gated(spec.label, "theorem-main", "identity_residual",
                std::log(det) - integral, ctx.m.numeric.tau_theorem);
    } catch (const std::exception& e) {
      throw Error("path '" + spec.label + "': " + e.what());
    }
  }
}

void suite_modular(SuiteContext& ctx) {
  const int n = ctx.m.dimension;
  VectorField v = modular_field(ctx.m.bivector, ctx.m.density);
  double worst_def = 0.0, worst_lie = 0.0;
  for (int k = 0; k < ctx.m.numeric.probes; ++k) {
    Vec x = random_point(ctx.rng, n);
    Polynomial f = random_poly(ctx.rng, n, 3);
    worst_def = std::max(
        worst_def, defining_property_residual(ctx.m.bivector, ctx.m.density, v, f, x));
    worst_lie = std::max(worst_lie, poisson_field_residual(ctx.m.bivector, v, x));
  }
  ctx.gated("structure", "modular", "defining_property_max", worst_def,
            ctx.m.numeric.tau_modular);
  ctx.gated("structure", "modular", "lie_derivative_max", worst_lie,
            ctx.m.numeric.tau_lie_derivative);
  double worst_gauge = 0.0;
  for (int k = 0; k < 3; ++k)
    worst_gauge = std::max(worst_gauge,
                           gauge_shift_check(ctx.m.bivector, ctx.m.density,
                                             random_poly(ctx.rng, n, 2)));
  ctx.gated("structure", "modular", "gauge_coefficient_max", worst_gauge, 1e-14);
}

void suite_integrals(SuiteContext& ctx) {
  const int n = ctx.m.dimension;
  VectorField v = modular_field(ctx.m.bivector, ctx.m.density);
  for (const auto& spec : ctx.m.paths) {
    const CotangentPath& path = ctx.paths.get(spec);
    double worst_ham = 0.0, worst_pull = 0.0;
    for (int k = 0; k < ctx.m.numeric.random_pairs; ++k) {
      Polynomial f = random_poly(ctx.rng, n, 3);
      worst_ham = std::max(
          worst_ham, hamiltonian_endpoint_residual(ctx.m.bivector, f, path, ctx.sigma));
      worst_pull = std::max(
          worst_pull, pullback_identity_residual(
                          ctx.m.bivector, CovectorField::differential(f), path, ctx.sigma));
    }
    ctx.gated(spec.label, "integrals", "hamiltonian_endpoint_max", worst_ham,
              ctx.m.numeric.tau_hamiltonian);
    ctx.gated(spec.label, "integrals", "pullback_identity_max", worst_pull,
              ctx.m.numeric.tau_hamiltonian);
    if (path.base_closed()) {
      double worst_loop = 0.0;
      for (int k = 0; k < ctx.m.numeric.random_pairs; ++k) {
        Polynomial f = random_poly(ctx.rng, n, 3);
        worst_loop = std::max(
            worst_loop, std::abs(path_integral(hamiltonian_field(ctx.m.bivector, f), path,
                                               ctx.sigma)));
      }
      ctx.gated(spec.label, "integrals", "loop_hamiltonian_max", worst_loop,
                ctx.m.numeric.tau_loop_integral);
      double worst_gauge = 0.0;
      for (int k = 0; k < 3; ++k) {
        Polynomial ln_g = random_poly(ctx.rng, n, 2);
        VolumeDensity scaled(ctx.m.density.log_density() + ln_g);
        VectorField vg = modular_field(ctx.m.bivector, scaled);
        worst_gauge = std::max(worst_gauge,
                               std::abs(path_integral(vg, path, ctx.sigma) -
                                        path_integral(v, path, ctx.sigma)));
      }
      ctx.gated(spec.label, "integrals", "gauge_loop_invariance", worst_gauge,
                ctx.m.numeric.tau_gauge_loop);
    }
  }
}

void suite_oracles(SuiteContext& ctx) {
  LieAlgebraPresentation l = presets::algebra(ctx.m.preset);
  for (const auto& spec : ctx.m.paths) {
    if (spec.kind != "constant-loop" && spec.kind != "stationary-loop") continue;
    if (spec.point.norm() > 1e-12) continue;  // oracles live at the origin
    const CotangentPath& path = ctx.paths.get(spec);
    try {
      HolonomyResult res = holonomy(ctx.m.bivector, path, ctx.m.numeric.integrator);
      Mat oracle;
      double tol;
      if (spec.kind == "constant-loop") {
        oracle = constant_loop_oracle(l, spec.covector, spec.duration);
        tol = ctx.m.numeric.tau_oracle_const;
      } else {
        auto a = [&spec](double t) {
          double u = kTau * spec.frequency * t / spec.duration;
          return Vec(spec.covector_const + spec.covector_cos * std::cos(u) +
                     spec.covector_sin * std::sin(u));
        };
        oracle = time_ordered_oracle(l, a, spec.duration, 4096);
        tol = ctx.m.numeric.tau_oracle_var;
      }
      ctx.gated(spec.label, "oracles", "oracle_deviation",
                (res.normal_map - oracle).cwiseAbs().maxCoeff(), tol);
    } catch (const std::exception& e) {
      throw Error("path '" + spec.label + "': " + e.what());
    }
  }
}

void suite_homotopy(SuiteContext& ctx) {
  const bool linear = presets::is_lie_poisson(ctx.m.preset);
  for (const auto& fam : ctx.m.families) {
    std::vector<Mat> hs;
    for (const auto& member : fam.members) {
      try {
        CotangentPath path = member.build(ctx.m.bivector, ctx.m.numeric.samples);
        hs.push_back(holonomy(ctx.m.bivector, path, ctx.m.numeric.integrator).normal_map);
      } catch (const std::exception& e) {
        throw Error("family '" + fam.label + "', member '" + member.label + "': " + e.what());
      }
    }
    double spread = 0.0;
    for (size_t i = 0; i < hs.size(); ++i)
      for (size_t j = i + 1; j < hs.size(); ++j)
        spread = std::max(spread, (hs[i] - hs[j]).cwiseAbs().maxCoeff());
    ctx.info(fam.label, "homotopy", "holonomy_spread", spread);
    if (linear) {
      LieAlgebraPresentation l = presets::algebra(ctx.m.preset);
      bool all_equal = true;
      for (size_t i = 0; i < hs.size() && all_equal; ++i)
        for (size_t j = i + 1; j < hs.size() && all_equal; ++j)
          all_equal = inn_coset_equal(l, hs[i], hs[j], ctx.m.numeric.tau_coset);
      ctx.row(fam.label, "homotopy", "coset_equal_pairwise", all_equal ? 1.0 : 0.0,
              ctx.m.numeric.tau_coset, all_equal);
    } else {
      ctx.gated(fam.label, "homotopy", "holonomy_spread_gate", spread,
                ctx.m.numeric.tau_homotopy);
    }
  }
}

}  // namespace

bool RunReport::all_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.pass; });
}

std::string RunReport::csv_body() const {
  std::ostringstream os;
  os << "label,suite,metric,value,tolerance,pass\n";
  for (const auto& r : rows)
    os << r.label << ',' << r.suite << ',' << r.metric << ',' << fmt(r.value) << ','
       << fmt(r.tolerance) << ',' << (r.pass ? "true" : "false") << '\n';
  return os.str();
}

std::string RunReport::csv() const {
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[64];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return std::string("# holomod results, generated ") + stamp + "\n" + csv_body();
}

std::string RunReport::conventions_text() const {
  std::ostringstream os;
  os << "sigma " << (sigma > 0 ? "+1" : "-1") << "\n"
     << "coad_sign " << (coad_sign > 0 ? "+1" : "-1") << "\n"
     << "sigma_residual " << fmt(sigma_residual) << "\n"
     << "coad_residual " << fmt(coad_residual) << "\n"
     << "seed " << seed << "\n";
  return os.str();
}

std::string RunReport::text_summary() const {
  std::ostringstream os;
  os << "holomod run: sigma " << (sigma > 0 ? "+1" : "-1") << ", coad sign "
     << (coad_sign > 0 ? "+1" : "-1") << ", seed " << seed << "\n";
  std::string current;
  int fails = 0;
  for (const auto& r : rows) {
    if (r.suite != current) {
      current = r.suite;
      os << "\n[" << current << "]\n";
    }
    os << "  " << (r.pass ? "pass" : "FAIL") << "  " << r.label << " / " << r.metric << " = "
       << fmt(r.value);
    if (r.tolerance > 0.0) os << "  (tol " << fmt(r.tolerance) << ")";
    os << "\n";
    if (!r.pass) ++fails;
  }
  os << "\n" << (fails == 0 ? "ALL SUITES PASS" : std::to_string(fails) + " CHECKS FAILED")
     << "  (" << rows.size() << " checks, " << fmt(wall_seconds) << " s)\n";
  return os.str();
}

RunReport run(const Manifest& m) {
  auto t_start = std::chrono::steady_clock::now();
  RunReport report;
  report.seed = m.numeric.seed;

  const Conventions& conv = conventions();
  report.coad_sign = conv.coad_sign;
  report.sigma_residual = conv.sigma_residual;
  report.coad_residual = conv.coad_residual;
  report.sigma = m.numeric.sigma_override.value_or(conv.sigma);

  std::mt19937 rng(m.numeric.seed);
  PathCache cache(m);
  SuiteContext ctx{m, cache, report, rng, report.sigma};

  // Mandatory pre-suite: the arbiter residuals that froze the signs.
  ctx.info("global", "conventions", "sigma", conv.sigma);
  ctx.info("global", "conventions", "coad_sign", conv.coad_sign);
  ctx.gated("global", "conventions", "sigma_residual", conv.sigma_residual, 1e-6);
  ctx.gated("global", "conventions", "coad_residual", conv.coad_residual, 1e-6);

  for (const auto& suite : m.suites) {
    if (suite == "holonomy") suite_holonomy(ctx);
    else if (suite == "theorem-main") suite_theorem_main(ctx);
    else if (suite == "modular") suite_modular(ctx);
    else if (suite == "integrals") suite_integrals(ctx);
    else if (suite == "oracles") suite_oracles(ctx);
    else if (suite == "homotopy") suite_homotopy(ctx);
  }

  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return report;
}

std::vector<ConvergenceRow> convergence_study(const Manifest& m, int levels) {
  if (levels < 3) throw Error("convergence_study: need at least 3 levels");
  std::vector<ConvergenceRow> out;
  PathCache cache(m);
  for (const auto& spec : m.paths) {
    const CotangentPath& path = cache.get(spec);
    ConvergenceRow row;
    row.label = spec.label;
    IntegratorOptions opt = m.numeric.integrator;
    const int base = 64;
    opt.steps_per_unit = base << (levels + 1);
    Mat ref = linearized_flow(m.bivector, path, opt).second;
    double scale = std::max(1.0, ref.cwiseAbs().maxCoeff());
    for (int k = 0; k < levels; ++k) {
      opt.steps_per_unit = base << k;
      Mat phi = linearized_flow(m.bivector, path, opt).second;
      row.steps.push_back(opt.steps_per_unit);
      row.errors.push_back((phi - ref).cwiseAbs().maxCoeff());
    }
    row.exact = std::all_of(row.errors.begin(), row.errors.end(),
                            [scale](double e) { return e <= 1e-12 * scale; });
    if (!row.exact) {
      // Least-squares slope of log2(error) against the halving level.
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      int n = 0;
      for (int k = 0; k < levels; ++k) {
        if (row.errors[static_cast<size_t>(k)] <= 1e-14 * scale) continue;
        double x = k, y = std::log2(row.errors[static_cast<size_t>(k)]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++n;
      }
      if (n >= 2) row.order = -(n * sxy - sx * sy) / (n * sxx - sx * sx);
    }
    out.push_back(std::move(row));
  }
  return out;
}

std::string convergence_table(const std::vector<ConvergenceRow>& rows) {
  std::ostringstream os;
  os << "label,steps,error,order,exact\n";
  for (const auto& r : rows)
    for (size_t k = 0; k < r.errors.size(); ++k)
      os << r.label << ',' << r.steps[k] << ',' << fmt(r.errors[k]) << ',' << fmt(r.order)
         << ',' << (r.exact ? "true" : "false") << '\n';
  return os.str();
}

}  // namespace holomod
