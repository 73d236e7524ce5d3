#ifndef HOLOMOD_HOLONOMY_HPP
#define HOLOMOD_HOLONOMY_HPP

#include <cmath>
#include <functional>
#include <utility>

#include "holomod/fields.hpp"
#include "holomod/leaf.hpp"
#include "holomod/path.hpp"
#include "holomod/types.hpp"

namespace holomod {

struct IntegratorOptions {
  int steps_per_unit = 4096;
  double tau_rank = kDefaultRankTol;
  double tau_drift = 1e-6;
  double tau_leaf = 1e-6;
  double tau_cot = 1e-7;
  bool check_rank = true;
};

// Rule producing the value of the (spatially constant, hence closed)
// extension one-form at time t. Evaluation is segment-local so that
// junctions of piecewise paths, where the covector may jump, resolve to
// the side being integrated. The default extension is alpha(t) itself.
using ExtensionRule = std::function<Vec(const CotangentSegment&, double)>;

inline ExtensionRule default_extension(const CotangentPath&) {
  return [](const CotangentSegment& seg, double t) { return seg.alpha_spline.eval(t); };
}

struct HolonomyResult {
  Mat full_linearization;   // Phi: chart tangent at gamma(a) -> at gamma(b)
  LeafSplitting start;
  LeafSplitting end;
  Mat normal_map;           // H, q x q in the endpoint normal bases
  double endpoint_drift = 0.0;
  double leaf_residual = 0.0;  // max normal component of Phi on leaf vectors
  long steps = 0;
  bool loop = false;
};

namespace detail {

// Joint RK4 integration of x' = V_t(x), Phi' = J_t(x) Phi along one smooth
// segment, with V_t = sharp(., ext(t)).
inline void integrate_segment(const BivectorField& pi, const CotangentSegment& seg,
                              const ExtensionRule& ext, const IntegratorOptions& opt,
                              Vec& x, Mat& phi, long& steps, int rank0) {
  const double dur = seg.base.t1() - seg.base.t0();
  const int nsteps = std::max(2, static_cast<int>(std::ceil(opt.steps_per_unit * dur)));
  const double h = dur / nsteps;
  const int n = pi.dim();
  auto rhs = [&](double t, const Vec& xx, const Mat& pp, Vec& dx, Mat& dp) {
    Vec a = ext(seg, t);
    dx = pi.sharp(xx, a);
    dp = pi.sharp_jacobian(xx, a) * pp;
  };
  Vec k1x(n), k2x(n), k3x(n), k4x(n);
  Mat k1p(n, n), k2p(n, n), k3p(n, n), k4p(n, n);
  for (int s = 0; s < nsteps; ++s) {
    double t = seg.base.t0() + h * s;
    rhs(t, x, phi, k1x, k1p);
    rhs(t + 0.5 * h, x + 0.5 * h * k1x, phi + 0.5 * h * k1p, k2x, k2p);
    rhs(t + 0.5 * h, x + 0.5 * h * k2x, phi + 0.5 * h * k2p, k3x, k3p);
    rhs(t + h, x + h * k3x, phi + h * k3p, k4x, k4p);
    x += (h / 6.0) * (k1x + 2 * k2x + 2 * k3x + k4x);
    phi += (h / 6.0) * (k1p + 2 * k2p + 2 * k3p + k4p);
    ++steps;
    if (opt.check_rank) {
      int r = bivector_rank(pi(x), opt.tau_rank);
      if (r != rank0)
        throw RankChange("linearized_flow: rank changed from " + std::to_string(rank0) +
                         " to " + std::to_string(r) + " at t=" + std::to_string(t + h));
    }
  }
}

}  // namespace detail

// Flow endpoint and full linearization along the cotangent path, using the
// given extension family.
inline std::pair<Vec, Mat> linearized_flow(const BivectorField& pi, const CotangentPath& path,
                                           const ExtensionRule& ext,
                                           const IntegratorOptions& opt = {}) {
  double res = cotangent_residual(pi, path);
  if (res > opt.tau_cot)
    throw Error("linearized_flow: cotangent residual " + std::to_string(res) +
                " exceeds tolerance");
  const int n = pi.dim();
  Vec x = path.start_point();
  Mat phi = Mat::Identity(n, n);
  long steps = 0;
  int rank0 = bivector_rank(pi(x), opt.tau_rank);
  for (const auto& seg : path.segments())
    detail::integrate_segment(pi, seg, ext, opt, x, phi, steps, rank0);
  double drift = (x - path.end_point()).norm();
  if (drift > opt.tau_drift)
    throw Error("linearized_flow: endpoint drift " + std::to_string(drift) +
                " exceeds tolerance");
  return {x, phi};
}

inline std::pair<Vec, Mat> linearized_flow(const BivectorField& pi, const CotangentPath& path,
                                           const IntegratorOptions& opt = {}) {
  return linearized_flow(pi, path, default_extension(path), opt);
}

// Holonomy with an explicit extension rule (used by the independence check).
inline HolonomyResult holonomy_with_extension(const BivectorField& pi,
                                              const CotangentPath& path,
                                              const ExtensionRule& ext,
                                              const IntegratorOptions& opt = {}) {
  HolonomyResult res;
  res.loop = path.base_closed();
  Vec x_end;
  std::tie(x_end, res.full_linearization) = linearized_flow(pi, path, ext, opt);
  res.endpoint_drift = (x_end - path.end_point()).norm();
  res.start = leaf_splitting(pi, path.start_point(), opt.tau_rank);
  // For loops the start splitting is reused verbatim, so the normal map is
  // basis-independent.
  res.end = res.loop ? res.start : leaf_splitting(pi, path.end_point(), opt.tau_rank);
  const int n = pi.dim();
  const int q = res.end.codim();
  Mat frame_inv = res.end.frame().inverse();
  if (res.start.rank > 0) {
    Mat leaf_images = frame_inv * (res.full_linearization * res.start.leaf_basis);
    res.leaf_residual =
        q > 0 ? leaf_images.bottomRows(q).cwiseAbs().maxCoeff() : 0.0;
    if (res.leaf_residual > opt.tau_leaf)
      throw Error("holonomy: flow fails to preserve the foliation, residual " +
                  std::to_string(res.leaf_residual));
  }
  if (q > 0) {
    Mat coords = frame_inv * (res.full_linearization * res.start.normal_basis);
    res.normal_map = coords.bottomRows(q);
  } else {
    res.normal_map = Mat(0, 0);
  }
  (void)n;
  return res;
}

inline HolonomyResult holonomy(const BivectorField& pi, const CotangentPath& path,
                               const IntegratorOptions& opt = {}) {
  return holonomy_with_extension(pi, path, default_extension(path), opt);
}

// Determinant of the normal map with respect to the volumes induced by mu
// and the leafwise Liouville form. For loops this reduces to det H.
inline double normal_determinant(const HolonomyResult& res, const VolumeDensity& rho) {
  if (res.normal_map.rows() == 0) return 1.0;
  double det_h = res.normal_map.determinant();
  auto induced = [&rho](const LeafSplitting& ls) {
    return rho.rho(ls.base_point) * ls.frame().determinant();
  };
  return det_h * induced(res.end) / induced(res.start);
}

// ||H_default - H_perturbed|| for the extension alpha(t) + kappa(t), where
// kappa(t) must be valued in ker sharp(gamma(t)).
inline double extension_independence_check(const BivectorField& pi, const CotangentPath& path,
                                           const std::function<Vec(double)>& kappa,
                                           const IntegratorOptions& opt = {}) {
  for (const auto& seg : path.segments())
    for (int i = 0; i <= seg.base.intervals(); ++i) {
      double t = seg.base.grid_time(i);
      double viol = pi.sharp(seg.base.sample(i), kappa(t)).norm();
      if (viol > opt.tau_cot)
        throw Error("extension_independence_check: kappa leaves ker sharp at t=" +
                    std::to_string(t));
    }
  HolonomyResult base = holonomy(pi, path, opt);
  ExtensionRule perturbed = [&kappa](const CotangentSegment& seg, double t) -> Vec {
    return seg.alpha_spline.eval(t) + kappa(t);
  };
  HolonomyResult pert = holonomy_with_extension(pi, path, perturbed, opt);
  if (base.normal_map.rows() == 0) return 0.0;
  return (base.normal_map - pert.normal_map).cwiseAbs().maxCoeff();
}

// ||H(a1 a2) - H(a2) H(a1)||.
inline double composition_check(const BivectorField& pi, const CotangentPath& a1,
                                const CotangentPath& a2, const IntegratorOptions& opt = {}) {
  CotangentPath joined = concatenate(a1, a2);
  HolonomyResult h12 = holonomy(pi, joined, opt);
  HolonomyResult h1 = holonomy(pi, a1, opt);
  HolonomyResult h2 = holonomy(pi, a2, opt);
  if (h12.normal_map.rows() == 0) return 0.0;
  return (h12.normal_map - h2.normal_map * h1.normal_map).cwiseAbs().maxCoeff();
}

// Liouville check for a time-dependent polynomial field: returns
// (det Phi w.r.t. mu, exp of the integral of div_mu along the trajectory).
inline std::pair<double, double> liouville_check(
    const std::function<VectorField(double)>& field, const VolumeDensity& rho, const Vec& x0,
    double duration, const IntegratorOptions& opt = {}) {
  const int n = static_cast<int>(x0.size());
  const int nsteps = std::max(2, static_cast<int>(std::ceil(opt.steps_per_unit * duration)));
  const double h = duration / nsteps;
  Vec x = x0;
  Mat phi = Mat::Identity(n, n);
  double integral = 0.0;
  auto rhs = [&](double t, const Vec& xx, const Mat& pp, double, Vec& dx, Mat& dp,
                 double& ds) {
    VectorField v = field(t);
    dx = v(xx);
    dp = v.jacobian(xx) * pp;
    ds = divergence(v, rho, xx);
  };
  Vec k1x(n), k2x(n), k3x(n), k4x(n);
  Mat k1p(n, n), k2p(n, n), k3p(n, n), k4p(n, n);
  double k1s, k2s, k3s, k4s;
  for (int s = 0; s < nsteps; ++s) {
    double t = h * s;
    rhs(t, x, phi, integral, k1x, k1p, k1s);
    rhs(t + 0.5 * h, x + 0.5 * h * k1x, phi + 0.5 * h * k1p, 0.0, k2x, k2p, k2s);
    rhs(t + 0.5 * h, x + 0.5 * h * k2x, phi + 0.5 * h * k2p, 0.0, k3x, k3p, k3s);
    rhs(t + h, x + h * k3x, phi + h * k3p, 0.0, k4x, k4p, k4s);
    x += (h / 6.0) * (k1x + 2 * k2x + 2 * k3x + k4x);
    phi += (h / 6.0) * (k1p + 2 * k2p + 2 * k3p + k4p);
    integral += (h / 6.0) * (k1s + 2 * k2s + 2 * k3s + k4s);
    if (x.norm() > 1e9) throw BlowUp("liouville_check: trajectory escaped");
  }
  double det_mu = phi.determinant() * rho.rho(x) / rho.rho(x0);
  return {det_mu, std::exp(integral)};
}

}  // namespace holomod

#endif
