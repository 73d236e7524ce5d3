#ifndef HOLOMOD_PATH_HPP
#define HOLOMOD_PATH_HPP

#include <functional>
#include <utility>
#include <vector>

#include "holomod/fields.hpp"
#include "holomod/leaf.hpp"
#include "holomod/spline.hpp"
#include "holomod/types.hpp"

namespace holomod {

struct PathTolerances {
  double tau_close = 1e-10;   // base-point closure for loops
  double tau_cot = 1e-7;      // cotangent-condition residual
  double tau_lift_rel = 1e-6; // lift residual, relative to max |gamma'|
  double tau_rank = kDefaultRankTol;
};

constexpr int kDefaultPathSamples = 512;  // grid intervals; kept even for Simpson

// Base curve gamma(t) sampled on a uniform grid, with derivatives from a
// cubic spline through the samples.
class TangentPath {
 public:
  static TangentPath from_samples(double t0, double t1, const Mat& samples, bool closed,
                                  double tau_close = 1e-10) {
    if (samples.cols() < 9) throw Error("TangentPath: need at least 9 samples");
    if ((samples.cols() - 1) % 2 != 0)
      throw Error("TangentPath: interval count must be even");
    if (closed) {
      double gap = (samples.col(0) - samples.col(samples.cols() - 1)).norm();
      if (gap > tau_close)
        throw Error("TangentPath: loop fails to close, gap " + std::to_string(gap));
    }
    TangentPath p;
    p.t0_ = t0;
    p.t1_ = t1;
    p.samples_ = samples;
    p.closed_ = closed;
    p.spline_ = CubicSpline(t0, t1, samples,
                            closed ? CubicSpline::Boundary::Periodic
                                   : CubicSpline::Boundary::NotAKnot);
    return p;
  }

  static TangentPath parametric(int dim, const std::function<Vec(double)>& f, double t0,
                                double t1, int intervals, bool closed,
                                double tau_close = 1e-10) {
    Mat samples(dim, intervals + 1);
    for (int i = 0; i <= intervals; ++i)
      samples.col(i) = f(t0 + (t1 - t0) * i / intervals);
    return from_samples(t0, t1, samples, closed, tau_close);
  }

  double t0() const { return t0_; }
  double t1() const { return t1_; }
  bool closed() const { return closed_; }
  int dim() const { return static_cast<int>(samples_.rows()); }
  int intervals() const { return static_cast<int>(samples_.cols()) - 1; }
  double grid_time(int i) const { return t0_ + (t1_ - t0_) * i / intervals(); }
  Vec sample(int i) const { return samples_.col(i); }
  const Mat& samples() const { return samples_; }

  Vec point(double t) const { return spline_.eval(t); }
  Vec velocity(double t) const { return spline_.deriv(t); }

 private:
  double t0_ = 0.0, t1_ = 1.0;
  Mat samples_;
  bool closed_ = false;
  CubicSpline spline_;
};

// One smooth piece of a cotangent path: the base curve plus covector samples
// on the same grid.
struct CotangentSegment {
  TangentPath base;
  Mat alpha_samples;  // n x (N+1)
  CubicSpline alpha_spline;

  static CotangentSegment make(TangentPath base, const Mat& alpha_samples) {
    if (alpha_samples.cols() != base.samples().cols() ||
        alpha_samples.rows() != base.samples().rows())
      throw DimensionMismatch("CotangentSegment: covector grid mismatch");
    CotangentSegment s;
    double amax = alpha_samples.cwiseAbs().maxCoeff();
    bool alpha_closes =
        base.closed() &&
        (alpha_samples.col(0) - alpha_samples.col(alpha_samples.cols() - 1)).norm() <=
            1e-8 * (1.0 + amax);
    s.alpha_spline = CubicSpline(base.t0(), base.t1(), alpha_samples,
                                 alpha_closes ? CubicSpline::Boundary::Periodic
                                              : CubicSpline::Boundary::NotAKnot);
    s.base = std::move(base);
    s.alpha_samples = alpha_samples;
    return s;
  }
};

// Piecewise-smooth cotangent path. Segments are contiguous in time and no
// spline runs across a junction.
class CotangentPath {
 public:
  explicit CotangentPath(std::vector<CotangentSegment> segs, double tau_close = 1e-10)
      : segs_(std::move(segs)) {
    if (segs_.empty()) throw Error("CotangentPath: no segments");
    for (size_t i = 1; i < segs_.size(); ++i) {
      if (std::abs(segs_[i].base.t0() - segs_[i - 1].base.t1()) > 1e-12)
        throw Error("CotangentPath: segments not contiguous in time");
      double gap =
          (segs_[i].base.sample(0) - segs_[i - 1].base.sample(segs_[i - 1].base.intervals()))
              .norm();
      if (gap > tau_close) throw Error("CotangentPath: base junction gap");
    }
    base_closed_ = (start_point() - end_point()).norm() <= tau_close;
    double amax = 0.0;
    for (const auto& s : segs_) amax = std::max(amax, s.alpha_samples.cwiseAbs().maxCoeff());
    alpha_closed_ =
        base_closed_ && (start_covector() - end_covector()).norm() <= 1e-8 * (1.0 + amax);
  }

  int dim() const { return segs_.front().base.dim(); }
  double t0() const { return segs_.front().base.t0(); }
  double t1() const { return segs_.back().base.t1(); }
  double duration() const { return t1() - t0(); }
  bool base_closed() const { return base_closed_; }
  bool alpha_closed() const { return alpha_closed_; }
  const std::vector<CotangentSegment>& segments() const { return segs_; }

  Vec start_point() const { return segs_.front().base.sample(0); }
  Vec end_point() const { return segs_.back().base.sample(segs_.back().base.intervals()); }
  Vec start_covector() const { return segs_.front().alpha_samples.col(0); }
  Vec end_covector() const {
    return segs_.back().alpha_samples.col(segs_.back().alpha_samples.cols() - 1);
  }

  Vec gamma(double t) const { return seg_at(t).base.point(t); }
  Vec gamma_dot(double t) const { return seg_at(t).base.velocity(t); }
  Vec alpha(double t) const { return seg_at(t).alpha_spline.eval(t); }

  CotangentPath reversed() const {
    double a = t0(), b = t1();
    std::vector<CotangentSegment> out;
    for (auto it = segs_.rbegin(); it != segs_.rend(); ++it) {
      const auto& s = *it;
      int n = s.base.intervals();
      Mat g(dim(), n + 1), al(dim(), n + 1);
      for (int i = 0; i <= n; ++i) {
        g.col(i) = s.base.sample(n - i);
        al.col(i) = -s.alpha_samples.col(n - i);
      }
      TangentPath base = TangentPath::from_samples(a + b - s.base.t1(), a + b - s.base.t0(),
                                                   g, s.base.closed());
      out.push_back(CotangentSegment::make(std::move(base), al));
    }
    return CotangentPath(std::move(out));
  }

 private:
  const CotangentSegment& seg_at(double t) const {
    for (const auto& s : segs_)
      if (t <= s.base.t1() || &s == &segs_.back()) return s;
    return segs_.back();
  }

  std::vector<CotangentSegment> segs_;
  bool base_closed_ = false;
  bool alpha_closed_ = false;
};

// Max over grid nodes of |sharp(Pi, gamma(t), alpha(t)) - gamma'(t)|.
inline double cotangent_residual(const BivectorField& pi, const CotangentPath& path) {
  if (pi.dim() != path.dim()) throw DimensionMismatch("cotangent_residual: dims");
  double worst = 0.0;
  for (const auto& s : path.segments())
    for (int i = 0; i <= s.base.intervals(); ++i) {
      double t = s.base.grid_time(i);
      Vec r = pi.sharp(s.base.sample(i), s.alpha_samples.col(i)) - s.base.velocity(t);
      worst = std::max(worst, r.norm());
    }
  return worst;
}

// Minimum-norm cotangent lift of a leaf-tangent curve, pointwise by
// pseudoinverse.
inline CotangentPath lift_min_norm(const BivectorField& pi, const TangentPath& base,
                                   const PathTolerances& tol = {}) {
  const int n = base.intervals();
  Mat alpha(base.dim(), n + 1);
  double vmax = 0.0;
  for (int i = 0; i <= n; ++i) vmax = std::max(vmax, base.velocity(base.grid_time(i)).norm());
  for (int i = 0; i <= n; ++i) {
    Vec v = base.velocity(base.grid_time(i));
    // component j of sharp is sum_i Pi^{ij} a_i, i.e. A^T a with A = Pi(x)
    auto [a, res] = pinv_solve(pi(base.sample(i)).transpose(), v, tol.tau_rank);
    if (res > tol.tau_lift_rel * std::max(1.0, vmax))
      throw NotLeafTangent("lift_min_norm: velocity not in Im(sharp) at t=" +
                           std::to_string(base.grid_time(i)) + ", residual " +
                           std::to_string(res));
    alpha.col(i) = a;
  }
  return CotangentPath({CotangentSegment::make(base, alpha)}, tol.tau_close);
}

// alpha^phi = phi' * (alpha o phi) over the reparameterized base curve.
// Single-segment paths only; phi maps [s0,s1] onto the path's interval,
// orientation preserving.
inline CotangentPath reparameterize(const CotangentPath& path,
                                    const std::function<double(double)>& phi,
                                    const std::function<double(double)>& dphi, double s0,
                                    double s1, int intervals_out = 0) {
  if (path.segments().size() != 1)
    throw Error("reparameterize: piecewise paths not supported");
  const auto& seg = path.segments().front();
  const int n = intervals_out > 0 ? intervals_out : seg.base.intervals();
  if (std::abs(phi(s0) - path.t0()) > 1e-10 || std::abs(phi(s1) - path.t1()) > 1e-10)
    throw Error("reparameterize: phi must map endpoints to endpoints");
  Mat g(path.dim(), n + 1), al(path.dim(), n + 1);
  for (int i = 0; i <= n; ++i) {
    double s = s0 + (s1 - s0) * i / n;
    double d = dphi(s);
    // Vanishing derivative is tolerated at the endpoints only.
    if (d < 0.0 || (d == 0.0 && i != 0 && i != n))
      throw Error("reparameterize: phi not orientation-preserving");
    double t = std::min(std::max(phi(s), path.t0()), path.t1());
    g.col(i) = seg.base.point(t);
    al.col(i) = d * seg.alpha_spline.eval(t);
  }
  // The image closes smoothly only when phi' matches at the endpoints.
  bool smooth_loop =
      seg.base.closed() && std::abs(dphi(s0) - dphi(s1)) <= 1e-10 * (1.0 + std::abs(dphi(s0)));
  TangentPath base = TangentPath::from_samples(s0, s1, g, smooth_loop);
  return CotangentPath({CotangentSegment::make(std::move(base), al)});
}

// Piecewise composition; the second path is shifted in time to start at the
// first path's end.
inline CotangentPath concatenate(const CotangentPath& p1, const CotangentPath& p2,
                                 double tau_close = 1e-8) {
  if (p1.dim() != p2.dim()) throw DimensionMismatch("concatenate: dims");
  double gap = (p1.end_point() - p2.start_point()).norm();
  if (gap > tau_close)
    throw Error("concatenate: base endpoint mismatch, gap " + std::to_string(gap));
  double shift = p1.t1() - p2.t0();
  std::vector<CotangentSegment> segs = p1.segments();
  for (const auto& s : p2.segments()) {
    TangentPath base = TangentPath::from_samples(s.base.t0() + shift, s.base.t1() + shift,
                                                 s.base.samples(), s.base.closed());
    segs.push_back(CotangentSegment::make(std::move(base), s.alpha_samples));
  }
  return CotangentPath(std::move(segs), tau_close);
}

// Constant loop gamma = x0, alpha = a; requires a in ker sharp(x0).
inline CotangentPath constant_loop(const BivectorField& pi, const Vec& x0, const Vec& a,
                                   double duration, int intervals = kDefaultPathSamples,
                                   const PathTolerances& tol = {}) {
  double viol = pi.sharp(x0, a).norm();
  if (viol > tol.tau_cot)
    throw Error("constant_loop: covector not in ker sharp(x0), |sharp| = " +
                std::to_string(viol));
  Mat g = x0.replicate(1, intervals + 1);
  Mat al = a.replicate(1, intervals + 1);
  TangentPath base = TangentPath::from_samples(0.0, duration, g, true, tol.tau_close);
  return CotangentPath({CotangentSegment::make(std::move(base), al)}, tol.tau_close);
}

// Stationary-base path at a zero of the bivector with time-dependent
// covector a(t); every a(t) must lie in ker sharp(x0).
inline CotangentPath stationary_path(const BivectorField& pi, const Vec& x0,
                                     const std::function<Vec(double)>& a, double duration,
                                     int intervals = kDefaultPathSamples,
                                     const PathTolerances& tol = {}) {
  Mat g = x0.replicate(1, intervals + 1);
  Mat al(pi.dim(), intervals + 1);
  for (int i = 0; i <= intervals; ++i) {
    double t = duration * i / intervals;
    Vec ai = a(t);
    if (pi.sharp(x0, ai).norm() > tol.tau_cot)
      throw Error("stationary_path: covector leaves ker sharp(x0) at t=" + std::to_string(t));
    al.col(i) = ai;
  }
  TangentPath base = TangentPath::from_samples(0.0, duration, g, true, tol.tau_close);
  return CotangentPath({CotangentSegment::make(std::move(base), al)}, tol.tau_close);
}

// Cotangent path generator: integrate gamma' = sharp(gamma, a(t)) from x0.
// The pair (gamma, a) satisfies the cotangent condition by construction.
inline CotangentPath flow_path(const BivectorField& pi, const Vec& x0,
                               const std::function<Vec(double)>& a, double duration,
                               int intervals = kDefaultPathSamples, int substeps = 16,
                               const PathTolerances& tol = {}) {
  Mat g(pi.dim(), intervals + 1), al(pi.dim(), intervals + 1);
  Vec x = x0;
  g.col(0) = x;
  al.col(0) = a(0.0);
  const double h = duration / intervals / substeps;
  for (int i = 0; i < intervals; ++i) {
    for (int s = 0; s < substeps; ++s) {
      double t = duration * i / intervals + h * s;
      Vec k1 = pi.sharp(x, a(t));
      Vec k2 = pi.sharp(x + 0.5 * h * k1, a(t + 0.5 * h));
      Vec k3 = pi.sharp(x + 0.5 * h * k2, a(t + 0.5 * h));
      Vec k4 = pi.sharp(x + h * k3, a(t + h));
      x += (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    g.col(i + 1) = x;
    al.col(i + 1) = a(duration * (i + 1) / intervals);
  }
  bool closed = (g.col(0) - g.col(intervals)).norm() <= tol.tau_close;
  TangentPath base = TangentPath::from_samples(0.0, duration, g, closed, tol.tau_close);
  return CotangentPath({CotangentSegment::make(std::move(base), al)}, tol.tau_close);
}

}  // namespace holomod

#endif
