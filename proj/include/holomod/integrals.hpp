#ifndef HOLOMOD_INTEGRALS_HPP
#define HOLOMOD_INTEGRALS_HPP

#include <functional>

#include "holomod/fields.hpp"
#include "holomod/path.hpp"

namespace holomod {

namespace detail {

// Composite Simpson over the uniform grid of one segment; the integrand is
// sampled at the grid nodes (interval count is even by construction).
inline double simpson_segment(const CotangentSegment& seg,
                              const std::function<double(int, double)>& integrand) {
  const int n = seg.base.intervals();
  const double h = (seg.base.t1() - seg.base.t0()) / n;
  double sum = integrand(0, seg.base.grid_time(0)) + integrand(n, seg.base.grid_time(n));
  for (int i = 1; i < n; ++i)
    sum += (i % 2 == 1 ? 4.0 : 2.0) * integrand(i, seg.base.grid_time(i));
  return sum * h / 3.0;
}

}  // namespace detail

// Integral of a vector field along a cotangent path: sigma times the
// quadrature of alpha_t(v(gamma(t))). sigma is the single global sign
// constant owned by the conventions self-test.
inline double path_integral(const VectorField& v, const CotangentPath& path, double sigma) {
  if (v.dim() != path.dim()) throw DimensionMismatch("path_integral: dims");
  double total = 0.0;
  for (const auto& seg : path.segments())
    total += detail::simpson_segment(seg, [&](int i, double) {
      return seg.alpha_samples.col(i).dot(v(seg.base.sample(i)));
    });
  return sigma * total;
}

// Line integral of a one-form along the base curve, by the same quadrature.
inline double line_integral(const CovectorField& beta, const CotangentPath& path) {
  if (beta.dim() != path.dim()) throw DimensionMismatch("line_integral: dims");
  double total = 0.0;
  for (const auto& seg : path.segments())
    total += detail::simpson_segment(seg, [&](int i, double t) {
      return beta(seg.base.sample(i)).dot(seg.base.velocity(t));
    });
  return total;
}

// | integral of sharp(beta) along alpha - line integral of beta along gamma |
// for a closed one-form beta.
inline double pullback_identity_residual(const BivectorField& pi, const CovectorField& beta,
                                         const CotangentPath& path, double sigma) {
  double defect = beta.closedness_defect();
  if (defect > 1e-12)
    throw Error("pullback_identity_residual: beta is not closed, defect " +
                std::to_string(defect));
  double lhs = path_integral(sharp_field(pi, beta), path, sigma);
  return std::abs(lhs - line_integral(beta, path));
}

// | integral of X_f along alpha - (f(gamma(b)) - f(gamma(a))) |. Exactly one
// choice of sigma makes this vanish; it is the arbiter that freezes sigma.
inline double hamiltonian_endpoint_residual(const BivectorField& pi, const Polynomial& f,
                                            const CotangentPath& path, double sigma) {
  double integral = path_integral(hamiltonian_field(pi, f), path, sigma);
  double jump = f(path.end_point()) - f(path.start_point());
  return std::abs(integral - jump);
}

}  // namespace holomod

#endif
