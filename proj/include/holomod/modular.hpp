#ifndef HOLOMOD_MODULAR_HPP
#define HOLOMOD_MODULAR_HPP

#include "holomod/fields.hpp"

namespace holomod {

// Modular vector field of (Pi, mu) with mu = rho * chart volume:
// v^i = sum_j [ d_j Pi^{ij} + Pi^{ij} d_j log rho ], exact polynomials.
// The index order matches the pinned sharp convention, so
// div_mu X_f = df(v) holds identically.
inline VectorField modular_field(const BivectorField& pi, const VolumeDensity& rho) {
  if (pi.dim() != rho.dim()) throw DimensionMismatch("modular_field: dims");
  std::vector<Polynomial> comps;
  for (int i = 0; i < pi.dim(); ++i) {
    Polynomial c(pi.dim());
    for (int j = 0; j < pi.dim(); ++j) {
      if (i == j) continue;
      c += pi.entry(i, j).partial(j);
      c += pi.entry(i, j) * rho.log_density().partial(j);
    }
    comps.push_back(std::move(c));
  }
  return VectorField(std::move(comps));
}

// |div_mu X_f - df(v)| at x; zero for the modular field by construction.
inline double defining_property_residual(const BivectorField& pi, const VolumeDensity& rho,
                                         const VectorField& v, const Polynomial& f,
                                         const Vec& x) {
  VectorField xf = hamiltonian_field(pi, f);
  double div = divergence(xf, rho, x);
  double pairing = 0.0;
  for (int i = 0; i < pi.dim(); ++i) pairing += f.partial(i)(x) * v.comp(i)(x);
  return std::abs(div - pairing);
}

// Coefficient-level residual of the gauge law v_{g mu} = v_mu - X_{ln g}.
inline double gauge_shift_check(const BivectorField& pi, const VolumeDensity& rho,
                                const Polynomial& ln_g) {
  VolumeDensity scaled(rho.log_density() + ln_g);
  VectorField lhs = modular_field(pi, scaled);
  VectorField rhs = modular_field(pi, rho) - hamiltonian_field(pi, ln_g);
  double worst = 0.0;
  for (int i = 0; i < pi.dim(); ++i)
    worst = std::max(worst, max_coeff_diff(lhs.comp(i), rhs.comp(i)));
  return worst;
}

// Max component of (L_v Pi)^{ij} = v^l d_l Pi^{ij} - Pi^{lj} d_l v^i
// - Pi^{il} d_l v^j at x. Vanishes for Poisson fields.
inline double poisson_field_residual(const BivectorField& pi, const VectorField& v,
                                     const Vec& x) {
  const int n = pi.dim();
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double s = 0.0;
      for (int l = 0; l < n; ++l) {
        s += v.comp(l)(x) * pi.entry_partial(i, j, l)(x);
        s -= pi.entry(l, j)(x) * v.comp(i).partial(l)(x);
        s -= pi.entry(i, l)(x) * v.comp(j).partial(l)(x);
      }
      worst = std::max(worst, std::abs(s));
    }
  return worst;
}

}  // namespace holomod

#endif
