#ifndef HOLOMOD_CONVENTIONS_HPP
#define HOLOMOD_CONVENTIONS_HPP

#include <unsupported/Eigen/MatrixFunctions>

#include "holomod/holonomy.hpp"
#include "holomod/integrals.hpp"

namespace holomod {

// The two sign choices the construction leaves open: the sign of the path
// integral and the sign in the coadjoint matrix. Both are fixed empirically
// once per process, against the pinned sharp convention:
//   - sigma by requiring the Hamiltonian endpoint identity to hold,
//   - coad_sign by matching exp(T * s * ad^T) to the ODE-computed holonomy
//     of a constant loop.
struct Conventions {
  double sigma;
  double coad_sign;
  double sigma_residual;      // arbiter residual of the winning sigma
  double coad_residual;       // oracle mismatch of the winning coad sign
};

inline Conventions freeze_conventions() {
  // The arbiter preset: Pi^{12} = x2 on R^2 (the dual of the affine algebra).
  const int n = 2;
  BivectorField pi =
      BivectorField::from_entries(n, {{0, 1, Polynomial::variable(n, 1)}});

  Conventions conv{};

  {
    // Open leaf path in the upper half plane, f = x2.
    Vec x0(n);
    x0 << 0.0, 1.0;
    CotangentPath path = flow_path(
        pi, x0, [](double) { return (Vec(2) << 1.0, 0.0).finished(); }, 1.0, 128, 32);
    Polynomial f = Polynomial::variable(n, 1);
    double plus = hamiltonian_endpoint_residual(pi, f, path, +1.0);
    double minus = hamiltonian_endpoint_residual(pi, f, path, -1.0);
    conv.sigma = plus <= minus ? +1.0 : -1.0;
    conv.sigma_residual = std::min(plus, minus);
    if (conv.sigma_residual > 1e-6)
      throw Error("conventions: no sign satisfies the Hamiltonian endpoint identity");
  }

  {
    // Constant loop at the origin with a = e1; ad_{e1} = diag(0, 1).
    Vec a(n);
    a << 1.0, 0.0;
    IntegratorOptions opt;
    opt.steps_per_unit = 1024;
    HolonomyResult res = holonomy(pi, constant_loop(pi, Vec::Zero(n), a, 1.0, 64), opt);
    Mat ad = Mat::Zero(n, n);
    ad(1, 1) = 1.0;
    double plus = (res.normal_map - Mat(ad.transpose().exp())).cwiseAbs().maxCoeff();
    double minus = (res.normal_map - Mat((-ad.transpose()).exp())).cwiseAbs().maxCoeff();
    conv.coad_sign = plus <= minus ? +1.0 : -1.0;
    conv.coad_residual = std::min(plus, minus);
    if (conv.coad_residual > 1e-6)
      throw Error("conventions: neither coad sign matches the computed holonomy");
  }

  return conv;
}

inline const Conventions& conventions() {
  static const Conventions conv = freeze_conventions();
  return conv;
}

}  // namespace holomod

#endif
