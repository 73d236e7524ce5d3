#include <doctest.h>

#include <cmath>
#include <random>

#include "holomod/modular.hpp"
#include "holomod/presets.hpp"

using namespace holomod;

namespace {

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

}  // namespace

TEST_CASE("modular field of the affine algebra is the character") {
  BivectorField aff = presets::bivector("aff1");
  VectorField v = modular_field(aff, VolumeDensity::flat(2));
  // Constant field (1, 0).
  CHECK(max_coeff_diff(v.comp(0), Polynomial::constant(2, 1.0)) == 0.0);
  CHECK(v.comp(1).is_zero());
}

TEST_CASE("unimodular presets have vanishing modular field") {
  for (const char* name : {"so3", "sl2", "h3"}) {
    BivectorField pi = presets::bivector(name);
    VectorField v = modular_field(pi, VolumeDensity::flat(3));
    for (int i = 0; i < 3; ++i) {
      INFO(name, " component ", i);
      CHECK(v.comp(i).is_zero());
    }
  }
}

TEST_CASE("the regular preset with exponential weight is unimodular") {
  BivectorField reg = presets::bivector("regular3");
  VolumeDensity rho(Polynomial::variable(3, 2));  // rho = exp(x3)
  VectorField v = modular_field(reg, rho);
  for (int i = 0; i < 3; ++i) CHECK(v.comp(i).is_zero());
}

TEST_CASE("a skewed weight on the regular preset is not unimodular") {
  BivectorField reg = presets::bivector("regular3");
  VolumeDensity rho(Polynomial::variable(3, 0));  // rho = exp(x1)
  VectorField v = modular_field(reg, rho);
  // v = Pi^{.0}: only the second component survives, -(1 + x3^2).
  CHECK(v.comp(0).is_zero());
  CHECK(v.comp(2).is_zero());
  Vec x = (Vec(3) << 0.0, 0.0, 2.0).finished();
  CHECK(v.comp(1)(x) == doctest::Approx(-5.0));
}

TEST_CASE("defining property: div_mu X_f = df(v) at random probes") {
  std::mt19937 rng(11);
  for (const char* name : {"aff1", "so3", "sl2", "h3", "regular3", "symplectic2"}) {
    BivectorField pi = presets::bivector(name);
    const int n = pi.dim();
    for (int trial = 0; trial < 5; ++trial) {
      VolumeDensity rho(random_poly(rng, n, 1));
      VectorField v = modular_field(pi, rho);
      for (int k = 0; k < 20; ++k) {
        Polynomial f = random_poly(rng, n, 3);
        double r = defining_property_residual(pi, rho, v, f, random_point(rng, n));
        INFO(name);
        CHECK(r <= 1e-9);
      }
    }
  }
}

TEST_CASE("a wrong candidate field fails the defining property") {
  BivectorField aff = presets::bivector("aff1");
  VectorField wrong({Polynomial::constant(2, 1.0), Polynomial::constant(2, 1.0)});
  Polynomial f = Polynomial::variable(2, 1);
  double r = defining_property_residual(aff, VolumeDensity::flat(2), wrong,
                                        f, (Vec(2) << 0.3, 0.7).finished());
  CHECK(r > 0.1);
}

TEST_CASE("gauge shift law holds at the coefficient level") {
  std::mt19937 rng(12);
  for (const char* name : {"aff1", "so3", "sl2", "regular3"}) {
    BivectorField pi = presets::bivector(name);
    for (int k = 0; k < 5; ++k) {
      Polynomial ln_g = random_poly(rng, pi.dim(), 2);
      INFO(name);
      CHECK(gauge_shift_check(pi, VolumeDensity::flat(pi.dim()), ln_g) == 0.0);
      CHECK(gauge_shift_check(pi, VolumeDensity(random_poly(rng, pi.dim(), 1)), ln_g) == 0.0);
    }
  }
}

TEST_CASE("the modular field is a Poisson vector field") {
  std::mt19937 rng(13);
  for (const char* name : {"aff1", "so3", "sl2", "h3", "regular3"}) {
    BivectorField pi = presets::bivector(name);
    VolumeDensity rho(random_poly(rng, pi.dim(), 1));
    VectorField v = modular_field(pi, rho);
    for (int k = 0; k < 25; ++k) {
      INFO(name);
      CHECK(poisson_field_residual(pi, v, random_point(rng, pi.dim())) <= 1e-10);
    }
  }
}

TEST_CASE("a generic field is not a Poisson field") {
  BivectorField so3 = presets::bivector("so3");
  VectorField squeeze({Polynomial::variable(3, 0), Polynomial(3), Polynomial(3)});
  CHECK(poisson_field_residual(so3, squeeze, (Vec(3) << 0.4, 0.5, 0.6).finished()) > 0.1);
}
