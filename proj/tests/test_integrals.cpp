#include <doctest.h>

#include <cmath>
#include <random>

#include "holomod/conventions.hpp"
#include "holomod/holonomy.hpp"
#include "holomod/integrals.hpp"
#include "holomod/modular.hpp"
#include "holomod/presets.hpp"

using namespace holomod;

namespace {

const double kTau = 2.0 * M_PI;

CotangentPath so3_flow(unsigned seed, int intervals = 512) {
  BivectorField so3 = presets::bivector("so3");
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double c0 = u(rng), c1 = u(rng), c2 = u(rng), w = 1.0 + 0.5 * u(rng);
  Vec x0 = (Vec(3) << 0.8, 0.0, 0.6).finished();
  return flow_path(
      so3, x0,
      [=](double t) {
        return (Vec(3) << c0 * std::sin(kTau * w * t), c1, c2 * t).finished();
      },
      1.0, intervals, 32);
}

}  // namespace

TEST_CASE("path integral of a constant field over a constant loop") {
  BivectorField aff = presets::bivector("aff1");
  CotangentPath loop = constant_loop(aff, Vec::Zero(2), Vec::Unit(2, 0), 1.0, 64);
  VectorField v = modular_field(aff, VolumeDensity::flat(2));
  double sigma = conventions().sigma;
  // alpha = dx1, v = (1, 0), duration 1: the raw quadrature is exactly 1.
  CHECK(path_integral(v, loop, sigma) == doctest::Approx(sigma * 1.0));
  CHECK(path_integral(v, loop, 1.0) == doctest::Approx(1.0));
}

TEST_CASE("the frozen sign makes Hamiltonian integrals telescope") {
  double sigma = conventions().sigma;
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (unsigned seed : {1u, 2u, 3u, 4u, 5u}) {
    CotangentPath p = so3_flow(seed);
    BivectorField so3 = presets::bivector("so3");
    Polynomial f(3);
    f.add_term({1, 0, 0}, u(rng));
    f.add_term({0, 1, 1}, u(rng));
    f.add_term({0, 0, 2}, u(rng));
    CHECK(hamiltonian_endpoint_residual(so3, f, p, sigma) <= 1e-6);
    // The opposite sign is off by twice the increment whenever f moves.
    double inc = std::abs(f(p.end_point()) - f(p.start_point()));
    if (inc > 1e-3)
      CHECK(hamiltonian_endpoint_residual(so3, f, p, -sigma) >= inc);
  }
}

TEST_CASE("Hamiltonian integrals vanish on loops") {
  BivectorField so3 = presets::bivector("so3");
  double z = 0.6, r = 0.8;
  TangentPath lat = TangentPath::parametric(
      3,
      [r, z](double t) {
        return (Vec(3) << r * std::cos(kTau * t), r * std::sin(kTau * t), z).finished();
      },
      0.0, 1.0, 512, true);
  CotangentPath lift = lift_min_norm(so3, lat);
  Polynomial f(3);
  f.add_term({2, 0, 0}, 0.7);
  f.add_term({0, 1, 0}, -1.3);
  // For a loop the endpoint increment is zero, so the residual is |integral|.
  CHECK(hamiltonian_endpoint_residual(so3, f, lift, conventions().sigma) <= 1e-7);
}

TEST_CASE("line integral of an exact form telescopes") {
  BivectorField so3 = presets::bivector("so3");
  CotangentPath p = so3_flow(7);
  Polynomial f(3);
  f.add_term({1, 1, 0}, 0.4);
  f.add_term({0, 0, 3}, 0.2);
  double li = line_integral(CovectorField::differential(f), p);
  CHECK(li == doctest::Approx(f(p.end_point()) - f(p.start_point())).epsilon(1e-7));
}

TEST_CASE("pullback identity for closed one-forms") {
  BivectorField so3 = presets::bivector("so3");
  double sigma = conventions().sigma;
  Polynomial f(3);
  f.add_term({1, 0, 1}, -0.9);
  f.add_term({0, 2, 0}, 0.5);
  for (unsigned seed : {11u, 12u, 13u}) {
    CotangentPath p = so3_flow(seed);
    CHECK(pullback_identity_residual(so3, CovectorField::differential(f), p, sigma) <= 1e-6);
  }
  // A form with a non-symmetric Jacobian is rejected.
  CovectorField twisted({Polynomial::variable(3, 1), Polynomial(3), Polynomial(3)});
  CHECK_THROWS(pullback_identity_residual(so3, twisted, so3_flow(14), sigma));
}

TEST_CASE("holonomy determinant exponentiates the modular integral") {
  const Conventions& conv = conventions();
  BivectorField aff = presets::bivector("aff1");
  VolumeDensity flat = VolumeDensity::flat(2);
  VectorField v = modular_field(aff, flat);
  IntegratorOptions opt;
  opt.steps_per_unit = 2048;

  // Constant loops at the origin.
  for (double scale : {1.0, -0.5, 0.3}) {
    Vec a = scale * Vec::Unit(2, 0);
    CotangentPath loop = constant_loop(aff, Vec::Zero(2), a, 1.0, 64);
    HolonomyResult res = holonomy(aff, loop, opt);
    double lhs = std::log(normal_determinant(res, flat));
    double rhs = conv.sigma * path_integral(v, loop, conv.sigma);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
    CHECK(rhs == doctest::Approx(scale).epsilon(1e-12));
  }

  // A time-varying loop at the origin.
  TangentPath still = TangentPath::parametric(
      2, [](double) { return Vec::Zero(2).eval(); }, 0.0, 1.0, 256, true);
  Mat alpha(2, 257);
  for (int i = 0; i <= 256; ++i) {
    double t = i / 256.0;
    alpha.col(i) = (Vec(2) << 0.8 + 0.3 * std::sin(kTau * t), std::cos(kTau * t)).finished();
  }
  CotangentPath wobble({CotangentSegment::make(still, alpha)});
  HolonomyResult res = holonomy(aff, wobble, opt);
  double lhs = std::log(normal_determinant(res, flat));
  double rhs = conv.sigma * path_integral(v, wobble, conv.sigma);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-7));
}

TEST_CASE("unimodular structures have trivial holonomy determinants") {
  const Conventions& conv = conventions();
  BivectorField so3 = presets::bivector("so3");
  VolumeDensity flat = VolumeDensity::flat(3);
  VectorField v = modular_field(so3, flat);
  CotangentPath loop =
      constant_loop(so3, Vec::Zero(3), (Vec(3) << 0.4, -1.1, 0.6).finished(), 1.0, 64);
  IntegratorOptions opt;
  opt.steps_per_unit = 2048;
  HolonomyResult res = holonomy(so3, loop, opt);
  CHECK(normal_determinant(res, flat) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(path_integral(v, loop, conv.sigma)) <= 1e-12);
}
