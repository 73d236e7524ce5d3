#include <doctest.h>

#include <random>

#include "holomod/fields.hpp"
#include "holomod/leaf.hpp"
#include "holomod/presets.hpp"

using namespace holomod;

namespace {

Vec pt(std::initializer_list<double> v) {
  Vec x(static_cast<Eigen::Index>(v.size()));
  int i = 0;
  for (double c : v) x[i++] = c;
  return x;
}

Vec random_point(int dim, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  Vec x(dim);
  for (int i = 0; i < dim; ++i) x[i] = u(rng);
  return x;
}

}  // namespace

TEST_CASE("eval_bivector on preset structures") {
  Mat sympl = eval_bivector(presets::symplectic2(), pt({3.0, 7.0}));
  CHECK(sympl(0, 1) == doctest::Approx(1.0));
  CHECK(sympl(1, 0) == doctest::Approx(-1.0));
  CHECK(sympl(0, 0) == 0.0);

  Mat aff = eval_bivector(presets::bivector("aff1"), pt({0.0, 2.0}));
  CHECK(aff(0, 1) == doctest::Approx(2.0));
  CHECK(aff(1, 0) == doctest::Approx(-2.0));

  Mat so3 = eval_bivector(presets::bivector("so3"), pt({0.0, 0.0, 1.0}));
  CHECK(so3(0, 1) == doctest::Approx(1.0));
  CHECK(so3(1, 0) == doctest::Approx(-1.0));
  CHECK(so3(0, 2) == doctest::Approx(0.0));
  CHECK(so3(1, 2) == doctest::Approx(0.0));
}

TEST_CASE("sharp convention and kernel cases") {
  BivectorField sympl = presets::symplectic2();
  // With (sharp a)^j = sum_i Pi^{ij} a_i and Pi^{12} = 1, dx1 maps to +d/dx2.
  Vec v = sharp(sympl, pt({0.3, -0.4}), pt({1.0, 0.0}));
  CHECK(v[0] == doctest::Approx(0.0));
  CHECK(v[1] == doctest::Approx(1.0));

  BivectorField zero2 = BivectorField::from_entries(2, {});
  CHECK(sharp(zero2, pt({1.0, 1.0}), pt({3.0, -2.0})).norm() == doctest::Approx(0.0));

  // Radial covector at a sphere point lies in the kernel for so(3)*.
  BivectorField so3 = presets::bivector("so3");
  CHECK(sharp(so3, pt({0.0, 0.0, 1.0}), pt({0.0, 0.0, 5.0})).norm() ==
        doctest::Approx(0.0));
}

TEST_CASE("jacobi defect vanishes for Lie-Poisson and constant structures") {
  std::mt19937 rng(23);
  for (const auto& name : presets::names()) {
    BivectorField pi = presets::bivector(name);
    for (int k = 0; k < 100; ++k) {
      CAPTURE(name);
      CHECK(jacobi_defect(pi, random_point(pi.dim(), rng)) <= 1e-10);
    }
  }
}

TEST_CASE("jacobi defect detects a broken structure") {
  // Pi^{12} = x1 x2, Pi^{13} = x3, Pi^{23} = x1 is not Poisson.
  Polynomial x1 = Polynomial::variable(3, 0), x2 = Polynomial::variable(3, 1),
             x3 = Polynomial::variable(3, 2);
  BivectorField broken =
      BivectorField::from_entries(3, {{0, 1, x1 * x2}, {0, 2, x3}, {1, 2, x1}});
  CHECK(jacobi_defect(broken, pt({1.0, 1.0, 1.0})) > 0.1);
}

TEST_CASE("leaf splitting ranks on the presets") {
  LeafSplitting full = leaf_splitting(presets::symplectic2(), pt({0.7, -0.1}));
  CHECK(full.rank == 2);
  CHECK(full.normal_basis.cols() == 0);

  LeafSplitting origin = leaf_splitting(presets::bivector("aff1"), pt({0.0, 0.0}));
  CHECK(origin.rank == 0);
  CHECK(origin.normal_basis.cols() == 2);
  CHECK(std::abs(origin.frame().determinant()) == doctest::Approx(1.0));

  LeafSplitting pole = leaf_splitting(presets::bivector("so3"), pt({0.0, 0.0, 1.0}));
  CHECK(pole.rank == 2);
  REQUIRE(pole.normal_basis.cols() == 1);
  CHECK(std::abs(pole.normal_basis.col(0)[2]) == doctest::Approx(1.0));
}

TEST_CASE("leaf splitting invariants at random points") {
  std::mt19937 rng(5);
  for (const auto& name : presets::names()) {
    BivectorField pi = presets::bivector(name);
    for (int trial = 0; trial < 20; ++trial) {
      Vec x = random_point(pi.dim(), rng);
      LeafSplitting ls = [&]() -> LeafSplitting {
        try {
          return leaf_splitting(pi, x);
        } catch (const OddRank&) {
          // Lie-Poisson structures have full-measure strata; retry nearby.
          return leaf_splitting(pi, Vec(x * 1.0 + Vec::Constant(pi.dim(), 0.1)));
        }
      }();
      Mat a = pi(ls.base_point);
      CAPTURE(name);

      // Image of sharp is spanned by the leaf basis.
      Mat frame = ls.frame();
      for (int probe = 0; probe < 5; ++probe) {
        Vec v = pi.sharp(ls.base_point, random_point(pi.dim(), rng));
        Vec coords = frame.lu().solve(v);
        if (ls.codim() > 0)
          CHECK(coords.tail(ls.codim()).cwiseAbs().maxCoeff() <= 1e-8 * (1 + v.norm()));
      }

      // Normal vectors are orthogonal to Im sharp.
      if (ls.rank > 0 && ls.codim() > 0)
        CHECK((ls.normal_basis.transpose() * ls.leaf_basis).cwiseAbs().maxCoeff() <= 1e-8);

      // Reconstructing Pi from the symplectic pairs reproduces the matrix.
      Mat rec = Mat::Zero(pi.dim(), pi.dim());
      for (int p = 0; p + 1 < ls.rank; p += 2) {
        Vec u = ls.leaf_basis.col(p), w = ls.leaf_basis.col(p + 1);
        rec += u * w.transpose() - w * u.transpose();
      }
      CHECK((rec - a).cwiseAbs().maxCoeff() <= 1e-8 * (1 + a.cwiseAbs().maxCoeff()));
    }
  }
}

TEST_CASE("divergence of polynomial fields") {
  // Rotation field is divergence free.
  Polynomial x1 = Polynomial::variable(2, 0), x2 = Polynomial::variable(2, 1);
  VectorField rot({-x2, x1});
  VolumeDensity flat = VolumeDensity::flat(2);
  CHECK(divergence(rot, flat, pt({0.4, 1.2})) == doctest::Approx(0.0));

  VectorField radial({x1, x2});
  CHECK(divergence(radial, flat, pt({-2.0, 3.0})) == doctest::Approx(2.0));

  VolumeDensity weighted(x1);  // log rho = x1
  CHECK(divergence(radial, weighted, pt({1.0, 0.0})) == doctest::Approx(3.0));
}

TEST_CASE("divergence agrees with central finite differences") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 3;
    std::vector<Polynomial> comps;
    for (int i = 0; i < n; ++i) {
      Polynomial p(n);
      p.add_term({1, 0, 0}, coeff(rng));
      p.add_term({0, 2, 0}, coeff(rng));
      p.add_term({1, 1, 1}, coeff(rng));
      p.add_term({0, 0, 0}, coeff(rng));
      comps.push_back(p);
    }
    VectorField v(comps);
    Polynomial logr(n);
    logr.add_term({1, 0, 0}, coeff(rng));
    logr.add_term({0, 1, 1}, coeff(rng));
    VolumeDensity rho(logr);
    Vec x = random_point(n, rng);
    const double h = 1e-5;
    double fd = 0.0;
    for (int j = 0; j < n; ++j) {
      Vec xp = x, xm = x;
      xp[j] += h;
      xm[j] -= h;
      fd += (std::exp(rho.log_density()(xp)) * v.comp(j)(xp) -
             std::exp(rho.log_density()(xm)) * v.comp(j)(xm)) /
            (2 * h);
    }
    fd /= std::exp(rho.log_density()(x));
    CHECK(divergence(v, rho, x) == doctest::Approx(fd).epsilon(1e-6));
  }
}
