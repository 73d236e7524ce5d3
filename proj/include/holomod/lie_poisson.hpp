#ifndef HOLOMOD_LIE_POISSON_HPP
#define HOLOMOD_LIE_POISSON_HPP

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <functional>
#include <tuple>
#include <unsupported/Eigen/MatrixFunctions>
#include <vector>

#include "holomod/conventions.hpp"
#include "holomod/fields.hpp"

namespace holomod {

// Finite-dimensional Lie algebra by structure constants c_{ij}^k,
// [e_i, e_j] = c_{ij}^k e_k.
class LieAlgebraPresentation {
 public:
  // Sparse triples {i, j, k, value} with i < j; the j < i half follows by
  // antisymmetry.
  static LieAlgebraPresentation from_triples(
      int dim, const std::vector<std::tuple<int, int, int, double>>& triples) {
    LieAlgebraPresentation l(dim);
    for (const auto& [i, j, k, v] : triples) {
      if (i >= j) throw Error("LieAlgebraPresentation: triples need i < j");
      l.at(i, j, k) = v;
      l.at(j, i, k) = -v;
    }
    l.validate();
    return l;
  }

  int dim() const { return d_; }
  double c(int i, int j, int k) const { return c_[index(i, j, k)]; }

  // Antisymmetry is structural; this checks the Jacobi identity on the
  // constants.
  void validate() const {
    for (int i = 0; i < d_; ++i)
      for (int j = 0; j < d_; ++j)
        for (int k = 0; k < d_; ++k)
          for (int l = 0; l < d_; ++l) {
            double s = 0.0;
            for (int m = 0; m < d_; ++m)
              s += c(i, j, m) * c(m, k, l) + c(j, k, m) * c(m, i, l) +
                   c(k, i, m) * c(m, j, l);
            if (std::abs(s) > 1e-12)
              throw Error("LieAlgebraPresentation: Jacobi identity fails");
          }
  }

 private:
  explicit LieAlgebraPresentation(int dim) : d_(dim) {
    if (dim <= 0) throw DimensionMismatch("LieAlgebraPresentation: dim");
    c_.assign(static_cast<size_t>(dim * dim * dim), 0.0);
  }
  size_t index(int i, int j, int k) const {
    return static_cast<size_t>((i * d_ + j) * d_ + k);
  }
  double& at(int i, int j, int k) { return c_[index(i, j, k)]; }

  int d_;
  std::vector<double> c_;
};

namespace lie {

inline LieAlgebraPresentation abelian2() { return LieAlgebraPresentation::from_triples(2, {}); }

// [e1, e2] = e2
inline LieAlgebraPresentation aff1() {
  return LieAlgebraPresentation::from_triples(2, {{0, 1, 1, 1.0}});
}

// c_{ij}^k = epsilon_{ijk}
inline LieAlgebraPresentation so3() {
  return LieAlgebraPresentation::from_triples(3, {{0, 1, 2, 1.0}, {1, 2, 0, 1.0}, {0, 2, 1, -1.0}});
}

// basis (h, e, f): [h,e] = 2e, [h,f] = -2f, [e,f] = h
inline LieAlgebraPresentation sl2() {
  return LieAlgebraPresentation::from_triples(3, {{0, 1, 1, 2.0}, {0, 2, 2, -2.0}, {1, 2, 0, 1.0}});
}

// Heisenberg: [e1, e2] = e3
inline LieAlgebraPresentation h3() {
  return LieAlgebraPresentation::from_triples(3, {{0, 1, 2, 1.0}});
}

}  // namespace lie

// The linear bivector Pi^{ij}(x) = c_{ij}^k x_k on the dual of the algebra.
inline BivectorField lie_poisson_bivector(const LieAlgebraPresentation& l) {
  const int d = l.dim();
  std::vector<std::tuple<int, int, Polynomial>> entries;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      Polynomial p(d);
      for (int k = 0; k < d; ++k)
        if (l.c(i, j, k) != 0.0) p += l.c(i, j, k) * Polynomial::variable(d, k);
      entries.emplace_back(i, j, p);
    }
  return BivectorField::from_entries(d, entries);
}

// (ad_xi)^k_j = sum_i c_{ij}^k xi_i.
inline Mat ad_matrix(const LieAlgebraPresentation& l, const Vec& xi) {
  const int d = l.dim();
  if (xi.size() != d) throw DimensionMismatch("ad_matrix: element dim");
  Mat m = Mat::Zero(d, d);
  for (int k = 0; k < d; ++k)
    for (int j = 0; j < d; ++j) {
      double s = 0.0;
      for (int i = 0; i < d; ++i) s += l.c(i, j, k) * xi[i];
      m(k, j) = s;
    }
  return m;
}

// Coadjoint matrix; the sign of the transpose is frozen by the conventions
// self-test so that the holonomy oracle matches.
inline Mat coad_matrix(const LieAlgebraPresentation& l, const Vec& xi) {
  return conventions().coad_sign * ad_matrix(l, xi).transpose();
}

// Holonomy oracle for a constant loop at the origin: exp(T * coad(a)).
inline Mat constant_loop_oracle(const LieAlgebraPresentation& l, const Vec& a, double duration) {
  return Mat((duration * coad_matrix(l, a)).exp());
}

// Ordered product of midpoint exponentials for a time-dependent element;
// later times act on the left. Second-order in T/N.
inline Mat time_ordered_oracle(const LieAlgebraPresentation& l,
                               const std::function<Vec(double)>& a, double duration, int n) {
  if (n < 2) throw Error("time_ordered_oracle: need at least 2 slices");
  const double h = duration / n;
  Mat prod = Mat::Identity(l.dim(), l.dim());
  for (int m = 0; m < n; ++m) {
    double t = (m + 0.5) * h;
    prod = Mat((h * coad_matrix(l, a(t))).exp()) * prod;
  }
  return prod;
}

// chi_i = trace(ad_{e_i}); zero iff the algebra is unimodular.
inline Vec modular_character(const LieAlgebraPresentation& l) {
  Vec chi(l.dim());
  for (int i = 0; i < l.dim(); ++i) chi[i] = ad_matrix(l, Vec::Unit(l.dim(), i)).trace();
  return chi;
}

// Basis of the span of the coadjoint matrices inside d x d matrices.
struct InnSpan {
  Mat basis;  // d^2 x r, orthonormal columns of vectorized matrices
  int dim = 0;

  double projection_residual(const Mat& m) const {
    Vec v = Eigen::Map<const Vec>(m.data(), m.size());
    Vec r = dim > 0 ? Vec(v - basis * (basis.transpose() * v)) : v;
    return r.cwiseAbs().maxCoeff();
  }
};

inline InnSpan inn_span(const LieAlgebraPresentation& l, double threshold = 1e-10) {
  const int d = l.dim();
  Mat cols(d * d, d);
  for (int i = 0; i < d; ++i) {
    Mat m = coad_matrix(l, Vec::Unit(d, i));
    cols.col(i) = Eigen::Map<Vec>(m.data(), m.size());
  }
  Eigen::ColPivHouseholderQR<Mat> qr(cols);
  qr.setThreshold(threshold);
  InnSpan span;
  span.dim = static_cast<int>(qr.rank());
  Mat q = qr.householderQ();
  span.basis = q.leftCols(span.dim);
  return span;
}

// Single-exponential witness of Inn-coset equality: true iff the principal
// logarithm of h2 h1^{-1} lies in the coadjoint span. Sound but not
// complete; a LogDomain error means "inconclusive", not "false".
inline bool inn_coset_equal(const LieAlgebraPresentation& l, const Mat& h1, const Mat& h2,
                            double tol) {
  if (h1.rows() != l.dim() || h2.rows() != l.dim())
    throw DimensionMismatch("inn_coset_equal: matrix dims");
  Mat m = h2 * h1.inverse();
  Eigen::EigenSolver<Mat> es(m, /*computeEigenvectors=*/false);
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    auto ev = es.eigenvalues()[i];
    if (ev.real() <= 0.0 && std::abs(ev.imag()) < 1e-12)
      throw LogDomain("inn_coset_equal: eigenvalue on the closed negative axis");
  }
  Mat lg = m.log();
  return inn_span(l).projection_residual(lg) <= tol;
}

}  // namespace holomod

#endif
