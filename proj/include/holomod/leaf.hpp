#ifndef HOLOMOD_LEAF_HPP
#define HOLOMOD_LEAF_HPP

#include <Eigen/SVD>

#include "holomod/fields.hpp"
#include "holomod/types.hpp"

namespace holomod {

constexpr double kDefaultRankTol = 1e-9;

// Numerical rank of the bivector matrix under a relative singular-value
// threshold.
inline int bivector_rank(const Mat& a, double tau_rank = kDefaultRankTol) {
  Eigen::JacobiSVD<Mat> svd(a);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return 0;
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s[i] >= tau_rank * s[0]) ++r;
  return r;
}

// Minimum-norm least-squares solve via SVD pseudoinverse with a relative
// threshold. Returns (solution, residual norm).
inline std::pair<Vec, double> pinv_solve(const Mat& m, const Vec& b,
                                         double tau_rank = kDefaultRankTol) {
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  Vec y = svd.matrixU().transpose() * b;
  Vec z = Vec::Zero(s.size());
  double smax = s.size() > 0 ? s[0] : 0.0;
  for (int i = 0; i < s.size(); ++i)
    if (smax > 0.0 && s[i] >= tau_rank * smax) z[i] = y[i] / s[i];
  Vec x = svd.matrixV() * z;
  return {x, (m * x - b).norm()};
}

// Splitting of the chart at a point into the leaf tangent Im(sharp) and its
// Euclidean-orthogonal complement. The leaf basis is symplectic with
// pairings exactly one, so the leafwise Liouville volume of the basis is 1.
struct LeafSplitting {
  Vec base_point;
  int rank = 0;        // 2k
  Mat leaf_basis;      // n x 2k, columns (u_1,...,u_2k), omega(u_{2i-1},u_{2i}) = 1
  Mat normal_basis;    // n x (n-2k), orthonormal complement of Im(sharp)

  int dim() const { return static_cast<int>(base_point.size()); }
  int codim() const { return dim() - rank; }

  // Change-of-basis matrix [leaf | normal]; invertible by construction.
  Mat frame() const {
    Mat f(dim(), dim());
    if (rank > 0) f.leftCols(rank) = leaf_basis;
    if (codim() > 0) f.rightCols(codim()) = normal_basis;
    return f;
  }
};

// The leafwise symplectic form is evaluated through the bivector:
// omega(sharp a, sharp b) = Pi(a, b) = a^T A b.
inline LeafSplitting leaf_splitting(const BivectorField& pi, const Vec& x,
                                    double tau_rank = kDefaultRankTol) {
  const int n = pi.dim();
  Mat a = pi(x);
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  double smax = sv.size() > 0 ? sv[0] : 0.0;
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (smax > 0.0 && sv[i] >= tau_rank * smax) ++r;
  if (r % 2 != 0)
    throw OddRank("leaf_splitting: odd numerical rank " + std::to_string(r) +
                  "; tau_rank straddles a singular value");

  LeafSplitting ls;
  ls.base_point = x;
  ls.rank = r;
  ls.normal_basis = svd.matrixU().rightCols(n - r);
  if (r == 0) {
    ls.leaf_basis = Mat(n, 0);
    return ls;
  }

  // Orthonormal basis of Im A, then the symplectic form in that basis.
  Mat q = svd.matrixU().leftCols(r);
  Mat w(r, r);
  {
    // alpha_a = minimum-norm solution of A^T alpha = q_a; W_ab = alpha_a^T A alpha_b.
    Mat alphas(n, r);
    for (int c = 0; c < r; ++c)
      alphas.col(c) = pinv_solve(a.transpose(), q.col(c), tau_rank).first;
    w = alphas.transpose() * a * alphas;
  }

  // Symplectic Gram-Schmidt in q-coordinates; pairings normalized to 1.
  std::vector<Vec> pool;
  for (int c = 0; c < r; ++c) pool.push_back(Vec::Unit(r, c));
  auto omega = [&](const Vec& u, const Vec& v) { return u.dot(w * v); };
  Mat basis(n, r);
  int placed = 0;
  while (!pool.empty()) {
    Vec e = pool.front();
    pool.erase(pool.begin());
    int best = -1;
    double bestval = 0.0;
    for (size_t i = 0; i < pool.size(); ++i) {
      double p = std::abs(omega(e, pool[i]));
      if (p > bestval) {
        bestval = p;
        best = static_cast<int>(i);
      }
    }
    if (best < 0 || bestval < 1e-12)
      throw Error("leaf_splitting: degenerate leafwise form (rank estimate inconsistent)");
    Vec f = pool[static_cast<size_t>(best)] / omega(e, pool[static_cast<size_t>(best)]);
    pool.erase(pool.begin() + best);
    for (auto& v : pool) v = v - omega(v, f) * e + omega(v, e) * f;
    basis.col(placed) = q * e;
    basis.col(placed + 1) = q * f;
    placed += 2;
  }
  ls.leaf_basis = basis;
  return ls;
}

}  // namespace holomod

#endif
