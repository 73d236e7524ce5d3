#ifndef HOLOMOD_SPLINE_HPP
#define HOLOMOD_SPLINE_HPP

#include <Eigen/LU>
#include <cmath>

#include "holomod/types.hpp"

namespace holomod {

// Vector-valued cubic spline on a uniform grid. Open curves use not-a-knot
// end conditions, closed curves a periodic spline.
class CubicSpline {
 public:
  enum class Boundary { NotAKnot, Periodic };

  CubicSpline() = default;

  // values: ncomp x (N+1), one column per grid node.
  CubicSpline(double t0, double t1, const Mat& values, Boundary bc)
      : t0_(t0), t1_(t1), y_(values), bc_(bc) {
    const int np = static_cast<int>(values.cols());
    if (np < 4) throw Error("CubicSpline: need at least 4 samples");
    if (!(t1 > t0)) throw Error("CubicSpline: empty time interval");
    n_ = np - 1;
    h_ = (t1 - t0) / n_;
    solve_second_derivatives();
  }

  double t0() const { return t0_; }
  double t1() const { return t1_; }
  int segments() const { return n_; }
  int dim() const { return static_cast<int>(y_.rows()); }
  const Mat& values() const { return y_; }

  Vec eval(double t) const {
    auto [i, a, b] = locate(t);
    // a = x_{i+1} - t, b = t - x_i
    return m_.col(i) * (a * a * a / (6 * h_)) + m_.col(i + 1) * (b * b * b / (6 * h_)) +
           (y_.col(i) - m_.col(i) * (h_ * h_ / 6)) * (a / h_) +
           (y_.col(i + 1) - m_.col(i + 1) * (h_ * h_ / 6)) * (b / h_);
  }

  Vec deriv(double t) const {
    auto [i, a, b] = locate(t);
    return -m_.col(i) * (a * a / (2 * h_)) + m_.col(i + 1) * (b * b / (2 * h_)) +
           (y_.col(i + 1) - y_.col(i)) / h_ - (m_.col(i + 1) - m_.col(i)) * (h_ / 6);
  }

 private:
  std::tuple<int, double, double> locate(double t) const {
    int i = static_cast<int>(std::floor((t - t0_) / h_));
    if (i < 0) i = 0;
    if (i >= n_) i = n_ - 1;
    double xi = t0_ + i * h_;
    return {i, xi + h_ - t, t - xi};
  }

  // Tridiagonal (Thomas) solve of diag(4) + off-diag(1), rows 0..m-1.
  static Mat solve_tridiag_141(Mat rhs) {
    const int m = static_cast<int>(rhs.rows());
    std::vector<double> diag(static_cast<size_t>(m), 4.0);
    for (int i = 1; i < m; ++i) {
      double w = 1.0 / diag[static_cast<size_t>(i - 1)];
      diag[static_cast<size_t>(i)] -= w;
      rhs.row(i) -= w * rhs.row(i - 1);
    }
    rhs.row(m - 1) /= diag[static_cast<size_t>(m - 1)];
    for (int i = m - 2; i >= 0; --i)
      rhs.row(i) = (rhs.row(i) - rhs.row(i + 1)) / diag[static_cast<size_t>(i)];
    return rhs;
  }

  void solve_second_derivatives() {
    const int nc = static_cast<int>(y_.rows());
    auto d2 = [&](int i) {
      return Mat((6.0 / (h_ * h_)) *
                 (y_.col(i - 1) - 2.0 * y_.col(i) + y_.col(i + 1)).transpose());
    };
    m_ = Mat::Zero(nc, n_ + 1);

    if (bc_ == Boundary::NotAKnot) {
      // Third-derivative continuity at the first and last interior node
      // gives M1 and M_{n-1} directly and decouples an interior
      // tridiagonal system.
      Mat m1 = d2(1) / 6.0;
      Mat mn1 = d2(n_ - 1) / 6.0;
      if (n_ >= 4) {
        Mat sub(n_ - 3, nc);
        for (int i = 2; i <= n_ - 2; ++i) sub.row(i - 2) = d2(i);
        sub.row(0) -= m1;
        sub.row(n_ - 4) -= mn1;
        Mat sol = solve_tridiag_141(std::move(sub));
        for (int i = 2; i <= n_ - 2; ++i) m_.col(i) = sol.row(i - 2).transpose();
      }
      m_.col(1) = m1.transpose();
      m_.col(n_ - 1) = mn1.transpose();
      m_.col(0) = 2.0 * m_.col(1) - m_.col(2);
      m_.col(n_) = 2.0 * m_.col(n_ - 1) - m_.col(n_ - 2);
    } else {
      // Cyclic system over M_0..M_{n-1} via Sherman-Morrison.
      Mat b(n_, nc);
      b.row(0) = (6.0 / (h_ * h_)) *
                 (y_.col(n_ - 1) - 2.0 * y_.col(0) + y_.col(1)).transpose();
      for (int i = 1; i < n_; ++i) b.row(i) = d2(i);
      // A = T + u v^T with T tridiagonal (4 - g, 1, 1), corners handled by
      // u = (g, 0, ..., 0, 1)^T, v = (1, 0, ..., 0, 1/g)^T, g = -2.
      const double g = -2.0;
      Mat rhs2(n_, nc + 1);
      rhs2.leftCols(nc) = b;
      Vec u = Vec::Zero(n_);
      u[0] = g;
      u[n_ - 1] = 1.0;
      rhs2.col(nc) = u;
      // Thomas on modified diagonal.
      std::vector<double> diag(static_cast<size_t>(n_), 4.0);
      diag[0] = 4.0 - g;
      diag[static_cast<size_t>(n_ - 1)] = 4.0 - 1.0 / g;
      for (int i = 1; i < n_; ++i) {
        double w = 1.0 / diag[static_cast<size_t>(i - 1)];
        diag[static_cast<size_t>(i)] -= w;
        rhs2.row(i) -= w * rhs2.row(i - 1);
      }
      rhs2.row(n_ - 1) /= diag[static_cast<size_t>(n_ - 1)];
      for (int i = n_ - 2; i >= 0; --i)
        rhs2.row(i) = (rhs2.row(i) - rhs2.row(i + 1)) / diag[static_cast<size_t>(i)];
      Mat ysol = rhs2.leftCols(nc);
      Vec q = rhs2.col(nc);
      Eigen::RowVectorXd vy = ysol.row(0) + ysol.row(n_ - 1) / g;
      double vq = q[0] + q[n_ - 1] / g;
      Mat sol = ysol - q * (vy / (1.0 + vq));
      for (int i = 0; i < n_; ++i) m_.col(i) = sol.row(i).transpose();
      m_.col(n_) = m_.col(0);
    }
  }

  double t0_ = 0.0, t1_ = 1.0;
  Mat y_;   // samples, ncomp x (N+1)
  Mat m_;   // second derivatives at nodes, ncomp x (N+1)
  Boundary bc_ = Boundary::NotAKnot;
  int n_ = 0;
  double h_ = 0.0;
};

}  // namespace holomod

#endif
