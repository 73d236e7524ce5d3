#ifndef HOLOMOD_POLYNOMIAL_HPP
#define HOLOMOD_POLYNOMIAL_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <vector>

#include "holomod/types.hpp"

namespace holomod {

// Multivariate polynomial over a fixed chart dimension, stored as a sparse
// map from exponent multi-indices to real coefficients. Evaluation and
// differentiation are exact.
class Polynomial {
 public:
  using Exponents = std::vector<int>;

  explicit Polynomial(int dim) : dim_(dim) {
    if (dim <= 0) throw DimensionMismatch("Polynomial: dim must be positive");
  }

  static Polynomial constant(int dim, double c) {
    Polynomial p(dim);
    p.add_term(Exponents(static_cast<size_t>(dim), 0), c);
    return p;
  }

  // The coordinate function x_i (zero-based).
  static Polynomial variable(int dim, int i) {
    Polynomial p(dim);
    Exponents e(static_cast<size_t>(dim), 0);
    e.at(static_cast<size_t>(i)) = 1;
    p.add_term(e, 1.0);
    return p;
  }

  int dim() const { return dim_; }

  void add_term(const Exponents& exps, double coeff) {
    if (static_cast<int>(exps.size()) != dim_)
      throw DimensionMismatch("Polynomial: multi-index length != dim");
    for (int e : exps)
      if (e < 0) throw Error("Polynomial: negative exponent");
    double& c = terms_[exps];
    c += coeff;
    if (c == 0.0) terms_.erase(exps);
  }

  const std::map<Exponents, double>& terms() const { return terms_; }

  double operator()(const Vec& x) const {
    if (x.size() != dim_) throw DimensionMismatch("Polynomial eval: point dim");
    double sum = 0.0;
    for (const auto& [e, c] : terms_) {
      double m = c;
      for (int i = 0; i < dim_; ++i)
        for (int k = 0; k < e[static_cast<size_t>(i)]; ++k) m *= x[i];
      sum += m;
    }
    return sum;
  }

  Polynomial partial(int i) const {
    Polynomial d(dim_);
    for (const auto& [e, c] : terms_) {
      int p = e[static_cast<size_t>(i)];
      if (p == 0) continue;
      Exponents de = e;
      de[static_cast<size_t>(i)] = p - 1;
      d.add_term(de, c * p);
    }
    return d;
  }

  int degree() const {
    int deg = 0;
    for (const auto& [e, c] : terms_)
      deg = std::max(deg, std::accumulate(e.begin(), e.end(), 0));
    return deg;
  }

  bool is_zero() const { return terms_.empty(); }

  double max_abs_coeff() const {
    double m = 0.0;
    for (const auto& [e, c] : terms_) m = std::max(m, std::abs(c));
    return m;
  }

  Polynomial& operator+=(const Polynomial& o) {
    check_same(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    check_same(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  Polynomial& operator*=(double s) {
    if (s == 0.0) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
  friend Polynomial operator*(double s, Polynomial a) { return a *= s; }
  friend Polynomial operator-(Polynomial a) { return a *= -1.0; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_same(b);
    Polynomial p(a.dim_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        Exponents e = ea;
        for (int i = 0; i < a.dim_; ++i)
          e[static_cast<size_t>(i)] += eb[static_cast<size_t>(i)];
        p.add_term(e, ca * cb);
      }
    return p;
  }

 private:
  void check_same(const Polynomial& o) const {
    if (o.dim_ != dim_) throw DimensionMismatch("Polynomial: mixed dims");
  }

  int dim_;
  std::map<Exponents, double> terms_;
};

// Largest coefficient of a - b, used for coefficient-level identities.
inline double max_coeff_diff(const Polynomial& a, const Polynomial& b) {
  return (a - b).max_abs_coeff();
}

}  // namespace holomod

#endif
