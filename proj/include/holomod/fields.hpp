#ifndef HOLOMOD_FIELDS_HPP
#define HOLOMOD_FIELDS_HPP

#include <utility>
#include <vector>

#include "holomod/polynomial.hpp"
#include "holomod/types.hpp"

namespace holomod {

// Polynomial vector field v = v^i(x) d/dx^i.
class VectorField {
 public:
  explicit VectorField(std::vector<Polynomial> comps) : comps_(std::move(comps)) {
    if (comps_.empty()) throw DimensionMismatch("VectorField: no components");
    for (const auto& c : comps_)
      if (c.dim() != dim()) throw DimensionMismatch("VectorField: component dims");
  }

  static VectorField zero(int dim) {
    return VectorField(std::vector<Polynomial>(static_cast<size_t>(dim), Polynomial(dim)));
  }

  int dim() const { return static_cast<int>(comps_.size()); }
  const Polynomial& comp(int i) const { return comps_[static_cast<size_t>(i)]; }

  Vec operator()(const Vec& x) const {
    Vec v(dim());
    for (int i = 0; i < dim(); ++i) v[i] = comps_[static_cast<size_t>(i)](x);
    return v;
  }

  // J^i_k = d v^i / d x^k, evaluated exactly.
  Mat jacobian(const Vec& x) const {
    Mat j(dim(), dim());
    for (int i = 0; i < dim(); ++i)
      for (int k = 0; k < dim(); ++k) j(i, k) = comps_[static_cast<size_t>(i)].partial(k)(x);
    return j;
  }

  VectorField operator-(const VectorField& o) const {
    std::vector<Polynomial> c;
    c.reserve(comps_.size());
    for (int i = 0; i < dim(); ++i) c.push_back(comp(i) - o.comp(i));
    return VectorField(std::move(c));
  }
  VectorField operator+(const VectorField& o) const {
    std::vector<Polynomial> c;
    c.reserve(comps_.size());
    for (int i = 0; i < dim(); ++i) c.push_back(comp(i) + o.comp(i));
    return VectorField(std::move(c));
  }
  VectorField operator*(double s) const {
    std::vector<Polynomial> c;
    c.reserve(comps_.size());
    for (int i = 0; i < dim(); ++i) c.push_back(comp(i) * s);
    return VectorField(std::move(c));
  }

 private:
  std::vector<Polynomial> comps_;
};

// Polynomial one-form b = b_i(x) dx^i. A constant covector field is closed.
class CovectorField {
 public:
  explicit CovectorField(std::vector<Polynomial> comps) : comps_(std::move(comps)) {
    if (comps_.empty()) throw DimensionMismatch("CovectorField: no components");
    for (const auto& c : comps_)
      if (c.dim() != dim()) throw DimensionMismatch("CovectorField: component dims");
  }

  static CovectorField constant(const Vec& a) {
    std::vector<Polynomial> c;
    for (int i = 0; i < a.size(); ++i)
      c.push_back(Polynomial::constant(static_cast<int>(a.size()), a[i]));
    return CovectorField(std::move(c));
  }

  // The differential df of a scalar polynomial.
  static CovectorField differential(const Polynomial& f) {
    std::vector<Polynomial> c;
    for (int i = 0; i < f.dim(); ++i) c.push_back(f.partial(i));
    return CovectorField(std::move(c));
  }

  int dim() const { return static_cast<int>(comps_.size()); }
  const Polynomial& comp(int i) const { return comps_[static_cast<size_t>(i)]; }

  Vec operator()(const Vec& x) const {
    Vec v(dim());
    for (int i = 0; i < dim(); ++i) v[i] = comps_[static_cast<size_t>(i)](x);
    return v;
  }

  // Coefficient-level closedness: d_i b_j symmetric in (i, j).
  double closedness_defect() const {
    double m = 0.0;
    for (int i = 0; i < dim(); ++i)
      for (int j = i + 1; j < dim(); ++j)
        m = std::max(m, max_coeff_diff(comp(j).partial(i), comp(i).partial(j)));
    return m;
  }

 private:
  std::vector<Polynomial> comps_;
};

// Antisymmetric bivector Pi^{ij}(x) with polynomial entries. Entry partials
// are cached for the variational equation.
class BivectorField {
 public:
  // Upper-triangular entries (i < j, zero-based); the lower triangle is
  // derived by antisymmetry.
  static BivectorField from_upper(int dim, std::vector<std::vector<Polynomial>> upper) {
    BivectorField b(dim);
    for (int i = 0; i < dim; ++i)
      for (int j = i + 1; j < dim; ++j) {
        const Polynomial& p = upper.at(static_cast<size_t>(i)).at(static_cast<size_t>(j - i - 1));
        if (p.dim() != dim) throw DimensionMismatch("BivectorField: entry dim");
        b.set(i, j, p);
      }
    b.cache_partials();
    return b;
  }

  // Convenience: a list of (i, j, polynomial) with i < j.
  static BivectorField from_entries(int dim,
                                    const std::vector<std::tuple<int, int, Polynomial>>& entries) {
    BivectorField b(dim);
    for (const auto& [i, j, p] : entries) {
      if (i >= j) throw Error("BivectorField: entries must have i < j");
      if (p.dim() != dim) throw DimensionMismatch("BivectorField: entry dim");
      b.set(i, j, p);
    }
    b.cache_partials();
    return b;
  }

  int dim() const { return dim_; }

  const Polynomial& entry(int i, int j) const {
    return entries_[static_cast<size_t>(i * dim_ + j)];
  }
  const Polynomial& entry_partial(int i, int j, int k) const {
    return partials_[static_cast<size_t>((i * dim_ + j) * dim_ + k)];
  }

  Mat operator()(const Vec& x) const {
    if (x.size() != dim_) throw DimensionMismatch("BivectorField eval: point dim");
    Mat m = Mat::Zero(dim_, dim_);
    for (int i = 0; i < dim_; ++i)
      for (int j = i + 1; j < dim_; ++j) {
        double v = entry(i, j)(x);
        m(i, j) = v;
        m(j, i) = -v;
      }
    return m;
  }

  // Pinned pairing convention: (sharp a)^j = sum_i Pi^{ij}(x) a_i.
  Vec sharp(const Vec& x, const Vec& a) const {
    if (a.size() != dim_) throw DimensionMismatch("sharp: covector dim");
    return (*this)(x).transpose() * a;
  }

  // Jacobian of x -> sharp(x, a) for a fixed covector a:
  // J^j_k = sum_i d_k Pi^{ij}(x) a_i.
  Mat sharp_jacobian(const Vec& x, const Vec& a) const {
    Mat j = Mat::Zero(dim_, dim_);
    for (int jj = 0; jj < dim_; ++jj)
      for (int k = 0; k < dim_; ++k) {
        double s = 0.0;
        for (int i = 0; i < dim_; ++i) {
          if (i == jj) continue;
          s += entry_partial(i, jj, k)(x) * a[i];
        }
        j(jj, k) = s;
      }
    return j;
  }

 private:
  explicit BivectorField(int dim) : dim_(dim) {
    if (dim <= 0) throw DimensionMismatch("BivectorField: dim must be positive");
    entries_.assign(static_cast<size_t>(dim * dim), Polynomial(dim));
  }

  void set(int i, int j, const Polynomial& p) {
    entries_[static_cast<size_t>(i * dim_ + j)] = p;
    entries_[static_cast<size_t>(j * dim_ + i)] = -p;
  }

  void cache_partials() {
    partials_.clear();
    partials_.reserve(static_cast<size_t>(dim_ * dim_ * dim_));
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j)
        for (int k = 0; k < dim_; ++k) partials_.push_back(entry(i, j).partial(k));
  }

  int dim_;
  std::vector<Polynomial> entries_;   // row-major, antisymmetric
  std::vector<Polynomial> partials_;  // d_k Pi^{ij}
};

// Positive density rho = exp(log_density) for mu = rho * (chart volume).
class VolumeDensity {
 public:
  explicit VolumeDensity(Polynomial log_density) : log_density_(std::move(log_density)) {}

  static VolumeDensity flat(int dim) { return VolumeDensity(Polynomial(dim)); }

  int dim() const { return log_density_.dim(); }
  const Polynomial& log_density() const { return log_density_; }
  double rho(const Vec& x) const { return std::exp(log_density_(x)); }
  double dlog(int j, const Vec& x) const { return log_density_.partial(j)(x); }

 private:
  Polynomial log_density_;
};

inline Mat eval_bivector(const BivectorField& pi, const Vec& x) { return pi(x); }

inline Vec sharp(const BivectorField& pi, const Vec& x, const Vec& a) {
  return pi.sharp(x, a);
}

// Hamiltonian vector field X_f = sharp(df), as exact polynomials.
inline VectorField hamiltonian_field(const BivectorField& pi, const Polynomial& f) {
  std::vector<Polynomial> comps;
  for (int j = 0; j < pi.dim(); ++j) {
    Polynomial c(pi.dim());
    for (int i = 0; i < pi.dim(); ++i) {
      if (i == j) continue;
      c += pi.entry(i, j) * f.partial(i);
    }
    comps.push_back(std::move(c));
  }
  return VectorField(std::move(comps));
}

// sharp applied to a polynomial one-form.
inline VectorField sharp_field(const BivectorField& pi, const CovectorField& beta) {
  std::vector<Polynomial> comps;
  for (int j = 0; j < pi.dim(); ++j) {
    Polynomial c(pi.dim());
    for (int i = 0; i < pi.dim(); ++i) {
      if (i == j) continue;
      c += pi.entry(i, j) * beta.comp(i);
    }
    comps.push_back(std::move(c));
  }
  return VectorField(std::move(comps));
}

// Max over i<j<k of the cyclic Jacobiator sum, evaluated at x.
inline double jacobi_defect(const BivectorField& pi, const Vec& x) {
  const int n = pi.dim();
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) {
          s += pi.entry(l, i)(x) * pi.entry_partial(j, k, l)(x);
          s += pi.entry(l, j)(x) * pi.entry_partial(k, i, l)(x);
          s += pi.entry(l, k)(x) * pi.entry_partial(i, j, l)(x);
        }
        worst = std::max(worst, std::abs(s));
      }
  return worst;
}

// div_mu v = (1/rho) d_j (rho v^j) = d_j v^j + v^j d_j log rho, exact.
inline double divergence(const VectorField& v, const VolumeDensity& rho, const Vec& x) {
  if (v.dim() != rho.dim()) throw DimensionMismatch("divergence: dims");
  double s = 0.0;
  for (int j = 0; j < v.dim(); ++j)
    s += v.comp(j).partial(j)(x) + v.comp(j)(x) * rho.dlog(j, x);
  return s;
}

}  // namespace holomod

#endif
