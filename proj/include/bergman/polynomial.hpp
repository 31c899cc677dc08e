#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bergman/multi_index.hpp"
#include "bergman/rational.hpp"

namespace bergman {

/// Degree reported for the zero polynomial.
inline constexpr int kZeroPolyDegree = -1;

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Holomorphic polynomial sum_alpha c_alpha z^alpha in n variables.
/// Stored coefficients are never zero.
template <class S>
class HoloPoly {
 public:
  using Scalar = S;
  using Traits = ScalarTraits<S>;
  using Terms = std::map<MultiIndex, S>;

  explicit HoloPoly(std::size_t n = 1) : n_(n) {
    if (n == 0) throw std::invalid_argument("polynomial dimension must be at least one");
  }

  static HoloPoly constant(std::size_t n, const S& c) {
    HoloPoly p(n);
    p.add_term(MultiIndex(n), c);
    return p;
  }
  static HoloPoly monomial(const MultiIndex& alpha, const S& c = Traits::from_int(1)) {
    HoloPoly p(alpha.size());
    p.add_term(alpha, c);
    return p;
  }
  /// z_j (zero-based coordinate).
  static HoloPoly variable(std::size_t n, std::size_t j) { return monomial(MultiIndex::unit(n, j)); }

  std::size_t dim() const { return n_; }
  const Terms& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  int degree() const { return terms_.empty() ? kZeroPolyDegree : terms_.rbegin()->first.degree(); }
  /// Lowest total degree carrying a nonzero coefficient.
  int min_degree() const { return terms_.empty() ? kZeroPolyDegree : terms_.begin()->first.degree(); }
  bool is_homogeneous() const { return degree() == min_degree(); }

  S coefficient(const MultiIndex& alpha) const {
    auto it = terms_.find(alpha);
    return it == terms_.end() ? S{} : it->second;
  }

  void add_term(const MultiIndex& alpha, const S& c) {
    if (alpha.size() != n_) throw DimensionMismatch("term dimension does not match polynomial");
    if (Traits::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(alpha, c);
    if (!inserted) {
      it->second += c;
      if (Traits::is_zero(it->second)) terms_.erase(it);
    }
  }

  HoloPoly homogeneous_part(int d) const {
    HoloPoly out(n_);
    for (const auto& [alpha, c] : terms_) {
      if (alpha.degree() == d) out.terms_.emplace_hint(out.terms_.end(), alpha, c);
    }
    return out;
  }

  HoloPoly& operator+=(const HoloPoly& o) {
    check_dim(o);
    for (const auto& [alpha, c] : o.terms_) add_term(alpha, c);
    return *this;
  }
  HoloPoly& operator-=(const HoloPoly& o) {
    check_dim(o);
    for (const auto& [alpha, c] : o.terms_) add_term(alpha, -c);
    return *this;
  }
  HoloPoly& operator*=(const S& s) {
    if (Traits::is_zero(s)) {
      terms_.clear();
      return *this;
    }
    for (auto it = terms_.begin(); it != terms_.end();) {
      it->second *= s;
      if (Traits::is_zero(it->second)) {
        it = terms_.erase(it);
      } else {
        ++it;
      }
    }
    return *this;
  }

  friend HoloPoly operator+(HoloPoly a, const HoloPoly& b) { return a += b; }
  friend HoloPoly operator-(HoloPoly a, const HoloPoly& b) { return a -= b; }
  friend HoloPoly operator*(HoloPoly a, const S& s) { return a *= s; }
  friend HoloPoly operator*(const S& s, HoloPoly a) { return a *= s; }
  friend HoloPoly operator-(HoloPoly a) { return a *= Traits::from_int(-1); }
  friend bool operator==(const HoloPoly& a, const HoloPoly& b) { return a.n_ == b.n_ && a.terms_ == b.terms_; }
  friend bool operator!=(const HoloPoly& a, const HoloPoly& b) { return !(a == b); }

  std::complex<double> evaluate(std::span<const std::complex<double>> z) const {
    if (z.size() != n_) throw DimensionMismatch("evaluation point has wrong dimension");
    std::complex<double> sum = 0.0;
    for (const auto& [alpha, c] : terms_) {
      std::complex<double> mono = Traits::to_complex(c);
      for (std::size_t j = 0; j < n_; ++j) {
        for (int e = 0; e < alpha[j]; ++e) mono *= z[j];
      }
      sum += mono;
    }
    return sum;
  }

  void check_dim(const HoloPoly& o) const {
    if (o.n_ != n_) throw DimensionMismatch("polynomial dimension mismatch");
  }

 private:
  std::size_t n_;
  Terms terms_;
};

/// Polynomial in z and conj(z): sum c_{alpha,beta} z^alpha conj(z)^beta.
template <class S>
class MixedPoly {
 public:
  using Scalar = S;
  using Traits = ScalarTraits<S>;
  using Key = std::pair<MultiIndex, MultiIndex>;
  using Terms = std::map<Key, S>;

  explicit MixedPoly(std::size_t n = 1) : n_(n) {
    if (n == 0) throw std::invalid_argument("polynomial dimension must be at least one");
  }

  /// Embeds a holomorphic polynomial (beta = 0 everywhere).
  explicit MixedPoly(const HoloPoly<S>& p) : n_(p.dim()) {
    const MultiIndex zero(n_);
    for (const auto& [alpha, c] : p.terms()) terms_.emplace(Key{alpha, zero}, c);
  }

  static MixedPoly constant(std::size_t n, const S& c) {
    MixedPoly p(n);
    p.add_term(MultiIndex(n), MultiIndex(n), c);
    return p;
  }
  /// conj(z_j)
  static MixedPoly conj_variable(std::size_t n, std::size_t j) {
    MixedPoly p(n);
    p.add_term(MultiIndex(n), MultiIndex::unit(n, j), Traits::from_int(1));
    return p;
  }
  static MixedPoly variable(std::size_t n, std::size_t j) {
    MixedPoly p(n);
    p.add_term(MultiIndex::unit(n, j), MultiIndex(n), Traits::from_int(1));
    return p;
  }
  /// 1 - |z|^2
  static MixedPoly one_minus_norm_sq(std::size_t n) {
    MixedPoly p = constant(n, Traits::from_int(1));
    for (std::size_t j = 0; j < n; ++j) {
      p.add_term(MultiIndex::unit(n, j), MultiIndex::unit(n, j), Traits::from_int(-1));
    }
    return p;
  }

  std::size_t dim() const { return n_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// Largest anti-holomorphic degree |beta| among the stored terms.
  int antiholomorphic_degree() const {
    int d = terms_.empty() ? kZeroPolyDegree : 0;
    for (const auto& [key, c] : terms_) d = std::max(d, key.second.degree());
    return d;
  }

  void add_term(const MultiIndex& alpha, const MultiIndex& beta, const S& c) {
    if (alpha.size() != n_ || beta.size() != n_) throw DimensionMismatch("term dimension mismatch");
    if (Traits::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(Key{alpha, beta}, c);
    if (!inserted) {
      it->second += c;
      if (Traits::is_zero(it->second)) terms_.erase(it);
    }
  }

  MixedPoly conjugate() const {
    MixedPoly out(n_);
    for (const auto& [key, c] : terms_) out.terms_.emplace(Key{key.second, key.first}, Traits::conj(c));
    return out;
  }

  MixedPoly& operator+=(const MixedPoly& o) {
    check_dim(o);
    for (const auto& [key, c] : o.terms_) add_term(key.first, key.second, c);
    return *this;
  }
  MixedPoly& operator-=(const MixedPoly& o) {
    check_dim(o);
    for (const auto& [key, c] : o.terms_) add_term(key.first, key.second, -c);
    return *this;
  }
  MixedPoly& operator*=(const S& s) {
    if (Traits::is_zero(s)) {
      terms_.clear();
      return *this;
    }
    for (auto& [key, c] : terms_) c *= s;
    return *this;
  }

  friend MixedPoly operator+(MixedPoly a, const MixedPoly& b) { return a += b; }
  friend MixedPoly operator-(MixedPoly a, const MixedPoly& b) { return a -= b; }
  friend MixedPoly operator*(MixedPoly a, const S& s) { return a *= s; }
  friend MixedPoly operator*(const MixedPoly& a, const MixedPoly& b) {
    a.check_dim(b);
    MixedPoly out(a.n_);
    for (const auto& [ka, ca] : a.terms_) {
      for (const auto& [kb, cb] : b.terms_) {
        out.add_term(ka.first + kb.first, ka.second + kb.second, ca * cb);
      }
    }
    return out;
  }
  friend MixedPoly operator*(const MixedPoly& a, const HoloPoly<S>& b) { return a * MixedPoly(b); }
  friend MixedPoly operator*(const HoloPoly<S>& a, const MixedPoly& b) { return MixedPoly(a) * b; }
  friend bool operator==(const MixedPoly& a, const MixedPoly& b) { return a.n_ == b.n_ && a.terms_ == b.terms_; }
  friend bool operator!=(const MixedPoly& a, const MixedPoly& b) { return !(a == b); }

  std::complex<double> evaluate(std::span<const std::complex<double>> z) const {
    if (z.size() != n_) throw DimensionMismatch("evaluation point has wrong dimension");
    std::complex<double> sum = 0.0;
    for (const auto& [key, c] : terms_) {
      std::complex<double> mono = Traits::to_complex(c);
      for (std::size_t j = 0; j < n_; ++j) {
        for (int e = 0; e < key.first[j]; ++e) mono *= z[j];
        for (int e = 0; e < key.second[j]; ++e) mono *= std::conj(z[j]);
      }
      sum += mono;
    }
    return sum;
  }

  void check_dim(const MixedPoly& o) const {
    if (o.n_ != n_) throw DimensionMismatch("polynomial dimension mismatch");
  }

 private:
  std::size_t n_;
  Terms terms_;
};

using ExactPoly = HoloPoly<QComplex>;
using FloatPoly = HoloPoly<std::complex<double>>;
using ExactMixedPoly = MixedPoly<QComplex>;
using FloatMixedPoly = MixedPoly<std::complex<double>>;

template <class S>
HoloPoly<S> poly_mul(const HoloPoly<S>& p, const HoloPoly<S>& q) {
  p.check_dim(q);
  HoloPoly<S> out(p.dim());
  for (const auto& [a, ca] : p.terms()) {
    for (const auto& [b, cb] : q.terms()) out.add_term(a + b, ca * cb);
  }
  return out;
}

template <class S>
HoloPoly<S> operator*(const HoloPoly<S>& p, const HoloPoly<S>& q) {
  return poly_mul(p, q);
}

/// d/dz_j, zero-based j.
template <class S>
HoloPoly<S> partial_derivative(const HoloPoly<S>& p, std::size_t j) {
  if (j >= p.dim()) throw std::out_of_range("derivative coordinate out of range");
  HoloPoly<S> out(p.dim());
  for (const auto& [alpha, c] : p.terms()) {
    if (alpha[j] == 0) continue;
    out.add_term(alpha.lowered(j), c * ScalarTraits<S>::from_int(alpha[j]));
  }
  return out;
}

/// R = sum_i z_i d/dz_i, which scales z^alpha by |alpha|.
template <class S>
HoloPoly<S> radial_derivative(const HoloPoly<S>& p) {
  HoloPoly<S> out(p.dim());
  for (const auto& [alpha, c] : p.terms()) {
    out.add_term(alpha, c * ScalarTraits<S>::from_int(alpha.degree()));
  }
  return out;
}

template <class S>
HoloPoly<S> radial_power(const HoloPoly<S>& p, int order) {
  if (order < 0) throw std::invalid_argument("radial power order must be non-negative");
  HoloPoly<S> out = p;
  for (int k = 0; k < order; ++k) out = radial_derivative(out);
  return out;
}

/// L_{j,i} p = conj(z_i) d_j p - conj(z_j) d_i p, zero-based i != j.
template <class S>
MixedPoly<S> tangential_derivative(const HoloPoly<S>& p, std::size_t j, std::size_t i) {
  if (i == j) throw std::invalid_argument("tangential derivative needs distinct coordinates");
  const std::size_t n = p.dim();
  if (i >= n || j >= n) throw std::out_of_range("tangential derivative coordinate out of range");
  MixedPoly<S> out = MixedPoly<S>::conj_variable(n, i) * MixedPoly<S>(partial_derivative(p, j));
  out -= MixedPoly<S>::conj_variable(n, j) * MixedPoly<S>(partial_derivative(p, i));
  return out;
}

/// f_r(z) = f(r z).
template <class S>
HoloPoly<S> dilate(const HoloPoly<S>& p, const S& r) {
  HoloPoly<S> out(p.dim());
  for (const auto& [alpha, c] : p.terms()) {
    S scale = ScalarTraits<S>::from_int(1);
    for (int e = 0; e < alpha.degree(); ++e) scale *= r;
    out.add_term(alpha, c * scale);
  }
  return out;
}

/// Coefficients a_j^{(l)}, j = 1..l, with R^l f = sum_j a_j z^j f^{(j)} in one variable.
std::vector<Integer> radial_power_coeffs(int order);

/// One-variable check helper: sum_j a_j z^j d^j f.
ExactPoly radial_power_by_coeffs(const ExactPoly& f, int order);

FloatPoly to_float(const ExactPoly& p);
FloatMixedPoly to_float(const ExactMixedPoly& p);

/// Largest coefficient distance relative to the largest coefficient magnitude of b.
double max_relative_difference(const FloatPoly& a, const FloatPoly& b);

}  // namespace bergman
