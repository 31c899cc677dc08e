#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "bergman/rational.hpp"

namespace bergman {

/// Exponent vector of a monomial z^alpha.
///
/// Ordering is graded lexicographic: lower total degree first, and within a
/// degree the lexicographically larger exponent vector first, so that for
/// n = 2 the order reads 1, z1, z2, z1^2, z1 z2, z2^2, ...
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::size_t n) : exponents_(n, 0) {}
  MultiIndex(std::initializer_list<int> exponents);
  explicit MultiIndex(std::vector<int> exponents);

  /// epsilon_j: a one in coordinate j (zero based), zeros elsewhere.
  static MultiIndex unit(std::size_t n, std::size_t j);

  std::size_t size() const { return exponents_.size(); }
  int operator[](std::size_t j) const { return exponents_[j]; }
  const std::vector<int>& exponents() const { return exponents_; }
  int degree() const { return degree_; }

  /// alpha! = alpha_1! ... alpha_n!
  Integer factorial() const;

  MultiIndex operator+(const MultiIndex& other) const;
  /// alpha - epsilon_j; requires alpha_j > 0.
  MultiIndex lowered(std::size_t j) const;
  MultiIndex raised(std::size_t j) const;

  std::string to_string() const;

  friend bool operator==(const MultiIndex& a, const MultiIndex& b) { return a.exponents_ == b.exponents_; }
  friend bool operator!=(const MultiIndex& a, const MultiIndex& b) { return !(a == b); }
  friend bool operator<(const MultiIndex& a, const MultiIndex& b);

 private:
  std::vector<int> exponents_;
  int degree_ = 0;
};

struct MultiIndexHash {
  std::size_t operator()(const MultiIndex& a) const noexcept;
};

/// All multi-indices of length n with |alpha| <= max_degree, graded-lex order.
std::vector<MultiIndex> enumerate_multi_indices(std::size_t n, int max_degree);

/// Multi-indices with |alpha| == degree, lexicographically descending.
std::vector<MultiIndex> enumerate_homogeneous(std::size_t n, int degree);

}  // namespace bergman
