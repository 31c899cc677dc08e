#pragma once

#include <complex>
#include <iosfwd>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "bergman/multi_index.hpp"
#include "bergman/polynomial.hpp"
#include "bergman/rational.hpp"

namespace bergman {

/// Monomials z^alpha with |alpha| <= D in graded-lex order, carrying their
/// weighted norms. Copies share the same immutable tables.
class BasisSpec {
  struct Data {
    std::size_t n = 0;
    int t = 0;
    int max_degree = 0;
    std::vector<MultiIndex> indices;
    std::unordered_map<MultiIndex, std::size_t, MultiIndexHash> lookup;
    std::vector<Rational> norm_sq;
    std::vector<double> norm;
  };

 public:
  BasisSpec(std::size_t n, int t, int max_degree);

  std::size_t n() const { return data_->n; }
  int t() const { return data_->t; }
  int max_degree() const { return data_->max_degree; }
  std::size_t dim() const { return data_->indices.size(); }

  const MultiIndex& index(std::size_t k) const { return data_->indices.at(k); }
  const std::vector<MultiIndex>& indices() const { return data_->indices; }
  std::optional<std::size_t> position(const MultiIndex& alpha) const;
  /// Number of basis elements of degree < d.
  std::size_t offset(int d) const;

  const Rational& norm_sq(std::size_t k) const { return data_->norm_sq[k]; }
  double norm(std::size_t k) const { return data_->norm[k]; }

  /// Coordinates of p in the orthonormal basis z^alpha / ||z^alpha||_t.
  Eigen::VectorXcd orthonormal_coordinates(const ExactPoly& p) const;

  friend bool operator==(const BasisSpec& a, const BasisSpec& b) {
    return a.n() == b.n() && a.t() == b.t() && a.max_degree() == b.max_degree();
  }

 private:
  std::shared_ptr<const Data> data_;
};

/// Dense matrix of an operator between orthonormal monomial bases.
struct OperatorMatrix {
  BasisSpec domain;
  BasisSpec codomain;
  Eigen::MatrixXcd entries;
};

/// Exact operator in the (non-normalized) monomial basis:
/// T z^{col} = sum_row coefficient * z^{row}.
struct ExactOperator {
  struct Entry {
    std::size_t row;
    std::size_t col;
    QComplex value;
  };
  BasisSpec domain;
  BasisSpec codomain;
  std::vector<Entry> entries;

  ExactPoly apply(const ExactPoly& f) const;
};

ExactOperator exact_multiplication(const ExactPoly& f, const BasisSpec& spec);

/// Adjoint of M_{z_j} in the weighted space, from the Gram relation
/// <T* z^alpha, z^gamma> = <z^alpha, z_j z^gamma>.
ExactOperator exact_coordinate_adjoint(std::size_t j, const BasisSpec& spec);

/// T*_{z_j} applied to a polynomial in the weight-t space (exact).
ExactPoly coordinate_adjoint_apply(const ExactPoly& f, std::size_t j, int t);

/// Entry scaling from monomial to orthonormal coordinates.
OperatorMatrix to_orthonormal(const ExactOperator& op);

/// g -> f g, codomain of degree D + deg f.
OperatorMatrix multiplication_matrix(const ExactPoly& f, const BasisSpec& spec);
OperatorMatrix coordinate_adjoint(std::size_t j, const BasisSpec& spec);
OperatorMatrix number_operator(const BasisSpec& spec);

class DegenerateGram : public std::runtime_error {
 public:
  DegenerateGram(const std::string& what, double ratio) : std::runtime_error(what), ratio_(ratio) {}
  /// Smallest pivot divided by largest pivot.
  double ratio() const { return ratio_; }

 private:
  double ratio_;
};

inline constexpr double kGramPivotTolerance = 1e-10;

struct SubmodulePlan {
  ExactPoly p;
  /// Largest multiplier degree |beta|.
  int B = 0;
  /// Smallest multiplier degree (the subspace of f vanishing to order l).
  int l = 0;
  int t = 0;

  int ambient_degree() const { return B + p.degree() + 1; }
  void validate() const;
};

/// Orthonormal basis of span{p z^beta : l <= |beta| <= B} inside the ambient
/// truncated space. Columns of `basis` are ordered interior first: the
/// generators with |beta| <= B - deg p - 1, then the band near the cut.
struct Submodule {
  SubmodulePlan plan;
  BasisSpec ambient;
  Eigen::MatrixXcd basis;
  std::size_t interior_dim = 0;
  double min_pivot_ratio = 1.0;

  std::size_t rank() const { return static_cast<std::size_t>(basis.cols()); }
  std::size_t band_dim() const { return rank() - interior_dim; }
  Eigen::MatrixXcd projector() const { return basis * basis.adjoint(); }
};

Submodule build_submodule(const SubmodulePlan& plan);

OperatorMatrix submodule_projector(const SubmodulePlan& plan);

/// Operator expressed in the orthonormal basis of a submodule.
struct CompressedOperator {
  Eigen::MatrixXcd entries;
  std::size_t interior_dim = 0;

  Eigen::MatrixXcd interior_block() const {
    const auto k = static_cast<Eigen::Index>(interior_dim);
    return entries.topLeftCorner(k, k);
  }
};

/// S_i S_j* - S_j* S_i with S_i = P_M M_{z_i} |_M.
CompressedOperator compressed_commutator(const Submodule& sub, std::size_t i, std::size_t j);

/// (I - P_M) M*_{z_j} P_M on the ambient space.
OperatorMatrix cross_corner(const Submodule& sub, std::size_t j);

/// ||f - P_M f|| in the plan's weight.
double submodule_distance(const ExactPoly& f, const Submodule& sub);

/// ||P_M k_w|| for the truncated, normalized reproducing kernel at w.
double kernel_orthogonality(std::span<const std::complex<double>> w, const Submodule& sub);

/// One line per row: re_0,im_0,re_1,im_1,... (17 significant digits).
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXcd& m);

/// "BGMX", rows and cols as little-endian uint64, then row-major entries as
/// little-endian IEEE doubles, real part first.
void write_matrix_binary(std::ostream& out, const Eigen::MatrixXcd& m);
Eigen::MatrixXcd read_matrix_binary(std::istream& in);

}  // namespace bergman
