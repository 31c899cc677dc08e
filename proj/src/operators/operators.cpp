#include "bergman/operators.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "bergman/moments.hpp"

namespace bergman {


BasisSpec::BasisSpec(std::size_t n, int t, int max_degree) {
  if (t < 0) throw std::invalid_argument("weight exponent must be non-negative");
  auto data = std::make_shared<Data>();
  data->n = n;
  data->t = t;
  data->max_degree = max_degree;
  data->indices = enumerate_multi_indices(n, max_degree);
  data->lookup.reserve(data->indices.size());
  data->norm_sq.reserve(data->indices.size());
  data->norm.reserve(data->indices.size());
  for (std::size_t k = 0; k < data->indices.size(); ++k) {
    data->lookup.emplace(data->indices[k], k);
    data->norm_sq.push_back(monomial_norm_sq(data->indices[k], t));
    data->norm.push_back(std::sqrt(to_double(data->norm_sq.back())));
  }
  data_ = std::move(data);
}

std::optional<std::size_t> BasisSpec::position(const MultiIndex& alpha) const {
  auto it = data_->lookup.find(alpha);
  if (it == data_->lookup.end()) return std::nullopt;
  return it->second;
}

std::size_t BasisSpec::offset(int d) const {
  if (d <= 0) return 0;
  if (d > max_degree()) return dim();
  return static_cast<std::size_t>(binomial(static_cast<int>(n()) + d - 1, static_cast<int>(n())).get_ui());
}

Eigen::VectorXcd BasisSpec::orthonormal_coordinates(const ExactPoly& p) const {
  if (p.dim() != n()) throw DimensionMismatch("polynomial dimension differs from the basis");
  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim()));
  for (const auto& [alpha, c] : p.terms()) {
    auto k = position(alpha);
    if (!k) throw std::out_of_range("polynomial degree exceeds the truncation degree");
    x(static_cast<Eigen::Index>(*k)) = c.to_complex() * norm(*k);
  }
  return x;
}

ExactPoly ExactOperator::apply(const ExactPoly& f) const {
  std::vector<QComplex> in(domain.dim());
  for (const auto& [alpha, c] : f.terms()) {
    auto k = domain.position(alpha);
    if (!k) throw std::out_of_range("input degree exceeds the operator domain");
    in[*k] = c;
  }
  ExactPoly out(codomain.n());
  for (const auto& e : entries) {
    if (!in[e.col].is_zero()) out.add_term(codomain.index(e.row), e.value * in[e.col]);
  }
  return out;
}

ExactOperator exact_multiplication(const ExactPoly& f, const BasisSpec& spec) {
  if (f.is_zero()) throw std::invalid_argument("multiplier must be nonzero");
  if (f.dim() != spec.n()) throw DimensionMismatch("multiplier dimension differs from the basis");
  ExactOperator op{spec, BasisSpec(spec.n(), spec.t(), spec.max_degree() + f.degree()), {}};
  for (std::size_t col = 0; col < spec.dim(); ++col) {
    for (const auto& [beta, c] : f.terms()) {
      op.entries.push_back({*op.codomain.position(spec.index(col) + beta), col, c});
    }
  }
  return op;
}

ExactOperator exact_coordinate_adjoint(std::size_t j, const BasisSpec& spec) {
  if (j >= spec.n()) throw std::out_of_range("coordinate out of range");
  ExactOperator op{spec, spec, {}};
  for (std::size_t col = 0; col < spec.dim(); ++col) {
    const MultiIndex& alpha = spec.index(col);
    if (alpha[j] == 0) continue;
    const std::size_t row = *spec.position(alpha.lowered(j));
    // <T* z^alpha, z^gamma> = <z^alpha, z^{gamma + e_j}> = ||z^alpha||^2 for gamma = alpha - e_j.
    op.entries.push_back({row, col, QComplex(spec.norm_sq(col) / spec.norm_sq(row))});
  }
  return op;
}

ExactPoly coordinate_adjoint_apply(const ExactPoly& f, std::size_t j, int t) {
  if (j >= f.dim()) throw std::out_of_range("coordinate out of range");
  ExactPoly out(f.dim());
  for (const auto& [alpha, c] : f.terms()) {
    if (alpha[j] == 0) continue;
    const MultiIndex gamma = alpha.lowered(j);
    out.add_term(gamma, c * QComplex(monomial_norm_sq(alpha, t) / monomial_norm_sq(gamma, t)));
  }
  return out;
}

OperatorMatrix to_orthonormal(const ExactOperator& op) {
  OperatorMatrix m{op.domain, op.codomain,
                   Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(op.codomain.dim()),
                                          static_cast<Eigen::Index>(op.domain.dim()))};
  for (const auto& e : op.entries) {
    m.entries(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(e.col)) +=
        e.value.to_complex() * (op.codomain.norm(e.row) / op.domain.norm(e.col));
  }
  return m;
}

OperatorMatrix multiplication_matrix(const ExactPoly& f, const BasisSpec& spec) {
  return to_orthonormal(exact_multiplication(f, spec));
}

OperatorMatrix coordinate_adjoint(std::size_t j, const BasisSpec& spec) {
  return to_orthonormal(exact_coordinate_adjoint(j, spec));
}

OperatorMatrix number_operator(const BasisSpec& spec) {
  Eigen::VectorXcd d(static_cast<Eigen::Index>(spec.dim()));
  for (std::size_t k = 0; k < spec.dim(); ++k) d(static_cast<Eigen::Index>(k)) = spec.index(k).degree();
  return {spec, spec, d.asDiagonal()};
}

void SubmodulePlan::validate() const {
  if (p.is_zero()) throw std::invalid_argument("plan.p: generator must be nonzero");
  if (l < 0) throw std::invalid_argument("plan.l: minimum degree must be non-negative");
  if (B < l) throw std::invalid_argument("plan.B: maximum multiplier degree must be at least l");
  if (t < 0) throw std::invalid_argument("plan.t: weight must be non-negative");
}

namespace {

/// Orthonormal basis of the column span of V (columns assumed independent).
/// Returns V P^T L^{-H} D^{-1/2} from the pivoted factorization of V^H V.
Eigen::MatrixXcd orthonormalize(const Eigen::MatrixXcd& V, double reference_pivot, double& min_ratio,
                                double& max_pivot) {
  if (V.cols() == 0) return V;
  const Eigen::MatrixXcd gram = V.adjoint() * V;
  Eigen::LDLT<Eigen::MatrixXcd> ldlt(gram);
  const Eigen::VectorXd d = ldlt.vectorD().real();
  max_pivot = d.maxCoeff();
  const double reference = std::max(reference_pivot, max_pivot);
  const double smallest = d.minCoeff();
  min_ratio = std::min(min_ratio, smallest / reference);
  if (ldlt.info() != Eigen::Success || !(smallest >= kGramPivotTolerance * reference)) {
    throw DegenerateGram("generator Gram matrix is numerically singular (pivot ratio " +
                             std::to_string(smallest / reference) + ")",
                         smallest / reference);
  }
  const auto r = gram.rows();
  Eigen::MatrixXcd scale = Eigen::MatrixXcd::Zero(r, r);
  for (Eigen::Index k = 0; k < r; ++k) scale(k, k) = 1.0 / std::sqrt(d(k));
  Eigen::MatrixXcd Y = ldlt.matrixU().solve(scale);  // L^{-H} D^{-1/2}
  Eigen::MatrixXcd X = ldlt.transpositionsP().transpose() * Y;
  return V * X;
}

Eigen::MatrixXcd ambient_shift(const BasisSpec& spec, std::size_t i) {
  const auto N = static_cast<Eigen::Index>(spec.dim());
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(N, N);
  for (std::size_t col = 0; col < spec.dim(); ++col) {
    if (spec.index(col).degree() == spec.max_degree()) continue;
    const std::size_t row = *spec.position(spec.index(col).raised(i));
    A(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = spec.norm(row) / spec.norm(col);
  }
  return A;
}

}  // namespace

Submodule build_submodule(const SubmodulePlan& plan) {
  plan.validate();
  const std::size_t n = plan.p.dim();
  const int m = plan.p.degree();
  Submodule sub{plan, BasisSpec(n, plan.t, plan.ambient_degree()), {}, 0, 1.0};
  const auto N = static_cast<Eigen::Index>(sub.ambient.dim());

  std::vector<Eigen::VectorXcd> interior, band;
  for (int d = plan.l; d <= plan.B; ++d) {
    for (const auto& beta : enumerate_homogeneous(n, d)) {
      Eigen::VectorXcd g = sub.ambient.orthonormal_coordinates(plan.p * ExactPoly::monomial(beta, QComplex(1)));
      g.normalize();
      (d <= plan.B - m - 1 ? interior : band).push_back(std::move(g));
    }
  }
  auto stack = [N](const std::vector<Eigen::VectorXcd>& cols) {
    Eigen::MatrixXcd V(N, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) V.col(static_cast<Eigen::Index>(k)) = cols[k];
    return V;
  };

  double max_pivot = 0.0;
  Eigen::MatrixXcd q_int = orthonormalize(stack(interior), 0.0, sub.min_pivot_ratio, max_pivot);
  Eigen::MatrixXcd v_band = stack(band);
  if (q_int.cols() > 0) v_band -= q_int * (q_int.adjoint() * v_band);
  double band_max = 0.0;
  Eigen::MatrixXcd q_band = orthonormalize(v_band, max_pivot, sub.min_pivot_ratio, band_max);

  sub.basis.resize(N, q_int.cols() + q_band.cols());
  sub.basis << q_int, q_band;
  sub.interior_dim = static_cast<std::size_t>(q_int.cols());
  return sub;
}

OperatorMatrix submodule_projector(const SubmodulePlan& plan) {
  Submodule sub = build_submodule(plan);
  return {sub.ambient, sub.ambient, sub.projector()};
}

CompressedOperator compressed_commutator(const Submodule& sub, std::size_t i, std::size_t j) {
  const std::size_t n = sub.ambient.n();
  if (i >= n || j >= n) throw std::out_of_range("commutator coordinate out of range");
  const Eigen::MatrixXcd& Q = sub.basis;
  const Eigen::MatrixXcd Si = Q.adjoint() * ambient_shift(sub.ambient, i) * Q;
  const Eigen::MatrixXcd Sj_adj = Q.adjoint() * ambient_shift(sub.ambient, j).adjoint() * Q;
  return {Si * Sj_adj - Sj_adj * Si, sub.interior_dim};
}

OperatorMatrix cross_corner(const Submodule& sub, std::size_t j) {
  if (j >= sub.ambient.n()) throw std::out_of_range("coordinate out of range");
  const Eigen::MatrixXcd P = sub.projector();
  const auto N = P.rows();
  const Eigen::MatrixXcd corner =
      (Eigen::MatrixXcd::Identity(N, N) - P) * ambient_shift(sub.ambient, j).adjoint() * P;
  return {sub.ambient, sub.ambient, corner};
}

double submodule_distance(const ExactPoly& f, const Submodule& sub) {
  if (f.degree() > sub.ambient.max_degree()) throw std::invalid_argument("f exceeds the ambient degree");
  const Eigen::VectorXcd x = sub.ambient.orthonormal_coordinates(f);
  return (x - sub.basis * (sub.basis.adjoint() * x)).norm();
}

double kernel_orthogonality(std::span<const std::complex<double>> w, const Submodule& sub) {
  const BasisSpec& spec = sub.ambient;
  if (w.size() != spec.n()) throw DimensionMismatch("kernel point has wrong dimension");
  double norm_sq = 0.0;
  for (const auto& c : w) norm_sq += std::norm(c);
  if (norm_sq >= 1.0) throw std::invalid_argument("kernel point must lie in the open ball");
  // K_w = sum conj(w^alpha) z^alpha / ||z^alpha||^2, i.e. conj(w^alpha)/||z^alpha|| in orthonormal coordinates.
  Eigen::VectorXcd x(static_cast<Eigen::Index>(spec.dim()));
  for (std::size_t k = 0; k < spec.dim(); ++k) {
    std::complex<double> mono = 1.0;
    const MultiIndex& alpha = spec.index(k);
    for (std::size_t q = 0; q < spec.n(); ++q) {
      for (int e = 0; e < alpha[q]; ++e) mono *= w[q];
    }
    x(static_cast<Eigen::Index>(k)) = std::conj(mono) / spec.norm(k);
  }
  x.normalize();
  return (sub.basis.adjoint() * x).norm();
}

}  // namespace bergman
