#include "bergman/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include <Eigen/SVD>

namespace bergman {

std::size_t SingularSpectrum::clean_count() const {
  return static_cast<std::size_t>(std::count(contaminated.begin(), contaminated.end(), false));
}

namespace {

void require_finite(const Eigen::MatrixXcd& m) {
  if (!m.allFinite()) throw std::invalid_argument("matrix has non-finite entries");
}

}  // namespace

SingularSpectrum singular_values(const Eigen::MatrixXcd& m, std::string source) {
  require_finite(m);
  SingularSpectrum s;
  s.source = std::move(source);
  if (m.size() == 0) return s;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
  const Eigen::VectorXd v = svd.singularValues();
  s.values.assign(v.data(), v.data() + v.size());
  s.contaminated.assign(s.values.size(), false);
  return s;
}

SingularSpectrum singular_values(const OperatorMatrix& m, std::string source) {
  return singular_values(m.entries, std::move(source));
}

SingularSpectrum singular_values(const CompressedOperator& c, std::string source) {
  require_finite(c.entries);
  SingularSpectrum s;
  s.source = std::move(source);
  if (c.entries.size() == 0) return s;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(c.entries, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd v = svd.singularValues();
  const auto k = static_cast<Eigen::Index>(c.interior_dim);
  const auto band = c.entries.rows() - k;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    s.values.push_back(v(i));
    const double left = svd.matrixU().col(i).tail(band).squaredNorm();
    const double right = svd.matrixV().col(i).tail(band).squaredNorm();
    s.contaminated.push_back(std::max(left, right) > 0.5);
  }
  return s;
}

SingularSpectrum interior_singular_values(const CompressedOperator& c, std::string source) {
  return singular_values(c.interior_block(), std::move(source));
}

double schatten_norm(const SingularSpectrum& s, double q, bool include_contaminated) {
  if (!(q > 0)) throw std::invalid_argument("Schatten exponent must be positive");
  double best = 0.0;
  double sum = 0.0;
  for (std::size_t k = 0; k < s.values.size(); ++k) {
    if (s.contaminated[k] && !include_contaminated) continue;
    best = std::max(best, s.values[k]);
    sum += std::pow(s.values[k], q);
  }
  if (std::isinf(q)) return best;
  return std::pow(sum, 1.0 / q);
}

std::vector<double> default_schatten_grid(std::size_t n) {
  const double d = static_cast<double>(n);
  return {d, d + 0.5, d + 1.0, 2.0 * d};
}

nlohmann::json DecayReport::to_json() const {
  return {{"labels", labels},     {"top_k", top_k},       {"relative_change", relative_change},
          {"exponents", exponents}, {"schatten", schatten}, {"non_stabilizing", non_stabilizing},
          {"tolerance", tolerance}};
}

DecayReport decay_report(const std::vector<SingularSpectrum>& series, const std::vector<double>& labels,
                         std::size_t top_k, const std::vector<double>& exponents, double tolerance) {
  if (series.size() < 2) throw std::invalid_argument("decay report needs at least two spectra");
  if (labels.size() != series.size()) throw std::invalid_argument("one label per spectrum is required");
  DecayReport r;
  r.labels = labels;
  r.exponents = exponents;
  r.tolerance = tolerance;
  std::size_t available = top_k;
  for (const auto& s : series) available = std::min(available, s.values.size());
  r.top_k = available;

  for (std::size_t step = 0; step + 1 < series.size(); ++step) {
    std::vector<double> change(available);
    for (std::size_t k = 0; k < available; ++k) {
      const double a = series[step].values[k];
      const double b = series[step + 1].values[k];
      const double scale = std::max(std::abs(a), std::abs(b));
      change[k] = scale == 0.0 ? 0.0 : std::abs(b - a) / scale;
    }
    r.relative_change.push_back(std::move(change));
  }
  for (const auto& s : series) {
    std::vector<double> row;
    for (double q : exponents) row.push_back(schatten_norm(s, q));
    r.schatten.push_back(std::move(row));
  }
  for (std::size_t k = 0; k < available; ++k) {
    if (r.relative_change.back()[k] > tolerance) r.non_stabilizing.push_back(k);
  }
  return r;
}

void write_spectrum_csv(std::ostream& out, const SingularSpectrum& s) {
  out << "index,value,contaminated\n";
  out.precision(17);
  for (std::size_t k = 0; k < s.values.size(); ++k) {
    out << k << ',' << s.values[k] << ',' << (s.contaminated[k] ? 1 : 0) << '\n';
  }
}

}  // namespace bergman
