#include "bergman/multi_index.hpp"

#include <numeric>
#include <stdexcept>

namespace bergman {

namespace {

int checked_degree(const std::vector<int>& e) {
  int total = 0;
  for (int v : e) {
    if (v < 0) throw std::invalid_argument("multi-index entries must be non-negative");
    total += v;
  }
  return total;
}

void append_homogeneous(std::size_t n, int degree, std::vector<int>& prefix, std::vector<MultiIndex>& out) {
  if (prefix.size() + 1 == n) {
    prefix.push_back(degree);
    out.emplace_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int first = degree; first >= 0; --first) {
    prefix.push_back(first);
    append_homogeneous(n, degree - first, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

MultiIndex::MultiIndex(std::initializer_list<int> exponents)
    : exponents_(exponents), degree_(checked_degree(exponents_)) {}

MultiIndex::MultiIndex(std::vector<int> exponents)
    : exponents_(std::move(exponents)), degree_(checked_degree(exponents_)) {}

MultiIndex MultiIndex::unit(std::size_t n, std::size_t j) {
  if (j >= n) throw std::out_of_range("unit index coordinate out of range");
  MultiIndex e(n);
  e.exponents_[j] = 1;
  e.degree_ = 1;
  return e;
}

Integer MultiIndex::factorial() const {
  Integer out = 1;
  for (int v : exponents_) out *= bergman::factorial(v);
  return out;
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  if (other.size() != size()) throw std::invalid_argument("multi-index dimension mismatch");
  MultiIndex out = *this;
  for (std::size_t j = 0; j < size(); ++j) out.exponents_[j] += other.exponents_[j];
  out.degree_ += other.degree_;
  return out;
}

MultiIndex MultiIndex::lowered(std::size_t j) const {
  if (j >= size() || exponents_[j] == 0) throw std::domain_error("cannot lower a zero exponent");
  MultiIndex out = *this;
  --out.exponents_[j];
  --out.degree_;
  return out;
}

MultiIndex MultiIndex::raised(std::size_t j) const {
  if (j >= size()) throw std::out_of_range("coordinate out of range");
  MultiIndex out = *this;
  ++out.exponents_[j];
  ++out.degree_;
  return out;
}

std::string MultiIndex::to_string() const {
  std::string out = "(";
  for (std::size_t j = 0; j < exponents_.size(); ++j) {
    if (j) out += ",";
    out += std::to_string(exponents_[j]);
  }
  return out + ")";
}

bool operator<(const MultiIndex& a, const MultiIndex& b) {
  if (a.degree_ != b.degree_) return a.degree_ < b.degree_;
  // Within a degree the lexicographically larger vector comes first.
  return b.exponents_ < a.exponents_;
}

std::size_t MultiIndexHash::operator()(const MultiIndex& a) const noexcept {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (int v : a.exponents()) {
    h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

std::vector<MultiIndex> enumerate_homogeneous(std::size_t n, int degree) {
  if (n == 0) throw std::invalid_argument("dimension must be at least one");
  if (degree < 0) return {};
  std::vector<MultiIndex> out;
  std::vector<int> prefix;
  prefix.reserve(n);
  append_homogeneous(n, degree, prefix, out);
  return out;
}

std::vector<MultiIndex> enumerate_multi_indices(std::size_t n, int max_degree) {
  if (n == 0) throw std::invalid_argument("dimension must be at least one");
  if (max_degree < 0) throw std::invalid_argument("maximum degree must be non-negative");
  std::vector<MultiIndex> out;
  for (int d = 0; d <= max_degree; ++d) {
    auto layer = enumerate_homogeneous(n, d);
    out.insert(out.end(), std::make_move_iterator(layer.begin()), std::make_move_iterator(layer.end()));
  }
  return out;
}

}  // namespace bergman
