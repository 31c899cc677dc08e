#include <array>
#include <bit>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "bergman/operators.hpp"

namespace bergman {

namespace {

constexpr std::array<char, 4> kMagic{'B', 'G', 'M', 'X'};

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> bytes;
  for (std::size_t i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(bytes.data(), 8);
}

std::uint64_t get_u64(std::istream& in) {
  std::array<unsigned char, 8> bytes;
  if (!in.read(reinterpret_cast<char*>(bytes.data()), 8)) throw std::runtime_error("truncated matrix file");
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return v;
}

}  // namespace

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXcd& m) {
  const auto old = out.precision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << m(i, j).real() << ',' << m(i, j).imag();
    }
    out << '\n';
  }
  out.precision(old);
}

void write_matrix_binary(std::ostream& out, const Eigen::MatrixXcd& m) {
  out.write(kMagic.data(), kMagic.size());
  put_u64(out, static_cast<std::uint64_t>(m.rows()));
  put_u64(out, static_cast<std::uint64_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      put_u64(out, std::bit_cast<std::uint64_t>(m(i, j).real()));
      put_u64(out, std::bit_cast<std::uint64_t>(m(i, j).imag()));
    }
  }
}

Eigen::MatrixXcd read_matrix_binary(std::istream& in) {
  std::array<char, 4> magic;
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) throw std::runtime_error("not a matrix file");
  const std::uint64_t rows = get_u64(in), cols = get_u64(in);
  if (rows > (1u << 20) || cols > (1u << 20)) throw std::runtime_error("implausible matrix dimensions");
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double re = std::bit_cast<double>(get_u64(in));
      const double im = std::bit_cast<double>(get_u64(in));
      m(i, j) = {re, im};
    }
  }
  return m;
}

}  // namespace bergman
