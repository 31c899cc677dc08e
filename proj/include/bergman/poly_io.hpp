#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "bergman/polynomial.hpp"

namespace bergman {

class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& message, std::size_t position);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Parses a polynomial literal such as "2*z1^2*z2 - (1+3i)*z3".
///
/// Grammar (whitespace is ignored):
///   expr    := [sign] term { sign term }
///   term    := power { '*' power }
///   power   := primary [ '^' digits ]
///   primary := number | 'i' | 'z' digits | '(' expr ')'
///   number  := digits [ '.' digits | '/' digits ] [ 'i' ]
/// Variables are z1..zn. Passing n = 0 infers n from the largest index used.
ExactPoly parse_poly(std::string_view text, std::size_t n = 0);

/// Canonical literal; parse_poly(format_poly(p), p.dim()) == p.
std::string format_poly(const ExactPoly& p);

/// Human-readable rendering with conj(zj) factors. Not parseable.
std::string format_mixed(const ExactMixedPoly& p);

}  // namespace bergman
