#include "bergman/poly_io.hpp"

#include <cctype>

namespace bergman {

ParseError::ParseError(const std::string& message, std::size_t position)
    : std::invalid_argument(message + " at offset " + std::to_string(position)), position_(position) {}

namespace {

std::size_t max_variable_index(std::string_view text) {
  std::size_t best = 0;
  for (std::size_t k = 0; k < text.size(); ++k) {
    if (text[k] != 'z') continue;
    std::size_t v = 0;
    std::size_t m = k + 1;
    while (m < text.size() && std::isdigit(static_cast<unsigned char>(text[m]))) {
      v = v * 10 + static_cast<std::size_t>(text[m] - '0');
      ++m;
    }
    best = std::max(best, v);
  }
  return best;
}

class Parser {
 public:
  Parser(std::string_view text, std::size_t n) : text_(text), n_(n) {}

  ExactPoly parse() {
    ExactPoly p = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::string digits() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected digits");
    return std::string(text_.substr(start, pos_ - start));
  }

  ExactPoly expr() {
    ExactPoly sum(n_);
    bool negative = false;
    if (accept('-')) {
      negative = true;
    } else {
      accept('+');
    }
    ExactPoly t = term();
    sum += negative ? -t : t;
    while (true) {
      if (accept('+')) {
        sum += term();
      } else if (accept('-')) {
        sum -= term();
      } else {
        break;
      }
    }
    return sum;
  }

  ExactPoly term() {
    ExactPoly product = power();
    while (accept('*')) product = product * power();
    return product;
  }

  ExactPoly power() {
    ExactPoly base = primary();
    if (!accept('^')) return base;
    skip_space();
    const std::string e = digits();
    if (e.size() > 4) fail("exponent too large");
    const int exponent = std::stoi(e);
    ExactPoly out = ExactPoly::constant(n_, QComplex(1));
    for (int k = 0; k < exponent; ++k) out = out * base;
    return out;
  }

  ExactPoly primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      ExactPoly inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (c == 'i') {
      ++pos_;
      return ExactPoly::constant(n_, QComplex(Rational(0), Rational(1)));
    }
    if (c == 'z') {
      ++pos_;
      const std::size_t at = pos_;
      const std::string idx = digits();
      const std::size_t j = std::stoul(idx);
      if (j == 0 || j > n_) throw ParseError("variable z" + idx + " outside z1..z" + std::to_string(n_), at);
      return ExactPoly::variable(n_, j - 1);
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return ExactPoly::constant(n_, number());
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  QComplex number() {
    std::string literal = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      literal += "." + digits();
    } else if (pos_ < text_.size() && text_[pos_] == '/') {
      ++pos_;
      const std::string den = digits();
      if (den.find_first_not_of('0') == std::string::npos) fail("zero denominator");
      literal += "/" + den;
    }
    Rational value = parse_rational(literal);
    if (pos_ < text_.size() && text_[pos_] == 'i') {
      ++pos_;
      return {Rational(0), value};
    }
    return QComplex(value);
  }

  std::string_view text_;
  std::size_t n_;
  std::size_t pos_ = 0;
};

std::string monomial_text(const MultiIndex& alpha, bool conjugate) {
  std::string out;
  for (std::size_t j = 0; j < alpha.size(); ++j) {
    if (alpha[j] == 0) continue;
    if (!out.empty()) out += "*";
    const std::string var = "z" + std::to_string(j + 1);
    out += conjugate ? "conj(" + var + ")" : var;
    if (alpha[j] > 1) out += "^" + std::to_string(alpha[j]);
  }
  return out;
}

/// Splits c into a sign and a magnitude so that negative reals and negative
/// imaginaries print as subtraction.
std::pair<bool, QComplex> split_sign(const QComplex& c) {
  if (c.is_real() && sgn(c.re) < 0) return {true, -c};
  if (sgn(c.re) == 0 && sgn(c.im) < 0) return {true, -c};
  return {false, c};
}

std::string coefficient_text(const QComplex& magnitude, bool has_monomial) {
  if (has_monomial && magnitude == QComplex(1)) return {};
  std::string body;
  if (sgn(magnitude.re) == 0 && magnitude.im == 1) {
    body = "i";
  } else {
    body = to_string(magnitude);
  }
  return has_monomial ? body + "*" : body;
}

template <class Terms, class MonomialFn>
std::string join_terms(const Terms& terms, MonomialFn monomial) {
  if (terms.empty()) return "0";
  std::string out;
  bool first = true;
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
    const auto [negative, magnitude] = split_sign(it->second);
    const std::string mono = monomial(it->first);
    const std::string body = coefficient_text(magnitude, !mono.empty()) + mono;
    if (first) {
      out += negative ? "-" + body : body;
      first = false;
    } else {
      out += (negative ? " - " : " + ") + body;
    }
  }
  return out;
}

}  // namespace

ExactPoly parse_poly(std::string_view text, std::size_t n) {
  const std::size_t used = max_variable_index(text);
  if (n == 0) n = std::max<std::size_t>(used, 1);
  return Parser(text, n).parse();
}

std::string format_poly(const ExactPoly& p) {
  return join_terms(p.terms(), [](const MultiIndex& alpha) { return monomial_text(alpha, false); });
}

std::string format_mixed(const ExactMixedPoly& p) {
  return join_terms(p.terms(), [](const ExactMixedPoly::Key& key) {
    std::string a = monomial_text(key.first, false);
    std::string b = monomial_text(key.second, true);
    if (!a.empty() && !b.empty()) return a + "*" + b;
    return a + b;
  });
}

}  // namespace bergman
