#include "bergman/rational.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace bergman {

Rational make_rational(long num, long den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

namespace {

// Grows monotonically; entries are never mutated after insertion.
struct FactorialTable {
  std::mutex mutex;
  std::vector<Integer> values{Integer(1)};
};

FactorialTable& factorial_table() {
  static FactorialTable table;
  return table;
}

}  // namespace

const Integer& factorial(int n) {
  if (n < 0) throw std::domain_error("factorial of a negative integer");
  auto& table = factorial_table();
  std::lock_guard lock(table.mutex);
  if (table.values.capacity() < 512) table.values.reserve(512);
  if (static_cast<std::size_t>(n) >= table.values.capacity()) {
    throw std::length_error("factorial table limit exceeded");
  }
  while (table.values.size() <= static_cast<std::size_t>(n)) {
    const auto k = static_cast<unsigned long>(table.values.size());
    table.values.push_back(table.values.back() * k);
  }
  // Reserved storage never reallocates, so the reference stays valid.
  return table.values[static_cast<std::size_t>(n)];
}

Integer binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  Integer result;
  mpz_bin_uiui(result.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return result;
}

Rational pow(const Rational& base, int exponent) {
  if (exponent < 0) {
    if (base == 0) throw std::domain_error("zero to a negative power");
    Rational inv = 1 / base;
    return pow(inv, -exponent);
  }
  Integer num;
  Integer den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(exponent));
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(exponent));
  Rational out(num, den);
  return out;  // already canonical: gcd(num^e, den^e) = 1
}

std::string to_string(const Rational& q) { return q.get_str(); }

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  auto dot = text.find('.');
  if (dot == std::string::npos) {
    Rational q;
    if (q.set_str(text, 10) != 0 || q.get_den() == 0) {
      throw std::invalid_argument("malformed rational literal '" + text + "'");
    }
    q.canonicalize();
    return q;
  }
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  const auto scale = text.size() - dot - 1;
  if (digits.empty() || digits == "-" || digits == "+") {
    throw std::invalid_argument("malformed decimal literal '" + text + "'");
  }
  Integer num;
  if (num.set_str(digits, 10) != 0) throw std::invalid_argument("malformed decimal literal '" + text + "'");
  Integer den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, scale);
  return make_rational(num, den);
}

double to_double(const Rational& q) { return q.get_d(); }

Rational rationalize(double x, int bits) {
  if (!std::isfinite(x)) throw std::domain_error("cannot rationalize a non-finite value");
  const double scaled = std::nearbyint(std::ldexp(x, bits));
  Integer num(scaled);
  Integer den;
  mpz_ui_pow_ui(den.get_mpz_t(), 2, static_cast<unsigned long>(bits));
  return make_rational(num, den);
}

QComplex& QComplex::operator*=(const QComplex& o) {
  Rational r = re * o.re - im * o.im;
  Rational i = re * o.im + im * o.re;
  re = std::move(r);
  im = std::move(i);
  return *this;
}

QComplex& QComplex::operator/=(const QComplex& o) {
  const Rational d = o.norm();
  if (d == 0) throw std::domain_error("complex division by zero");
  Rational r = (re * o.re + im * o.im) / d;
  Rational i = (im * o.re - re * o.im) / d;
  re = std::move(r);
  im = std::move(i);
  return *this;
}

std::string to_string(const QComplex& z) {
  if (z.is_real()) return to_string(z.re);
  if (sgn(z.re) == 0) return to_string(z.im) + "i";
  std::string out = "(" + to_string(z.re);
  if (sgn(z.im) > 0) out += "+";
  out += to_string(z.im) + "i)";
  return out;
}

}  // namespace bergman
