#include "bvc/rational.hpp"

#include "bvc/errors.hpp"

#include <cctype>
#include <cmath>

namespace bvc {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

// "[+-]?digits", no whitespace, no empty digit run.
BigInt parse_integer(std::string_view text, std::string_view original) {
  bool negative = false;
  std::string_view digits = text;
  if (!digits.empty() && (digits.front() == '+' || digits.front() == '-')) {
    negative = digits.front() == '-';
    digits.remove_prefix(1);
  }
  if (!all_digits(digits)) {
    throw ParseError("not a rational: \"" + std::string(original) + "\"");
  }
  // GMP's string constructor takes an optional '-' but not '+'.
  BigInt value{std::string(digits)};
  return negative ? BigInt(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    return Rational(parse_integer(text, text), BigInt(1));
  }
  BigInt num = parse_integer(text.substr(0, slash), text);
  BigInt den = parse_integer(text.substr(slash + 1), text);
  if (den == 0) {
    throw ParseError("zero denominator: \"" + std::string(text) + "\"");
  }
  // The mpz pair constructor canonicalizes: lowest terms, denominator > 0.
  return Rational(num, den);
}

std::string to_string(const Rational& value) { return value.str(); }

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) {
    throw ParseError("non-finite value has no rational form");
  }
  return Rational(x);  // exact: doubles are dyadic
}

Rational round_to_denominator(const Rational& x, const BigInt& max_den) {
  if (max_den < 1) {
    throw ParameterOutOfRange("denominator bound must be >= 1");
  }
  if (denominator(x) <= max_den) return x;
  if (x < 0) return -round_to_denominator(Rational(-x), max_den);

  // Walk the continued-fraction convergents p/q of x until q would exceed
  // the bound, then compare the last admissible convergent with the best
  // semiconvergent. One of the two is the closest approximation.
  BigInt n = numerator(x), d = denominator(x);
  BigInt p_prev = 0, q_prev = 1;  // convergent -2
  BigInt p = 1, q = 0;            // convergent -1
  while (true) {
    BigInt a = n / d;  // n, d > 0 here, so truncation is floor
    BigInt p_next = a * p + p_prev;
    BigInt q_next = a * q + q_prev;
    if (q_next > max_den) {
      // Best semiconvergent under the bound on top of (p, q).
      BigInt t = (max_den - q_prev) / q;
      Rational semi(t * p + p_prev, t * q + q_prev);
      Rational conv(p, q);
      Rational err_semi = abs(Rational(semi - x));
      Rational err_conv = abs(Rational(conv - x));
      if (err_semi < err_conv) return semi;
      if (err_conv < err_semi) return conv;
      return denominator(conv) <= denominator(semi) ? conv : semi;
    }
    p_prev = p;
    q_prev = q;
    p = p_next;
    q = q_next;
    BigInt r = n - a * d;
    if (r == 0) return Rational(p, q);  // exact terminating expansion
    n = d;
    d = r;
  }
}

Rational round_to_denominator(double x, std::uint64_t max_den) {
  return round_to_denominator(rational_from_double(x), BigInt(max_den));
}

}  // namespace bvc
