#include "shadowlp/rational.hpp"

#include <cmath>
#include <stdexcept>

#include "shadowlp/matrix.hpp"

namespace shadowlp {

namespace {

bool is_integer_token(std::string_view s) {
  if (s.empty()) return false;
  std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (start == s.size()) return false;
  for (std::size_t i = start; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  return true;
}

Integer parse_integer(std::string_view s) {
  std::string text(s);
  if (!text.empty() && text[0] == '+') text.erase(0, 1);
  return Integer(text);
}

}  // namespace

Rational parse_rational(std::string_view token) {
  auto slash = token.find('/');
  if (slash == std::string_view::npos) {
    if (!is_integer_token(token)) throw std::invalid_argument("not a rational: '" + std::string(token) + "'");
    return Rational(parse_integer(token));
  }
  auto num = token.substr(0, slash);
  auto den = token.substr(slash + 1);
  if (!is_integer_token(num) || !is_integer_token(den) || den[0] == '-' || den[0] == '+')
    throw std::invalid_argument("not a rational: '" + std::string(token) + "'");
  Integer d = parse_integer(den);
  if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(token) + "'");
  return Rational(parse_integer(num), d);
}

std::string to_string(const Rational& value) {
  if (denominator(value) == 1) return numerator(value).str();
  return numerator(value).str() + "/" + denominator(value).str();
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

Rational exact_rational(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite value has no rational form");
  Rational r;
  mpq_set_d(r.backend().data(), value);
  return r;
}

RealVector to_double(const RationalVector& values) {
  RealVector out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = to_double(values[i]);
  return out;
}

RationalVector exact_rational(const RealVector& values) {
  RationalVector out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = exact_rational(values[i]);
  return out;
}

bool is_integral(const Rational& value) { return denominator(value) == 1; }

std::size_t bit_length(const Integer& value) {
  if (value == 0) return 0;
  return mpz_sizeinbase(value.backend().data(), 2);
}

double norm(const RealVector& v) { return std::sqrt(dot(v, v)); }

RealMatrix to_double(const RationalMatrix& m) {
  RealMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = to_double(m(i, j));
  return out;
}

RationalMatrix exact_rational(const RealMatrix& m) {
  RationalMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = exact_rational(m(i, j));
  return out;
}

}  // namespace shadowlp
