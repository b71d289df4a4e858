#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace shadowlp {

/// Exact rational scalar (GMP backed).
using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

using RationalVector = std::vector<Rational>;
using RealVector = std::vector<double>;

/// Parses "p/q" or "p" (optional sign). Throws std::invalid_argument.
Rational parse_rational(std::string_view token);

/// Canonical reduced form: "p" when the denominator is 1, else "p/q".
std::string to_string(const Rational& value);

double to_double(const Rational& value);

/// Every finite double is a dyadic rational; this conversion is exact.
Rational exact_rational(double value);

RealVector to_double(const RationalVector& values);
RationalVector exact_rational(const RealVector& values);

bool is_integral(const Rational& value);

/// Number of bits of |v| in binary, 0 for v == 0.
std::size_t bit_length(const Integer& value);

inline Rational dot(const RationalVector& a, const RationalVector& b) {
  Rational sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

inline double dot(const RealVector& a, const RealVector& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

double norm(const RealVector& v);

}  // namespace shadowlp
