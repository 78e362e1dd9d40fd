#ifndef TKDV_RATIONAL_HPP
#define TKDV_RATIONAL_HPP

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace tkdv
{

/// Exact rational with unbounded numerator/denominator, always kept reduced.
using Rational = mpq_class;
using Integer = mpz_class;

/// Canonical "num/den" rendering (denominator always present, "0/1" for zero).
std::string to_fraction_string(const Rational &q);

/// Parses "num/den" or "num". Throws std::invalid_argument on malformed input.
Rational parse_fraction(std::string_view text);

Integer factorial(unsigned n);

Rational binomial(unsigned n, unsigned k);

/// Fixed-point decimal rendering with `places` digits, rounding half away from zero.
std::string to_decimal_string(const Rational &q, unsigned places);

inline bool is_zero(const Rational &q)
{
    return sgn(q) == 0;
}

} // namespace tkdv

#endif
