#include <tkdv/rational.hpp>

#include <stdexcept>
#include <string>

namespace tkdv
{

std::string to_fraction_string(const Rational &q)
{
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

namespace
{

Integer parse_integer(std::string_view s)
{
    if (s.empty()) {
        throw std::invalid_argument("empty integer literal");
    }
    std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (start == s.size()) {
        throw std::invalid_argument("malformed integer literal");
    }
    for (std::size_t i = start; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9') {
            throw std::invalid_argument("malformed integer literal: " + std::string(s));
        }
    }
    std::string digits(s[0] == '+' ? s.substr(1) : s);
    return Integer(digits, 10);
}

} // namespace

Rational parse_fraction(std::string_view text)
{
    const auto slash = text.find('/');
    Rational out;
    if (slash == std::string_view::npos) {
        out = Rational(parse_integer(text));
    } else {
        Integer num = parse_integer(text.substr(0, slash));
        Integer den = parse_integer(text.substr(slash + 1));
        if (den == 0) {
            throw std::invalid_argument("zero denominator in " + std::string(text));
        }
        out = Rational(num, den);
        out.canonicalize();
    }
    return out;
}

Integer factorial(unsigned n)
{
    Integer r = 1;
    for (unsigned i = 2; i <= n; ++i) {
        r *= i;
    }
    return r;
}

Rational binomial(unsigned n, unsigned k)
{
    if (k > n) {
        return 0;
    }
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return Rational(r);
}

std::string to_decimal_string(const Rational &q, unsigned places)
{
    Integer scale = 1;
    for (unsigned i = 0; i < places; ++i) {
        scale *= 10;
    }
    Rational scaled = abs(q) * scale;
    // floor(scaled + 1/2) implements half-away-from-zero on the magnitude.
    Rational shifted = scaled + Rational(1, 2);
    Integer rounded;
    mpz_fdiv_q(rounded.get_mpz_t(), shifted.get_num_mpz_t(), shifted.get_den_mpz_t());

    std::string digits = rounded.get_str();
    if (digits.size() <= places) {
        digits.insert(0, places + 1 - digits.size(), '0');
    }
    std::string out;
    if (sgn(q) < 0 && rounded != 0) {
        out.push_back('-');
    }
    out += digits.substr(0, digits.size() - places);
    if (places > 0) {
        out.push_back('.');
        out += digits.substr(digits.size() - places);
    }
    return out;
}

} // namespace tkdv
