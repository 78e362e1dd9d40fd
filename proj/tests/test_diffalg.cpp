#include <cmath>
#include <vector>

#include <doctest.h>

#include <tkdv/derivation.hpp>
#include <tkdv/errors.hpp>
#include <tkdv/jet_eval.hpp>
#include <tkdv/serialize.hpp>

using namespace tkdv;

namespace
{

EpsSeries series(std::vector<DiffPoly> c, int trunc = kExact)
{
    return EpsSeries(0, std::move(c), trunc);
}

const DiffPoly K1 = w(3) + w(0) * w(1);

} // namespace

TEST_SUITE("diffalg")
{
    TEST_CASE("total derivative")
    {
        CHECK(partial(w(0)) == w(1));
        CHECK(partial(constant(1)).is_zero());
        CHECK(partial(w(0, 2)) == Rational(2) * w(0) * w(1));
        CHECK(partial(v(1) * w(2), 2) == v(3) * w(2) + Rational(2) * v(2) * w(3) + v(1) * w(4));
    }

    TEST_CASE("shift operators")
    {
        const auto e1 = exp_shift(1, w(0), 3);
        CHECK(equal_mod(e1, series({w(0), w(1), Rational(1, 2) * w(2)}), 3));
        const DiffPoly p = v(0) * w(1) + w(2, 3);
        CHECK(equal_mod(exp_shift(0, p, 6), EpsSeries(p), 6));

        // E_1 E_-1 = identity: apply E_1 coefficientwise to E_-1 w0
        const int n = 7;
        const auto inner = exp_shift(-1, w(0), n);
        EpsSeries total = EpsSeries::zero(n);
        for (int k = 0; k < n; ++k) {
            total += exp_shift(1, inner.coeff(k), n).shifted(k).truncated(n);
        }
        CHECK(equal_mod(total, EpsSeries(w(0)), n));
        CHECK(equal_mod(exp_shift(-2, w(0), 3), series({w(0), Rational(-2) * w(1), Rational(2) * w(2)}), 3));
    }

    TEST_CASE("tame derivations")
    {
        const TameDerivation d(EpsSeries(w(0)), EpsSeries::zero());
        CHECK(derive(d, v(1)) == EpsSeries(w(1)));
        CHECK(derive(d, constant(7)).is_zero());

        const TameDerivation g(EpsSeries(w(0) * w(1)), series({v(2), w(0)}));
        const auto lhs = derive(g, v(0) * w(0));
        const auto rhs = g.img_v * w(0) + g.img_w * v(0);
        CHECK(lhs == rhs);

        CHECK(commutator(g, g).is_zero());
        CHECK(commutator(translation(), g).is_zero());
        CHECK_FALSE(commutator(d, g).is_zero());
    }

    TEST_CASE("phi and its inverse")
    {
        CHECK(phi(w(0)) == series({constant(1), DiffPoly(), w(0)}));
        CHECK(phi(v(0) + constant(2)) == EpsSeries::monomial(2, v(0)));
        CHECK(phi_inv(phi(v(0) * w(1))) == EpsSeries(v(0) * w(1)));
        const DiffPoly p = v(0, 2) * w(0) - Rational(3) * v(1) * w(2) + w(0, 3) + constant(5);
        CHECK(phi_inv(phi(p)) == EpsSeries(p));
        const auto s = series({w(1) * v(0), DiffPoly(), Rational(1, 2) * v(0) * w(0, 2)});
        CHECK(phi(phi_inv(s)) == s);
        // v0 -> (v0 + 2)/eps^2: the constant part carries eps^-2 as well
        CHECK(phi_inv(EpsSeries(v(0))) == EpsSeries(-2, {v(0) + constant(2)}, kExact));
        CHECK(conjugate(TameDerivation()).is_zero());
        // only the eps-polynomial part of an inexact series is invertible
        CHECK_THROWS(phi_inv(EpsSeries(w(0), 4)));
    }

    TEST_CASE("sigma substitution")
    {
        const EpsSeries q0(w(0));
        CHECK(substitute_sigma(q0, EpsSeries(v(0) - w(0))).is_zero());
        const EpsSeries q = series({w(0), Rational(-1, 2) * w(1), w(0, 2)});
        CHECK(substitute_sigma(q, EpsSeries(v(1))) == partial(q));
        CHECK(substitute_sigma(q, EpsSeries(v(0) * w(0))) == q * w(0));
    }

    TEST_CASE("variational derivative")
    {
        CHECK(var_derivative(Rational(1, 2) * w(0, 2)) == w(0));
        CHECK(var_derivative(w(0) * w(1)).is_zero());
        CHECK(var_derivative(K1).is_zero());
        CHECK(var_derivative(w(1, 2)) == Rational(-2) * w(2));
    }

    TEST_CASE("antiderivative")
    {
        CHECK(antiderivative(w(1)) == w(0));
        CHECK(antiderivative(w(0) * w(1)) == Rational(1, 2) * w(0, 2));
        CHECK(antiderivative(K1) == w(2) + Rational(1, 2) * w(0, 2));
        CHECK_THROWS_AS(antiderivative(w(0, 2)), NotExact);
    }

    TEST_CASE("weights")
    {
        CHECK_FALSE(weight_profile(K1).has_value());
        CHECK(combined_weight(K1) == 5u);
        CHECK(weight_profile(w(0)) == WeightProfile{0, 1, 0});
        CHECK(weight_profile(v(1) * w(2)) == WeightProfile{1, 1, 3});
        CHECK_FALSE(combined_weight(w(0) + w(1)).has_value());
    }

    TEST_CASE("jet evaluation")
    {
        const std::vector<double> none;
        const std::vector<double> square = {0, 0, 2};
        CHECK(eval_poly<double, double>(w(2), none, square) == 2.0);
        CHECK_THROWS_AS((eval_poly<double, double>(w(3), none, square)), JetTooShort);
        CHECK(jet_eval<double, double>(EpsSeries::monomial(1, w(1)), none, square, 0.0, 4) == 0.0);

        // E_1 w0 at g = e^x is a Taylor polynomial of e^h
        const int n = 8;
        const std::vector<double> ex(n, 1.0);
        const double h = 0.1;
        const double approx = jet_eval<double, double>(exp_shift(1, w(0), n), none, ex, h, n);
        CHECK(std::abs(approx - std::exp(h)) <= std::exp(h) * std::pow(h, n) / 40320.0);
        CHECK(std::abs(approx - std::exp(h)) > 0);
    }

    TEST_CASE("serialization round trip")
    {
        const auto s = series({K1, DiffPoly(), Rational(-3, 7) * v(2) * w(0, 2)}, 5);
        CHECK(eps_series_from_json(to_json(s)) == s);
        CHECK(parse_fraction(to_fraction_string(Rational(-22, 6))) == Rational(-11, 3));
    }
}
