#include <doctest.h>

#include <tkdv/hierarchy.hpp>
#include <tkdv/linalg.hpp>
#include <tkdv/serialize.hpp>

using namespace tkdv;

namespace
{

EpsSeries series(std::vector<DiffPoly> c, int trunc = kExact)
{
    return EpsSeries(0, std::move(c), trunc);
}

const LatticePoly one(Rational(1));

} // namespace

TEST_SUITE("lattice")
{
    TEST_CASE("Toda T1")
    {
        const auto t1 = toda_generator(1);
        CHECK(lattice_derive(t1, X(0)) == Y(-1) - Y(0));
        CHECK(lattice_derive(t1, Y(0)) == Y(0) * (X(0) - X(1)));
        CHECK(lattice_derive(t1, one).is_zero());
        CHECK(lattice_derive(t1, X(3)) == Y(2) - Y(3));
    }

    TEST_CASE("T2 + 2 T1 closed form")
    {
        const auto psi = toda_generator(2) + Rational(2) * toda_generator(1);
        const LatticePoly px = X(-1) * Y(-1) + X(0) * Y(-1) + Rational(2) * Y(-1) - X(0) * Y(0) - X(1) * Y(0)
                               - Rational(2) * Y(0);
        const LatticePoly py = Y(0) * (Y(-1) + X(0, 2) + Rational(2) * X(0) - X(1, 2) - Rational(2) * X(1) - Y(1));
        CHECK(psi.p1 == px);
        CHECK(psi.p2 == py);
        CHECK(psi == quadratic_pair_closed_form());
        CHECK(slow_pair() == psi);
    }

    TEST_CASE("lattice brackets")
    {
        const auto t1 = toda_generator(1), t2 = toda_generator(2), t3 = toda_generator(3);
        CHECK(lattice_bracket(t1, t1).is_zero());
        CHECK(lattice_bracket(t1, t2).is_zero());
        CHECK(lattice_bracket(t2, t3).is_zero());
        const auto control = lattice_bracket(t1, LatticePair{X(0), LatticePoly()});
        CHECK(control.p1 == Y(-1) - Y(0));
        CHECK(control.p2 == X(1) * Y(0) - X(0) * Y(0));
    }

    TEST_CASE("lattice to eps")
    {
        const int n = 5;
        const auto d = toda_to_eps(toda_generator(1), n);
        CHECK(equal_mod(d.img_v,
                        series({DiffPoly(), -w(1), Rational(1, 2) * w(2), Rational(-1, 6) * w(3), Rational(1, 24) * w(4)}),
                        n));
        CHECK(equal_mod(d.img_w,
                        series({DiffPoly(), -v(1) * w(0), Rational(-1, 2) * v(2) * w(0), Rational(-1, 6) * v(3) * w(0),
                                Rational(-1, 24) * v(4) * w(0)}),
                        n));
        CHECK(toda_to_eps(LatticePair{}, n).is_zero());
        CHECK(lattice_to_eps(one, n) == EpsSeries(constant(1), n));
    }

    TEST_CASE("induced Toda derivations commute")
    {
        const int n = 7;
        CHECK(commutator(toda_to_eps(toda_generator(1), n), toda_to_eps(toda_generator(2), n)).truncated(n).is_zero());
    }
}

TEST_SUITE("hierarchy")
{
    TEST_CASE("KdV generators")
    {
        const auto k1 = kdv_generator(1), k2 = kdv_generator(2), k3 = kdv_generator(3);
        CHECK(k1 == w(3) + w(0) * w(1));
        // u_t = u5 + 10 u u3 + 20 u1 u2 + 30 u^2 u1 is the flow after u_t = u3 + 6 u u1; rescale u -> u/6
        CHECK(k2 == w(5) + Rational(5, 3) * w(0) * w(3) + Rational(10, 3) * w(1) * w(2) + Rational(5, 6) * w(0, 2) * w(1));
        CHECK(r0_bracket(k1, k2).is_zero());
        CHECK(r0_bracket(k2, k3).is_zero());
        CHECK(r0_bracket(k1, k3).is_zero());
        CHECK(r0_bracket(k2, k2).is_zero());
        for (unsigned n = 1; n <= 4; ++n) {
            CHECK(r0_bracket(w(1), kdv_generator(n)).is_zero());
            CHECK(combined_weight(kdv_generator(n)) == 2 * n + 3);
        }
        CHECK_FALSE(r0_bracket(k1, w(0, 2)).is_zero());
    }

    TEST_CASE("nonlinearity coefficient")
    {
        const Rational lam(12);
        CHECK(kdv_generator(1, lam) == w(3) + lam * w(0) * w(1));
        CHECK(r0_bracket(kdv_generator(1, lam), kdv_generator(2, lam)).is_zero());
        // K_n(lambda) is K_n(1) after w -> lambda w, divided by lambda
        const auto k2 = kdv_generator(2, lam);
        CHECK(k2 == w(5) + Rational(20) * w(0) * w(3) + Rational(40) * w(1) * w(2) + Rational(120) * w(0, 2) * w(1));
    }

    TEST_CASE("slow generator")
    {
        const int n = 6;
        const auto s = slow_generator(n);
        CHECK(s.img_v.coeff(0) == v(1) - w(1));
        CHECK(s.img_w.coeff(0) == w(1) - v(1));
        CHECK(s.img_v.valuation() == 0);
        const auto reduced = substitute_sigma(EpsSeries(w(0)), derive(s, v(0) - w(0)), n);
        CHECK(reduced.valuation() >= 1);
    }

    TEST_CASE("flow generators")
    {
        const int n = 6;
        const auto f1 = flow_generator(1, n), f2 = flow_generator(2, n);
        CHECK(f1.img_v.coeff(0) == -w(1));
        CHECK(equal_mod(conjugated_flow(1, n).img_v.divide_by_eps(), f1.img_v, n - 1));
        CHECK(commutator(f1, f2).truncated(n - 1).is_zero());
        CHECK(derive(f1, constant(3)).is_zero());
        CHECK(derive(f2, constant(3)).is_zero());
    }

    TEST_CASE("row reduction")
    {
        CHECK(rank({w(1), w(3) + w(0) * w(1), Rational(2) * w(1)}) == 2);
        CHECK(same_span({w(1), w(3)}, {w(1) + w(3), w(1) - w(3)}));
        CHECK_FALSE(same_span({w(1)}, {w(3)}));
    }
}
