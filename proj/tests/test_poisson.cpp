#include <random>

#include <doctest.h>

#include <tkdv/poisson.hpp>

using namespace tkdv;

namespace
{

bool all_pass(const std::vector<PoissonCheck> &cs)
{
    bool ok = !cs.empty();
    for (const auto &c : cs) {
        INFO(c.suite << ": " << c.name << " " << c.witness);
        CHECK(c.pass);
        ok = ok && c.pass;
    }
    return ok;
}

const PoissonCheck &find(const std::vector<PoissonCheck> &cs, const std::string &part)
{
    for (const auto &c : cs) {
        if (c.name.find(part) != std::string::npos) {
            return c;
        }
    }
    throw std::runtime_error("no check named " + part);
}

PoissonPoly jacobiator(const CyclicPoissonAlgebra &a, const PoissonPoly &x, const PoissonPoly &y, const PoissonPoly &z)
{
    return a.bracket(x, a.bracket(y, z)) + a.bracket(y, a.bracket(z, x)) + a.bracket(z, a.bracket(x, y));
}

} // namespace

TEST_SUITE("poisson")
{
    TEST_CASE("cyclotomic arithmetic")
    {
        const auto z = Cyclotomic::zeta_power(5, 1);
        CHECK(Cyclotomic::zeta_power(5, 5) == Cyclotomic(1));
        CHECK(z * Cyclotomic::zeta_power(5, 4) == Cyclotomic(1));
        Cyclotomic sum;
        for (int k = 0; k < 5; ++k) {
            sum += Cyclotomic::zeta_power(5, k);
        }
        CHECK(sum.is_zero());
        CHECK(Cyclotomic::zeta_power(5, -1) == Cyclotomic::zeta_power(5, 4));
        CHECK_THROWS(Cyclotomic::zeta_power(6, 1));
        CHECK(is_prime(7));
        CHECK_FALSE(is_prime(9));
    }

    TEST_CASE("structure brackets")
    {
        const CyclicPoissonAlgebra p1(5, BracketId::P1), p2(5, BracketId::P2);
        CHECK(p2.bracket(p2.A(0), p2.A(2)).is_zero());
        CHECK(p2.bracket(p2.A(0), p2.B(3)).is_zero());
        CHECK(p1.bracket(p1.B(0), p1.A(0)) == Cyclotomic(-2) * p1.B(0));
        CHECK(p1.bracket(p1.A(0), p1.B(0)) == Cyclotomic(2) * p1.B(0));

        std::mt19937_64 rng(7);
        std::uniform_int_distribution<int> pick(0, 9);
        for (int t = 0; t < 10; ++t) {
            const auto gens = p2.generators();
            const PoissonPoly x = gens[static_cast<std::size_t>(pick(rng))] * gens[static_cast<std::size_t>(pick(rng))]
                                  + Cyclotomic(3) * gens[static_cast<std::size_t>(pick(rng))];
            CHECK(p2.bracket(x, x).is_zero());
            CHECK(p1.bracket(x, x).is_zero());
        }
        const CyclicPoissonAlgebra p2n4(4, BracketId::P2);
        CHECK(p2n4.bracket(p2n4.A(0), p2n4.A(2)).is_zero());
    }

    TEST_CASE("Jacobi identity")
    {
        const CyclicPoissonAlgebra p1(5, BracketId::P1), p2(5, BracketId::P2);
        CHECK(jacobiator(p2, p2.A(0), p2.A(1), p2.A(2)).is_zero());
        CHECK(jacobiator(p2, p2.B(0), p2.A(1), p2.B(1)).is_zero());
        CHECK(jacobiator(p1, p1.A(0) * p1.B(1), p1.B(0), p1.A(4) * p1.A(4)).is_zero());
        CHECK(all_pass(jacobi_check(p1, 30, 1)));
        CHECK(all_pass(jacobi_check(p2, 30, 1)));
        CHECK(all_pass(derivation_check(p2, 30, 2)));
        CHECK(all_pass(jacobi_check(CyclicPoissonAlgebra(5, BracketId::P2, true), 20, 3)));
    }

    TEST_CASE("Casimir")
    {
        for (int n : {3, 5}) {
            CAPTURE(n);
            const auto cs = casimir_check(n);
            CHECK(find(cs, "under modified P2").pass);
            CHECK(find(cs, "prod(B_k) under raw P2").pass);
            CHECK(find(cs, "control: raw P1").pass);
        }
    }

    TEST_CASE("Fourier identities")
    {
        const auto cs = fourier_identity_check(5);
        const auto &printed = find(cs, "(1 - z^n)");
        CHECK_FALSE(printed.pass);
        CHECK(find(cs, "(1 - z^-n)").pass);
        CHECK(find(cs, "{A^_n,A^_m}").pass);
        CHECK(find(cs, "{B^_n,A^_m}").pass);
        CHECK(find(cs, "{B^_n,B^_m}").pass);

        const CyclicPoissonAlgebra p2(5, BracketId::P2);
        for (int n = 0; n < 5; ++n) {
            CHECK(p2.bracket(p2.A_hat(n), p2.A_hat(n)).is_zero());
        }
    }

    TEST_CASE("Hamiltonian flow")
    {
        for (int n : {3, 4, 5, 6}) {
            CAPTURE(n);
            CHECK(all_pass(hamiltonian_check(n)));
        }
        const CyclicPoissonAlgebra p2(4, BracketId::P2);
        const auto t1 = toda_generator(1);
        PoissonPoly h;
        for (int k = 0; k < 4; ++k) {
            h -= p2.A(k);
        }
        for (int k = 0; k < 4; ++k) {
            CHECK(p2.bracket(p2.A(k), h) == p2.from_lattice(t1.p1, k));
            CHECK(p2.bracket(p2.B(k), h) == p2.from_lattice(t1.p2, k));
        }
        CHECK(p2.bracket(p2.A(1), PoissonPoly()).is_zero());
    }
}
