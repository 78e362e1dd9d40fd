#include <cmath>

#include <doctest.h>

#include <tkdv/numlab.hpp>

using namespace tkdv;

namespace
{

double max_abs(const std::vector<cplx> &v)
{
    double m = 0;
    for (const auto &x : v) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

PeriodicLattice constant_lattice(std::size_t n, cplx a, cplx b)
{
    return {std::vector<cplx>(n, a), std::vector<cplx>(n, b)};
}

} // namespace

TEST_SUITE("numlab")
{
    TEST_CASE("lattice field evaluation")
    {
        const auto t1 = toda_generator(1);
        const auto [da, db] = lattice_flow_eval(t1, constant_lattice(6, 0.3, -1.7));
        CHECK(max_abs(da) == 0);
        CHECK(max_abs(db) == 0);

        const PeriodicLattice two{{0, 0}, {1, 2}};
        const auto [a2, b2] = lattice_flow_eval(t1, two);
        CHECK(a2[0] == cplx(1));
        CHECK(a2[1] == cplx(-1));
        CHECK(max_abs(b2) == 0);

        const auto [pa, pb] = lattice_flow_eval(slow_pair(), constant_lattice(5, -2, 1));
        CHECK(max_abs(pa) == 0);
        CHECK(max_abs(pb) == 0);
    }

    TEST_CASE("integrator")
    {
        const auto lat = random_lattice(8, 0.1, 11);
        const LatticePair zero;
        const auto same = integrate_flow(lat, zero, 1.0, 10);
        CHECK(same.A == lat.A);
        CHECK(same.B == lat.B);

        // fourth order: halving the step shrinks the endpoint error about 16x
        const auto t1 = toda_generator(1);
        const auto ref = integrate_flow(lat, t1, 1.0, 4096);
        auto err = [&](int steps) {
            const auto r = integrate_flow(lat, t1, 1.0, steps);
            double m = 0;
            for (std::size_t i = 0; i < r.size(); ++i) {
                m = std::max({m, std::abs(r.A[i] - ref.A[i]), std::abs(r.B[i] - ref.B[i])});
            }
            return m;
        };
        const double ratio = err(8) / err(16);
        CHECK(ratio > 12);
        CHECK(ratio < 20);

        PeriodicLattice wild = random_lattice(4, 0.1, 3);
        wild.B[0] = 1e200;
        CHECK_THROWS_AS(integrate_flow(wild, toda_generator(2), 1.0, 10), Blowup);
    }

    TEST_CASE("trace invariants")
    {
        const auto lat = random_lattice(7, 0.3, 5);
        const auto tr = trace_invariants(lat, 6);
        cplx sum_a = 0, sum_a2 = 0, sum_b = 0;
        for (std::size_t k = 0; k < lat.size(); ++k) {
            sum_a += lat.A[k];
            sum_a2 += lat.A[k] * lat.A[k];
            sum_b += lat.B[k];
        }
        CHECK(std::abs(tr[0] - sum_a) < 1e-12);
        CHECK(std::abs(tr[1] - (sum_a2 + 2.0 * sum_b)) < 1e-12);

        for (unsigned k : {1u, 2u}) {
            const auto end = integrate_flow(random_lattice(8, 0.1, 17), toda_generator(k), 1.0, 2000);
            const auto before = trace_invariants(random_lattice(8, 0.1, 17), 6);
            const auto after = trace_invariants(end, 6);
            for (std::size_t m = 0; m < 6; ++m) {
                CHECK(std::abs(after[m] - before[m]) < 1e-8);
            }
        }
    }

    TEST_CASE("trigonometric test functions")
    {
        const auto g = TrigFunction::cosine(2);
        CHECK(std::abs(g.value(0.125) - std::cos(M_PI / 2)) < 1e-14);
        const auto j = g.jets(0.0, 2);
        CHECK(std::abs(j[0] - 1) < 1e-14);
        CHECK(std::abs(j[1]) < 1e-12);
        CHECK(std::abs(j[2] + 16 * M_PI * M_PI) < 1e-10);
        CHECK(fit_slope({1, 2, 4}, {3, 12, 48}) == doctest::Approx(2.0));
    }

    TEST_CASE("slow-manifold defect order")
    {
        const auto st = Deformer(7).run(7);
        const auto g = TrigFunction::cosine(1);
        const std::vector<int> sites{32, 64, 128};
        const auto control = slow_order_test(g, st, 0, sites);
        const auto six = slow_order_test(g, st, 6, sites);
        CHECK(control.slope < 1.5);
        CHECK(six.slope >= 5);
        CHECK(six.rows.back().defect < control.rows.back().defect);
    }

    TEST_CASE("jets against the lattice")
    {
        const auto f = TrigFunction::cosine(1), g = TrigFunction::cosine(2);
        const auto r = jet_lattice_consistency(f, g, 5, {16, 32, 64});
        CHECK(r.slope > 4.5);
    }

    TEST_CASE("degenerate theta forms")
    {
        CHECK_THROWS_AS(theta_deg<cplx>(0.0, 1.0), PoleHit);
        const Rational p(3, 2), s(-2, 7);
        CHECK(theta_B_ratio<Rational>(p, s, s) == Rational(1));
        CHECK(theta_B_expanded<Rational>(p, s, s) == Rational(1));

        const auto rep = theta_forms_check(100, 20240917);
        CHECK(rep.alpha0_exact);
        CHECK(rep.max_theta < 1e-12);
        CHECK(rep.max_expanded < 1e-12);
        CHECK(rep.max_v0 < 1e-12);
        // regression value, not a claimed identity
        CHECK(rep.swap_sample.real() == doctest::Approx(-2.185823362).epsilon(1e-9));
        CHECK(rep.swap_sample.imag() == doctest::Approx(4.450191949).epsilon(1e-9));
    }

    TEST_CASE("H function")
    {
        CHECK(std::abs(theta_H(cplx(0.3, 0.2), 1.0)) < 1e-13);
        CHECK(std::abs(theta_H(cplx(-1.4, 2.0), 1.0)) < 1e-13);
        const cplx s(0.3, 0.2), beta(0.7, -0.4);
        CHECK(std::abs(theta_H(s, beta) - M_PI * M_PI * theta_H_over_pi2(s, beta)) < 1e-12);

        const auto lim = theta_H_limit(1, s, beta, {1e-2, 5e-3, 2.5e-3});
        CHECK(lim.order_H == doctest::Approx(1.0).epsilon(0.1));
        CHECK(lim.order_extrap_H >= 1.8);
        const auto lim2 = theta_H_limit(2, s, beta, {1e-2, 5e-3, 2.5e-3});
        CHECK(lim2.order_extrap_H < 0.5);
        CHECK(lim2.order_extrap_b2H >= 1.8);
    }

    TEST_CASE("H derivative")
    {
        const auto d1 = theta_H_derivative_check(1, GaussRational(0, 1));
        CHECK(d1.lhs_over_pi2 == d1.rhs_over_pi2);
        CHECK(d1.lhs_over_pi2 == GaussRational(2, 2));
        CHECK(std::abs(d1.lhs - d1.rhs) < 1e-10);
        const auto d2 = theta_H_derivative_check(2, GaussRational(0, 1));
        CHECK(d2.ratio == GaussRational(4));
        const auto d3 = theta_H_derivative_check(3, GaussRational(Rational(1, 2), Rational(-3)));
        CHECK(d3.ratio == GaussRational(9));
    }
}
