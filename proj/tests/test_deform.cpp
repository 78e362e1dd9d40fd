#include <cstdlib>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include <tkdv/deform.hpp>
#include <tkdv/errors.hpp>
#include <tkdv/linalg.hpp>

using namespace tkdv;

namespace
{

const DeformationState &state8()
{
    static const DeformationState s = Deformer(8).run(8);
    return s;
}

const DeformationState &state13()
{
    static const DeformationState s = Deformer(13).run(13);
    return s;
}

std::filesystem::path scratch_dir(const std::string &name)
{
    const char *root = std::getenv("TKDV_TEST_TMP");
    auto dir = std::filesystem::path(root ? root : std::filesystem::temp_directory_path().string()) / name;
    std::filesystem::remove_all(dir);
    return dir;
}

Rational q(long a, long b = 1)
{
    return Rational(a, b);
}

} // namespace

TEST_SUITE("deform")
{
    // Q_0..Q_6 agree with tests/oracles/slow_manifold.py, which solves for invariance of v = Q(w)
    // under the Taylor-expanded lattice field T2 + 2T1 with unknown coefficients.
    TEST_CASE("deformation coefficients")
    {
        const auto &s = state8();
        CHECK(s.order == 8);
        CHECK(s.coefficient(0) == w(0));
        CHECK(s.coefficient(1) == q(-1, 2) * w(1));
        CHECK(s.coefficient(2) == q(1, 8) * w(2) - q(1, 4) * w(0, 2));
        CHECK(s.coefficient(3) == q(-1, 48) * w(3) + q(1, 4) * w(0) * w(1));
        CHECK(s.coefficient(4) == q(1, 384) * w(4) - q(1, 16) * w(0) * w(2) - q(3, 64) * w(1, 2) + q(1, 8) * w(0, 3));
        CHECK(s.coefficient(5)
              == q(-1, 3840) * w(5) + q(1, 96) * w(0) * w(3) + q(1, 64) * w(1) * w(2) - q(3, 16) * w(0, 2) * w(1));
        CHECK(s.coefficient(6)
              == q(1, 46080) * w(6) - q(1, 768) * w(0) * w(4) - q(1, 512) * w(1) * w(3) + q(9, 128) * w(0) * w(1, 2)
                     + q(3, 64) * w(0, 2) * w(2) - q(5, 64) * w(0, 4));
        CHECK(s.gauge.c == q(-1, 2));
    }

    TEST_CASE("obstructions")
    {
        const auto &s = state8();
        REQUIRE(s.log.size() == 8);
        CHECK(s.log[0].g.is_zero());
        for (const auto &e : s.log) {
            CHECK(e.exact);
            CHECK(var_derivative(e.g).is_zero());
        }
    }

    TEST_CASE("order-n homogeneity")
    {
        const auto &s = state13();
        for (int n = 0; n < 13; ++n) {
            CAPTURE(n);
            CHECK(is_w_only(s.coefficient(n)));
            CHECK(combined_weight(s.coefficient(n)) == static_cast<unsigned>(n + 2));
        }
    }

    TEST_CASE("ideal preservation")
    {
        const auto &s = state8();
        CHECK(residual(s, Deformer(8).slow(), 8).is_zero());
        CHECK(residual(s, flow_generator(2, 8), 8).is_zero());
        CHECK(residual(s, flow_generator(3, 8), 8).is_zero());

        DeformationState bad = s;
        bad.q += EpsSeries::monomial(3, w(0, 2));
        const auto r = residual(bad, flow_generator(2, 8), 8);
        CHECK_FALSE(r.is_zero());
        CHECK(r.valuation() >= 3);
        CHECK_THROWS_AS(induce(bad, flow_generator(1, 8), 1, 8), ResidualNonzero);
    }

    TEST_CASE("induced derivations")
    {
        const auto &s = state8();
        const auto slow = induce(s, Deformer(8).slow(), 0, 5);
        // eps^2 coefficient is K_1 at nonlinearity 12, over 8
        CHECK(slow.img_w.truncated(3) == EpsSeries::monomial(2, q(1, 8) * kdv_generator(1, q(12)), 3));
        CHECK(slow.img_w.coeff(4)
              == q(1, 128) * w(5) + q(3, 16) * w(0) * w(3) + q(5, 32) * w(1) * w(2) + q(3, 8) * w(0, 2) * w(1));
        // at eps = 0 the normalized T1 flow is translation backwards
        const auto d1 = induce(s, flow_generator(1, 3), 1, 3);
        CHECK(d1.img_w.coeff(0) == -w(1));
        CHECK(d1.img_w.coeff(2) == q(-1, 24) * w(3) - q(1, 2) * w(0) * w(1));
    }

    TEST_CASE("commuting induced flows")
    {
        const auto &s = state8();
        const auto d1 = induce(s, conjugated_flow(1, 8), 1, 8);
        const auto d2 = induce(s, conjugated_flow(2, 8), 2, 8);
        CHECK(commute_check(d1, d1, 8).is_zero());
        CHECK(commute_check(d1, d2, 8).is_zero());
        auto corrupt = d2;
        corrupt.img_w += EpsSeries::monomial(3, w(0) * w(0), corrupt.img_w.trunc());
        CHECK_FALSE(commute_check(d1, corrupt, 8).is_zero());
    }

    TEST_CASE("characteristic numbers")
    {
        const auto &s = state8();
        std::vector<InducedDerivation> flows;
        for (int k = 1; k <= 3; ++k) {
            flows.push_back(induce(s, conjugated_flow(static_cast<unsigned>(k), 8), k, 8));
        }
        const auto rep = characteristic_numbers(flows, 8);
        CHECK(rep.pivots == std::vector<int>{1, 3, 5});
        REQUIRE(rep.leading_terms.size() == 3);
        CHECK(rep.leading_terms[0] == -w(1));
        CHECK(rep.leading_terms[1] == q(-1, 4) * w(3) - q(3) * w(0) * w(1));
        CHECK(rep.leading_terms[2]
              == q(-1, 16) * w(5) - q(5, 4) * w(0) * w(3) - q(5, 2) * w(1) * w(2) - q(15, 2) * w(0, 2) * w(1));
        const Rational lam(12);
        CHECK(same_span(rep.leading_terms, {w(1), kdv_generator(1, lam), kdv_generator(2, lam)}));
        CHECK_FALSE(same_span(rep.leading_terms, {kdv_generator(1), kdv_generator(2), kdv_generator(3)}));

        const auto single = characteristic_numbers({flows[0]}, 8);
        CHECK(single.pivots == std::vector<int>{1});
    }

    TEST_CASE("bounds")
    {
        CHECK(bound_value(q(1, 4) * w(2)) == q(1, 2));
        CHECK(bound_value(q(-1, 3) * w(1) * w(2, 2)) == q(4, 3));
        // K_0..K_4 also match the oracle script
        const auto rows = bounds_table(state13(), 12);
        REQUIRE(rows.size() == 13);
        const std::vector<Rational> frozen = {q(1),        q(1, 2),     q(1, 2),      q(3, 8),      q(23, 64),
                                              q(5, 16),    q(77, 256),  q(37, 128),   q(1161, 4096), q(295, 1024),
                                              q(4679, 16384), q(5001, 16384), q(20457, 65536)};
        for (std::size_t n = 0; n < rows.size(); ++n) {
            CAPTURE(n);
            CHECK(rows[n].n == static_cast<int>(n));
            CHECK(rows[n].exact == frozen[n]);
        }
        CHECK(rows[2].dec == "0.500");
        // the printed table truncates: 4679/16384 = 0.28558...
        CHECK(rows[10].dec == "0.286");
        CHECK(printed_bounds().at(8).second == "0.285");
    }

    TEST_CASE("state serialization")
    {
        const auto &s = state8();
        const auto back = deformation_state_from_json(to_json(s));
        CHECK(back.q == s.q);
        CHECK(back.order == s.order);
        CHECK(back.gauge == s.gauge);
        CHECK(to_json(back).dump() == to_json(s).dump());
    }

    TEST_CASE("cache tamper detection")
    {
        const DeformCache cache(scratch_dir("cache-tamper"));
        const Gauge g;
        std::vector<std::string> msgs;
        auto log = [&](const std::string &m) { msgs.push_back(m); };

        const auto first = obtain_state(6, g, &cache, log);
        const auto path = cache.path_for(g, 6);
        REQUIRE(std::filesystem::exists(path));
        CHECK(cache.load(g, 6).has_value());

        std::string text;
        {
            std::ifstream in(path);
            std::stringstream ss;
            ss << in.rdbuf();
            text = ss.str();
        }
        const auto at = text.find("\"-1/2\"");
        REQUIRE(at != std::string::npos);
        text.replace(at, 6, "\"-1/3\"");
        std::ofstream(path) << text;

        msgs.clear();
        CHECK_FALSE(cache.load(g, 6, log).has_value());
        REQUIRE(msgs.size() == 1);
        CHECK(msgs[0].find("content hash") != std::string::npos);

        msgs.clear();
        const auto again = obtain_state(6, g, &cache, log);
        CHECK(again.q == first.q);
        CHECK(std::any_of(msgs.begin(), msgs.end(), [](const auto &m) { return m.find("content hash") != std::string::npos; }));
        CHECK(std::any_of(msgs.begin(), msgs.end(), [](const auto &m) { return m.rfind("cache stored", 0) == 0; }));
        CHECK(cache.load(g, 6).has_value());

        std::ofstream(path) << "{ not json";
        CHECK_FALSE(cache.load(g, 6).has_value());
        CHECK(cache.key(g, 6) != cache.key(g, 7));
        Gauge other = g;
        other.slow_scale = q(1, 2);
        CHECK(cache.key(g, 6) != cache.key(other, 6));
    }

    TEST_CASE("gauge sweep")
    {
        const auto rows = gauge_sweep(4);
        REQUIRE_FALSE(rows.empty());
        CHECK(rows.front().completed);
        CHECK(rows.front().bounds.at(2).exact == q(1, 2));
    }
}
