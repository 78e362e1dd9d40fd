#include <tkdv/serialize.hpp>

#include <cstdio>
#include <stdexcept>

namespace tkdv
{

namespace
{

template <class Poly, class FactorOut>
json poly_to_json(const Poly &p, FactorOut &&factor_out)
{
    json arr = json::array();
    for (const auto &[m, c] : p.terms()) {
        json fs = json::array();
        for (auto f : m) {
            fs.push_back(factor_out(factor_var(f), factor_exp(f)));
        }
        arr.push_back({{"c", to_fraction_string(c)}, {"f", std::move(fs)}});
    }
    return arr;
}

template <class Poly, class FactorIn>
Poly poly_from_json(const json &j, FactorIn &&factor_in)
{
    if (!j.is_array()) {
        throw std::invalid_argument("polynomial JSON must be an array");
    }
    std::vector<typename Poly::term_type> terms;
    for (const auto &t : j) {
        Monomial m;
        for (const auto &f : t.at("f")) {
            const unsigned e = f.at(2).get<unsigned>();
            if (e == 0 || e > kExpMask) {
                throw std::invalid_argument("bad exponent in polynomial JSON");
            }
            m = monomial_mul(m, Monomial{make_factor(factor_in(f), e)});
        }
        terms.emplace_back(std::move(m), parse_fraction(t.at("c").get<std::string>()));
    }
    return Poly::from_terms(std::move(terms));
}

} // namespace

json to_json(const DiffPoly &p)
{
    return poly_to_json(p, [](VarId id, unsigned e) {
        const auto g = Generator::from_id(id);
        return json::array({g.letter == Letter::V ? "v" : "w", g.order, e});
    });
}

DiffPoly diffpoly_from_json(const json &j)
{
    return poly_from_json<DiffPoly>(j, [](const json &f) {
        const auto letter = f.at(0).get<std::string>();
        if (letter != "v" && letter != "w") {
            throw std::invalid_argument("bad generator letter: " + letter);
        }
        return Generator{letter == "v" ? Letter::V : Letter::W, f.at(1).get<unsigned>()}.id();
    });
}

json to_json(const EpsSeries &s)
{
    json cs = json::array();
    for (const auto &c : s.coeffs()) {
        cs.push_back(to_json(c));
    }
    return {{"min_exp", s.min_exp()}, {"coeffs", std::move(cs)}, {"trunc", s.trunc()}};
}

EpsSeries eps_series_from_json(const json &j)
{
    std::vector<DiffPoly> cs;
    for (const auto &c : j.at("coeffs")) {
        cs.push_back(diffpoly_from_json(c));
    }
    return EpsSeries(j.at("min_exp").get<int>(), std::move(cs), j.at("trunc").get<int>());
}

json to_json(const LatticePoly &p)
{
    return poly_to_json(p, [](VarId id, unsigned e) {
        const auto sv = ShiftVar::from_id(id);
        return json::array({sv.axis == Axis::X ? "X" : "Y", sv.offset, e});
    });
}

LatticePoly lattice_poly_from_json(const json &j)
{
    return poly_from_json<LatticePoly>(j, [](const json &f) {
        const auto axis = f.at(0).get<std::string>();
        if (axis != "X" && axis != "Y") {
            throw std::invalid_argument("bad lattice axis: " + axis);
        }
        return ShiftVar{axis == "X" ? Axis::X : Axis::Y, f.at(1).get<int>()}.id();
    });
}

json to_json(const LatticePair &p)
{
    return {{"p1", to_json(p.p1)}, {"p2", to_json(p.p2)}};
}

LatticePair lattice_pair_from_json(const json &j)
{
    return {lattice_poly_from_json(j.at("p1")), lattice_poly_from_json(j.at("p2"))};
}

std::uint64_t fnv1a(std::string_view data)
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : data) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t h)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace tkdv
