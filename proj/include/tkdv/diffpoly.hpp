#ifndef TKDV_DIFFPOLY_HPP
#define TKDV_DIFFPOLY_HPP

#include <compare>
#include <optional>
#include <string>

#include <tkdv/rational.hpp>
#include <tkdv/sparse_poly.hpp>

namespace tkdv
{

enum class Letter : unsigned { V = 0, W = 1 };

/// v^(order) or w^(order).
struct Generator {
    Letter letter = Letter::V;
    unsigned order = 0;

    auto operator<=>(const Generator &) const = default;

    static constexpr unsigned kOrderBits = 10;

    constexpr VarId id() const
    {
        return (static_cast<VarId>(letter) << kOrderBits) | order;
    }
    static constexpr Generator from_id(VarId id)
    {
        return {static_cast<Letter>(id >> kOrderBits), id & ((1u << kOrderBits) - 1)};
    }
};

struct DiffTag;
using DiffPoly = SparsePoly<Rational, DiffTag>;

DiffPoly gen(Letter l, unsigned order, unsigned exp = 1);
inline DiffPoly v(unsigned order, unsigned exp = 1)
{
    return gen(Letter::V, order, exp);
}
inline DiffPoly w(unsigned order, unsigned exp = 1)
{
    return gen(Letter::W, order, exp);
}
inline DiffPoly constant(const Rational &c)
{
    return DiffPoly(c);
}

/// Total derivative: v^(k) -> v^(k+1), w^(k) -> w^(k+1), Leibniz.
DiffPoly partial(const DiffPoly &p);
DiffPoly partial(const DiffPoly &p, unsigned times);

/// Ordinary partial derivative with respect to a single generator.
DiffPoly diff_gen(const DiffPoly &p, Generator g);

bool is_w_only(const DiffPoly &p);

/// Largest order of a generator with the given letter, or -1 if none occurs.
int max_order(const DiffPoly &p, Letter l);

/// Euler operator sum_k (-1)^k d^k (dp/dw_k); requires w-only input.
DiffPoly var_derivative(const DiffPoly &p);

/// E with dE = g, zero constant term; throws NotExact if g is not a total derivative.
DiffPoly antiderivative(const DiffPoly &g);

struct WeightProfile {
    unsigned amp_v = 0;
    unsigned amp_w = 0;
    unsigned diff = 0;

    auto operator<=>(const WeightProfile &) const = default;
};

WeightProfile monomial_profile(const Monomial &m);

/// Common profile of all monomials, or nullopt when inhomogeneous.
std::optional<WeightProfile> weight_profile(const DiffPoly &p);

/// 2*(amp_v + amp_w) + diff, common to all monomials, or nullopt.
std::optional<unsigned> combined_weight(const DiffPoly &p);

std::string to_string(Generator g);
std::string to_string(const DiffPoly &p);

} // namespace tkdv

#endif
