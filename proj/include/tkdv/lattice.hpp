#ifndef TKDV_LATTICE_HPP
#define TKDV_LATTICE_HPP

#include <map>
#include <string>

#include <tkdv/derivation.hpp>
#include <tkdv/sparse_poly.hpp>

namespace tkdv
{

enum class Axis : unsigned { X = 0, Y = 1 };

/// X_offset or Y_offset.
struct ShiftVar {
    Axis axis = Axis::X;
    int offset = 0;

    static constexpr int kBias = 2048;
    static constexpr unsigned kOffsetBits = 12;

    constexpr VarId id() const
    {
        return (static_cast<VarId>(axis) << kOffsetBits) | static_cast<VarId>(offset + kBias);
    }
    static constexpr ShiftVar from_id(VarId id)
    {
        return {static_cast<Axis>(id >> kOffsetBits), static_cast<int>(id & ((1u << kOffsetBits) - 1)) - kBias};
    }
};

struct LatticeTag;
using LatticePoly = SparsePoly<Rational, LatticeTag>;

LatticePoly X(int offset, unsigned exp = 1);
LatticePoly Y(int offset, unsigned exp = 1);

/// Translates every offset by s.
LatticePoly shift(const LatticePoly &p, int s);

/// Smallest and largest offset present (0, 0 for constants).
std::pair<int, int> offset_range(const LatticePoly &p);

struct LatticePair {
    LatticePoly p1; // image of X_0
    LatticePoly p2; // image of Y_0

    bool operator==(const LatticePair &) const = default;
    bool is_zero() const
    {
        return p1.is_zero() && p2.is_zero();
    }
};

LatticePair operator+(const LatticePair &a, const LatticePair &b);
LatticePair operator-(const LatticePair &a, const LatticePair &b);
LatticePair operator*(const Rational &c, const LatticePair &a);

/// Shift-equivariant derivation X_n -> shift(p1, n), Y_n -> shift(p2, n).
LatticePoly lattice_derive(const LatticePair &pair, const LatticePoly &target);

/// Pair whose derivation is the commutator [D_a, D_b].
LatticePair lattice_bracket(const LatticePair &a, const LatticePair &b);

/// Translation-equivariant band operator, stored by its row-0 entries per diagonal offset.
struct BandTemplate {
    std::map<int, LatticePoly> entries;

    const LatticePoly &at(int offset) const;
    BandTemplate upper() const; // strictly upper part
    /// (M N)_d = sum_e M_e * shift_e(N_{d-e})
    friend BandTemplate operator*(const BandTemplate &m, const BandTemplate &n);
    friend BandTemplate operator-(const BandTemplate &m, const BandTemplate &n);
};

/// Tridiagonal C: 1 on offset -1, X_0 on the diagonal, Y_0 on offset +1.
BandTemplate lax_operator();

/// T_k = -(diagonal, superdiagonal) of [(C^k)^+, C] at row 0.
LatticePair toda_generator(unsigned k);

/// Closed form of T_2 + 2 T_1:
/// (X_{-1}Y_{-1} + X_0Y_{-1} + 2Y_{-1} - X_0Y_0 - X_1Y_0 - 2Y_0, Y_0(Y_{-1} + X_0^2 + 2X_0 - X_1^2 - 2X_1 - Y_1)).
LatticePair quadratic_pair_closed_form();

/// Substitutes X_j -> E_j(v^(0)), Y_j -> E_j(w^(0)) at truncation N.
EpsSeries lattice_to_eps(const LatticePoly &p, int trunc);

TameDerivation toda_to_eps(const LatticePair &pair, int trunc);

std::string to_string(const LatticePoly &p);

} // namespace tkdv

#endif
