#ifndef TKDV_LINALG_HPP
#define TKDV_LINALG_HPP

#include <map>
#include <vector>

#include <tkdv/diffpoly.hpp>

namespace tkdv
{

/// Incremental Gaussian elimination over Q on polynomials viewed as vectors in the monomial basis.
/// Each stored row remembers which rational combination of inserted inputs produced it.
class RowReducer
{
public:
    struct Reduction {
        DiffPoly remainder;
        // remainder = input - sum_i coeffs[i] * inputs[i]
        std::vector<Rational> coeffs;
    };

    /// Reduces p against the current rows without modifying the reducer.
    Reduction reduce(const DiffPoly &p) const;

    /// Inserts p; returns true if it was independent of the previous inputs.
    bool insert(const DiffPoly &p);

    std::size_t rank() const
    {
        return rows_.size();
    }
    std::size_t inputs() const
    {
        return n_inputs_;
    }

private:
    struct Row {
        DiffPoly vec;                 // coefficient 1 at pivot, no other row's pivot present
        Monomial pivot;
        std::vector<Rational> combo; // vec = sum combo[i] * inputs[i]
    };
    std::vector<Row> rows_;
    std::size_t n_inputs_ = 0;
};

std::size_t rank(const std::vector<DiffPoly> &vs);

/// True when the two families span the same Q-subspace.
bool same_span(const std::vector<DiffPoly> &a, const std::vector<DiffPoly> &b);

} // namespace tkdv

#endif
