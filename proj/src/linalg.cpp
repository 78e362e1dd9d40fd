#include <tkdv/linalg.hpp>

namespace tkdv
{

namespace
{

const Rational &coeff_of(const DiffPoly &p, const Monomial &m)
{
    static const Rational zero;
    const auto &ts = p.terms();
    auto it = std::lower_bound(ts.begin(), ts.end(), m,
                               [](const DiffPoly::term_type &t, const Monomial &key) { return monomial_less(t.first, key); });
    if (it != ts.end() && it->first == m) {
        return it->second;
    }
    return zero;
}

} // namespace

RowReducer::Reduction RowReducer::reduce(const DiffPoly &p) const
{
    Reduction r{p, std::vector<Rational>(n_inputs_)};
    // Rows are kept with distinct pivots and each row is free of the other rows' pivots,
    // so a single pass suffices.
    for (const auto &row : rows_) {
        const Rational c = coeff_of(r.remainder, row.pivot);
        if (is_zero(c)) {
            continue;
        }
        r.remainder -= row.vec * c;
        for (std::size_t i = 0; i < row.combo.size(); ++i) {
            r.coeffs[i] += c * row.combo[i];
        }
    }
    return r;
}

bool RowReducer::insert(const DiffPoly &p)
{
    Reduction red = reduce(p);
    const std::size_t idx = n_inputs_++;
    for (auto &row : rows_) {
        row.combo.resize(n_inputs_);
    }
    if (red.remainder.is_zero()) {
        return false;
    }
    Row nr;
    const Rational lead = red.remainder.terms().back().second;
    nr.vec = red.remainder * Rational(1 / lead);
    nr.pivot = nr.vec.terms().back().first;
    nr.combo.assign(n_inputs_, Rational(0));
    nr.combo[idx] = 1;
    for (std::size_t i = 0; i < red.coeffs.size(); ++i) {
        nr.combo[i] -= red.coeffs[i];
    }
    for (auto &c : nr.combo) {
        c /= lead;
    }
    // Keep rows fully reduced: remove the new pivot from existing rows.
    for (auto &row : rows_) {
        const Rational c = coeff_of(row.vec, nr.pivot);
        if (is_zero(c)) {
            continue;
        }
        row.vec -= nr.vec * c;
        for (std::size_t i = 0; i < n_inputs_; ++i) {
            row.combo[i] -= c * nr.combo[i];
        }
    }
    rows_.push_back(std::move(nr));
    return true;
}

std::size_t rank(const std::vector<DiffPoly> &vs)
{
    RowReducer r;
    for (const auto &p : vs) {
        r.insert(p);
    }
    return r.rank();
}

bool same_span(const std::vector<DiffPoly> &a, const std::vector<DiffPoly> &b)
{
    std::vector<DiffPoly> both = a;
    both.insert(both.end(), b.begin(), b.end());
    const auto ra = rank(a);
    return ra == rank(b) && ra == rank(both);
}

} // namespace tkdv
