#ifndef TKDV_SPARSE_POLY_HPP
#define TKDV_SPARSE_POLY_HPP

#include <boost/container/small_vector.hpp>

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include <tkdv/rational.hpp>

namespace tkdv
{

// A factor packs a variable id (high 20 bits) and a positive exponent (low 12 bits).
using Factor = std::uint32_t;
using VarId = std::uint32_t;

inline constexpr unsigned kExpBits = 12;
inline constexpr std::uint32_t kExpMask = (1u << kExpBits) - 1;
inline constexpr VarId kMaxVar = (1u << (32 - kExpBits)) - 1;

constexpr Factor make_factor(VarId var, unsigned exp)
{
    return (var << kExpBits) | exp;
}
constexpr VarId factor_var(Factor f)
{
    return f >> kExpBits;
}
constexpr unsigned factor_exp(Factor f)
{
    return f & kExpMask;
}

/// Sorted (by variable) list of factors with positive exponents.
using Monomial = boost::container::small_vector<Factor, 4>;

inline unsigned total_degree(const Monomial &m)
{
    unsigned d = 0;
    for (auto f : m) {
        d += factor_exp(f);
    }
    return d;
}

/// Graded lexicographic order.
inline bool monomial_less(const Monomial &a, const Monomial &b)
{
    const auto da = total_degree(a), db = total_degree(b);
    if (da != db) {
        return da < db;
    }
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

inline Monomial monomial_mul(const Monomial &a, const Monomial &b)
{
    Monomial out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const auto va = factor_var(a[i]), vb = factor_var(b[j]);
        if (va < vb) {
            out.push_back(a[i++]);
        } else if (vb < va) {
            out.push_back(b[j++]);
        } else {
            const unsigned e = factor_exp(a[i]) + factor_exp(b[j]);
            if (e > kExpMask) {
                throw std::overflow_error("monomial exponent overflow");
            }
            out.push_back(make_factor(va, e));
            ++i;
            ++j;
        }
    }
    out.insert(out.end(), a.begin() + static_cast<std::ptrdiff_t>(i), a.end());
    out.insert(out.end(), b.begin() + static_cast<std::ptrdiff_t>(j), b.end());
    return out;
}

inline unsigned monomial_exponent(const Monomial &m, VarId var)
{
    for (auto f : m) {
        if (factor_var(f) == var) {
            return factor_exp(f);
        }
    }
    return 0;
}

/// Returns m with the exponent of var changed by delta (delta may be negative).
inline Monomial monomial_adjust(const Monomial &m, VarId var, int delta)
{
    Monomial out;
    out.reserve(m.size() + 1);
    bool done = false;
    for (auto f : m) {
        const auto v = factor_var(f);
        if (!done && v >= var) {
            done = true;
            const int e = (v == var ? static_cast<int>(factor_exp(f)) : 0) + delta;
            assert(e >= 0);
            if (e > 0) {
                out.push_back(make_factor(var, static_cast<unsigned>(e)));
            }
            if (v == var) {
                continue;
            }
        }
        out.push_back(f);
    }
    if (!done) {
        assert(delta >= 0);
        if (delta > 0) {
            out.push_back(make_factor(var, static_cast<unsigned>(delta)));
        }
    }
    return out;
}

struct MonomialHash {
    std::size_t operator()(const Monomial &m) const noexcept
    {
        std::uint64_t h = 1469598103934665603ull;
        for (auto f : m) {
            h ^= f;
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

template <class C>
struct CoeffTraits {
    static bool is_zero(const C &c)
    {
        return c.is_zero();
    }
};

template <>
struct CoeffTraits<Rational> {
    static bool is_zero(const Rational &c)
    {
        return sgn(c) == 0;
    }
};

/// Sparse multivariate polynomial in canonical form: terms sorted by graded lex, no zero coefficients.
/// Tag keeps rings over different variable sets distinct types.
template <class C, class Tag = void>
class SparsePoly
{
public:
    using coeff_type = C;
    using term_type = std::pair<Monomial, C>;

    SparsePoly() = default;
    explicit SparsePoly(const C &c)
    {
        if (!CoeffTraits<C>::is_zero(c)) {
            terms_.emplace_back(Monomial{}, c);
        }
    }

    static SparsePoly variable(VarId var, unsigned exp = 1)
    {
        if (var > kMaxVar) {
            throw std::out_of_range("variable id out of range");
        }
        SparsePoly p;
        Monomial m;
        if (exp > 0) {
            m.push_back(make_factor(var, exp));
        }
        p.terms_.emplace_back(std::move(m), C(1));
        return p;
    }

    static SparsePoly monomial(Monomial m, C c)
    {
        SparsePoly p;
        if (!CoeffTraits<C>::is_zero(c)) {
            p.terms_.emplace_back(std::move(m), std::move(c));
        }
        return p;
    }

    /// Builds a polynomial from arbitrary (possibly repeated, possibly zero) terms.
    static SparsePoly from_terms(std::vector<term_type> terms)
    {
        std::sort(terms.begin(), terms.end(),
                  [](const term_type &a, const term_type &b) { return monomial_less(a.first, b.first); });
        SparsePoly p;
        for (auto &t : terms) {
            if (!p.terms_.empty() && p.terms_.back().first == t.first) {
                p.terms_.back().second += t.second;
            } else {
                if (!p.terms_.empty() && CoeffTraits<C>::is_zero(p.terms_.back().second)) {
                    p.terms_.pop_back();
                }
                p.terms_.push_back(std::move(t));
            }
        }
        if (!p.terms_.empty() && CoeffTraits<C>::is_zero(p.terms_.back().second)) {
            p.terms_.pop_back();
        }
        return p;
    }

    const std::vector<term_type> &terms() const noexcept
    {
        return terms_;
    }
    std::size_t size() const noexcept
    {
        return terms_.size();
    }
    bool is_zero() const noexcept
    {
        return terms_.empty();
    }

    C constant_term() const
    {
        if (!terms_.empty() && terms_.front().first.empty()) {
            return terms_.front().second;
        }
        return C(0);
    }

    bool operator==(const SparsePoly &o) const
    {
        return terms_ == o.terms_;
    }
    bool operator!=(const SparsePoly &o) const
    {
        return !(*this == o);
    }

    SparsePoly operator-() const
    {
        SparsePoly r(*this);
        for (auto &t : r.terms_) {
            t.second = -t.second;
        }
        return r;
    }

    SparsePoly &operator+=(const SparsePoly &o)
    {
        *this = merge(*this, o, false);
        return *this;
    }
    SparsePoly &operator-=(const SparsePoly &o)
    {
        *this = merge(*this, o, true);
        return *this;
    }
    SparsePoly &operator*=(const SparsePoly &o)
    {
        *this = *this * o;
        return *this;
    }
    SparsePoly &operator*=(const C &c)
    {
        if (CoeffTraits<C>::is_zero(c)) {
            terms_.clear();
        } else {
            for (auto &t : terms_) {
                t.second *= c;
            }
        }
        return *this;
    }

    friend SparsePoly operator+(const SparsePoly &a, const SparsePoly &b)
    {
        return merge(a, b, false);
    }
    friend SparsePoly operator-(const SparsePoly &a, const SparsePoly &b)
    {
        return merge(a, b, true);
    }
    friend SparsePoly operator*(SparsePoly a, const C &c)
    {
        a *= c;
        return a;
    }
    friend SparsePoly operator*(const C &c, SparsePoly a)
    {
        a *= c;
        return a;
    }

    friend SparsePoly operator*(const SparsePoly &a, const SparsePoly &b)
    {
        if (a.is_zero() || b.is_zero()) {
            return {};
        }
        if (a.size() == 1 || b.size() == 1) {
            const auto &single = a.size() == 1 ? a : b;
            const auto &other = a.size() == 1 ? b : a;
            const auto &[sm, sc] = single.terms_.front();
            std::vector<term_type> out;
            out.reserve(other.size());
            for (const auto &[m, c] : other.terms_) {
                out.emplace_back(monomial_mul(m, sm), C(c * sc));
            }
            return from_terms(std::move(out));
        }
        std::unordered_map<Monomial, C, MonomialHash> acc;
        acc.reserve(a.size() * b.size());
        C tmp;
        for (const auto &[ma, ca] : a.terms_) {
            for (const auto &[mb, cb] : b.terms_) {
                tmp = ca * cb;
                auto [it, fresh] = acc.try_emplace(monomial_mul(ma, mb), tmp);
                if (!fresh) {
                    it->second += tmp;
                }
            }
        }
        std::vector<term_type> out;
        out.reserve(acc.size());
        for (auto &kv : acc) {
            if (!CoeffTraits<C>::is_zero(kv.second)) {
                out.emplace_back(kv.first, std::move(kv.second));
            }
        }
        std::sort(out.begin(), out.end(),
                  [](const term_type &x, const term_type &y) { return monomial_less(x.first, y.first); });
        SparsePoly r;
        r.terms_ = std::move(out);
        return r;
    }

    SparsePoly pow(unsigned n) const
    {
        SparsePoly r(C(1)), base(*this);
        while (n > 0) {
            if (n & 1u) {
                r = r * base;
            }
            n >>= 1;
            if (n > 0) {
                base = base * base;
            }
        }
        return r;
    }

    /// Applies f to each variable id and rebuilds (f must map ids injectively for fast paths; merging is always safe).
    template <class F>
    SparsePoly map_vars(F &&f) const
    {
        std::vector<term_type> out;
        out.reserve(terms_.size());
        for (const auto &[m, c] : terms_) {
            Monomial nm;
            for (auto fac : m) {
                Monomial single{make_factor(f(factor_var(fac)), factor_exp(fac))};
                nm = monomial_mul(nm, single);
            }
            out.emplace_back(std::move(nm), c);
        }
        return from_terms(std::move(out));
    }

    /// Partial derivative with respect to one variable.
    SparsePoly diff(VarId var) const
    {
        std::vector<term_type> out;
        for (const auto &[m, c] : terms_) {
            const auto e = monomial_exponent(m, var);
            if (e > 0) {
                out.emplace_back(monomial_adjust(m, var, -1), C(c * C(static_cast<long>(e))));
            }
        }
        return from_terms(std::move(out));
    }

    /// Variables occurring, sorted.
    std::vector<VarId> variables() const
    {
        std::vector<VarId> vars;
        for (const auto &t : terms_) {
            for (auto f : t.first) {
                vars.push_back(factor_var(f));
            }
        }
        std::sort(vars.begin(), vars.end());
        vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
        return vars;
    }

    unsigned degree() const
    {
        unsigned d = 0;
        for (const auto &t : terms_) {
            d = std::max(d, total_degree(t.first));
        }
        return d;
    }

private:
    static SparsePoly merge(const SparsePoly &a, const SparsePoly &b, bool subtract)
    {
        SparsePoly r;
        r.terms_.reserve(a.size() + b.size());
        std::size_t i = 0, j = 0;
        while (i < a.terms_.size() || j < b.terms_.size()) {
            if (j == b.terms_.size() || (i < a.terms_.size() && monomial_less(a.terms_[i].first, b.terms_[j].first))) {
                r.terms_.push_back(a.terms_[i++]);
            } else if (i == a.terms_.size() || monomial_less(b.terms_[j].first, a.terms_[i].first)) {
                r.terms_.emplace_back(b.terms_[j].first, subtract ? C(-b.terms_[j].second) : b.terms_[j].second);
                ++j;
            } else {
                C c = subtract ? C(a.terms_[i].second - b.terms_[j].second) : C(a.terms_[i].second + b.terms_[j].second);
                if (!CoeffTraits<C>::is_zero(c)) {
                    r.terms_.emplace_back(a.terms_[i].first, std::move(c));
                }
                ++i;
                ++j;
            }
        }
        return r;
    }

    std::vector<term_type> terms_;
};

} // namespace tkdv

#endif
