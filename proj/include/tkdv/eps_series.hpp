#ifndef TKDV_EPS_SERIES_HPP
#define TKDV_EPS_SERIES_HPP

#include <string>
#include <vector>

#include <tkdv/diffpoly.hpp>

namespace tkdv
{

/// Sentinel truncation for series known exactly (finitely many nonzero terms).
inline constexpr int kExact = 1 << 29;

/// Saturating addition for truncation bookkeeping.
inline int trunc_add(long a, long b)
{
    if (a >= kExact || b >= kExact) {
        return kExact;
    }
    const long s = a + b;
    return s >= kExact ? kExact : static_cast<int>(s);
}

/// sum_{k >= min_exp} eps^k coeffs[k - min_exp], known modulo eps^trunc.
class EpsSeries
{
public:
    EpsSeries() : trunc_(kExact) {}
    explicit EpsSeries(DiffPoly p, int trunc = kExact);
    EpsSeries(int min_exp, std::vector<DiffPoly> coeffs, int trunc);

    static EpsSeries zero(int trunc = kExact)
    {
        return EpsSeries(0, {}, trunc);
    }
    /// c * eps^k
    static EpsSeries monomial(int k, DiffPoly c, int trunc = kExact);

    int min_exp() const noexcept
    {
        return min_exp_;
    }
    int trunc() const noexcept
    {
        return trunc_;
    }
    bool exact() const noexcept
    {
        return trunc_ >= kExact;
    }
    const std::vector<DiffPoly> &coeffs() const noexcept
    {
        return coeffs_;
    }
    bool is_zero() const noexcept
    {
        return coeffs_.empty();
    }

    /// Lowest exponent with nonzero coefficient; trunc for the zero series.
    int valuation() const noexcept
    {
        return is_zero() ? trunc_ : min_exp_;
    }
    /// One past the largest stored exponent.
    int end_exp() const noexcept
    {
        return min_exp_ + static_cast<int>(coeffs_.size());
    }

    const DiffPoly &coeff(int k) const;

    EpsSeries truncated(int n) const;
    /// Multiplies by eps^k.
    EpsSeries shifted(int k) const;
    /// Division by eps; throws NotTame unless the eps^0 (and lower) coefficients vanish.
    EpsSeries divide_by_eps() const;

    EpsSeries operator-() const;
    EpsSeries &operator+=(const EpsSeries &o);
    EpsSeries &operator-=(const EpsSeries &o);
    EpsSeries &operator*=(const Rational &c);

    friend EpsSeries operator+(EpsSeries a, const EpsSeries &b)
    {
        a += b;
        return a;
    }
    friend EpsSeries operator-(EpsSeries a, const EpsSeries &b)
    {
        a -= b;
        return a;
    }
    friend EpsSeries operator*(EpsSeries a, const Rational &c)
    {
        a *= c;
        return a;
    }
    friend EpsSeries operator*(const Rational &c, EpsSeries a)
    {
        a *= c;
        return a;
    }
    friend EpsSeries operator*(const EpsSeries &a, const EpsSeries &b);
    friend EpsSeries operator*(const EpsSeries &a, const DiffPoly &p);

    /// Equality of the known parts: same truncation and same coefficients.
    bool operator==(const EpsSeries &o) const;

    /// True when a - b vanishes modulo eps^n; n beyond either truncation is an error.
    friend bool equal_mod(const EpsSeries &a, const EpsSeries &b, int n);

    bool is_w_only() const;

    /// Coefficientwise map.
    template <class F>
    EpsSeries map(F &&f) const
    {
        std::vector<DiffPoly> c;
        c.reserve(coeffs_.size());
        for (const auto &p : coeffs_) {
            c.push_back(f(p));
        }
        return EpsSeries(min_exp_, std::move(c), trunc_);
    }

private:
    void normalize();

    int min_exp_ = 0;
    std::vector<DiffPoly> coeffs_;
    int trunc_;
};

EpsSeries partial(const EpsSeries &s);
EpsSeries partial(const EpsSeries &s, unsigned times);
EpsSeries diff_gen(const EpsSeries &s, Generator g);

/// E_k p = sum_{m<N} (k eps)^m d^m p / m!
EpsSeries exp_shift(long k, const DiffPoly &p, int trunc);

std::string to_string(const EpsSeries &s);

} // namespace tkdv

#endif
