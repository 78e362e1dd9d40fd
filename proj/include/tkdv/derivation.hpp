#ifndef TKDV_DERIVATION_HPP
#define TKDV_DERIVATION_HPP

#include <unordered_map>
#include <vector>

#include <tkdv/eps_series.hpp>

namespace tkdv
{

/// Derivation of R((eps)) commuting with d and killing eps, fixed by its values on v^(0), w^(0).
struct TameDerivation {
    EpsSeries img_v;
    EpsSeries img_w;

    TameDerivation() = default;
    TameDerivation(EpsSeries v_image, EpsSeries w_image) : img_v(std::move(v_image)), img_w(std::move(w_image)) {}

    int trunc() const
    {
        return std::min(img_v.trunc(), img_w.trunc());
    }
    int valuation() const
    {
        return std::min(img_v.valuation(), img_w.valuation());
    }
    bool is_zero() const
    {
        return img_v.is_zero() && img_w.is_zero();
    }
    TameDerivation truncated(int n) const
    {
        return {img_v.truncated(n), img_w.truncated(n)};
    }
    bool operator==(const TameDerivation &o) const
    {
        return img_v == o.img_v && img_w == o.img_w;
    }
};

TameDerivation operator+(const TameDerivation &a, const TameDerivation &b);
TameDerivation operator-(const TameDerivation &a, const TameDerivation &b);
TameDerivation operator*(const Rational &c, const TameDerivation &d);
/// Multiplies both images by eps^k.
TameDerivation shifted(const TameDerivation &d, int k);

/// Applies a tame derivation, caching d^j of its images across calls.
class Deriver
{
public:
    explicit Deriver(const TameDerivation &d) : d_(d) {}

    EpsSeries apply(const DiffPoly &p);
    EpsSeries apply(const EpsSeries &p);

    /// d^j applied to the image of v^(0) (letter V) or w^(0) (letter W).
    const EpsSeries &image(Generator g);

private:
    TameDerivation d_;
    std::vector<EpsSeries> dv_, dw_;
};

EpsSeries derive(const TameDerivation &d, const EpsSeries &p);
EpsSeries derive(const TameDerivation &d, const DiffPoly &p);

TameDerivation commutator(const TameDerivation &a, const TameDerivation &b);

/// The derivation d itself, viewed as a tame derivation (v0 -> v1, w0 -> w1).
TameDerivation translation();

/// Ring map v^(0) -> -2 + eps^2 v^(0), w^(0) -> 1 + eps^2 w^(0), v^(k), w^(k) -> eps^2 (same), k >= 1.
EpsSeries phi(const EpsSeries &p);
EpsSeries phi(const DiffPoly &p);
/// Inverse of phi. The input must be exact (a polynomial in eps): the image of an unknown tail has no
/// lower bound on its eps-valuation.
EpsSeries phi_inv(const EpsSeries &p);

/// Phi D Phi^-1; throws NotTame if a negative eps power survives.
TameDerivation conjugate(const TameDerivation &d);

/// Replaces v^(j) by d^j Q. Q must be w-only. Work is limited to eps^limit.
class SigmaSubstitution
{
public:
    SigmaSubstitution(const EpsSeries &q, int limit);

    EpsSeries apply(const EpsSeries &p);
    EpsSeries apply(const DiffPoly &p, int trunc);

    const EpsSeries &q_derivative(unsigned j);

private:
    const EpsSeries &v_part(const Monomial &m, int trunc);

    EpsSeries q_;
    int limit_;
    std::vector<EpsSeries> dq_;
    std::unordered_map<Monomial, EpsSeries, MonomialHash> memo_;
};

EpsSeries substitute_sigma(const EpsSeries &q, const EpsSeries &p, int limit = kExact);

} // namespace tkdv

#endif
