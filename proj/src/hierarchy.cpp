#include <tkdv/hierarchy.hpp>

#include <stdexcept>

#include <tkdv/errors.hpp>

namespace tkdv
{

DiffPoly kdv_generator(unsigned n, const Rational &lambda)
{
    if (n < 1) {
        throw std::invalid_argument("kdv_generator: n must be positive");
    }
    DiffPoly k = w(3) + lambda * (w(0) * w(1));
    const Rational two_thirds = Rational(2, 3) * lambda;
    const Rational one_third = Rational(1, 3) * lambda;
    for (unsigned i = 1; i < n; ++i) {
        DiffPoly integral;
        try {
            integral = antiderivative(k);
        } catch (const NotExact &e) {
            throw RecursionBroken("kdv_generator: K_" + std::to_string(i) + " is not a total derivative: " + e.what());
        }
        k = partial(k, 2) + two_thirds * (w(0) * k) + one_third * (w(1) * integral);
    }
    return k;
}

TameDerivation evolutionary(const EpsSeries &p)
{
    return {EpsSeries::zero(p.trunc()), p};
}

DiffPoly r0_bracket(const DiffPoly &p, const DiffPoly &q)
{
    if (!is_w_only(p) || !is_w_only(q)) {
        throw std::invalid_argument("r0_bracket: arguments must be w-only");
    }
    const EpsSeries r = derive(evolutionary(EpsSeries(p)), q) - derive(evolutionary(EpsSeries(q)), p);
    return r.coeff(0);
}

LatticePair slow_pair()
{
    return toda_generator(2) + Rational(2) * toda_generator(1);
}

Rational default_slow_scale()
{
    return Rational(-1, 2);
}

TameDerivation slow_generator(int trunc, const Rational &scale)
{
    if (trunc < 2) {
        throw std::invalid_argument("slow_generator: truncation must be at least 2");
    }
    const TameDerivation c = conjugate(toda_to_eps(slow_pair(), trunc + 3));
    TameDerivation d{c.img_v.divide_by_eps(), c.img_w.divide_by_eps()};
    return (scale * d).truncated(trunc);
}

TameDerivation conjugated_flow(unsigned k, int trunc)
{
    return conjugate(toda_to_eps(toda_generator(k), trunc + 2)).truncated(trunc);
}

TameDerivation flow_generator(unsigned k, int trunc)
{
    const TameDerivation c = conjugate(toda_to_eps(toda_generator(k), trunc + 3));
    return TameDerivation{c.img_v.divide_by_eps(), c.img_w.divide_by_eps()}.truncated(trunc);
}

} // namespace tkdv
