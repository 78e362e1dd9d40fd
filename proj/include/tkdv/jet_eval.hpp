#ifndef TKDV_JET_EVAL_HPP
#define TKDV_JET_EVAL_HPP

#include <complex>
#include <span>
#include <string>
#include <type_traits>

#include <tkdv/eps_series.hpp>
#include <tkdv/errors.hpp>

namespace tkdv
{

template <class T>
struct is_complex : std::false_type {
};
template <class T>
struct is_complex<std::complex<T>> : std::true_type {
};

/// Converts an exact rational to a numeric type (double, long double, complex, or a multiprecision float).
template <class T>
T from_rational(const Rational &q)
{
    if constexpr (is_complex<T>::value) {
        return T(from_rational<typename T::value_type>(q));
    } else if constexpr (std::is_floating_point_v<T>) {
        if constexpr (sizeof(T) <= sizeof(double)) {
            return static_cast<T>(q.get_d());
        } else {
            return T(q.get_num().get_str().c_str()) / T(q.get_den().get_str().c_str());
        }
    } else {
        return T(q.get_num().get_str()) / T(q.get_den().get_str());
    }
}

/// Long double needs strtold since it has no string constructor.
template <>
inline long double from_rational<long double>(const Rational &q)
{
    return std::strtold(q.get_num().get_str().c_str(), nullptr) / std::strtold(q.get_den().get_str().c_str(), nullptr);
}

template <class T, class S>
T eval_poly(const DiffPoly &p, std::span<const S> jets_f, std::span<const S> jets_g)
{
    T total(0);
    for (const auto &[m, c] : p.terms()) {
        T term = from_rational<T>(c);
        for (auto f : m) {
            const auto g = Generator::from_id(factor_var(f));
            const auto &jets = g.letter == Letter::V ? jets_f : jets_g;
            if (g.order >= jets.size()) {
                throw JetTooShort("jet_eval: need derivative order " + std::to_string(g.order) + " of "
                                  + (g.letter == Letter::V ? "f" : "g"));
            }
            const T x = T(jets[g.order]);
            T pw(1);
            for (unsigned e = 0; e < factor_exp(f); ++e) {
                pw *= x;
            }
            term *= pw;
        }
        total += term;
    }
    return total;
}

/// sum_{n<N} h^n p_n evaluated at v^(j) = f^(j), w^(j) = g^(j).
template <class T, class S>
T jet_eval(const EpsSeries &p, std::span<const S> jets_f, std::span<const S> jets_g, const T &h, int n_terms)
{
    T total(0);
    for (int k = p.min_exp(); k < p.end_exp() && k < n_terms; ++k) {
        const auto &c = p.coeff(k);
        if (c.is_zero()) {
            continue;
        }
        T hp(1);
        if (k >= 0) {
            for (int i = 0; i < k; ++i) {
                hp *= h;
            }
        } else {
            for (int i = 0; i < -k; ++i) {
                hp /= h;
            }
        }
        total += hp * eval_poly<T, S>(c, jets_f, jets_g);
    }
    return total;
}

} // namespace tkdv

#endif
