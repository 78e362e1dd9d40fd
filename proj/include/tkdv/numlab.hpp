#ifndef TKDV_NUMLAB_HPP
#define TKDV_NUMLAB_HPP

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include <tkdv/deform.hpp>
#include <tkdv/errors.hpp>
#include <tkdv/jet_eval.hpp>
#include <tkdv/lattice.hpp>

namespace tkdv
{

using cplx = std::complex<double>;

struct PeriodicLattice {
    std::vector<cplx> A;
    std::vector<cplx> B;

    std::size_t size() const
    {
        return A.size();
    }
};

/// Site-wise value of a lattice polynomial with X_j = A[k+j], Y_j = B[k+j] (indices mod N).
template <class T>
T eval_lattice(const LatticePoly &p, const std::vector<T> &A, const std::vector<T> &B, long site)
{
    const long n = static_cast<long>(A.size());
    T total(0);
    for (const auto &[m, c] : p.terms()) {
        T term = from_rational<T>(c);
        for (auto f : m) {
            const auto sv = ShiftVar::from_id(factor_var(f));
            const long idx = ((site + sv.offset) % n + n) % n;
            const T &x = sv.axis == Axis::X ? A[static_cast<std::size_t>(idx)] : B[static_cast<std::size_t>(idx)];
            for (unsigned e = 0; e < factor_exp(f); ++e) {
                term *= x;
            }
        }
        total += term;
    }
    return total;
}

/// (dA, dB) of the lattice vector field given by the pair.
std::pair<std::vector<cplx>, std::vector<cplx>> lattice_flow_eval(const LatticePair &pair, const PeriodicLattice &lat);

/// Classical RK4; throws Blowup on non-finite values.
PeriodicLattice integrate_flow(const PeriodicLattice &lat, const LatticePair &pair, double t_end, int steps);

/// tr(C^m), m = 1..m_max, for the periodic Lax matrix (ones below, A on, B above the diagonal, with wrap).
std::vector<cplx> trace_invariants(const PeriodicLattice &lat, int m_max);

/// Random lattice near (A, B) = (-2, 1) with real perturbations of the given amplitude.
PeriodicLattice random_lattice(std::size_t n, double amplitude, std::uint64_t seed);

/// g(x) = sum_{|m| <= M} c_m exp(2 pi i m x); assumed real-valued (c_{-m} = conj(c_m)).
struct TrigFunction {
    int M = 0;
    std::vector<cplx> c; // index m + M

    static TrigFunction cosine(int m = 1); // cos(2 pi m x)
    double value(double x) const;
    /// g, g', ..., g^(order) at x.
    std::vector<double> jets(double x, unsigned order) const;
};

struct SlowTestRow {
    double h;
    double defect;   // max_k |dA_k/h^2 - DQ[dB/h^2](kh)|
    double psi_norm; // max_k max(|dA_k|, |dB_k|)
};

struct SlowTestResult {
    int order;
    std::vector<SlowTestRow> rows;
    double slope;     // fitted exponent of the defect
    double psi_slope; // fitted exponent of the raw flow norm
};

/// Slow-manifold test of Q truncated below eps^order on the lattice h = 1/N, in quad precision.
SlowTestResult slow_order_test(const TrigFunction &g, const DeformationState &state, int order,
                               const std::vector<int> &sites);

/// Least-squares slope of log(y) against log(x).
double fit_slope(const std::vector<double> &x, const std::vector<double> &y);

struct ConsistencyResult {
    std::vector<double> h;
    std::vector<double> error;
    double slope;
};

/// Compares the T_1 lattice difference at spacing h with its eps-series image (first n_terms terms)
/// under jet evaluation, for smooth periodic f, g.
ConsistencyResult jet_lattice_consistency(const TrigFunction &f, const TrigFunction &g, int n_terms,
                                          const std::vector<int> &sites);

/// theta_k(z) = 1 - z/k
template <class T>
T theta_deg(const T &k, const T &z)
{
    if (k == T(0)) {
        throw PoleHit("degenerate theta with k = 0");
    }
    return T(1) - z / k;
}

template <class T>
T checked_div(const T &a, const T &b)
{
    if (b == T(0)) {
        throw PoleHit("division by zero in theta formula");
    }
    return a / b;
}

/// B via r(z,t) = theta_{t/p^2}(z)/theta_t(z): r(q,x) r(p,s) / (r(p,x) r(q,s)), q = 1/p.
template <class T>
T theta_B_ratio(const T &p, const T &s, const T &x)
{
    const T q = checked_div<T>(T(1), p);
    auto r = [&](const T &z, const T &t) { return checked_div<T>(theta_deg<T>(t / (p * p), z), theta_deg<T>(t, z)); };
    return checked_div<T>(r(q, x) * r(p, s), r(p, x) * r(q, s));
}

/// Middle display: product of eight theta factors.
template <class T>
T theta_B_theta(const T &p, const T &s, const T &x)
{
    const T q = checked_div<T>(T(1), p);
    const T p2 = p * p;
    const T num = theta_deg<T>(x / p2, q) * theta_deg<T>(s, q) * theta_deg<T>(x, p) * theta_deg<T>(s / p2, p);
    const T den = theta_deg<T>(x / p2, p) * theta_deg<T>(s, p) * theta_deg<T>(x, q) * theta_deg<T>(s / p2, q);
    return checked_div<T>(num, den);
}

/// Last display, fully expanded in p, s, x.
template <class T>
T theta_B_expanded(const T &p, const T &s, const T &x)
{
    const T one(1);
    const T p3 = p * p * p;
    const T num = (one - checked_div<T>(p, x)) * (one - checked_div<T>(one, p * s)) * (one - checked_div<T>(p, x))
                  * (one - checked_div<T>(p3, s));
    const T den = (one - checked_div<T>(p3, x)) * (one - checked_div<T>(p, s)) * (one - checked_div<T>(one, x * p))
                  * (one - checked_div<T>(p, s));
    return checked_div<T>(num, den);
}

/// The v0 display: (v0 - x)^2 (v0 s - 1)(v0^3 - s) / ((v0 x - 1)(v0 - s)^2 (v0^3 - x)).
template <class T>
T theta_B_v0(const T &v0, const T &s, const T &x)
{
    const T v3 = v0 * v0 * v0;
    return checked_div<T>((v0 - x) * (v0 - x) * (v0 * s - T(1)) * (v3 - s),
                       (v0 * x - T(1)) * (v0 - s) * (v0 - s) * (v3 - x));
}

struct ThetaFormsReport {
    int samples = 0;
    int poles = 0;          // sample points rejected by PoleHit
    double max_theta = 0;   // max relative gap, theta-product form vs r-ratio form
    double max_expanded = 0;
    double max_v0 = 0;
    bool alpha0_exact = false; // B(p, s, s) == 1 in exact rationals, all forms
    int alpha0_points = 0;
    cplx swap_sample;          // B(p) B(1/p) at a fixed point, regression only
};

/// Random complex points with moduli in [1/2, 2]; exact alpha = 0 check on random rationals.
ThetaFormsReport theta_forms_check(int samples, std::uint64_t seed);

/// H / pi^2 = 4 s (s^2 beta^2 - beta + 1 - s^2 beta) / ((s beta - 1)^2 (s - 1)^2)
cplx theta_H_over_pi2(cplx s, cplx beta);
cplx theta_H(cplx s, cplx beta);

struct HLimitRow {
    double h;
    cplx quotient; // (B - 1)/h^2 with v0 = exp(i b pi h), x = s beta
    double err_H;  // |quotient - H|
    double err_b2H;
    cplx extrapolated; // Richardson value from this row and the previous one (first row: the quotient)
    double err_extrap_H;
    double err_extrap_b2H;
};

struct HLimitResult {
    int b;
    cplx s, beta;
    cplx H;
    std::vector<HLimitRow> rows;
    double order_H;   // observed convergence order towards H (0 if not converging)
    double order_b2H; // observed convergence order towards b^2 H
    double order_extrap_H;
    double order_extrap_b2H;
};

HLimitResult theta_H_limit(int b, cplx s, cplx beta, const std::vector<double> &hs);

/// a + b i with rational parts.
struct GaussRational {
    Rational re, im;

    GaussRational(Rational r = 0, Rational i = 0) : re(std::move(r)), im(std::move(i)) {}
    friend GaussRational operator+(const GaussRational &a, const GaussRational &b)
    {
        return {a.re + b.re, a.im + b.im};
    }
    friend GaussRational operator-(const GaussRational &a, const GaussRational &b)
    {
        return {a.re - b.re, a.im - b.im};
    }
    friend GaussRational operator*(const GaussRational &a, const GaussRational &b)
    {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend GaussRational operator/(const GaussRational &a, const GaussRational &b);
    bool operator==(const GaussRational &o) const
    {
        return re == o.re && im == o.im;
    }
    bool is_zero() const
    {
        return sgn(re) == 0 && sgn(im) == 0;
    }
    cplx to_complex() const
    {
        return {re.get_d(), im.get_d()};
    }
};

std::string to_string(const GaussRational &z);

struct HDerivativeCheck {
    GaussRational lhs_over_pi2; // computed d/dt H(s(t), beta) at t = 0, divided by pi^2
    GaussRational rhs_over_pi2; // 2 (beta - 1) b / beta
    cplx lhs, rhs;
    GaussRational ratio;        // rhs / lhs
};

/// Exact Taylor expansion in t of H(2b/t - 1, beta).
HDerivativeCheck theta_H_derivative_check(int b, const GaussRational &beta);

} // namespace tkdv

#endif
