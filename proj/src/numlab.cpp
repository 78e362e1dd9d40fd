#include <tkdv/numlab.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/float128.hpp>

namespace tkdv
{

namespace
{


void check_finite(const std::vector<cplx> &v)
{
    for (const auto &z : v) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            throw Blowup("integrate_flow: non-finite value");
        }
    }
}

std::vector<cplx> axpy(const std::vector<cplx> &x, double a, const std::vector<cplx> &y)
{
    std::vector<cplx> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = x[i] + a * y[i];
    }
    return out;
}

} // namespace

std::pair<std::vector<cplx>, std::vector<cplx>> lattice_flow_eval(const LatticePair &pair, const PeriodicLattice &lat)
{
    const std::size_t n = lat.size();
    if (lat.B.size() != n) {
        throw std::invalid_argument("lattice_flow_eval: A and B differ in length");
    }
    for (const auto *p : {&pair.p1, &pair.p2}) {
        const auto [lo, hi] = offset_range(*p);
        if (hi - lo >= static_cast<int>(n)) {
            throw std::invalid_argument("lattice_flow_eval: offsets exceed the period");
        }
    }
    std::vector<cplx> dA(n), dB(n);
    for (std::size_t k = 0; k < n; ++k) {
        dA[k] = eval_lattice(pair.p1, lat.A, lat.B, static_cast<long>(k));
        dB[k] = eval_lattice(pair.p2, lat.A, lat.B, static_cast<long>(k));
    }
    return {std::move(dA), std::move(dB)};
}

PeriodicLattice integrate_flow(const PeriodicLattice &lat, const LatticePair &pair, double t_end, int steps)
{
    if (steps < 1) {
        throw std::invalid_argument("integrate_flow: steps must be positive");
    }
    const double dt = t_end / steps;
    PeriodicLattice cur = lat;
    auto field = [&](const std::vector<cplx> &A, const std::vector<cplx> &B) {
        return lattice_flow_eval(pair, PeriodicLattice{A, B});
    };
    for (int s = 0; s < steps; ++s) {
        const auto k1 = field(cur.A, cur.B);
        const auto k2 = field(axpy(cur.A, dt / 2, k1.first), axpy(cur.B, dt / 2, k1.second));
        const auto k3 = field(axpy(cur.A, dt / 2, k2.first), axpy(cur.B, dt / 2, k2.second));
        const auto k4 = field(axpy(cur.A, dt, k3.first), axpy(cur.B, dt, k3.second));
        for (std::size_t i = 0; i < cur.size(); ++i) {
            cur.A[i] += dt / 6 * (k1.first[i] + 2.0 * k2.first[i] + 2.0 * k3.first[i] + k4.first[i]);
            cur.B[i] += dt / 6 * (k1.second[i] + 2.0 * k2.second[i] + 2.0 * k3.second[i] + k4.second[i]);
        }
        check_finite(cur.A);
        check_finite(cur.B);
    }
    return cur;
}

std::vector<cplx> trace_invariants(const PeriodicLattice &lat, int m_max)
{
    if (m_max < 1) {
        throw std::invalid_argument("trace_invariants: m_max must be at least 1");
    }
    const std::size_t n = lat.size();
    using Matrix = std::vector<std::vector<cplx>>;
    Matrix c(n, std::vector<cplx>(n));
    for (std::size_t i = 0; i < n; ++i) {
        c[i][(i + n - 1) % n] += 1.0;
        c[i][i] += lat.A[i];
        c[i][(i + 1) % n] += lat.B[i];
    }
    std::vector<cplx> out;
    Matrix pw = c;
    for (int m = 1; m <= m_max; ++m) {
        cplx tr = 0;
        for (std::size_t i = 0; i < n; ++i) {
            tr += pw[i][i];
        }
        out.push_back(tr);
        if (m == m_max) {
            break;
        }
        Matrix next(n, std::vector<cplx>(n));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < n; ++k) {
                if (pw[i][k] == cplx(0)) {
                    continue;
                }
                for (std::size_t j = 0; j < n; ++j) {
                    next[i][j] += pw[i][k] * c[k][j];
                }
            }
        }
        pw = std::move(next);
    }
    return out;
}

PeriodicLattice random_lattice(std::size_t n, double amplitude, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-amplitude, amplitude);
    PeriodicLattice lat;
    for (std::size_t i = 0; i < n; ++i) {
        lat.A.emplace_back(-2.0 + u(rng));
        lat.B.emplace_back(1.0 + u(rng));
    }
    return lat;
}

TrigFunction TrigFunction::cosine(int m)
{
    TrigFunction g;
    g.M = std::abs(m);
    g.c.assign(static_cast<std::size_t>(2 * g.M + 1), 0.0);
    g.c[static_cast<std::size_t>(g.M + m)] += 0.5;
    g.c[static_cast<std::size_t>(g.M - m)] += 0.5;
    return g;
}

double TrigFunction::value(double x) const
{
    return jets(x, 0)[0];
}

std::vector<double> TrigFunction::jets(double x, unsigned order) const
{
    std::vector<double> out(order + 1, 0.0);
    for (int m = -M; m <= M; ++m) {
        const cplx cm = c[static_cast<std::size_t>(m + M)];
        if (cm == cplx(0)) {
            continue;
        }
        const double w = 2 * std::numbers::pi * m;
        cplx term = cm * std::exp(cplx(0, w * x));
        for (unsigned j = 0; j <= order; ++j) {
            out[j] += term.real();
            term *= cplx(0, w);
        }
    }
    return out;
}

double fit_slope(const std::vector<double> &x, const std::vector<double> &y)
{
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double den = n * sxx - sx * sx;
    return den == 0 ? 0.0 : (n * sxy - sx * sy) / den;
}

namespace
{

using quad = boost::multiprecision::float128;

/// Jets of a real trig polynomial in quad precision.
std::vector<quad> quad_jets(const TrigFunction &g, const quad &x, unsigned order)
{
    const quad pi = boost::math::constants::pi<quad>();
    std::vector<quad> out(order + 1, quad(0));
    for (int m = -g.M; m <= g.M; ++m) {
        const cplx cm = g.c[static_cast<std::size_t>(m + g.M)];
        if (cm == cplx(0)) {
            continue;
        }
        const quad w = 2 * pi * m;
        // Re((a + ib)(i w)^j e^{i w x})
        quad re = quad(cm.real()) * cos(w * x) - quad(cm.imag()) * sin(w * x);
        quad im = quad(cm.real()) * sin(w * x) + quad(cm.imag()) * cos(w * x);
        for (unsigned j = 0; j <= order; ++j) {
            out[j] += re;
            const quad nre = -im * w;
            im = re * w;
            re = nre;
        }
    }
    return out;
}

/// Derivative jets at every site of the trig polynomial interpolating real samples y_k = y(k/N).
std::vector<std::vector<quad>> interpolate_jets(const std::vector<quad> &y, unsigned order)
{
    const int n = static_cast<int>(y.size());
    const quad pi = boost::math::constants::pi<quad>();
    const int half = (n - 1) / 2;
    std::vector<quad> a(static_cast<std::size_t>(half + 1)), b(static_cast<std::size_t>(half + 1));
    for (int m = 0; m <= half; ++m) {
        quad sa = 0, sb = 0;
        for (int k = 0; k < n; ++k) {
            const quad th = 2 * pi * m * k / n;
            sa += y[static_cast<std::size_t>(k)] * cos(th);
            sb += y[static_cast<std::size_t>(k)] * sin(th);
        }
        a[static_cast<std::size_t>(m)] = sa / n * (m == 0 ? 1 : 2);
        b[static_cast<std::size_t>(m)] = sb / n * 2;
    }
    std::vector<std::vector<quad>> out(static_cast<std::size_t>(n), std::vector<quad>(order + 1, quad(0)));
    for (int k = 0; k < n; ++k) {
        for (int m = 0; m <= half; ++m) {
            const quad th = 2 * pi * m * k / n;
            const quad w = 2 * pi * m;
            // a cos + b sin, differentiated j times
            quad c0 = a[static_cast<std::size_t>(m)] * cos(th) + b[static_cast<std::size_t>(m)] * sin(th);
            quad c1 = -a[static_cast<std::size_t>(m)] * sin(th) + b[static_cast<std::size_t>(m)] * cos(th);
            for (unsigned j = 0; j <= order; ++j) {
                out[static_cast<std::size_t>(k)][j] += c0;
                const quad nc0 = c1 * w;
                c1 = -c0 * w;
                c0 = nc0;
            }
        }
    }
    return out;
}

} // namespace

SlowTestResult slow_order_test(const TrigFunction &g, const DeformationState &state, int order,
                               const std::vector<int> &sites)
{
    if (order < 0 || order > state.order) {
        throw std::invalid_argument("slow_order_test: order exceeds the deformation state");
    }
    if (sites.size() < 2) {
        throw std::invalid_argument("slow_order_test: need at least two lattice sizes");
    }
    // Q_n and dQ_n/dw_j for n < order
    std::vector<DiffPoly> qs;
    std::vector<std::vector<std::pair<unsigned, DiffPoly>>> partials;
    unsigned jet_order = 0;
    for (int n = 0; n < order; ++n) {
        qs.push_back(state.coefficient(n));
        std::vector<std::pair<unsigned, DiffPoly>> ps;
        for (VarId id : qs.back().variables()) {
            const auto gen = Generator::from_id(id);
            ps.emplace_back(gen.order, qs.back().diff(id));
            jet_order = std::max(jet_order, gen.order);
        }
        partials.push_back(std::move(ps));
    }
    const auto slow = slow_pair();
    const std::vector<quad> no_v;

    SlowTestResult res;
    res.order = order;
    std::vector<double> hs, defects, psis;
    for (int big_n : sites) {
        const quad h = quad(1) / big_n;
        const quad h2 = h * h;
        std::vector<std::vector<quad>> gj(static_cast<std::size_t>(big_n));
        std::vector<quad> A(static_cast<std::size_t>(big_n)), B(static_cast<std::size_t>(big_n));
        for (int k = 0; k < big_n; ++k) {
            auto &jets = gj[static_cast<std::size_t>(k)];
            jets = quad_jets(g, quad(k) / big_n, jet_order);
            quad f = 0, hp = 1;
            for (int n = 0; n < order; ++n) {
                f += hp * eval_poly<quad, quad>(qs[static_cast<std::size_t>(n)], no_v, jets);
                hp *= h;
            }
            A[static_cast<std::size_t>(k)] = -2 + h2 * f;
            B[static_cast<std::size_t>(k)] = 1 + h2 * jets[0];
        }
        std::vector<quad> dA(static_cast<std::size_t>(big_n)), dg(static_cast<std::size_t>(big_n));
        quad psi = 0;
        for (int k = 0; k < big_n; ++k) {
            const quad a = eval_lattice(slow.p1, A, B, k);
            const quad b = eval_lattice(slow.p2, A, B, k);
            dA[static_cast<std::size_t>(k)] = a;
            dg[static_cast<std::size_t>(k)] = b / h2;
            psi = std::max({psi, abs(a), abs(b)});
        }
        const auto dgj = interpolate_jets(dg, jet_order);
        quad defect = 0;
        for (int k = 0; k < big_n; ++k) {
            quad dq = 0, hp = 1;
            for (int n = 0; n < order; ++n) {
                for (const auto &[j, p] : partials[static_cast<std::size_t>(n)]) {
                    dq += hp * eval_poly<quad, quad>(p, no_v, gj[static_cast<std::size_t>(k)])
                          * dgj[static_cast<std::size_t>(k)][j];
                }
                hp *= h;
            }
            defect = std::max(defect, abs(dA[static_cast<std::size_t>(k)] / h2 - dq));
        }
        res.rows.push_back({static_cast<double>(h), static_cast<double>(defect), static_cast<double>(psi)});
        hs.push_back(static_cast<double>(h));
        defects.push_back(std::max(static_cast<double>(defect), 1e-300));
        psis.push_back(std::max(static_cast<double>(psi), 1e-300));
    }
    res.slope = fit_slope(hs, defects);
    res.psi_slope = fit_slope(hs, psis);
    return res;
}

ConsistencyResult jet_lattice_consistency(const TrigFunction &f, const TrigFunction &g, int n_terms,
                                          const std::vector<int> &sites)
{
    const auto t1 = toda_generator(1);
    const auto img = toda_to_eps(t1, n_terms);
    const auto [lo1, hi1] = offset_range(t1.p1);
    const auto [lo2, hi2] = offset_range(t1.p2);
    const int lo = std::min(lo1, lo2), hi = std::max(hi1, hi2);
    const unsigned jet_order = static_cast<unsigned>(n_terms);
    ConsistencyResult res;
    for (int big_n : sites) {
        const double h = 1.0 / big_n;
        double err = 0;
        // sample points away from the lattice to use genuinely off-grid jets
        for (int k = 0; k < 8; ++k) {
            const double x = (k + 0.37) / 8;
            std::vector<double> A, B;
            for (int o = lo; o <= hi; ++o) {
                A.push_back(f.value(x + o * h));
                B.push_back(g.value(x + o * h));
            }
            // eval_lattice wraps modulo the local window; offsets are shifted so site -lo is x
            const auto fj = f.jets(x, jet_order), gj = g.jets(x, jet_order);
            const std::span<const double> sf(fj), sg(gj);
            const double lat1 = eval_lattice(t1.p1, A, B, -lo);
            const double lat2 = eval_lattice(t1.p2, A, B, -lo);
            const double ser1 = jet_eval<double, double>(img.img_v, sf, sg, h, n_terms);
            const double ser2 = jet_eval<double, double>(img.img_w, sf, sg, h, n_terms);
            err = std::max({err, std::abs(lat1 - ser1), std::abs(lat2 - ser2)});
        }
        res.h.push_back(h);
        res.error.push_back(std::max(err, 1e-300));
    }
    res.slope = fit_slope(res.h, res.error);
    return res;
}

ThetaFormsReport theta_forms_check(int samples, std::uint64_t seed)
{
    ThetaFormsReport rep;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> logmod(std::log(0.5), std::log(2.0)), phase(-std::numbers::pi, std::numbers::pi);
    auto point = [&] { return std::polar(std::exp(logmod(rng)), phase(rng)); };
    while (rep.samples < samples) {
        const cplx p = point(), s = point(), x = point();
        try {
            const cplx r = theta_B_ratio(p, s, x);
            const double scale = std::max(1.0, std::abs(r));
            rep.max_theta = std::max(rep.max_theta, std::abs(theta_B_theta(p, s, x) - r) / scale);
            rep.max_expanded = std::max(rep.max_expanded, std::abs(theta_B_expanded(p, s, x) - r) / scale);
            rep.max_v0 = std::max(rep.max_v0, std::abs(theta_B_v0(p, s, x) - r) / scale);
            ++rep.samples;
        } catch (const PoleHit &) {
            ++rep.poles;
        }
    }
    std::uniform_int_distribution<int> num(-40, 40), den(1, 17);
    rep.alpha0_exact = true;
    while (rep.alpha0_points < 20) {
        Rational p(num(rng), den(rng)), s(num(rng), den(rng));
        p.canonicalize();
        s.canonicalize();
        try {
            const bool ok = theta_B_ratio(p, s, s) == 1 && theta_B_theta(p, s, s) == 1 && theta_B_expanded(p, s, s) == 1
                            && theta_B_v0(p, s, s) == 1;
            rep.alpha0_exact = rep.alpha0_exact && ok;
            ++rep.alpha0_points;
        } catch (const PoleHit &) {
        }
    }
    const cplx p0(0.7, 0.4), s0(1.3, -0.2), x0(0.4, 0.9);
    rep.swap_sample = theta_B_ratio(p0, s0, x0) * theta_B_ratio(1.0 / p0, s0, x0);
    return rep;
}

cplx theta_H_over_pi2(cplx s, cplx beta)
{
    const cplx den = (s * beta - 1.0) * (s * beta - 1.0) * (s - 1.0) * (s - 1.0);
    if (den == cplx(0)) {
        throw PoleHit("theta_H: s*beta = 1 or s = 1");
    }
    return 4.0 * s * (s * s * beta * beta - beta + 1.0 - s * s * beta) / den;
}

cplx theta_H(cplx s, cplx beta)
{
    return std::numbers::pi * std::numbers::pi * theta_H_over_pi2(s, beta);
}

HLimitResult theta_H_limit(int b, cplx s, cplx beta, const std::vector<double> &hs)
{
    if (b == 0) {
        throw std::invalid_argument("theta_H_limit: b must be nonzero");
    }
    HLimitResult res{b, s, beta, theta_H(s, beta), {}, 0, 0, 0, 0};
    const cplx x = s * beta;
    const cplx b2H = double(b * b) * res.H;
    for (std::size_t i = 0; i < hs.size(); ++i) {
        const double h = hs[i];
        const cplx v0 = std::exp(cplx(0, b * std::numbers::pi * h));
        const cplx quotient = (theta_B_expanded(v0, s, x) - 1.0) / (h * h);
        // the quotient carries an O(h) term; one Richardson step removes it
        cplx extrap = quotient;
        if (i > 0) {
            const double r = hs[i - 1] / h;
            extrap = (r * quotient - res.rows.back().quotient) / (r - 1);
        }
        res.rows.push_back({h, quotient, std::abs(quotient - res.H), std::abs(quotient - b2H), extrap,
                            std::abs(extrap - res.H), std::abs(extrap - b2H)});
    }
    auto order = [&](auto member, std::size_t first) {
        std::vector<double> h, e;
        for (std::size_t i = first; i < res.rows.size(); ++i) {
            h.push_back(res.rows[i].h);
            e.push_back(std::max(res.rows[i].*member, 1e-300));
        }
        return h.size() < 2 ? 0.0 : fit_slope(h, e);
    };
    res.order_H = order(&HLimitRow::err_H, 0);
    res.order_b2H = order(&HLimitRow::err_b2H, 0);
    res.order_extrap_H = order(&HLimitRow::err_extrap_H, 1);
    res.order_extrap_b2H = order(&HLimitRow::err_extrap_b2H, 1);
    return res;
}

GaussRational operator/(const GaussRational &a, const GaussRational &b)
{
    const Rational n = b.re * b.re + b.im * b.im;
    if (sgn(n) == 0) {
        throw PoleHit("division by zero Gaussian rational");
    }
    return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
}

std::string to_string(const GaussRational &z)
{
    return to_fraction_string(z.re) + (sgn(z.im) < 0 ? " - " : " + ") + to_fraction_string(abs(z.im)) + "*i";
}

namespace
{

/// Truncated power series in t with Gaussian-rational coefficients.
using TSeries = std::vector<GaussRational>;

TSeries ts_mul(const TSeries &a, const TSeries &b, std::size_t len)
{
    TSeries out(len);
    for (std::size_t i = 0; i < a.size() && i < len; ++i) {
        for (std::size_t j = 0; j < b.size() && i + j < len; ++j) {
            out[i + j] = out[i + j] + a[i] * b[j];
        }
    }
    return out;
}

/// x a + y b
TSeries ts_lin(const GaussRational &x, const TSeries &a, const GaussRational &y, const TSeries &b, std::size_t len)
{
    TSeries out(len);
    for (std::size_t i = 0; i < len; ++i) {
        if (i < a.size()) {
            out[i] = out[i] + x * a[i];
        }
        if (i < b.size()) {
            out[i] = out[i] + y * b[i];
        }
    }
    return out;
}

TSeries ts_div(const TSeries &a, const TSeries &b, std::size_t len)
{
    if (b.empty() || b[0].is_zero()) {
        throw PoleHit("theta_H_derivative_check: denominator vanishes at t = 0");
    }
    TSeries out(len);
    for (std::size_t i = 0; i < len; ++i) {
        GaussRational acc = i < a.size() ? a[i] : GaussRational{};
        for (std::size_t j = 1; j <= i && j < b.size(); ++j) {
            acc = acc - b[j] * out[i - j];
        }
        out[i] = acc / b[0];
    }
    return out;
}

} // namespace

HDerivativeCheck theta_H_derivative_check(int b, const GaussRational &beta)
{
    if (b == 0 || beta.is_zero()) {
        throw PoleHit("theta_H_derivative_check: b and beta must be nonzero");
    }
    // s = u/t with u = 2b - t; H/pi^2 = 4 u t (u^2 beta(beta-1) + (1-beta) t^2) / ((u beta - t)^2 (u - t)^2)
    constexpr std::size_t len = 3;
    const GaussRational one(1);
    const TSeries u{GaussRational(2 * b), GaussRational(-1)};
    const TSeries t{GaussRational(0), one};
    const TSeries u2 = ts_mul(u, u, len);
    const TSeries t2 = ts_mul(t, t, len);
    const TSeries inner = ts_lin(beta * (beta - one), u2, one - beta, t2, len);
    const TSeries num = ts_mul(ts_mul(TSeries{GaussRational(4)}, ts_mul(u, t, len), len), inner, len);
    const TSeries a = ts_lin(beta, u, GaussRational(-1), t, len); // u beta - t
    const TSeries c = ts_lin(one, u, GaussRational(-1), t, len);  // u - t
    const TSeries den = ts_mul(ts_mul(a, a, len), ts_mul(c, c, len), len);
    const TSeries h = ts_div(num, den, len);

    HDerivativeCheck out;
    out.lhs_over_pi2 = h[1];
    out.rhs_over_pi2 = GaussRational(2 * b) * (beta - one) / beta;
    const double pi2 = std::numbers::pi * std::numbers::pi;
    out.lhs = pi2 * out.lhs_over_pi2.to_complex();
    out.rhs = pi2 * out.rhs_over_pi2.to_complex();
    out.ratio = out.lhs_over_pi2.is_zero() ? GaussRational{} : out.rhs_over_pi2 / out.lhs_over_pi2;
    return out;
}

} // namespace tkdv
