#include <tkdv/derivation.hpp>

#include <map>
#include <stdexcept>

#include <tkdv/errors.hpp>

namespace tkdv
{

TameDerivation operator+(const TameDerivation &a, const TameDerivation &b)
{
    return {a.img_v + b.img_v, a.img_w + b.img_w};
}

TameDerivation operator-(const TameDerivation &a, const TameDerivation &b)
{
    return {a.img_v - b.img_v, a.img_w - b.img_w};
}

TameDerivation operator*(const Rational &c, const TameDerivation &d)
{
    return {c * d.img_v, c * d.img_w};
}

TameDerivation shifted(const TameDerivation &d, int k)
{
    return {d.img_v.shifted(k), d.img_w.shifted(k)};
}

namespace
{

// Accumulates terms per eps-exponent and canonicalizes once at the end.
class SeriesAccumulator
{
public:
    explicit SeriesAccumulator(int trunc) : trunc_(trunc) {}

    void add(int k, const Monomial &m, const Rational &c)
    {
        if (k < trunc_) {
            slots_[k].emplace_back(m, c);
        }
    }
    void add(int k, const DiffPoly &p, const Rational &scale, const Monomial &factor)
    {
        if (k >= trunc_) {
            return;
        }
        auto &slot = slots_[k];
        for (const auto &[m, c] : p.terms()) {
            slot.emplace_back(factor.empty() ? m : monomial_mul(m, factor), Rational(c * scale));
        }
    }
    EpsSeries finish()
    {
        if (slots_.empty()) {
            return EpsSeries::zero(trunc_);
        }
        const int lo = slots_.begin()->first;
        const int hi = slots_.rbegin()->first + 1;
        std::vector<DiffPoly> out(static_cast<std::size_t>(hi - lo));
        for (auto &[k, terms] : slots_) {
            out[static_cast<std::size_t>(k - lo)] = DiffPoly::from_terms(std::move(terms));
        }
        return EpsSeries(lo, std::move(out), trunc_);
    }

private:
    int trunc_;
    std::map<int, std::vector<DiffPoly::term_type>> slots_;
};

} // namespace

const EpsSeries &Deriver::image(Generator g)
{
    auto &cache = g.letter == Letter::V ? dv_ : dw_;
    if (cache.empty()) {
        cache.push_back(g.letter == Letter::V ? d_.img_v : d_.img_w);
    }
    while (cache.size() <= g.order) {
        cache.push_back(partial(cache.back()));
    }
    return cache[g.order];
}

EpsSeries Deriver::apply(const DiffPoly &p)
{
    const int t = d_.trunc();
    SeriesAccumulator acc(t);
    for (auto var : p.variables()) {
        const auto g = Generator::from_id(var);
        const DiffPoly dp = p.diff(var);
        const EpsSeries &img = image(g);
        for (int k = img.min_exp(); k < img.end_exp() && k < t; ++k) {
            const auto &c = img.coeff(k);
            if (c.is_zero()) {
                continue;
            }
            for (const auto &[m, coef] : c.terms()) {
                acc.add(k, dp, coef, m);
            }
        }
    }
    return acc.finish();
}

EpsSeries Deriver::apply(const EpsSeries &p)
{
    const int t = std::min(trunc_add(p.trunc(), d_.valuation()), trunc_add(d_.trunc(), p.valuation()));
    EpsSeries out = EpsSeries::zero(t);
    for (int k = p.min_exp(); k < p.end_exp(); ++k) {
        const auto &c = p.coeff(k);
        if (c.is_zero()) {
            continue;
        }
        out += apply(c).shifted(k).truncated(t);
    }
    return out.truncated(t);
}

EpsSeries derive(const TameDerivation &d, const EpsSeries &p)
{
    Deriver dr(d);
    return dr.apply(p);
}

EpsSeries derive(const TameDerivation &d, const DiffPoly &p)
{
    Deriver dr(d);
    return dr.apply(p);
}

TameDerivation commutator(const TameDerivation &a, const TameDerivation &b)
{
    Deriver da(a), db(b);
    return {da.apply(b.img_v) - db.apply(a.img_v), da.apply(b.img_w) - db.apply(a.img_w)};
}

TameDerivation translation()
{
    return {EpsSeries(v(1)), EpsSeries(w(1))};
}

namespace
{

// Generic substitution v0 -> s_v0, w0 -> s_w0, higher generators scaled by eps^shift. For phi,
// s = a + eps^shift x and x^e expands as sum_i C(e,i) a^(e-i) x^i eps^(shift*i). For the inverse,
// s = eps^shift (a + x), so every factor carries eps^shift (`scale_all`).
EpsSeries phi_like(const EpsSeries &p, const Rational &av, const Rational &aw, int shift, int trunc, bool scale_all)
{
    SeriesAccumulator acc(trunc);
    const VarId v0 = Generator{Letter::V, 0}.id();
    const VarId w0 = Generator{Letter::W, 0}.id();
    for (int k = p.min_exp(); k < p.end_exp(); ++k) {
        for (const auto &[m, c] : p.coeff(k).terms()) {
            const unsigned a = monomial_exponent(m, v0);
            const unsigned b = monomial_exponent(m, w0);
            const unsigned rest = total_degree(m) - a - b;
            Monomial base = monomial_adjust(monomial_adjust(m, v0, -static_cast<int>(a)), w0, -static_cast<int>(b));
            for (unsigned i = 0; i <= a; ++i) {
                Rational ci = c * binomial(a, i);
                if (a - i > 0) {
                    mpz_class num, den;
                    mpz_pow_ui(num.get_mpz_t(), av.get_num_mpz_t(), a - i);
                    mpz_pow_ui(den.get_mpz_t(), av.get_den_mpz_t(), a - i);
                    ci *= Rational(num, den);
                }
                if (tkdv::is_zero(ci)) {
                    continue;
                }
                for (unsigned j = 0; j <= b; ++j) {
                    Rational cij = ci * binomial(b, j);
                    if (b - j > 0) {
                        mpz_class num, den;
                        mpz_pow_ui(num.get_mpz_t(), aw.get_num_mpz_t(), b - j);
                        mpz_pow_ui(den.get_mpz_t(), aw.get_den_mpz_t(), b - j);
                        cij *= Rational(num, den);
                    }
                    if (tkdv::is_zero(cij)) {
                        continue;
                    }
                    Monomial mm = monomial_adjust(monomial_adjust(base, v0, static_cast<int>(i)), w0,
                                                  static_cast<int>(j));
                    const long e = static_cast<long>(k) + static_cast<long>(shift) * (scale_all ? a + b + rest : i + j + rest);
                    if (e < trunc) {
                        acc.add(static_cast<int>(e), mm, cij);
                    }
                }
            }
        }
    }
    return acc.finish();
}

} // namespace

EpsSeries phi(const EpsSeries &p)
{
    return phi_like(p, Rational(-2), Rational(1), 2, p.trunc(), false);
}

EpsSeries phi(const DiffPoly &p)
{
    return phi(EpsSeries(p));
}

EpsSeries phi_inv(const EpsSeries &p)
{
    if (!p.exact()) {
        throw std::invalid_argument("phi_inv: input series must be exact");
    }
    return phi_like(p, Rational(2), Rational(-1), -2, kExact, true);
}

TameDerivation conjugate(const TameDerivation &d)
{
    Deriver dr(d);
    const EpsSeries iv = dr.apply(phi_inv(EpsSeries(v(0))));
    const EpsSeries iw = dr.apply(phi_inv(EpsSeries(w(0))));
    TameDerivation out{phi(iv), phi(iw)};
    for (const auto *s : {&out.img_v, &out.img_w}) {
        if (!s->is_zero() && s->min_exp() < 0) {
            throw NotTame("conjugate: result has a nonzero coefficient at eps^" + std::to_string(s->min_exp()));
        }
    }
    return out;
}

SigmaSubstitution::SigmaSubstitution(const EpsSeries &q, int limit) : q_(q.truncated(limit)), limit_(limit)
{
    if (!q_.is_w_only()) {
        throw std::invalid_argument("substitute_sigma: Q must not contain v-generators");
    }
}

const EpsSeries &SigmaSubstitution::q_derivative(unsigned j)
{
    if (dq_.empty()) {
        dq_.push_back(q_);
    }
    while (dq_.size() <= j) {
        dq_.push_back(partial(dq_.back()));
    }
    return dq_[j];
}

const EpsSeries &SigmaSubstitution::v_part(const Monomial &m, int trunc)
{
    auto it = memo_.find(m);
    if (it != memo_.end() && it->second.trunc() >= trunc) {
        return it->second;
    }
    EpsSeries result;
    if (m.empty()) {
        result = EpsSeries(DiffPoly(Rational(1)));
    } else {
        const Factor last = m.back();
        const VarId var = factor_var(last);
        Monomial prefix = monomial_adjust(m, var, -1);
        const auto order = Generator::from_id(var).order;
        EpsSeries head = v_part(prefix, trunc).truncated(trunc);
        result = (head * q_derivative(order).truncated(trunc)).truncated(trunc);
    }
    auto [pos, fresh] = memo_.insert_or_assign(m, std::move(result));
    (void)fresh;
    return pos->second;
}

EpsSeries SigmaSubstitution::apply(const DiffPoly &p, int trunc)
{
    trunc = std::min({trunc, limit_, q_.trunc()});
    SeriesAccumulator acc(trunc);
    for (const auto &[m, c] : p.terms()) {
        Monomial vpart, wpart;
        for (auto f : m) {
            (Generator::from_id(factor_var(f)).letter == Letter::V ? vpart : wpart).push_back(f);
        }
        if (vpart.empty()) {
            acc.add(0, m, c);
            continue;
        }
        const EpsSeries &s = v_part(vpart, trunc);
        for (int k = s.min_exp(); k < s.end_exp() && k < trunc; ++k) {
            acc.add(k, s.coeff(k), c, wpart);
        }
    }
    return acc.finish();
}

EpsSeries SigmaSubstitution::apply(const EpsSeries &p)
{
    const int t = std::min({p.trunc(), trunc_add(q_.trunc(), p.valuation()), trunc_add(limit_, 0)});
    SeriesAccumulator acc(t);
    for (int k = p.min_exp(); k < p.end_exp() && k < t; ++k) {
        const auto &c = p.coeff(k);
        if (c.is_zero()) {
            continue;
        }
        const EpsSeries s = apply(c, t - k);
        for (int j = s.min_exp(); j < s.end_exp(); ++j) {
            acc.add(j + k, s.coeff(j), Rational(1), Monomial{});
        }
    }
    return acc.finish();
}

EpsSeries substitute_sigma(const EpsSeries &q, const EpsSeries &p, int limit)
{
    SigmaSubstitution s(q, limit);
    return s.apply(p);
}

} // namespace tkdv
