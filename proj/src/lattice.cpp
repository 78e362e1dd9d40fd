#include <tkdv/lattice.hpp>

#include <stdexcept>
#include <unordered_map>

namespace tkdv
{

LatticePoly X(int offset, unsigned exp)
{
    return LatticePoly::variable(ShiftVar{Axis::X, offset}.id(), exp);
}

LatticePoly Y(int offset, unsigned exp)
{
    return LatticePoly::variable(ShiftVar{Axis::Y, offset}.id(), exp);
}

LatticePoly shift(const LatticePoly &p, int s)
{
    if (s == 0) {
        return p;
    }
    return p.map_vars([s](VarId id) {
        auto sv = ShiftVar::from_id(id);
        sv.offset += s;
        if (sv.offset <= -ShiftVar::kBias || sv.offset >= ShiftVar::kBias) {
            throw std::out_of_range("lattice shift out of range");
        }
        return sv.id();
    });
}

std::pair<int, int> offset_range(const LatticePoly &p)
{
    bool any = false;
    int lo = 0, hi = 0;
    for (auto id : p.variables()) {
        const int o = ShiftVar::from_id(id).offset;
        lo = any ? std::min(lo, o) : o;
        hi = any ? std::max(hi, o) : o;
        any = true;
    }
    return {lo, hi};
}

LatticePair operator+(const LatticePair &a, const LatticePair &b)
{
    return {a.p1 + b.p1, a.p2 + b.p2};
}

LatticePair operator-(const LatticePair &a, const LatticePair &b)
{
    return {a.p1 - b.p1, a.p2 - b.p2};
}

LatticePair operator*(const Rational &c, const LatticePair &a)
{
    return {a.p1 * c, a.p2 * c};
}

LatticePoly lattice_derive(const LatticePair &pair, const LatticePoly &target)
{
    LatticePoly out;
    for (auto id : target.variables()) {
        const auto sv = ShiftVar::from_id(id);
        const auto &img = sv.axis == Axis::X ? pair.p1 : pair.p2;
        out += target.diff(id) * shift(img, sv.offset);
    }
    return out;
}

LatticePair lattice_bracket(const LatticePair &a, const LatticePair &b)
{
    return {lattice_derive(a, b.p1) - lattice_derive(b, a.p1), lattice_derive(a, b.p2) - lattice_derive(b, a.p2)};
}

const LatticePoly &BandTemplate::at(int offset) const
{
    static const LatticePoly zero;
    auto it = entries.find(offset);
    return it == entries.end() ? zero : it->second;
}

BandTemplate BandTemplate::upper() const
{
    BandTemplate r;
    for (const auto &[o, p] : entries) {
        if (o > 0) {
            r.entries.emplace(o, p);
        }
    }
    return r;
}

BandTemplate operator*(const BandTemplate &m, const BandTemplate &n)
{
    BandTemplate r;
    for (const auto &[e, me] : m.entries) {
        for (const auto &[f, nf] : n.entries) {
            auto &slot = r.entries[e + f];
            slot += me * shift(nf, e);
        }
    }
    std::erase_if(r.entries, [](const auto &kv) { return kv.second.is_zero(); });
    return r;
}

BandTemplate operator-(const BandTemplate &m, const BandTemplate &n)
{
    BandTemplate r = m;
    for (const auto &[o, p] : n.entries) {
        r.entries[o] -= p;
    }
    std::erase_if(r.entries, [](const auto &kv) { return kv.second.is_zero(); });
    return r;
}

BandTemplate lax_operator()
{
    BandTemplate c;
    c.entries.emplace(-1, LatticePoly(Rational(1)));
    c.entries.emplace(0, X(0));
    c.entries.emplace(1, Y(0));
    return c;
}

LatticePair toda_generator(unsigned k)
{
    if (k < 1) {
        throw std::invalid_argument("toda_generator: k must be positive");
    }
    const BandTemplate c = lax_operator();
    BandTemplate ck = c;
    for (unsigned i = 1; i < k; ++i) {
        ck = ck * c;
    }
    const BandTemplate up = ck.upper();
    const BandTemplate br = up * c - c * up;
    for (const auto &[o, p] : br.entries) {
        if (o != 0 && o != 1) {
            throw std::logic_error("toda_generator: Lax bracket has an entry off the tridiagonal Lax pattern");
        }
    }
    return {-br.at(0), -br.at(1)};
}

EpsSeries lattice_to_eps(const LatticePoly &p, int trunc)
{
    std::unordered_map<VarId, EpsSeries> base;
    for (auto id : p.variables()) {
        const auto sv = ShiftVar::from_id(id);
        base.emplace(id, exp_shift(sv.offset, sv.axis == Axis::X ? v(0) : w(0), trunc));
    }
    std::unordered_map<Monomial, EpsSeries, MonomialHash> memo;
    auto image = [&](auto &&self, const Monomial &m) -> EpsSeries {
        if (m.empty()) {
            return EpsSeries(DiffPoly(Rational(1)), trunc);
        }
        if (auto it = memo.find(m); it != memo.end()) {
            return it->second;
        }
        const VarId var = factor_var(m.back());
        EpsSeries r = (self(self, monomial_adjust(m, var, -1)) * base.at(var)).truncated(trunc);
        memo.emplace(m, r);
        return r;
    };
    EpsSeries out = EpsSeries::zero(trunc);
    for (const auto &[m, c] : p.terms()) {
        out += c * image(image, m);
    }
    return out.truncated(trunc);
}

LatticePair quadratic_pair_closed_form()
{
    const Rational two(2);
    LatticePair p;
    p.p1 = X(-1) * Y(-1) + X(0) * Y(-1) + LatticePoly(two) * Y(-1) - X(0) * Y(0) - X(1) * Y(0) - LatticePoly(two) * Y(0);
    p.p2 = Y(0) * (Y(-1) + X(0, 2) + LatticePoly(two) * X(0) - X(1, 2) - LatticePoly(two) * X(1) - Y(1));
    return p;
}

TameDerivation toda_to_eps(const LatticePair &pair, int trunc)
{
    if (trunc < 1) {
        throw std::invalid_argument("toda_to_eps: truncation must be at least 1");
    }
    return {lattice_to_eps(pair.p1, trunc), lattice_to_eps(pair.p2, trunc)};
}

std::string to_string(const LatticePoly &p)
{
    if (p.is_zero()) {
        return "0";
    }
    std::string out;
    bool first = true;
    for (const auto &[m, c] : p.terms()) {
        Rational mag = abs(c);
        out += first ? (sgn(c) < 0 ? "-" : "") : (sgn(c) < 0 ? " - " : " + ");
        first = false;
        const bool unit = mag == 1;
        if (!unit || m.empty()) {
            out += mag.get_str();
        }
        bool lead = unit;
        for (auto f : m) {
            if (!lead) {
                out += "*";
            }
            lead = false;
            const auto sv = ShiftVar::from_id(factor_var(f));
            out += (sv.axis == Axis::X ? "X" : "Y") + std::string("[") + std::to_string(sv.offset) + "]";
            if (factor_exp(f) > 1) {
                out += "^" + std::to_string(factor_exp(f));
            }
        }
    }
    return out;
}

} // namespace tkdv
