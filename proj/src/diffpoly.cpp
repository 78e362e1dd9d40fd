#include <tkdv/diffpoly.hpp>

#include <stdexcept>
#include <vector>

#include <tkdv/errors.hpp>

namespace tkdv
{

DiffPoly gen(Letter l, unsigned order, unsigned exp)
{
    if (order >= (1u << Generator::kOrderBits)) {
        throw std::out_of_range("derivative order too large");
    }
    return DiffPoly::variable(Generator{l, order}.id(), exp);
}

DiffPoly partial(const DiffPoly &p)
{
    std::vector<DiffPoly::term_type> out;
    out.reserve(p.size() * 2);
    for (const auto &[m, c] : p.terms()) {
        for (auto f : m) {
            const auto var = factor_var(f);
            const auto e = factor_exp(f);
            Monomial nm = monomial_adjust(m, var, -1);
            nm = monomial_adjust(nm, var + 1, 1);
            out.emplace_back(std::move(nm), Rational(c * e));
        }
    }
    return DiffPoly::from_terms(std::move(out));
}

DiffPoly partial(const DiffPoly &p, unsigned times)
{
    DiffPoly r = p;
    for (unsigned i = 0; i < times && !r.is_zero(); ++i) {
        r = partial(r);
    }
    return r;
}

DiffPoly diff_gen(const DiffPoly &p, Generator g)
{
    return p.diff(g.id());
}

bool is_w_only(const DiffPoly &p)
{
    return max_order(p, Letter::V) < 0;
}

int max_order(const DiffPoly &p, Letter l)
{
    int best = -1;
    for (const auto &t : p.terms()) {
        for (auto f : t.first) {
            const auto g = Generator::from_id(factor_var(f));
            if (g.letter == l) {
                best = std::max(best, static_cast<int>(g.order));
            }
        }
    }
    return best;
}

DiffPoly var_derivative(const DiffPoly &p)
{
    if (!is_w_only(p)) {
        throw std::invalid_argument("var_derivative: input must not contain v-generators");
    }
    DiffPoly out;
    const int top = max_order(p, Letter::W);
    for (int k = 0; k <= top; ++k) {
        DiffPoly term = partial(diff_gen(p, {Letter::W, static_cast<unsigned>(k)}), static_cast<unsigned>(k));
        if (k % 2 == 0) {
            out += term;
        } else {
            out -= term;
        }
    }
    return out;
}

DiffPoly antiderivative(const DiffPoly &g)
{
    if (!is_w_only(g)) {
        throw std::invalid_argument("antiderivative: input must not contain v-generators");
    }
    if (!is_zero(g.constant_term())) {
        throw NotExact("antiderivative: nonzero constant term");
    }
    DiffPoly rest = g;
    DiffPoly result;
    while (!rest.is_zero()) {
        const int m = max_order(rest, Letter::W);
        if (m <= 0) {
            throw NotExact("antiderivative: remainder " + to_string(rest) + " is not a total derivative");
        }
        const VarId top = Generator{Letter::W, static_cast<unsigned>(m)}.id();
        const VarId below = top - 1;
        std::vector<DiffPoly::term_type> cand;
        for (const auto &[mono, c] : rest.terms()) {
            const auto e = monomial_exponent(mono, top);
            if (e == 0) {
                continue;
            }
            if (e > 1) {
                throw NotExact("antiderivative: highest generator appears nonlinearly in " + to_string(rest));
            }
            // Integrate M * w^(m-1)^k * w^(m) in w^(m-1).
            const auto k = monomial_exponent(mono, below);
            Monomial nm = monomial_adjust(mono, top, -1);
            nm = monomial_adjust(nm, below, 1);
            cand.emplace_back(std::move(nm), Rational(c / (k + 1)));
        }
        DiffPoly step = DiffPoly::from_terms(std::move(cand));
        rest -= partial(step);
        result += step;
        if (max_order(rest, Letter::W) >= m) {
            throw NotExact("antiderivative: elimination stalled on " + to_string(rest));
        }
    }
    return result;
}

WeightProfile monomial_profile(const Monomial &m)
{
    WeightProfile wp;
    for (auto f : m) {
        const auto g = Generator::from_id(factor_var(f));
        const auto e = factor_exp(f);
        (g.letter == Letter::V ? wp.amp_v : wp.amp_w) += e;
        wp.diff += g.order * e;
    }
    return wp;
}

std::optional<WeightProfile> weight_profile(const DiffPoly &p)
{
    std::optional<WeightProfile> common;
    for (const auto &t : p.terms()) {
        const auto wp = monomial_profile(t.first);
        if (!common) {
            common = wp;
        } else if (*common != wp) {
            return std::nullopt;
        }
    }
    return common.value_or(WeightProfile{});
}

std::optional<unsigned> combined_weight(const DiffPoly &p)
{
    std::optional<unsigned> common;
    for (const auto &t : p.terms()) {
        const auto wp = monomial_profile(t.first);
        const unsigned cw = 2 * (wp.amp_v + wp.amp_w) + wp.diff;
        if (!common) {
            common = cw;
        } else if (*common != cw) {
            return std::nullopt;
        }
    }
    return common.value_or(0u);
}

std::string to_string(Generator g)
{
    return std::string(g.letter == Letter::V ? "v" : "w") + std::to_string(g.order);
}

std::string to_string(const DiffPoly &p)
{
    if (p.is_zero()) {
        return "0";
    }
    std::string out;
    bool first = true;
    for (const auto &[m, c] : p.terms()) {
        Rational mag = abs(c);
        if (first) {
            out += sgn(c) < 0 ? "-" : "";
        } else {
            out += sgn(c) < 0 ? " - " : " + ";
        }
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
            out += to_string(Generator::from_id(factor_var(f)));
            if (factor_exp(f) > 1) {
                out += "^" + std::to_string(factor_exp(f));
            }
        }
    }
    return out;
}

} // namespace tkdv
