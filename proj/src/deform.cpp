#include <tkdv/deform.hpp>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <tkdv/errors.hpp>
#include <tkdv/linalg.hpp>

namespace tkdv
{

json to_json(const Gauge &g)
{
    json cands = json::array();
    for (const auto &c : g.c_candidates) {
        cands.push_back(to_fraction_string(c));
    }
    return {{"slow_spec", g.slow_spec},
            {"slow_scale", to_fraction_string(g.slow_scale)},
            {"integration_constants", g.integration_constants},
            {"c_candidates", std::move(cands)},
            {"c", g.c ? json(to_fraction_string(*g.c)) : json(nullptr)}};
}

Gauge gauge_from_json(const json &j)
{
    Gauge g;
    g.slow_spec = j.at("slow_spec").get<std::string>();
    g.slow_scale = parse_fraction(j.at("slow_scale").get<std::string>());
    g.integration_constants = j.at("integration_constants").get<std::string>();
    g.c_candidates.clear();
    for (const auto &c : j.at("c_candidates")) {
        g.c_candidates.push_back(parse_fraction(c.get<std::string>()));
    }
    if (!j.at("c").is_null()) {
        g.c = parse_fraction(j.at("c").get<std::string>());
    }
    return g;
}

DeformationState initial_state(const Gauge &gauge)
{
    DeformationState s;
    s.q = EpsSeries(w(0), 1);
    s.order = 0;
    s.gauge = gauge;
    return s;
}

namespace
{

EpsSeries as_polynomial(const EpsSeries &q)
{
    return EpsSeries(q.min_exp(), q.coeffs(), kExact);
}

} // namespace

EpsSeries ideal_residual(const EpsSeries &q, const TameDerivation &d, int n)
{
    if (d.trunc() < n) {
        throw TruncationTooShallow("ideal_residual: derivation known only modulo eps^" + std::to_string(d.trunc()));
    }
    const EpsSeries qp = as_polynomial(q).truncated(n);
    SigmaSubstitution sigma(as_polynomial(qp), n);
    EpsSeries total = sigma.apply(d.img_v.truncated(n));
    EpsSeries dj = sigma.apply(d.img_w.truncated(n));
    int top = -1;
    for (const auto &c : qp.coeffs()) {
        top = std::max(top, max_order(c, Letter::W));
    }
    for (int j = 0; j <= top; ++j) {
        const EpsSeries dq = diff_gen(as_polynomial(qp), Generator{Letter::W, static_cast<unsigned>(j)});
        if (!dq.is_zero()) {
            total -= (dq * dj).truncated(n);
        }
        if (j < top) {
            dj = partial(dj);
        }
    }
    return total.truncated(n);
}

Deformer::Deformer(int max_order, const Gauge &gauge)
    : max_order_(max_order), gauge_(gauge), slow_(slow_generator(std::max(max_order, 2), gauge.slow_scale))
{
}

void Deformer::extend_order(DeformationState &state) const
{
    const int n = state.order;
    if (n + 1 > slow_.trunc()) {
        throw TruncationTooShallow("extend_order: slow generator known only modulo eps^" + std::to_string(slow_.trunc()));
    }
    const TameDerivation d = slow_.truncated(n + 1);
    const EpsSeries rho = ideal_residual(state.q, d, n + 1);
    for (int k = rho.min_exp(); k < n; ++k) {
        if (!rho.coeff(k).is_zero()) {
            throw CorrectionFailed("extend_order: residual nonzero below the current order at eps^" + std::to_string(k));
        }
    }
    ObstructionEntry entry;
    entry.n = n;
    entry.g = rho.coeff(n);
    if (entry.g.is_zero()) {
        state.q = as_polynomial(state.q).truncated(std::max(n + 1, 1));
        state.order = n + 1;
        state.log.push_back(std::move(entry));
        return;
    }
    entry.exact = var_derivative(entry.g).is_zero();
    if (!entry.exact) {
        throw ObstructionNotExact("obstruction at eps^" + std::to_string(n) + " is not exact: G_" + std::to_string(n)
                                  + " = " + to_string(entry.g));
    }
    const DiffPoly x = antiderivative(entry.g);
    auto updated = [&](const Rational &c) {
        return (as_polynomial(state.q) + EpsSeries::monomial(n, x * c)).truncated(n + 1);
    };
    auto vanishes = [&](const EpsSeries &q) { return ideal_residual(q, d, n + 1).is_zero(); };

    if (!state.gauge.c) {
        std::vector<Rational> good;
        for (const auto &c : state.gauge.c_candidates) {
            if (vanishes(updated(c))) {
                good.push_back(c);
            }
        }
        if (good.size() != 1) {
            throw CorrectionFailed("extend_order: " + std::to_string(good.size())
                                   + " candidate values of c annihilate the residual at eps^" + std::to_string(n));
        }
        state.gauge.c = good.front();
    }
    const EpsSeries q_new = updated(*state.gauge.c);
    if (!vanishes(q_new)) {
        throw CorrectionFailed("extend_order: residual survives the update at eps^" + std::to_string(n)
                               + " with c = " + to_fraction_string(*state.gauge.c));
    }
    entry.q_n = x * *state.gauge.c;
    state.q = q_new;
    state.order = n + 1;
    state.log.push_back(std::move(entry));
}

DeformationState Deformer::run(int target, const std::function<void(const DeformationState &)> &progress) const
{
    return run_from(initial_state(gauge_), target, progress);
}

DeformationState Deformer::run_from(DeformationState state, int target,
                                    const std::function<void(const DeformationState &)> &progress) const
{
    while (state.order < target) {
        extend_order(state);
        if (progress) {
            progress(state);
        }
    }
    return state;
}

EpsSeries residual(const DeformationState &state, const TameDerivation &flow, int n)
{
    if (state.order < n) {
        throw std::invalid_argument("residual: state order " + std::to_string(state.order) + " below requested "
                                    + std::to_string(n));
    }
    return ideal_residual(state.q.truncated(n), flow, n);
}

InducedDerivation induce(const DeformationState &state, const TameDerivation &flow, int source_k, int n)
{
    const EpsSeries r = residual(state, flow, n);
    if (!r.is_zero()) {
        throw ResidualNonzero("induce: flow " + std::to_string(source_k) + " leaves the ideal: " + to_string(r));
    }
    SigmaSubstitution sigma(as_polynomial(state.q.truncated(n)), n);
    return {sigma.apply(flow.img_w.truncated(n)), source_k};
}

EpsSeries commute_check(const InducedDerivation &a, const InducedDerivation &b, int n)
{
    const TameDerivation da = evolutionary(a.img_w.truncated(n));
    const TameDerivation db = evolutionary(b.img_w.truncated(n));
    return (derive(da, b.img_w.truncated(n)) - derive(db, a.img_w.truncated(n))).truncated(n);
}

namespace
{

EpsPolyQ epspoly_shift_scale(const EpsPolyQ &p, int shift, const Rational &c)
{
    EpsPolyQ r(p.size() + static_cast<std::size_t>(shift));
    for (std::size_t i = 0; i < p.size(); ++i) {
        r[i + static_cast<std::size_t>(shift)] = p[i] * c;
    }
    return r;
}

void epspoly_sub(EpsPolyQ &a, const EpsPolyQ &b)
{
    if (a.size() < b.size()) {
        a.resize(b.size());
    }
    for (std::size_t i = 0; i < b.size(); ++i) {
        a[i] -= b[i];
    }
    while (!a.empty() && is_zero(a.back())) {
        a.pop_back();
    }
}

} // namespace

NormalizedBasisReport characteristic_numbers(const std::vector<InducedDerivation> &flows, int n)
{
    const int count = static_cast<int>(flows.size());
    if (n <= 2 * count) {
        throw TruncationTooShallow("characteristic_numbers: truncation " + std::to_string(n) + " must exceed "
                                   + std::to_string(2 * count));
    }
    struct Elem {
        EpsSeries s;
        std::vector<EpsPolyQ> combo;
    };
    std::vector<Elem> elems;
    for (int i = 0; i < count; ++i) {
        Elem e{flows[static_cast<std::size_t>(i)].img_w.truncated(n), std::vector<EpsPolyQ>(flows.size())};
        e.combo[static_cast<std::size_t>(i)] = {Rational(1)};
        elems.push_back(std::move(e));
    }
    for (;;) {
        std::vector<std::size_t> idx(elems.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(),
                         [&](auto a, auto b) { return elems[a].s.valuation() < elems[b].s.valuation(); });
        RowReducer red;
        std::vector<std::size_t> accepted;
        bool changed = false;
        for (auto j : idx) {
            auto &e = elems[j];
            const int m = e.s.valuation();
            if (e.s.is_zero() || m >= n) {
                throw TruncationTooShallow("characteristic_numbers: element vanishes modulo eps^" + std::to_string(n)
                                           + "; more orders are needed");
            }
            const auto r = red.reduce(e.s.coeff(m));
            if (r.remainder.is_zero()) {
                for (std::size_t i = 0; i < accepted.size(); ++i) {
                    if (is_zero(r.coeffs[i])) {
                        continue;
                    }
                    const auto &ei = elems[accepted[i]];
                    const int shift = m - ei.s.valuation();
                    e.s -= (r.coeffs[i] * ei.s).shifted(shift).truncated(n);
                    for (std::size_t f = 0; f < flows.size(); ++f) {
                        epspoly_sub(e.combo[f], epspoly_shift_scale(ei.combo[f], shift, r.coeffs[i]));
                    }
                }
                e.s = e.s.truncated(n);
                changed = true;
                break;
            }
            red.insert(e.s.coeff(m));
            accepted.push_back(j);
        }
        if (!changed) {
            NormalizedBasisReport rep;
            for (auto j : idx) {
                rep.pivots.push_back(elems[j].s.valuation());
                rep.leading_terms.push_back(elems[j].s.coeff(elems[j].s.valuation()));
                rep.certificate.push_back(elems[j].combo);
                rep.basis.push_back(elems[j].s);
            }
            return rep;
        }
    }
}

Rational bound_value(const DiffPoly &p)
{
    Rational total = 0;
    for (const auto &[m, c] : p.terms()) {
        Rational t = abs(c);
        for (auto f : m) {
            const auto g = Generator::from_id(factor_var(f));
            if (g.letter != Letter::W) {
                throw std::invalid_argument("bound_value: polynomial must be w-only");
            }
            Integer fac = factorial(g.order);
            for (unsigned e = 0; e < factor_exp(f); ++e) {
                t *= fac;
            }
        }
        total += t;
    }
    return total;
}

std::vector<BoundsRow> bounds_table(const DeformationState &state, int n_max)
{
    if (state.order <= n_max) {
        throw std::invalid_argument("bounds_table: state order " + std::to_string(state.order) + " must exceed "
                                    + std::to_string(n_max));
    }
    std::vector<BoundsRow> rows;
    for (int n = 0; n <= n_max; ++n) {
        const Rational k = bound_value(state.coefficient(n));
        rows.push_back({n, k, to_decimal_string(k, 3)});
    }
    return rows;
}

const std::vector<std::pair<int, std::string>> &printed_bounds()
{
    static const std::vector<std::pair<int, std::string>> table = {
        {2, "0.500"}, {3, "0.375"}, {4, "0.359"},  {5, "0.312"},  {6, "0.300"}, {7, "0.289"},
        {8, "0.283"}, {9, "0.288"}, {10, "0.285"}, {11, "0.305"}, {12, "0.312"}};
    return table;
}

std::vector<GaugeSweepRow> gauge_sweep(int n_max)
{
    std::vector<GaugeSweepRow> rows;
    auto attempt = [&](std::string label, Gauge g) {
        GaugeSweepRow row;
        row.label = std::move(label);
        row.gauge = g;
        DeformationState st = initial_state(g);
        try {
            Deformer df(n_max + 1, g);
            st = df.run_from(st, n_max + 1);
            row.completed = true;
            row.bounds = bounds_table(st, n_max);
        } catch (const Error &e) {
            row.failure = e.what();
        }
        row.reached_order = st.order;
        row.gauge = st.gauge;
        rows.push_back(std::move(row));
    };
    for (const Rational &scale : {Rational(-1, 2), Rational(1, 2), Rational(-1), Rational(1)}) {
        Gauge g;
        g.slow_scale = scale;
        attempt("slow_scale=" + to_fraction_string(scale) + ",c=auto", g);
    }
    for (const Rational &c : Gauge{}.c_candidates) {
        Gauge g;
        g.c = c;
        attempt("slow_scale=" + to_fraction_string(g.slow_scale) + ",c=" + to_fraction_string(c), g);
    }
    return rows;
}

json to_json(const DeformationState &s)
{
    json log = json::array();
    for (const auto &e : s.log) {
        log.push_back({{"n", e.n}, {"g", to_json(e.g)}, {"exact", e.exact}, {"q_n", to_json(e.q_n)}});
    }
    return {{"q", to_json(s.q)}, {"order", s.order}, {"gauge", to_json(s.gauge)}, {"log", std::move(log)}};
}

DeformationState deformation_state_from_json(const json &j)
{
    DeformationState s;
    s.q = eps_series_from_json(j.at("q"));
    s.order = j.at("order").get<int>();
    s.gauge = gauge_from_json(j.at("gauge"));
    for (const auto &e : j.at("log")) {
        s.log.push_back({e.at("n").get<int>(), diffpoly_from_json(e.at("g")), e.at("exact").get<bool>(),
                         diffpoly_from_json(e.at("q_n"))});
    }
    return s;
}

DeformCache::DeformCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::string DeformCache::key(const Gauge &gauge, int trunc) const
{
    const json k = {{"gauge", to_json(gauge)}, {"trunc", trunc}};
    return hex64(fnv1a(k.dump()));
}

std::filesystem::path DeformCache::path_for(const Gauge &gauge, int trunc) const
{
    return dir_ / ("deform-" + key(gauge, trunc) + ".json");
}

std::optional<DeformationState> DeformCache::load(const Gauge &gauge, int trunc,
                                                  const std::function<void(const std::string &)> &warn) const
{
    const auto path = path_for(gauge, trunc);
    if (!std::filesystem::exists(path)) {
        return std::nullopt;
    }
    auto report = [&](const std::string &msg) {
        if (warn) {
            warn(msg);
        }
    };
    try {
        std::ifstream in(path);
        const json doc = json::parse(in);
        const json &payload = doc.at("payload");
        if (doc.at("content_hash").get<std::string>() != hex64(fnv1a(payload.dump()))) {
            report("cache file " + path.string() + " failed its content hash; recomputing");
            return std::nullopt;
        }
        if (doc.at("key").get<std::string>() != key(gauge, trunc)) {
            report("cache file " + path.string() + " carries a different key; recomputing");
            return std::nullopt;
        }
        return deformation_state_from_json(payload);
    } catch (const std::exception &e) {
        report("cache file " + path.string() + " is unreadable (" + e.what() + "); recomputing");
        return std::nullopt;
    }
}

void DeformCache::store(const Gauge &requested, const DeformationState &state, int trunc) const
{
    std::filesystem::create_directories(dir_);
    const json payload = to_json(state);
    const json doc = {{"key", key(requested, trunc)}, {"payload", payload}, {"content_hash", hex64(fnv1a(payload.dump()))}};
    const auto path = path_for(requested, trunc);
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp);
        out << doc.dump() << '\n';
    }
    std::filesystem::rename(tmp, path);
}

DeformationState obtain_state(int order, const Gauge &gauge, const DeformCache *cache,
                              const std::function<void(const std::string &)> &log)
{
    if (cache) {
        if (auto st = cache->load(gauge, order, log); st && st->order >= order) {
            if (log) {
                log("cache hit " + cache->path_for(gauge, order).string());
            }
            return *st;
        }
    }
    const Deformer deformer(order, gauge);
    auto state = deformer.run(order, [&](const DeformationState &s) {
        if (log) {
            log("deform: residual zero mod eps^" + std::to_string(s.order) + ", "
                + std::to_string(s.coefficient(s.order - 1).size()) + " monomials in Q_" + std::to_string(s.order - 1));
        }
    });
    if (cache) {
        cache->store(gauge, state, order);
        if (log) {
            log("cache stored " + cache->path_for(gauge, order).string());
        }
    }
    return state;
}

} // namespace tkdv
