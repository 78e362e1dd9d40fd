#ifndef TKDV_DEFORM_HPP
#define TKDV_DEFORM_HPP

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <tkdv/derivation.hpp>
#include <tkdv/hierarchy.hpp>
#include <tkdv/serialize.hpp>

namespace tkdv
{

/// Every convention the construction depends on.
struct Gauge {
    std::string slow_spec = "eps^-1 * Phi D(T2+2T1) Phi^-1";
    Rational slow_scale = default_slow_scale();
    std::string integration_constants = "zero";
    std::vector<Rational> c_candidates = {Rational(-1, 2), Rational(1, 2), Rational(-1), Rational(1)};
    std::optional<Rational> c; // fixed at the first nonzero obstruction
    bool operator==(const Gauge &) const = default;
};

json to_json(const Gauge &g);
Gauge gauge_from_json(const json &j);

struct ObstructionEntry {
    int n = 0;
    DiffPoly g;         // eps^n coefficient of the residual before the update
    bool exact = true;  // var_derivative(g) == 0
    DiffPoly q_n;       // the correction added
};

struct DeformationState {
    EpsSeries q;   // known modulo eps^order
    int order = 0; // residual vanishes modulo eps^order
    Gauge gauge;
    std::vector<ObstructionEntry> log;

    /// Q_n (zero if n >= order).
    const DiffPoly &coefficient(int n) const
    {
        return q.coeff(n);
    }
};

DeformationState initial_state(const Gauge &gauge = {});

/// sigma_Q(D(v^(0) - Q)) modulo eps^n, with Q treated as a polynomial in eps.
EpsSeries ideal_residual(const EpsSeries &q, const TameDerivation &d, int n);

/// Drives extend_order with a slow generator built once at a fixed truncation.
class Deformer
{
public:
    Deformer(int max_order, const Gauge &gauge = {});

    /// Advances the state by one order. Throws ObstructionNotExact, CorrectionFailed.
    void extend_order(DeformationState &state) const;

    /// Runs until the residual vanishes modulo eps^target. `progress` receives each finished order.
    DeformationState run(int target, const std::function<void(const DeformationState &)> &progress = {}) const;
    DeformationState run_from(DeformationState state, int target,
                              const std::function<void(const DeformationState &)> &progress = {}) const;

    const TameDerivation &slow() const
    {
        return slow_;
    }
    int max_order() const
    {
        return max_order_;
    }

private:
    int max_order_;
    Gauge gauge_;
    TameDerivation slow_;
};

/// sigma_Q(D_k(v^(0) - Q)) modulo eps^N for a flow derivation.
EpsSeries residual(const DeformationState &state, const TameDerivation &flow, int n);

struct InducedDerivation {
    EpsSeries img_w;
    int source_k = 0;
};

/// sigma_Q(D(w^(0))) modulo eps^N; throws ResidualNonzero if D does not preserve I_Q to that order.
InducedDerivation induce(const DeformationState &state, const TameDerivation &flow, int source_k, int n);

/// [Dbar_a, Dbar_b](w^(0)) modulo eps^N.
EpsSeries commute_check(const InducedDerivation &a, const InducedDerivation &b, int n);

/// Polynomial in eps with rational coefficients, index = power.
using EpsPolyQ = std::vector<Rational>;

struct NormalizedBasisReport {
    std::vector<int> pivots;
    std::vector<DiffPoly> leading_terms;
    // basis[i] = sum_j certificate[i][j](eps) * flows[j]
    std::vector<std::vector<EpsPolyQ>> certificate;
    std::vector<EpsSeries> basis;
};

NormalizedBasisReport characteristic_numbers(const std::vector<InducedDerivation> &flows, int n);

/// K(P) = sum |c| prod (j_i!)^{e_i} over the monomials c prod (w^(j_i))^{e_i}.
Rational bound_value(const DiffPoly &p);

struct BoundsRow {
    int n;
    Rational exact;
    std::string dec;
};

std::vector<BoundsRow> bounds_table(const DeformationState &state, int n_max);

/// Published bounds for n = 2..12, as three-decimal strings (truncated, not rounded).
const std::vector<std::pair<int, std::string>> &printed_bounds();

struct GaugeSweepRow {
    std::string label;
    Gauge gauge;
    bool completed = false;
    int reached_order = 0;
    std::string failure;
    std::vector<BoundsRow> bounds;
};

/// Alternative gauges: slow-generator sign and scale, and forced values of c.
std::vector<GaugeSweepRow> gauge_sweep(int n_max);

/// On-disk cache of deformation states keyed by (gauge, truncation).
class DeformCache
{
public:
    explicit DeformCache(std::filesystem::path dir);

    std::string key(const Gauge &gauge, int trunc) const;
    std::filesystem::path path_for(const Gauge &gauge, int trunc) const;

    /// Loads a state; returns nullopt (and reports through `warn`) on a missing, corrupt or tampered file.
    std::optional<DeformationState> load(const Gauge &gauge, int trunc,
                                         const std::function<void(const std::string &)> &warn = {}) const;
    void store(const Gauge &requested, const DeformationState &state, int trunc) const;

private:
    std::filesystem::path dir_;
};

/// State with residual zero modulo eps^order: from the cache when valid, else computed and stored.
/// `log` receives cache warnings and per-order progress.
DeformationState obtain_state(int order, const Gauge &gauge, const DeformCache *cache,
                              const std::function<void(const std::string &)> &log = {});

json to_json(const DeformationState &s);
DeformationState deformation_state_from_json(const json &j);

} // namespace tkdv

#endif
