#ifndef TKDV_VERIFY_HPP
#define TKDV_VERIFY_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <tkdv/deform.hpp>

namespace tkdv
{

/// Exit-code classes for failed checks.
enum class FailureKind { None = 0, Symbolic = 1, Obstruction = 2, Residual = 3, Numeric = 4 };

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    FailureKind kind = FailureKind::None;
    std::vector<std::string> details;
    double seconds = 0;
};

struct VerifyOptions {
    bool fast = false;           // lower deformation order for the construction check
    std::uint64_t seed = 20240917;
    const DeformCache *cache = nullptr;
    std::function<void(const std::string &)> log;
};

/// Memoizes deformation states across criteria.
class VerifyContext
{
public:
    explicit VerifyContext(VerifyOptions opts) : opts_(std::move(opts)) {}

    const DeformationState &state(int order);
    const VerifyOptions &options() const
    {
        return opts_;
    }

private:
    VerifyOptions opts_;
    std::map<int, DeformationState> states_;
};

/// Criterion ids 1..12.
CriterionResult run_criterion(int id, VerifyContext &ctx);

/// "all", "lattice", "commute", "kdv", "numlab", "poisson".
std::vector<int> criteria_for_group(const std::string &group);

/// |P| <= K(P) on the vertices w^(j) = +-j! and on the jets j! sin(2 pi x + j pi/2); returns the largest |P|/K.
double bound_oracle_ratio(const DiffPoly &p, int samples = 64);

} // namespace tkdv

#endif
