#include <tkdv/eps_series.hpp>

#include <algorithm>
#include <stdexcept>

#include <tkdv/errors.hpp>

namespace tkdv
{

namespace
{

const DiffPoly kZeroPoly;

} // namespace

EpsSeries::EpsSeries(DiffPoly p, int trunc) : min_exp_(0), trunc_(trunc)
{
    coeffs_.push_back(std::move(p));
    normalize();
}

EpsSeries::EpsSeries(int min_exp, std::vector<DiffPoly> coeffs, int trunc)
    : min_exp_(min_exp), coeffs_(std::move(coeffs)), trunc_(trunc)
{
    normalize();
}

EpsSeries EpsSeries::monomial(int k, DiffPoly c, int trunc)
{
    std::vector<DiffPoly> cs;
    cs.push_back(std::move(c));
    return EpsSeries(k, std::move(cs), trunc);
}

void EpsSeries::normalize()
{
    if (trunc_ > kExact) {
        trunc_ = kExact;
    }
    // Drop anything at or beyond the truncation.
    const long keep = static_cast<long>(trunc_) - min_exp_;
    if (keep <= 0) {
        coeffs_.clear();
    } else if (static_cast<long>(coeffs_.size()) > keep) {
        coeffs_.resize(static_cast<std::size_t>(keep));
    }
    while (!coeffs_.empty() && coeffs_.back().is_zero()) {
        coeffs_.pop_back();
    }
    std::size_t lead = 0;
    while (lead < coeffs_.size() && coeffs_[lead].is_zero()) {
        ++lead;
    }
    if (lead > 0) {
        coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(lead));
        min_exp_ += static_cast<int>(lead);
    }
    if (coeffs_.empty()) {
        min_exp_ = 0;
    }
}

const DiffPoly &EpsSeries::coeff(int k) const
{
    if (k < min_exp_ || k >= end_exp()) {
        return kZeroPoly;
    }
    return coeffs_[static_cast<std::size_t>(k - min_exp_)];
}

EpsSeries EpsSeries::truncated(int n) const
{
    return EpsSeries(min_exp_, coeffs_, std::min(n, trunc_));
}

EpsSeries EpsSeries::shifted(int k) const
{
    return EpsSeries(min_exp_ + k, coeffs_, trunc_add(trunc_, k));
}

EpsSeries EpsSeries::divide_by_eps() const
{
    if (!is_zero() && min_exp_ < 1) {
        throw NotTame("divide_by_eps: nonzero coefficient at eps^" + std::to_string(min_exp_));
    }
    return shifted(-1);
}

EpsSeries EpsSeries::operator-() const
{
    EpsSeries r(*this);
    for (auto &c : r.coeffs_) {
        c = -c;
    }
    return r;
}

namespace
{

EpsSeries add_impl(const EpsSeries &a, const EpsSeries &b, bool subtract)
{
    const int t = std::min(a.trunc(), b.trunc());
    if (a.is_zero() && b.is_zero()) {
        return EpsSeries::zero(t);
    }
    int lo = a.is_zero() ? b.min_exp() : (b.is_zero() ? a.min_exp() : std::min(a.min_exp(), b.min_exp()));
    int hi = std::min(t, std::max(a.end_exp(), b.end_exp()));
    std::vector<DiffPoly> out;
    if (hi > lo) {
        out.reserve(static_cast<std::size_t>(hi - lo));
    }
    for (int k = lo; k < hi; ++k) {
        out.push_back(subtract ? a.coeff(k) - b.coeff(k) : a.coeff(k) + b.coeff(k));
    }
    return EpsSeries(lo, std::move(out), t);
}

} // namespace

EpsSeries &EpsSeries::operator+=(const EpsSeries &o)
{
    *this = add_impl(*this, o, false);
    return *this;
}

EpsSeries &EpsSeries::operator-=(const EpsSeries &o)
{
    *this = add_impl(*this, o, true);
    return *this;
}

EpsSeries &EpsSeries::operator*=(const Rational &c)
{
    if (tkdv::is_zero(c)) {
        coeffs_.clear();
        min_exp_ = 0;
        return *this;
    }
    for (auto &p : coeffs_) {
        p *= c;
    }
    return *this;
}

EpsSeries operator*(const EpsSeries &a, const EpsSeries &b)
{
    const int t = std::min(trunc_add(a.trunc(), b.valuation()), trunc_add(b.trunc(), a.valuation()));
    if (a.is_zero() || b.is_zero()) {
        return EpsSeries::zero(t);
    }
    const int lo = a.min_exp() + b.min_exp();
    const int hi = std::min(t, a.end_exp() + b.end_exp() - 1);
    std::vector<DiffPoly> out;
    for (int k = lo; k < hi; ++k) {
        DiffPoly acc;
        const int i0 = std::max(a.min_exp(), k - b.end_exp() + 1);
        const int i1 = std::min(a.end_exp() - 1, k - b.min_exp());
        for (int i = i0; i <= i1; ++i) {
            const auto &x = a.coeff(i);
            const auto &y = b.coeff(k - i);
            if (!x.is_zero() && !y.is_zero()) {
                acc += x * y;
            }
        }
        out.push_back(std::move(acc));
    }
    return EpsSeries(lo, std::move(out), t);
}

EpsSeries operator*(const EpsSeries &a, const DiffPoly &p)
{
    if (p.is_zero()) {
        return EpsSeries::zero(a.trunc());
    }
    return a.map([&](const DiffPoly &c) { return c * p; });
}

bool EpsSeries::operator==(const EpsSeries &o) const
{
    return trunc_ == o.trunc_ && min_exp_ == o.min_exp_ && coeffs_ == o.coeffs_;
}

bool equal_mod(const EpsSeries &a, const EpsSeries &b, int n)
{
    if (n > a.trunc() || n > b.trunc()) {
        throw std::invalid_argument("equal_mod: comparison order exceeds truncation");
    }
    return (a - b).truncated(n).is_zero();
}

bool EpsSeries::is_w_only() const
{
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const DiffPoly &p) { return tkdv::is_w_only(p); });
}

EpsSeries partial(const EpsSeries &s)
{
    return s.map([](const DiffPoly &p) { return partial(p); });
}

EpsSeries partial(const EpsSeries &s, unsigned times)
{
    return s.map([times](const DiffPoly &p) { return partial(p, times); });
}

EpsSeries diff_gen(const EpsSeries &s, Generator g)
{
    return s.map([g](const DiffPoly &p) { return diff_gen(p, g); });
}

EpsSeries exp_shift(long k, const DiffPoly &p, int trunc)
{
    if (trunc < 1) {
        throw std::invalid_argument("exp_shift: truncation must be at least 1");
    }
    std::vector<DiffPoly> out;
    DiffPoly d = p;
    Rational scale = 1;
    for (int m = 0; m < trunc; ++m) {
        if (m > 0) {
            d = partial(d);
            scale = scale * k / m;
        }
        if (d.is_zero() || tkdv::is_zero(scale)) {
            break;
        }
        out.push_back(d * scale);
    }
    return EpsSeries(0, std::move(out), trunc);
}

std::string to_string(const EpsSeries &s)
{
    std::string out;
    for (int k = s.min_exp(); k < s.end_exp(); ++k) {
        const auto &c = s.coeff(k);
        if (c.is_zero()) {
            continue;
        }
        if (!out.empty()) {
            out += " + ";
        }
        out += "(" + to_string(c) + ")*eps^" + std::to_string(k);
    }
    if (out.empty()) {
        out = "0";
    }
    if (!s.exact()) {
        out += " + O(eps^" + std::to_string(s.trunc()) + ")";
    }
    return out;
}

} // namespace tkdv
