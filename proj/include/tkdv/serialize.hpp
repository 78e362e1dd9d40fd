#ifndef TKDV_SERIALIZE_HPP
#define TKDV_SERIALIZE_HPP

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

#include <tkdv/eps_series.hpp>
#include <tkdv/lattice.hpp>

namespace tkdv
{

using json = nlohmann::json;

// DiffPoly: [{"c": "num/den", "f": [["v"|"w", order, exp], ...]}, ...]
json to_json(const DiffPoly &p);
DiffPoly diffpoly_from_json(const json &j);

// EpsSeries: {"min_exp": int, "coeffs": [DiffPoly, ...], "trunc": int}; exact series carry trunc = kExact.
json to_json(const EpsSeries &s);
EpsSeries eps_series_from_json(const json &j);

// LatticePoly: same shape as DiffPoly with ["X"|"Y", offset, exp] factors.
json to_json(const LatticePoly &p);
LatticePoly lattice_poly_from_json(const json &j);

json to_json(const LatticePair &p);
LatticePair lattice_pair_from_json(const json &j);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view data);
std::string hex64(std::uint64_t h);

} // namespace tkdv

#endif
