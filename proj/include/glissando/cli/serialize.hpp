#pragma once

#include <json.hpp>

#include "glissando/charpoly.hpp"
#include "glissando/divisors.hpp"
#include "glissando/newton.hpp"
#include "glissando/umatrix.hpp"
#include "glissando/verify.hpp"

namespace glissando::cli {

using nlohmann::json;

/// Little-endian coefficient list.
json to_json(const FpPoly& f);
FpPoly poly_from_json(const json& j, std::uint32_t p);

/// { p, q, k, entries: [[coeff-lists]] }
json to_json(const UMatrix& u);
/// Rows of "c*t^j" monomials, "0" for zero entries.
std::string to_text(const UMatrix& u);

/// { p, q, k, dim, precision, degree_bound, coeffs: [[...], ...] }; precision is
/// null for exact series.
json to_json(const CharSeries& s, const Params& params, int k);
CharSeries series_from_json(const json& j);

/// { dim, segments: [{slope: "a/b" | "inf", width}] }
json to_json(const NewtonPolygon& poly);

/// { dims, precision, divisors: ["0", ">=12", "inf", ...] }
json to_json(const DivisorList& d);

json to_json(const SweepReport& r);
json to_json(const PeriodReport& r);

}  // namespace glissando::cli
