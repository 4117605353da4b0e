#pragma once

#include <string>

#include <json.hpp>

#include "qdlab/qd.hpp"
#include "qdlab/region.hpp"

namespace qdlab {

/// Complex numbers are [re, im] or a bare real.
cplx complex_from_json(const nlohmann::json& j);
nlohmann::json complex_to_json(cplx z);

/// {"leading": [re, im], "zeros": [{"z": [re, im], "mult": m}, ...], "poles": [...]}
RationalQD qd_from_json(const nlohmann::json& j);
nlohmann::json qd_to_json(const RationalQD& q);

/// {"type": "disk", "center": [x, y], "radius": r}
/// {"type": "annulus", "center": [x, y], "r": r, "R": R}
/// {"type": "plane"} | {"type": "halfstrip", "Y": y}
/// {"type": "polygon", "vertices": [[x, y], ...]}
/// {"type": "complement", "of": region}
/// {"type": "intersection" | "union", "regions": [region, ...]}
Region region_from_json(const nlohmann::json& j);

/// Parses text as JSON, throwing ParseError with the parser's message.
nlohmann::json parse_json(const std::string& text);

}  // namespace qdlab
