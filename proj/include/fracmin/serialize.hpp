#pragma once

// JSON scene and config schema.
//
// Sets are nested objects keyed by "shape":
//   {"shape": "half_space", "normal": [0, 1], "offset": 0}
//   {"shape": "ball", "center": [0, 0], "radius": 1}
//   {"shape": "annulus", "center": [0, 0], "r_in": 0.5, "r_out": 2}
//   {"shape": "cone_sector", "k": 2}
//   {"shape": "pie_glued", "inner": {...}, "radius": 0.5}
//   {"shape": "corner_pair", "theta1": 0.3, "theta2": -0.2}
//   {"shape": "lawson_cone", "n": 2, "m": 1, "alpha": 0.5}
//   {"shape": "complement", "of": {...}}
//   {"shape": "union" | "intersection", "of": [{...}, {...}]}
//   {"shape": "transformed", "of": {...}, "angle": 0.1, "shift": [0, 0]}
//   {"shape": "empty"}
// Domains: {"kind": "ball", "center", "radius"} or
// {"kind": "half_space", "normal", "offset"}. Schema violations raise
// config errors naming the offending JSON path.

#include "fracmin/experiments.hpp"

#include "json.hpp"

namespace fracmin {

using Json = nlohmann::ordered_json;

SetGeometry set_from_json(const Json& j, const std::string& path = "set");
Json to_json(const SetGeometry& e);

Domain domain_from_json(const Json& j, const std::string& path = "domain");
Json to_json(const Domain& d);

//! {"n": 2, "s": 0.5, "delta": optional}.
KernelSpec kernel_from_json(const Json& j, const std::string& path = "kernel");
Json to_json(const KernelSpec& k);

//! Missing fields keep their defaults.
QuadConfig quad_from_json(const Json& j, const std::string& path = "quad");
Json to_json(const QuadConfig& q);

//! {"kind": "rotation", "amplitude", "direction", "cutoff_inner",
//!  "cutoff_outer", "bump_center", "bump_radius"}.
FieldSpec field_from_json(const Json& j, const std::string& path = "field");
Json to_json(const FieldSpec& f);

Vec2 vec_from_json(const Json& j, const std::string& path);
Json to_json(const Vec2& v);

//! Parses text, turning syntax errors into config errors with line and
//! column.
Json parse_json(const std::string& text, const std::string& source);
Json load_json(const std::string& file);

}  // namespace fracmin
