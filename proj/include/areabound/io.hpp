#pragma once

#include <string>

#include <json.hpp>

#include "areabound/bounds.hpp"
#include "areabound/domain.hpp"
#include "areabound/graph_surface.hpp"
#include "areabound/immersion.hpp"
#include "areabound/solver.hpp"

namespace areabound::io {

using nlohmann::json;

/// {"kind":"unit_disc","nx":129,"ny":129}; rectangles carry "extents".
json domain_to_json(const PlanarDomain& d);
PlanarDomain domain_from_json(const json& j);

/// Domain spec + "codim" + per-component row-major value arrays.
json surface_to_json(const GraphSurface& s);
GraphSurface surface_from_json(const json& j);

json solve_meta_to_json(const SolveResult& r);
SolutionMeta solution_meta_from_json(const json& j);

/// Polar grid spec + row-major x/y/z arrays.
json immersion_to_json(const Immersion& im);
Immersion immersion_from_json(const json& j);

json report_to_json(const BoundReport& r, const std::string& version,
                    const std::string& config_digest);

json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const json& j);
void append_jsonl(const std::string& path, const json& j);

/// FNV-1a of the canonical config string; hex digest.
std::string config_digest(const std::string& canonical);

/// Shorthand "unit_square:129", "unit_disc:257", "rect:x0,x1,y0,y1:129x129",
/// or a path to a domain JSON file.
PlanarDomain parse_domain_spec(const std::string& spec);

inline constexpr const char* kVersion = "0.1.0";

}  // namespace areabound::io
