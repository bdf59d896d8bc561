#ifndef PWLAB_DOMAIN_IO_HPP
#define PWLAB_DOMAIN_IO_HPP

#include <string>

#include "json.hpp"
#include "pwlab/geometry.hpp"

namespace pwlab {

using json = nlohmann::json;

// {"kind": "Disc2D", "dimension": 2, "scale": 1, "center": [0,0], "radius": 1}
// BoxN: "half_widths"; Polygon2D: "vertices" [[x,y],...];
// SmoothCurve2D: "curve" {"type", "a", "b", "rotation", "center", "r0",
// "cos", "sin", "matrix" (row-major 2x2), "offset"}.
ConvexDomain domain_from_json(const json& j);
json domain_to_json(const ConvexDomain& d);
ConvexDomain load_domain(const std::string& path);

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace pwlab

#endif
