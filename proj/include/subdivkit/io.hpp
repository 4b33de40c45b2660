#pragma once

#include "subdivkit/mask.hpp"
#include "subdivkit/quasistat.hpp"

#include <array>
#include <string>
#include <vector>

namespace subdivkit::io {

// Shortest 17-significant-digit decimal; reparses to the same double.
std::string format_float(double x);

// Exact scalars render as "p" or "p/q"; floats as decimal literals.
std::string scalar_string(const Scalar& s);

// Accepts "p/q", integer, or decimal / scientific float text.
Scalar parse_scalar(const std::string& text);

// Mask file: {"dilation": M, "support": [l, h], "coeffs": [...], "name"?: s}.
// coeffs hold h - l + 1 strings ("p/q" exact, decimal float) or numbers.
// Unknown keys are rejected.
Mask parse_mask_json(const std::string& text);
std::string emit_mask_json(const Mask& a, const std::string& name = "");

// Scheme file: {"dilation": M, "masks": [mask, ...], "name"?: s}.
// Every mask must share the dilation and sum to one.
quasistat::SchemeSpec parse_scheme_json(const std::string& text);
std::string emit_scheme_json(const quasistat::SchemeSpec& spec, const std::string& name = "");

// Control polygon CSV: rows "x,y" or "x,y,z", optional header, row index =
// integer parameter k.  At least two finite rows, constant column count.
struct Polygon {
    size_t dim = 2;
    std::vector<std::array<double, 3>> points;  // trailing coordinate 0 when dim = 2
};
Polygon parse_polygon_csv(const std::string& text);
std::string emit_polygon_csv(const Polygon& p);

// SVG 1.1 document with exactly one path tracing the polyline (x right,
// y up), viewBox fitted to the data with a 5% margin.
std::string emit_svg(const Polygon& p);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace subdivkit::io
