#pragma once
#include <optional>
#include <string>
#include <vector>

#include "flute/horocyclic.hpp"

namespace flute {

struct RenderOptions {
    bool overlay_horocyclic = false;
    double stroke_width = 0.004;
    std::string geodesic_color = "#11557c";
    std::string vertex_color = "#b3321b";
    std::string horocyclic_color = "#2a9d3f";
};

/// Writes an SVG of the chain in the Poincare disk: the Cayley transform of
/// the chart, geodesics as circular arcs orthogonal to the boundary circle,
/// ideal vertices as boundary marks, optionally the horocyclic path.
void render_disk_svg(const std::vector<double>& chart_points,
                     const std::optional<HorocyclicPath>& path, const std::string& file,
                     const RenderOptions& options = {});

} // namespace flute
