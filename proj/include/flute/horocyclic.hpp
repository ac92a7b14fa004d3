#pragma once
#include <complex>
#include <vector>

#include "flute/boundary.hpp"

namespace flute {

/// The piecewise horocyclic path across the wedges of a developed chain,
/// built geometrically: in each wedge (g_n, g_{n+1}) the arc lies on the
/// horocycle centered at the wedge vertex and meets both sides orthogonally.
/// The first arc is normalized to unit length (s_1 = 0 convention).
struct HorocyclicPath {
    std::vector<std::complex<double>> crossings; // H_n, the point on g_n
    std::vector<double> arc_lengths;             // hyperbolic length per wedge
    std::vector<std::vector<std::complex<double>>> arcs; // sampled per wedge
};

/// chart_points are the ideal endpoints p_0 (infinity), p_1, p_2, ... of the
/// chain; wedges are traversed while positions remain numerically separated.
HorocyclicPath horocyclic_path(const std::vector<double>& chart_points, int samples_per_arc = 16);

} // namespace flute
