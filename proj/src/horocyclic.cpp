#include "flute/horocyclic.hpp"

#include <cmath>

namespace flute {

namespace {

// mu(z) = -1/(z - v): sends the wedge vertex v to infinity.
std::complex<double> mu(double v, std::complex<double> z) { return -1.0 / (z - v); }
double mu_boundary(double v, double x) {
    if (std::isinf(x)) return 0.0;
    const double d = x - v;
    if (d == 0.0) return std::numeric_limits<double>::infinity();
    return -1.0 / d;
}
std::complex<double> mu_inv(double v, std::complex<double> w) { return v - 1.0 / w; }

} // namespace

HorocyclicPath horocyclic_path(const std::vector<double>& chart_points, int samples_per_arc) {
    HorocyclicPath out;
    if (chart_points.size() < 3) return out;
    const int last = static_cast<int>(chart_points.size()) - 1;
    std::complex<double> H(0.0, 1.0); // filled for wedge 1 below
    for (int n = 1; n + 1 <= last; ++n) {
        const double v = chart_points[static_cast<size_t>(n)];      // wedge vertex p_n
        const double a = mu_boundary(v, chart_points[static_cast<size_t>(n - 1)]);
        const double b = mu_boundary(v, chart_points[static_cast<size_t>(n + 1)]);
        if (!std::isfinite(a) || !std::isfinite(b) || a == b) break; // collapsed
        double h;
        if (n == 1) {
            h = std::fabs(b - a); // first arc has unit length
        } else {
            h = mu(v, H).imag();
            if (!(h > 0.0)) break;
        }
        const std::complex<double> start(a, h);
        const std::complex<double> end(b, h);
        out.crossings.push_back(mu_inv(v, start));
        out.arc_lengths.push_back(std::fabs(b - a) / h);
        std::vector<std::complex<double>> arc;
        for (int k = 0; k <= samples_per_arc; ++k) {
            const double t = static_cast<double>(k) / samples_per_arc;
            arc.push_back(mu_inv(v, std::complex<double>(a + t * (b - a), h)));
        }
        out.arcs.push_back(std::move(arc));
        H = mu_inv(v, end);
    }
    return out;
}

} // namespace flute
