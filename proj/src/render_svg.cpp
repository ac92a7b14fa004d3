#include "flute/render_svg.hpp"

#include <charconv>
#include <cmath>
#include <complex>
#include <fstream>

#include "flute/boundary.hpp"

namespace flute {

namespace {

// Locale-independent fixed formatting.
std::string fixed(double x, int digits = 6) {
    if (!std::isfinite(x)) x = 0.0;
    if (x == 0.0) x = 0.0; // normalize -0
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::fixed, digits);
    return std::string(buf, res.ptr);
}

std::complex<double> cayley_boundary(double x) {
    if (std::isinf(x)) return {1.0, 0.0};
    const std::complex<double> z(x, 0.0);
    return (z - std::complex<double>(0.0, 1.0)) / (z + std::complex<double>(0.0, 1.0));
}

std::complex<double> cayley(std::complex<double> z) {
    return (z - std::complex<double>(0.0, 1.0)) / (z + std::complex<double>(0.0, 1.0));
}

// SVG y grows downward; flip the imaginary part.
std::string pt(std::complex<double> z) { return fixed(z.real()) + " " + fixed(-z.imag()); }

} // namespace

void render_disk_svg(const std::vector<double>& chart_points,
                     const std::optional<HorocyclicPath>& path, const std::string& file,
                     const RenderOptions& options) {
    if (chart_points.size() < 2)
        throw domain_error("render_disk_svg: chain must contain at least one geodesic");
    std::ofstream os(file);
    if (!os) throw std::runtime_error("render_disk_svg: cannot write " + file);

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-1.1 -1.1 2.2 2.2\">\n";
    os << "  <circle class=\"boundary\" cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"#333333\""
       << " stroke-width=\"" << fixed(options.stroke_width) << "\"/>\n";

    const size_t npts = chart_points.size();
    for (size_t n = 0; n + 1 < npts; ++n) {
        const auto e1 = cayley_boundary(chart_points[n]);
        const auto e2 = cayley_boundary(chart_points[n + 1]);
        const double dot = e1.real() * e2.real() + e1.imag() * e2.imag();
        os << "  <path class=\"geodesic\" fill=\"none\" stroke=\"" << options.geodesic_color
           << "\" stroke-width=\"" << fixed(options.stroke_width) << "\" d=\"M " << pt(e1);
        if (dot < -1.0 + 1e-9) {
            os << " L " << pt(e2); // diameter
        } else {
            const std::complex<double> c{(e1.real() + e2.real()) / (1.0 + dot),
                                         (e1.imag() + e2.imag()) / (1.0 + dot)};
            const double r = std::sqrt(std::max(0.0, std::norm(c) - 1.0));
            // minor arc of the orthogonal circle; pick the direction that
            // passes the point of the circle nearest the origin
            const double phi1 = std::atan2(e1.imag() - c.imag(), e1.real() - c.real());
            const double phi2 = std::atan2(e2.imag() - c.imag(), e2.real() - c.real());
            const std::complex<double> m = c - r * (c / std::abs(c));
            const double phim = std::atan2(m.imag() - c.imag(), m.real() - c.real());
            auto mod2pi = [](double x) {
                while (x < 0) x += 2.0 * M_PI;
                while (x >= 2.0 * M_PI) x -= 2.0 * M_PI;
                return x;
            };
            const bool ccw = mod2pi(phim - phi1) < mod2pi(phi2 - phi1);
            // svg sweep=1 is clockwise in the flipped-y frame, i.e. ccw here
            const int sweep = ccw ? 0 : 1;
            os << " A " << fixed(r) << " " << fixed(r) << " 0 0 " << sweep << " " << pt(e2);
        }
        os << "\"/>\n";
    }

    for (size_t n = 0; n < npts; ++n) {
        const auto e = cayley_boundary(chart_points[n]);
        os << "  <circle class=\"vertex\" cx=\"" << fixed(e.real()) << "\" cy=\""
           << fixed(-e.imag()) << "\" r=\"" << fixed(2.0 * options.stroke_width)
           << "\" fill=\"" << options.vertex_color << "\"/>\n";
    }

    if (path && options.overlay_horocyclic) {
        os << "  <polyline class=\"horocyclic\" fill=\"none\" stroke=\""
           << options.horocyclic_color << "\" stroke-width=\""
           << fixed(options.stroke_width) << "\" points=\"";
        bool first = true;
        for (const auto& arc : path->arcs) {
            for (const auto& z : arc) {
                if (!first) os << " ";
                os << fixed(cayley(z).real()) << "," << fixed(-cayley(z).imag());
                first = false;
            }
        }
        os << "\"/>\n";
    }
    os << "</svg>\n";
}

} // namespace flute
