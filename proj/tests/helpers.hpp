#pragma once
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "flute/boundary.hpp"
#include "flute/halfplane.hpp"
#include "flute/patchwork.hpp"
#include "flute/sequence_spec.hpp"

namespace flute::testing {

inline std::mt19937_64 rng(uint64_t seed) { return std::mt19937_64(seed); }

/// Random flute surface with explicit coordinate prefixes.
inline FluteSurface random_surface(std::mt19937_64& g, int depth, double lmin = 4.0,
                                   double lmax = 16.0, bool half_integral_twists = false) {
    std::uniform_real_distribution<double> len(lmin, lmax);
    std::uniform_real_distribution<double> twi(-0.499, 0.499);
    std::bernoulli_distribution halves(0.5);
    std::vector<double> ls, ts;
    for (int i = 0; i < depth; ++i) {
        ls.push_back(len(g));
        ts.push_back(half_integral_twists ? (halves(g) ? 0.5 : 0.0) : twi(g));
    }
    return FluteSurface(SequenceSpec::constant((lmin + lmax) / 2).with_prefix(ls),
                        SequenceSpec::constant(half_integral_twists ? 0.0 : 0.25).with_prefix(ts));
}

/// Four boundary points in circular order (q, p, t, r): an ideal
/// quadrilateral with diagonal (p, r) and q, t on opposite sides.
struct Quad {
    BoundaryPoint p, q, r, t;
};

inline Quad random_quad(std::mt19937_64& g) {
    std::uniform_real_distribution<double> d(-8.0, 8.0);
    double a[4];
    for (;;) {
        for (double& x : a) x = d(g);
        std::sort(a, a + 4);
        if (a[1] - a[0] > 1e-3 && a[2] - a[1] > 1e-3 && a[3] - a[2] > 1e-3) break;
    }
    // circular order a0 < a1 < a2 < a3: diagonal (a1, a3) separates a0 from a2
    return Quad{BoundaryPoint::of(a[1]), BoundaryPoint::of(a[0]), BoundaryPoint::of(a[3]),
                BoundaryPoint::of(a[2])};
}

inline Isometry random_isometry(std::mt19937_64& g) {
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    for (;;) {
        const double a = d(g), b = d(g), c = d(g), e = d(g);
        if (a * e - b * c > 0.1) return Isometry(a, b, c, e);
    }
}

/// Euclidean center of the geodesic through boundary points x1, x2 (finite).
inline double geodesic_center(double x1, double x2) { return (x1 + x2) / 2.0; }

/// Unit tangent of the geodesic with euclidean center c at interior point z.
inline std::complex<double> circle_tangent(double c, std::complex<double> z) {
    std::complex<double> radial = z - std::complex<double>(c, 0.0);
    std::complex<double> t = radial * std::complex<double>(0.0, 1.0);
    return t / std::abs(t);
}

/// Independent measurement of the pentagon-pair perpendicular.  Frame: the
/// ideal vertex sits at infinity with one cusp side on the imaginary axis;
/// the first cuff is the unit circle with V2 = i, the seam is the geodesic
/// perpendicular to it after the side of length la/2.  The second cuff is
/// the perpendicular to the seam at distance t, closed up by the vertical
/// cusp side through its apex; bisection on t makes its cuff side lb/2.
/// Valid pentagons have the second foot beyond the seam's apex (where the
/// perpendicular from the cusp lands), and there the side length decreases
/// strictly in t, so the root is unique.  Returns t, the distance between
/// the two cuffs.  Uses only circle geometry and the point metric.
inline double pentagon_eta_oracle(double la, double lb) {
    const double theta3 = 2.0 * std::atan(std::exp(-la / 2.0));
    const std::complex<double> V3(std::cos(theta3), std::sin(theta3));
    const double M = 1.0 / std::cos(theta3); // seam circle center
    const double R = std::sqrt(M * M - 1.0); // seam circle radius
    const double phi3 = std::atan2(V3.imag(), V3.real() - M);
    auto seam_point = [&](double t) {
        // distance t from V3 along the seam, moving toward smaller phi
        const double lt = std::log(std::tan(phi3 / 2.0)) - t;
        const double phi = 2.0 * std::atan(std::exp(lt));
        return std::complex<double>(M + R * std::cos(phi), R * std::sin(phi));
    };
    auto cuff_side = [&](double t) {
        const std::complex<double> V4 = seam_point(t);
        // geodesic through V4 perpendicular to the seam: its center cx obeys
        // (V4 - cx) . N = 0 with N normal to the seam at V4
        const std::complex<double> radial = V4 - std::complex<double>(M, 0.0);
        const std::complex<double> tangent = radial * std::complex<double>(0.0, 1.0);
        const std::complex<double> N = tangent * std::complex<double>(0.0, 1.0);
        const double cx = V4.real() + V4.imag() * N.imag() / N.real();
        const double rho = std::abs(V4 - std::complex<double>(cx, 0.0));
        const std::complex<double> V5(cx, rho); // apex; right angle to the vertical
        return point_distance(V4, V5);
    };
    const std::complex<double> apex(M, R);
    double lo = point_distance(V3, apex) * (1.0 + 1e-14) + 1e-300;
    double hi = lo + 45.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (cuff_side(mid) > lb / 2.0) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

/// Explicitly developed trirectangle with legs a (on the imaginary axis from
/// i) and b (on the unit circle from i): returns the measured remaining
/// sides and angle (beta continues leg a, alpha continues leg b, phi between
/// them at the far vertex).
struct DevelopedTrirectangle {
    double phi, beta, alpha;
};

inline DevelopedTrirectangle develop_trirectangle(double a, double b) {
    const std::complex<double> P2(0.0, std::exp(a));
    // P4 on the unit circle at distance b from i, on the x > 0 side
    const double theta = 2.0 * std::atan(std::exp(-b));
    const std::complex<double> P4(std::cos(theta), std::sin(theta));
    // perpendicular to the axis at P2: circle |z| = e^a (center 0)
    // perpendicular to the unit circle at P4: circle centered m = 1/cos(theta)
    const double m = 1.0 / std::cos(theta);
    const double r = std::sqrt(m * m - 1.0);
    // P3: intersection of |z| = e^a with |z - m| = r
    const double R = std::exp(a);
    const double x = (R * R + 1.0) / (2.0 * m);
    const double y2 = R * R - x * x;
    if (y2 <= 0.0) throw std::runtime_error("develop_trirectangle: legs too long");
    const std::complex<double> P3(x, std::sqrt(y2));
    DevelopedTrirectangle out;
    out.beta = point_distance(P2, P3);
    out.alpha = point_distance(P4, P3);
    // acute angle between the circles at P3
    const std::complex<double> t1 = circle_tangent(0.0, P3);
    const std::complex<double> t2 = circle_tangent(m, P3);
    const double dot = t1.real() * t2.real() + t1.imag() * t2.imag();
    out.phi = std::acos(std::min(1.0, std::fabs(dot)));
    return out;
}

} // namespace flute::testing
