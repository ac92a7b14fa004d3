#include "flute/halfplane.hpp"

#include <cmath>

namespace flute {

namespace {

// Isometry sending g.start -> 0 and g.end -> inf.
Isometry axis_frame(const Geodesic& g) {
    // Third point: any point distinct from both, mapped to +-1 so the triple
    // correspondence preserves orientation.
    BoundaryPoint aux;
    if (!g.start.is_infinity() && !g.end.is_infinity()) {
        aux = BoundaryPoint::infinity();
    } else {
        double s = g.start.is_infinity() ? 0.0 : g.start.value();
        double e = g.end.is_infinity() ? 0.0 : g.end.value();
        aux = BoundaryPoint::of(std::max(s, e) + 1.0);
    }
    const BoundaryPoint target =
        ccw(g.start, g.end, aux) ? BoundaryPoint::of(-1.0) : BoundaryPoint::of(1.0);
    return Isometry::through(g.start, g.end, aux, BoundaryPoint::of(0.0),
                             BoundaryPoint::infinity(), target);
}

} // namespace

std::complex<double> foot_of_perpendicular(const BoundaryPoint& x, const Geodesic& g) {
    if (x == g.start || x == g.end)
        throw domain_error("foot_of_perpendicular: point is an endpoint of the geodesic");
    Isometry f;
    try {
        f = axis_frame(g);
    } catch (const domain_error&) {
        // aux collided with x is impossible; rethrow anything else
        throw;
    }
    const BoundaryPoint xi = f.apply(x);
    const double r = xi.is_infinity() ? 1.0 : std::abs(xi.value());
    // Feet of perpendiculars onto the imaginary axis from a boundary point u
    // lie at i*|u|; from infinity the foot is i.
    const std::complex<double> foot_axis = xi.is_infinity()
        ? std::complex<double>(0.0, 1.0)
        : std::complex<double>(0.0, r);
    return f.inverse().apply(foot_axis);
}

double shear_of_quad(const BoundaryPoint& p, const BoundaryPoint& q,
                     const BoundaryPoint& r, const BoundaryPoint& t) {
    const BoundaryPoint* pts[4] = {&p, &q, &r, &t};
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (*pts[i] == *pts[j])
                throw domain_error("shear_of_quad: repeated points");
    if (ccw(p, q, r) == ccw(p, t, r))
        throw domain_error("shear_of_quad: q and t must lie on opposite sides of the diagonal");
    // In the frame p -> 0, r -> inf the feet from u sit at i|u|; the signed
    // distance from foot(q) to foot(t) along the upward axis is
    // log|t'| - log|q'| with u' = [u,p]/[u,r].
    const double num = std::abs(bracket(t, p)) * std::abs(bracket(q, r));
    const double den = std::abs(bracket(t, r)) * std::abs(bracket(q, p));
    return std::log(num) - std::log(den);
}

double geodesic_distance(const Geodesic& g1, const Geodesic& g2) {
    const double chi = cross_ratio(g1.start, g1.end, g2.start, g2.end);
    if (chi < 0.0)
        throw domain_error("geodesic_distance: geodesics cross");
    if (chi == 0.0 || chi == 1.0 || std::isinf(chi))
        throw domain_error("geodesic_distance: geodesics share an endpoint");
    // With endpoints linked as (a, b; c, d), chi = coth^2(d/2); the unlinked
    // labelling gives the reciprocal.
    const double x = chi > 1.0 ? 1.0 / std::sqrt(chi) : std::sqrt(chi);
    return 2.0 * std::atanh(x);
}

double point_distance(const std::complex<double>& z, const std::complex<double>& w) {
    const double n = std::norm(z - w);
    return std::acosh(1.0 + n / (2.0 * z.imag() * w.imag()));
}

TrirectangleParts trirectangle_relations(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0))
        throw domain_error("trirectangle_relations: sides must be positive");
    TrirectangleParts out;
    const double prod = std::sinh(a) * std::sinh(b);
    constexpr double kEps = 1e-12;
    if (prod <= 1.0 + kEps) {
        out.phi = std::acos(std::min(prod, 1.0));
    }
    const double tb = std::cosh(a) * std::tanh(b); // tanh(beta)
    if (prod < 1.0 - kEps) {
        out.beta = std::atanh(tb);
        out.alpha = std::asinh(std::sinh(a) * std::cosh(*out.beta));
    }
    return out;
}

} // namespace flute
