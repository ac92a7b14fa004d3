#pragma once
#include <complex>
#include <optional>

#include "flute/boundary.hpp"

namespace flute {

/// Point on the geodesic g closest to the boundary point x; equivalently the
/// intersection of g with the perpendicular geodesic from x.
std::complex<double> foot_of_perpendicular(const BoundaryPoint& x, const Geodesic& g);

/// Shear of the ideal quadrilateral with diagonal g = (p -> r) and opposite
/// vertices q, t: the signed distance along g, measured with g's orientation,
/// from the perpendicular foot of q to the perpendicular foot of t.
///
/// Convention (pinned once against the feet-of-perpendicular computation and
/// frozen): in the frame with p -> 0 and r -> inf the value is
/// log|M(t)| - log|M(q)|.  Satisfies shear_of_quad(p,q,r,t) == shear_of_quad(r,t,p,q).
double shear_of_quad(const BoundaryPoint& p, const BoundaryPoint& q,
                     const BoundaryPoint& r, const BoundaryPoint& t);

/// Distance between two disjoint geodesics (the length of their common
/// perpendicular).  Throws for crossing or asymptotic pairs.
double geodesic_distance(const Geodesic& g1, const Geodesic& g2);

/// Hyperbolic distance between interior points of H.
double point_distance(const std::complex<double>& z, const std::complex<double>& w);

/// Trirectangle data derived from the two sides a, b opposite the
/// non-right vertex:
///   cos(phi) = sinh(a) sinh(b)
///   cosh(a)  = tanh(beta) coth(b)
///   sinh(alpha) = sinh(a) cosh(beta)
/// phi is absent when sinh(a) sinh(b) > 1 (no trirectangle with those legs);
/// beta and alpha are absent when sinh(a) sinh(b) >= 1 (the side through the
/// ideal vertex is infinite).
struct TrirectangleParts {
    std::optional<double> phi;
    std::optional<double> beta;
    std::optional<double> alpha;
};

TrirectangleParts trirectangle_relations(double a, double b);

} // namespace flute
