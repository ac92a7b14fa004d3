#include "flute/boundary.hpp"

#include <limits>

namespace flute {

double cross_ratio(const BoundaryPoint& a, const BoundaryPoint& b,
                   const BoundaryPoint& c, const BoundaryPoint& d) {
    const BoundaryPoint* pts[4] = {&a, &b, &c, &d};
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (*pts[i] == *pts[j])
                throw domain_error("cross_ratio: repeated points");
    const double num = bracket(a, c) * bracket(b, d);
    const double den = bracket(a, d) * bracket(b, c);
    return num / den;
}

Isometry::Isometry(double a, double b, double c, double d) : m{a, b, c, d} {
    const double dd = det();
    if (!(dd > 0.0))
        throw domain_error("Isometry: determinant must be positive");
    const double s = std::sqrt(dd);
    for (auto& e : m) e /= s;
}

BoundaryPoint Isometry::apply(const BoundaryPoint& p) const {
    BoundaryPoint q;
    q.a = m[0] * p.a + m[1] * p.b;
    q.b = m[2] * p.a + m[3] * p.b;
    if (q.b == 0.0) return BoundaryPoint::infinity();
    return BoundaryPoint::of(q.a / q.b);
}

std::complex<double> Isometry::apply(const std::complex<double>& z) const {
    return (m[0] * z + m[1]) / (m[2] * z + m[3]);
}

Isometry Isometry::inverse() const {
    return Isometry(m[3], -m[1], -m[2], m[0]);
}

Isometry operator*(const Isometry& f, const Isometry& g) {
    return Isometry(f.m[0] * g.m[0] + f.m[1] * g.m[2],
                    f.m[0] * g.m[1] + f.m[1] * g.m[3],
                    f.m[2] * g.m[0] + f.m[3] * g.m[2],
                    f.m[2] * g.m[1] + f.m[3] * g.m[3]);
}

Isometry Isometry::translation(double t) { return Isometry(1.0, t, 0.0, 1.0); }

Isometry Isometry::scaling(double lambda) {
    if (!(lambda > 0.0)) throw domain_error("Isometry::scaling: factor must be positive");
    return Isometry(lambda, 0.0, 0.0, 1.0);
}

namespace {

// Matrix of the map sending (p1, p2, p3) to (0, inf, 1), up to scale.
std::array<double, 4> to_standard(const BoundaryPoint& p1, const BoundaryPoint& p2,
                                  const BoundaryPoint& p3) {
    // z -> [z,p1][p3,p2] / ([z,p2][p3,p1]) in projective coordinates.
    const double k1 = bracket(p3, p2);
    const double k2 = bracket(p3, p1);
    // [z,p] for z=(x:w) is x*p.b - p.a*w, a linear form in (x, w).
    return {k1 * p1.b, -k1 * p1.a, k2 * p2.b, -k2 * p2.a};
}

} // namespace

Isometry Isometry::through(const BoundaryPoint& p1, const BoundaryPoint& p2, const BoundaryPoint& p3,
                           const BoundaryPoint& q1, const BoundaryPoint& q2, const BoundaryPoint& q3) {
    const auto A = to_standard(p1, p2, p3);
    const auto B = to_standard(q1, q2, q3);
    // B^{-1} * A, with B^{-1} the adjugate (projective inverse).
    const std::array<double, 4> Binv{B[3], -B[1], -B[2], B[0]};
    std::array<double, 4> M{Binv[0] * A[0] + Binv[1] * A[2], Binv[0] * A[1] + Binv[1] * A[3],
                            Binv[2] * A[0] + Binv[3] * A[2], Binv[2] * A[1] + Binv[3] * A[3]};
    const double d = M[0] * M[3] - M[1] * M[2];
    if (d < 0.0)
        throw domain_error("Isometry::through: triple correspondence is orientation-reversing");
    return Isometry(M[0], M[1], M[2], M[3]);
}

} // namespace flute
