#pragma once
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace flute {

struct domain_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Point of the ideal boundary of the upper half-plane, R union {inf}.
/// Stored projectively as (a : b); b == 0 is the (unique) point at infinity.
/// Finite points are normalized to (x, 1), infinity to (1, 0).
struct BoundaryPoint {
    double a = 0.0;
    double b = 1.0;

    BoundaryPoint() = default;

    static BoundaryPoint of(double x) {
        if (std::isnan(x)) throw domain_error("BoundaryPoint: NaN coordinate");
        if (std::isinf(x)) return infinity();
        BoundaryPoint p;
        p.a = x;
        p.b = 1.0;
        return p;
    }

    static BoundaryPoint infinity() {
        BoundaryPoint p;
        p.a = 1.0;
        p.b = 0.0;
        return p;
    }

    bool is_infinity() const { return b == 0.0; }

    double value() const {
        if (is_infinity()) return std::numeric_limits<double>::infinity();
        return a / b;
    }

    friend bool operator==(const BoundaryPoint& p, const BoundaryPoint& q) {
        return p.a * q.b - q.a * p.b == 0.0;
    }
};

/// bracket [p,q] = p.a*q.b - q.a*p.b; zero iff p == q as projective points.
inline double bracket(const BoundaryPoint& p, const BoundaryPoint& q) {
    return p.a * q.b - q.a * p.b;
}

/// true when (p, q, r) are in counterclockwise circular order on the boundary.
inline bool ccw(const BoundaryPoint& p, const BoundaryPoint& q, const BoundaryPoint& r) {
    return bracket(p, q) * bracket(q, r) * bracket(r, p) > 0.0;
}

/// Cross-ratio cr(a,b;c,d) = ((a-c)(b-d)) / ((a-d)(b-c)), limits at infinity
/// taken exactly through the projective form.
double cross_ratio(const BoundaryPoint& a, const BoundaryPoint& b,
                   const BoundaryPoint& c, const BoundaryPoint& d);

/// Oriented geodesic of H, named by its ordered ideal endpoints.
struct Geodesic {
    BoundaryPoint start;
    BoundaryPoint end;

    Geodesic(BoundaryPoint s, BoundaryPoint e) : start(s), end(e) {
        if (s == e) throw domain_error("Geodesic: coincident endpoints");
    }
};

/// Orientation-preserving isometry of H, a real 2x2 matrix of unit
/// determinant identified up to global sign.
struct Isometry {
    // row-major entries (a b; c d)
    std::array<double, 4> m{1.0, 0.0, 0.0, 1.0};

    Isometry() = default;
    Isometry(double a, double b, double c, double d);

    double det() const { return m[0] * m[3] - m[1] * m[2]; }

    BoundaryPoint apply(const BoundaryPoint& p) const;
    std::complex<double> apply(const std::complex<double>& z) const;

    Isometry inverse() const;
    friend Isometry operator*(const Isometry& f, const Isometry& g);

    static Isometry translation(double t);  // z -> z + t
    static Isometry scaling(double lambda); // z -> lambda z, lambda > 0

    /// The unique isometry sending (p1, p2, p3) to (q1, q2, q3); throws if the
    /// resulting map is orientation-reversing.
    static Isometry through(const BoundaryPoint& p1, const BoundaryPoint& p2, const BoundaryPoint& p3,
                            const BoundaryPoint& q1, const BoundaryPoint& q2, const BoundaryPoint& q3);
};

} // namespace flute
