#pragma once
#include <cmath>
#include <limits>

namespace flute {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline double logaddexp(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double m = a > b ? a : b;
    return m + std::log1p(std::exp(-std::fabs(a - b)));
}

/// log(cosh(x)), safe for |x| of any size.
inline double log_cosh(double x) {
    const double ax = std::fabs(x);
    return ax + std::log1p(std::exp(-2.0 * ax)) - std::log(2.0);
}

/// log(sinh(x)) for x > 0, safe for tiny and huge arguments.
inline double log_sinh(double x) {
    if (x > 20.0) return x - std::log(2.0) + std::log1p(-std::exp(-2.0 * x));
    if (x < 1e-4) return std::log(x) + std::log1p(x * x / 6.0);
    return std::log(std::sinh(x));
}

/// asinh(1/sinh(x)) for x > 0 without overflow/underflow of the inner ratio.
inline double asinh_inv_sinh(double x) {
    if (x > 25.0) {
        // 1/sinh(x) = 2e^{-x}(1 + e^{-2x} + ...); asinh(y) ~ y for tiny y.
        const double y = 2.0 * std::exp(-x);
        return y * (1.0 + std::exp(-2.0 * x));
    }
    return std::asinh(1.0 / std::sinh(x));
}

/// log(asinh(1/sinh(x))) for x > 0.
inline double log_asinh_inv_sinh(double x) {
    if (x > 25.0) return std::log(2.0) - x + std::log1p(std::exp(-2.0 * x));
    return std::log(std::asinh(1.0 / std::sinh(x)));
}

/// Running log-space sum of positive terms given by their logs.
struct LogSum {
    double log_total = kNegInf;
    void add(double log_term) { log_total = logaddexp(log_total, log_term); }
};

} // namespace flute
