#include <algorithm>
#include <cmath>
#include <sstream>

#include "flute/criterion.hpp"

namespace flute {

namespace {

// Smallest exact period of u over [w0, hi], or 0 when none fits.
int detect_period(const std::vector<double>& u, int w0, int hi) {
    for (int Q = 1; Q <= 24; ++Q) {
        if (hi - w0 + 1 < 3 * Q) break;
        bool ok = true;
        for (int i = w0; i + Q <= hi; ++i) {
            if (u[static_cast<size_t>(i)] != u[static_cast<size_t>(i + Q)]) {
                ok = false;
                break;
            }
        }
        if (ok) return Q;
    }
    return 0;
}

std::string fmt(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

} // namespace

std::optional<Confirmation> confirm_series(const SequenceSpec& lengths,
                                           const std::vector<double>& u, int depth) {
    if (lengths.tail_bounded()) {
        return Confirmation{true, "bounded",
                            "bounded cuff lengths: terms are bounded below by a positive "
                            "constant, comparison with the constant series"};
    }
    if (!lengths.tail_unbounded_increasing()) return std::nullopt;

    const int hi = std::min<int>(depth, static_cast<int>(u.size()) - 1);
    const int w0 = std::max<int>(static_cast<int>(lengths.prefix.size()) + 2, hi / 2);
    if (hi - w0 < 8) return std::nullopt;
    const int Q = detect_period(u, w0, hi);
    if (Q == 0) return std::nullopt;

    double mean = 0.0;
    for (int i = 0; i < Q; ++i) mean += u[static_cast<size_t>(w0 + i)];
    mean /= Q;
    if (mean != 0.0) {
        return Confirmation{true, "unbounded-mean",
                            "the u-tail (period " + std::to_string(Q) + ") has mean " +
                                fmt(mean) +
                                ": |S_n| grows like |mean| * (l_1 + ... + l_n), which "
                                "dominates l_n/2, so the terms tend to infinity"};
    }

    // Per-phase coefficient of l_n in S_n: gamma_r = nu/Q + (u-hat prefix sum).
    double nu = 0.0;
    for (int i = 0; i < Q; ++i) nu += i * u[static_cast<size_t>(w0 + i)];
    std::vector<double> gamma(static_cast<size_t>(Q));
    double prefix = 0.0;
    for (int r = 0; r < Q; ++r) {
        prefix += u[static_cast<size_t>(w0 + r)];
        gamma[static_cast<size_t>(r)] = nu / Q + prefix;
    }
    // log term_n = (|gamma_r| - 1/2) l_n + O(1) on each phase class.
    double emax = -1e300;
    for (double g : gamma) emax = std::max(emax, std::fabs(g) - 0.5);

    std::ostringstream tail;
    tail << "u-tail period " << Q << ", max phase coefficient |gamma| - 1/2 = " << emax;

    switch (lengths.tail) {
        case SequenceSpec::Tail::linear: {
            const double a = lengths.c0;
            if (emax >= 0.0)
                return Confirmation{true, "linear",
                                    "linear cuff growth: a phase class has log term_n >= "
                                    "O(1) (" + tail.str() + "), its terms do not decay"};
            return Confirmation{false, "linear",
                                "linear cuff growth: every phase class decays "
                                "geometrically at rate " + fmt(emax * a) + " per index (" +
                                    tail.str() + "), geometric-series comparison"};
        }
        case SequenceSpec::Tail::logarithmic: {
            const double c = lengths.c0;
            const double kappa = emax * c;
            if (kappa >= -1.0)
                return Confirmation{true, "logarithmic",
                                    "logarithmic cuff growth: p-series comparison with "
                                    "exponent " + fmt(kappa) + " >= -1 (" + tail.str() + ")"};
            return Confirmation{false, "logarithmic",
                                "logarithmic cuff growth: p-series comparison with "
                                "exponent " + fmt(kappa) + " < -1 (" + tail.str() + ")"};
        }
        case SequenceSpec::Tail::power: {
            const double p = lengths.c1;
            if (emax > 0.0)
                return Confirmation{true, "power",
                                    "power-law cuff growth: a phase class has log term_n "
                                    "~ " + fmt(emax * lengths.c0) + " n^" + fmt(p) + " (" +
                                        tail.str() + "), its terms blow up"};
            if (emax == 0.0) {
                if (p < 1.0)
                    return Confirmation{true, "power",
                                        "power-law cuff growth with a flat phase class "
                                        "(exponent 0, p < 1): terms on it stay of order "
                                        "one (" + tail.str() + ")"};
                return std::nullopt; // corrections of order n^{p-1} are not controlled
            }
            return Confirmation{false, "power",
                                "power-law cuff growth: every phase class decays like "
                                "exp(" + fmt(emax * lengths.c0) + " n^" + fmt(p) + ") (" +
                                    tail.str() + "), comparison with a convergent series"};
        }
        default:
            return std::nullopt;
    }
}

} // namespace flute
