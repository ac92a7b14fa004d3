#include "flute/shear_sequence.hpp"

#include <cmath>

#include "flute/logspace.hpp"

namespace flute {

double shear_even(double eta) {
    if (!(eta > 0.0)) throw domain_error("shear_even: eta must be positive");
    return 2.0 * log_sinh(eta / 2.0);
}

double shear_odd(double eta_n, double eta_next, double u_next, double ell_next) {
    if (!(eta_n > 0.0) || !(eta_next > 0.0))
        throw domain_error("shear_odd: eta must be positive");
    return asinh_inv_sinh(eta_n) + asinh_inv_sinh(eta_next) + u_next * ell_next;
}

namespace {

// log(eta_n) from the cuff lengths, stable for arbitrarily long cuffs.
double log_eta(double ell_a, double ell_b) {
    return logaddexp(log_asinh_inv_sinh(ell_a / 2.0), log_asinh_inv_sinh(ell_b / 2.0));
}

double shear_even_from_log(double log_eta_n) {
    if (log_eta_n > -25.0) return 2.0 * log_sinh(std::exp(log_eta_n) / 2.0);
    // sinh(eta/2) ~ eta/2 to relative accuracy e^{-2*25}
    return 2.0 * (log_eta_n - std::log(2.0));
}

double asinh_inv_sinh_from_log(double log_eta_n) {
    if (log_eta_n > -25.0) return asinh_inv_sinh(std::exp(log_eta_n));
    // 1/sinh(eta) ~ 1/eta; asinh(y) ~ log(2y) for huge y
    return std::log(2.0) - log_eta_n;
}

} // namespace

ShearSequence ShearSequence::build(const FluteSurface& surface, const USequence& u,
                                   int pair_count) {
    if (pair_count < 1) throw validation_error("ShearSequence::build: pair_count must be >= 1");
    if (u.depth() < pair_count + 1)
        throw validation_error("ShearSequence::build: u-sequence too short");
    auto view = surface.view(pair_count + 2);
    std::vector<double> leta(static_cast<size_t>(pair_count) + 2);
    for (int n = 1; n <= pair_count + 1; ++n)
        leta[static_cast<size_t>(n)] = log_eta(view.length(n), view.length(n + 1));

    ShearSequence out;
    out.s.assign(static_cast<size_t>(2 * pair_count) + 2, 0.0);
    out.s[1] = 0.0;
    for (int n = 1; n <= pair_count; ++n) {
        out.s[static_cast<size_t>(2 * n)] = shear_even_from_log(leta[static_cast<size_t>(n)]);
        out.s[static_cast<size_t>(2 * n + 1)] =
            asinh_inv_sinh_from_log(leta[static_cast<size_t>(n)]) +
            asinh_inv_sinh_from_log(leta[static_cast<size_t>(n + 1)]) +
            u.at(n + 1) * view.length(n + 1);
    }
    out.cum.assign(out.s.size(), 0.0);
    for (size_t k = 1; k < out.s.size(); ++k) out.cum[k] = out.cum[k - 1] + out.s[k];
    return out;
}

double ExtendedReal::value() const { return sign * std::exp(log_value); }

ExtendedReal horocyclic_partial_length(const ShearSequence& s, int N) {
    if (N < 1) throw validation_error("horocyclic_partial_length: N must be >= 1");
    if (s.max_index() < 2 * N + 1)
        throw validation_error("horocyclic_partial_length: shears available only through " +
                               std::to_string(s.max_index()));
    LogSum total;
    for (int n = 1; n <= N; ++n) {
        total.add(s.cum[static_cast<size_t>(2 * n)]);
        total.add(-s.cum[static_cast<size_t>(2 * n + 1)]);
    }
    return ExtendedReal{total.log_total, +1};
}

} // namespace flute
