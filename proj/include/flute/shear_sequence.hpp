#pragma once
#include <vector>

#include "flute/patchwork.hpp"
#include "flute/sequence_spec.hpp"

namespace flute {

/// Even shear across g_{2n}: 2 log sinh(eta_n / 2).
double shear_even(double eta);

/// Odd shear across g_{2n+1}:
/// asinh(1/sinh(eta_n)) + asinh(1/sinh(eta_{n+1})) + u_{n+1} l_{n+1}.
/// The one formula covers every pentagon configuration once u (or u')
/// encodes the configuration.
double shear_odd(double eta_n, double eta_next, double u_next, double ell_next);

/// Alternating shear sequence of the developed chain.  s[0] is unused and
/// s[1] = 0 by convention (the first horocyclic arc is normalized to unit
/// length; this rescales both sums by fixed factors and cannot affect
/// divergence).  cum[k] = s[1] + ... + s[k].
struct ShearSequence {
    std::vector<double> s;
    std::vector<double> cum;

    int max_index() const { return static_cast<int>(s.size()) - 1; }

    /// Builds s[1 .. 2*pair_count + 1] from the surface and u-sequence
    /// (u must reach pair_count + 1).  Internally works on log(eta) so very
    /// long cuffs do not underflow.
    static ShearSequence build(const FluteSurface& surface, const USequence& u, int pair_count);
};

/// Extended-range value exp(log_value) with a sign (always +1 here; the sign
/// slot keeps the representation honest for downstream arithmetic).
struct ExtendedReal {
    double log_value;
    int sign;
    double value() const; // may overflow to +inf for display purposes
};

/// Partial length of the piecewise horocyclic path:
/// sum_{n<=N} e^{s_1+...+s_{2n}} + sum_{n<=N} e^{-s_1-...-s_{2n+1}},
/// accumulated entirely in log space.
ExtendedReal horocyclic_partial_length(const ShearSequence& s, int N);

} // namespace flute
