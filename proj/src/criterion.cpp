#include "flute/criterion.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "flute/logspace.hpp"

namespace flute {

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::DIVERGENT_CONFIRMED: return "DIVERGENT_CONFIRMED";
        case Verdict::CONVERGENT_CONFIRMED: return "CONVERGENT_CONFIRMED";
        case Verdict::HEURISTIC_DIVERGENT: return "HEURISTIC_DIVERGENT";
        case Verdict::HEURISTIC_CONVERGENT: return "HEURISTIC_CONVERGENT";
        case Verdict::INCONCLUSIVE: return "INCONCLUSIVE";
    }
    return "?";
}

const char* to_string(FirstKind v) {
    switch (v) {
        case FirstKind::FIRST_KIND: return "FIRST_KIND";
        case FirstKind::NOT_FIRST_KIND: return "NOT_FIRST_KIND";
        case FirstKind::UNDETERMINED: return "UNDETERMINED";
    }
    return "?";
}

const char* to_string(Parabolicity v) {
    switch (v) {
        case Parabolicity::PARABOLIC: return "PARABOLIC";
        case Parabolicity::NOT_PARABOLIC: return "NOT_PARABOLIC";
        case Parabolicity::UNDETERMINED: return "UNDETERMINED";
    }
    return "?";
}

CriterionTerms criterion_terms(const FluteSurface& surface, const USequence& u, int N,
                               TermForm form, const RestrictedPatchwork* v) {
    if (N < 1) throw validation_error("criterion_terms: N must be >= 1");
    if (u.depth() < N) throw validation_error("criterion_terms: u-sequence too short");
    auto view = surface.view(N + 1);
    if (form == TermForm::signed_exp) {
        if (v == nullptr || v->depth() < N + 1)
            throw validation_error(
                "criterion_terms: signed_exp form requires the v-sequence through N + 1");
        for (int n = 1; n <= N; ++n)
            if (view.length(n + 1) < view.length(n) - 1e-12)
                throw validation_error(
                    "criterion_terms: signed_exp form refused, cuff lengths are not "
                    "nondecreasing (the sign identity is only available for increasing "
                    "lengths); use the cosh form instead");
    }
    CriterionTerms out;
    out.log_terms.reserve(static_cast<size_t>(N));
    out.log_partial_sums.reserve(static_cast<size_t>(N));
    out.S.reserve(static_cast<size_t>(N));
    LogSum total;
    double S = 0.0;
    for (int n = 1; n <= N; ++n) {
        S += u.at(n) * view.length(n);
        const double base = logaddexp(-view.length(n + 1) / 2.0, -view.length(n) / 2.0);
        double log_term;
        if (form == TermForm::cosh) {
            log_term = base + log_cosh(S);
        } else {
            log_term = base - v->at(n + 1) * S;
        }
        total.add(log_term);
        out.log_terms.push_back(log_term);
        out.log_partial_sums.push_back(total.log_total);
        out.S.push_back(S);
    }
    return out;
}

std::vector<double> beta_sequence(const RestrictedPatchwork& v, const USequence& u,
                                  const FluteSurface& surface, int N) {
    if (N < 1) throw validation_error("beta_sequence: N must be >= 1");
    if (v.depth() < N + 2 || u.depth() < N + 1)
        throw validation_error("beta_sequence: need v through N + 2 and u through N + 1");
    auto view = surface.view(N + 1);
    for (int n = 1; n <= N + 1; ++n) {
        const double t = view.twist(n);
        if (t != 0.0 && t != 0.5)
            throw validation_error("beta_sequence: refused, twist t_" + std::to_string(n) +
                                   " is outside {0, 1/2}");
    }
    bool increasing = true;
    for (int n = 1; n <= N; ++n)
        if (view.length(n + 1) < view.length(n) - 1e-12) increasing = false;

    std::vector<double> beta(static_cast<size_t>(N) + 1, 0.0);
    beta[1] = -v.at(2) * u.at(1) * view.length(1);
    double weighted = u.at(1) * view.length(1); // l_1 u_1 + ... + l_n u_n
    for (int n = 1; n < N; ++n) {
        beta[static_cast<size_t>(n + 1)] =
            v.at(n + 1) * v.at(n + 2) *
            (beta[static_cast<size_t>(n)] - v.at(n + 1) * view.length(n + 1) * u.at(n + 1));
        weighted += u.at(n + 1) * view.length(n + 1);
        const double closed = -v.at(n + 2) * weighted;
        const double scale = std::max(1.0, std::fabs(closed));
        if (std::fabs(beta[static_cast<size_t>(n + 1)] - closed) > 1e-12 * scale)
            throw std::logic_error("beta_sequence: recursion disagrees with closed form");
    }
    if (increasing) {
        for (int n = 1; n <= N; ++n)
            if (beta[static_cast<size_t>(n)] < -1e-12)
                throw std::logic_error("beta_sequence: negative beta for increasing lengths");
    }
    return beta;
}

GrowthFit fit_growth(const CriterionTerms& terms) {
    GrowthFit fit;
    const int N = static_cast<int>(terms.log_terms.size());
    if (N < 8) return fit;
    fit.window_lo = N / 2;
    fit.window_hi = N;
    // least squares of y against log n over the last half of the window
    auto slope = [&](const std::vector<double>& y) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int m = 0;
        for (int n = fit.window_lo; n < fit.window_hi; ++n) {
            const double x = std::log(static_cast<double>(n + 1));
            sx += x;
            sy += y[static_cast<size_t>(n)];
            sxx += x * x;
            sxy += x * y[static_cast<size_t>(n)];
            ++m;
        }
        const double den = m * sxx - sx * sx;
        return den == 0.0 ? 0.0 : (m * sxy - sx * sy) / den;
    };
    fit.partial_slope = slope(terms.log_partial_sums);
    fit.term_slope = slope(terms.log_terms);
    return fit;
}

namespace {

Verdict heuristic_verdict(const GrowthFit& fit, const ClassifyOptions& opt) {
    if (fit.partial_slope > opt.heuristic_divergent_slope) return Verdict::HEURISTIC_DIVERGENT;
    if (fit.term_slope < -1.0 - (opt.heuristic_convergent_decay - 1.0) &&
        fit.partial_slope < opt.heuristic_divergent_slope)
        return Verdict::HEURISTIC_CONVERGENT;
    return Verdict::INCONCLUSIVE;
}

std::string describe_fit(const GrowthFit& fit, int depth) {
    std::ostringstream os;
    os << "fitted log-slope of partial sums " << fit.partial_slope << ", of terms "
       << fit.term_slope << ", over n in [" << fit.window_lo + 1 << ", " << fit.window_hi
       << "] at depth " << depth;
    return os.str();
}

CriterionReport finish_symmetric(CriterionReport rep, const Confirmation& conf) {
    rep.confirmation = conf;
    if (conf.divergent) {
        rep.verdict = Verdict::DIVERGENT_CONFIRMED;
        rep.first_kind = FirstKind::FIRST_KIND;
        rep.parabolicity = Parabolicity::PARABOLIC;
        rep.justification =
            "half-integral twists: the restricted-patchwork series diverges (" + conf.detail +
            "), so the lift accumulates to a single boundary point; for twists in {0, 1/2} "
            "first kind and parabolic are equivalent";
    } else {
        rep.verdict = Verdict::CONVERGENT_CONFIRMED;
        rep.first_kind = FirstKind::NOT_FIRST_KIND;
        rep.parabolicity = Parabolicity::NOT_PARABOLIC;
        rep.justification =
            "half-integral twists: the restricted-patchwork series converges (" + conf.detail +
            "), the lift accumulates on two boundary points and the surface is not of the "
            "first kind, hence not parabolic";
    }
    return rep;
}

} // namespace

CriterionReport classify(const FluteSurface& surface, const ClassifyOptions& options) {
    CriterionReport rep;
    rep.depth = options.depth;
    const int N = options.depth;
    auto view = surface.view(N + 2);

    // Stage 1: bounded cuff lengths.
    if (surface.lengths_spec().tail_bounded()) {
        RestrictedPatchwork v = canonical_restricted(surface, N + 2);
        USequence u = u_sequence(v, surface, N + 1);
        rep.terms = criterion_terms(surface, u, N);
        rep.growth_fit = fit_growth(rep.terms);
        rep.witness_u = u.u;
        rep.patchwork_source = "bounded-shortcut (canonical restricted patchwork reported)";
        rep.confirmation = Confirmation{
            true, "bounded",
            "cuff lengths bounded: every term is at least e^{-sup l} > 0, the series "
            "diverges for every patchwork; bounded-length flutes are parabolic regardless "
            "of the twists"};
        rep.verdict = Verdict::DIVERGENT_CONFIRMED;
        rep.first_kind = FirstKind::FIRST_KIND;
        rep.parabolicity = Parabolicity::PARABOLIC;
        rep.justification = rep.confirmation->detail;
        if (!options.keep_terms) rep.terms = CriterionTerms{};
        return rep;
    }

    // Stage 2: twists all in {0, 1/2}.
    if (surface.twists_all_half_integral(N + 2)) {
        RestrictedPatchwork v = canonical_restricted(surface, N + 2);
        USequence u = u_sequence(v, surface, N + 1);
        rep.terms = criterion_terms(surface, u, N);
        rep.growth_fit = fit_growth(rep.terms);
        rep.witness_u = u.u;
        rep.patchwork_source = "canonical restricted patchwork (v_1 = -1)";
        if (auto conf = confirm_series(surface.lengths_spec(), u.u, N)) {
            rep = finish_symmetric(std::move(rep), *conf);
            if (!options.keep_terms) rep.terms = CriterionTerms{};
            return rep;
        }
        rep.verdict = heuristic_verdict(rep.growth_fit, options);
        rep.first_kind = FirstKind::UNDETERMINED;
        rep.parabolicity = Parabolicity::UNDETERMINED;
        rep.justification = "no registered comparison test applies to this tail; " +
                            describe_fit(rep.growth_fit, N);
        if (!options.keep_terms) rep.terms = CriterionTerms{};
        return rep;
    }

    // Stage 3: general twists; the criterion quantifies over all patchworks.
    const int sd = std::min(options.search_depth, N);
    SearchResult best = minimizing_patchwork_search(surface, sd, SearchStrategy::exhaustive);

    // Candidate complete patchworks: canonical extension of the minimizer plus
    // periodic continuations of its final choices.
    std::vector<std::pair<std::string, Patchwork>> candidates;
    candidates.emplace_back("canonical extension of the exhaustive minimizer",
                            canonical_extension(best.patchwork, surface, N + 2));
    for (int cyc : {1, 2, 3, 4, 6}) {
        if (auto q = periodic_extension(best.patchwork, surface, cyc, N + 2))
            candidates.emplace_back("period-" + std::to_string(cyc) +
                                        " continuation of the exhaustive minimizer",
                                    *q);
    }
    {
        RestrictedPatchwork rv = canonical_restricted(surface, N + 2);
        candidates.emplace_back("canonical restricted patchwork",
                                reduce_to_patchwork(rv));
    }

    std::optional<std::pair<std::string, Confirmation>> convergent_witness;
    bool all_confirmed_divergent = true;
    for (auto& [label, q] : candidates) {
        USequence u = u_prime_sequence(q, surface, N + 1);
        auto conf = confirm_series(surface.lengths_spec(), u.u, N);
        if (!conf) {
            all_confirmed_divergent = false;
            continue;
        }
        if (!conf->divergent && !convergent_witness) {
            convergent_witness = {label, *conf};
            rep.witness_u = u.u;
            rep.patchwork_source = label;
            rep.terms = criterion_terms(surface, u, N);
        }
    }

    if (convergent_witness) {
        rep.growth_fit = fit_growth(rep.terms);
        rep.confirmation = convergent_witness->second;
        rep.verdict = Verdict::CONVERGENT_CONFIRMED;
        rep.first_kind = FirstKind::NOT_FIRST_KIND;
        rep.parabolicity = Parabolicity::NOT_PARABOLIC;
        rep.justification = "witness patchwork with a convergent series found (" +
                            convergent_witness->first + "; " +
                            convergent_witness->second.detail +
                            "); one convergent patchwork rules out the first kind, and "
                            "parabolic surfaces are always of the first kind";
        if (!options.keep_terms) rep.terms = CriterionTerms{};
        return rep;
    }

    // No convergent witness.  Check whether every enumerated prefix is
    // confirmed divergent under its canonical continuation.
    bool every_prefix_divergent = all_confirmed_divergent;
    if (every_prefix_divergent) {
        try {
            std::vector<Patchwork> prefixes = all_generalized(surface, sd + 1);
            for (const auto& pre : prefixes) {
                Patchwork full = canonical_extension(pre, surface, N + 2);
                USequence u = u_prime_sequence(full, surface, N + 1);
                auto conf = confirm_series(surface.lengths_spec(), u.u, N);
                if (!conf || !conf->divergent) {
                    every_prefix_divergent = false;
                    break;
                }
            }
        } catch (const resource_error&) {
            every_prefix_divergent = false;
        }
    }

    {
        USequence u = u_prime_sequence(canonical_extension(best.patchwork, surface, N + 2),
                                       surface, N + 1);
        rep.terms = criterion_terms(surface, u, N);
        rep.witness_u = u.u;
        rep.growth_fit = fit_growth(rep.terms);
        rep.patchwork_source = "canonical extension of the exhaustive minimizer";
    }

    if (every_prefix_divergent) {
        rep.verdict = Verdict::DIVERGENT_CONFIRMED;
        rep.first_kind = FirstKind::FIRST_KIND;
        rep.parabolicity = Parabolicity::UNDETERMINED;
        rep.justification =
            "every admissible patchwork prefix to depth " + std::to_string(sd) +
            " has a confirmed divergent series under canonical continuation "
            "(depth-qualified: the criterion quantifies over all patchworks); for general "
            "twists first kind does not imply parabolic, so parabolicity is left "
            "undetermined";
        if (!options.keep_terms) rep.terms = CriterionTerms{};
        return rep;
    }

    rep.verdict = heuristic_verdict(rep.growth_fit, options);
    rep.first_kind = FirstKind::UNDETERMINED;
    rep.parabolicity = Parabolicity::UNDETERMINED;
    rep.justification =
        "no registered comparison test settles the minimizing patchwork; best partial "
        "criterion sum over " +
        std::to_string(sd) + " terms is exp(" + std::to_string(best.log_partial_sum) + "); " +
        describe_fit(rep.growth_fit, N);
    if (!options.keep_terms) rep.terms = CriterionTerms{};
    return rep;
}

} // namespace flute
