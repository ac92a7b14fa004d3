#pragma once
#include <optional>
#include <string>
#include <vector>

#include "flute/patchwork.hpp"
#include "flute/sequence_spec.hpp"
#include "flute/shear_sequence.hpp"

namespace flute {

enum class Verdict {
    DIVERGENT_CONFIRMED,
    CONVERGENT_CONFIRMED,
    HEURISTIC_DIVERGENT,
    HEURISTIC_CONVERGENT,
    INCONCLUSIVE,
};

enum class FirstKind { FIRST_KIND, NOT_FIRST_KIND, UNDETERMINED };
enum class Parabolicity { PARABOLIC, NOT_PARABOLIC, UNDETERMINED };

const char* to_string(Verdict v);
const char* to_string(FirstKind v);
const char* to_string(Parabolicity v);

enum class TermForm { cosh, signed_exp };

/// Per-term values and running totals of the criterion series, in log space.
struct CriterionTerms {
    std::vector<double> log_terms;        // [0] is n = 1
    std::vector<double> log_partial_sums; // running log-space totals
    std::vector<double> S;                // S_n = u_1 l_1 + ... + u_n l_n
};

/// term_n = (e^{-l_{n+1}/2} + e^{-l_n/2}) * cosh(S_n); the signed_exp form
/// substitutes e^{-v_{n+1} S_n} and is only meaningful for nondecreasing cuff
/// lengths with the v-sequence supplied (it is refused otherwise).
CriterionTerms criterion_terms(const FluteSurface& surface, const USequence& u, int N,
                               TermForm form = TermForm::cosh,
                               const RestrictedPatchwork* v = nullptr);

/// beta_1 = -v_2 u_1 l_1; beta_{n+1} = v_{n+1} v_{n+2} (beta_n - v_{n+1} l_{n+1} u_{n+1}).
/// Requires twists in {0, 1/2} through N + 1.  Checks the closed form
/// beta_{n+1} = -v_{n+2} (l_1 u_1 + ... + l_{n+1} u_{n+1}) and, for
/// nondecreasing lengths, beta_n >= 0.
std::vector<double> beta_sequence(const RestrictedPatchwork& v, const USequence& u,
                                  const FluteSurface& surface, int N);

struct GrowthFit {
    double partial_slope = 0.0; // d log(partial sum) / d log n over the fit window
    double term_slope = 0.0;    // d log(term) / d log n
    int window_lo = 0;
    int window_hi = 0;
};

GrowthFit fit_growth(const CriterionTerms& terms);

/// Registered closed-form comparison result for a parametric tail.
struct Confirmation {
    bool divergent = false;
    std::string family;
    std::string detail;
};

/// Decides divergence of sum (e^{-l_{n+1}/2} + e^{-l_n/2}) cosh(S_n) for the
/// supported tail families (bounded; linear / logarithmic / power growth)
/// when the u-sequence is eventually periodic.  nullopt when no registered
/// test applies; finite prefixes alone never confirm anything.
std::optional<Confirmation> confirm_series(const SequenceSpec& lengths,
                                           const std::vector<double>& u_one_indexed, int depth);

struct ClassifyOptions {
    int depth = 200;
    int search_depth = 9;        // term count for the stage-3 patchwork search
    int beam_width = 64;
    double heuristic_divergent_slope = 0.1;
    double heuristic_convergent_decay = 1.1;
    bool keep_terms = true;
};

struct CriterionReport {
    Verdict verdict = Verdict::INCONCLUSIVE;
    FirstKind first_kind = FirstKind::UNDETERMINED;
    Parabolicity parabolicity = Parabolicity::UNDETERMINED;
    std::string justification;
    std::optional<Confirmation> confirmation;
    GrowthFit growth_fit;
    CriterionTerms terms;
    int depth = 0;
    std::string patchwork_source; // canonical / search / bounded-shortcut
    std::vector<double> witness_u; // u-sequence behind `terms` (1-indexed at [0])
};

/// Classification pipeline:
///  1. bounded cuff lengths: parabolic and of the first kind regardless of
///     the twists (terms are bounded below; quasiconformal invariance).
///  2. twists all in {0, 1/2}: the two restricted patchworks are isometric,
///     so the canonical one decides; divergent <=> first kind <=> parabolic.
///  3. otherwise: search for one admissible patchwork with a confirmed
///     convergent series (witnesses NOT_FIRST_KIND), else report all-prefix
///     divergence depth-qualified with parabolicity left undetermined.
CriterionReport classify(const FluteSurface& surface, const ClassifyOptions& options = {});

} // namespace flute
