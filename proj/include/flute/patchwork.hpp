#pragma once
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "flute/sequence_spec.hpp"

namespace flute {

struct resource_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Sign sequence (v_n) choosing one pentagon per pair of pants.  1-indexed;
/// v[0] is unused.  Where t_n = 0 the choice propagates (v_{n+1} = v_n),
/// where t_n = 1/2 it flips (v_{n+1} = -v_n); other twists leave it free.
struct RestrictedPatchwork {
    std::vector<int> v{0};

    int depth() const { return static_cast<int>(v.size()) - 1; }
    int at(int n) const { return v[static_cast<size_t>(n)]; }
};

/// Generalized patchwork ((v'_n), (w_n)).  v'_{2n-1}, v'_{2n} are the entry
/// and exit pentagon directions of pair of pants P_n; w marks crossings of
/// the cusp-adjacent seam orthogonals.  Both 1-indexed with slot 0 unused.
struct Patchwork {
    std::vector<int> v_prime{0};
    std::vector<int> w{0};

    int pants_depth() const { return static_cast<int>(v_prime.size() - 1) / 2; }
    int vp(int i) const { return v_prime[static_cast<size_t>(i)]; }
    int wbit(int i) const { return w[static_cast<size_t>(i)]; }
};

/// Twist-dependent sequence u_n (or u'_n) feeding the divergence criteria.
struct USequence {
    enum class Provenance { restricted, generalized };

    std::vector<double> u{0.0}; // u[0] unused
    Provenance provenance = Provenance::restricted;

    int depth() const { return static_cast<int>(u.size()) - 1; }
    double at(int n) const { return u[static_cast<size_t>(n)]; }
};

struct Violation {
    int index = 0;
    std::string rule;
};

/// Checks the restricted-patchwork constraints through index `depth`
/// (the pair (v_n, v_{n+1}) for every n < depth).  Twists off {0, 1/2}
/// constrain nothing.  Returns the first violation, or nullopt.
std::optional<Violation> validate_restricted(const RestrictedPatchwork& v,
                                             const FluteSurface& surface, int depth);

/// The canonical restricted patchwork of depth `depth`: v_1 as given,
/// forced propagation where twists are 0 or 1/2, +1 where free.
RestrictedPatchwork canonical_restricted(const FluteSurface& surface, int depth, int v1 = -1);

/// u_n = t_n when v_n v_{n+1} = 1 or v_n t_n > 0, else v_n + t_n; n <= depth.
/// Requires v defined through depth + 1.
USequence u_sequence(const RestrictedPatchwork& v, const FluteSurface& surface, int depth);

/// The three-branch generalized sequence u'_n, n <= depth.  Requires the
/// patchwork through pants depth + 1 and both w-sum constraints.
USequence u_prime_sequence(const Patchwork& p, const FluteSurface& surface, int depth);

/// Canonical embedding v'_{2n-1} = v'_{2n} = v_n, w == 0.
Patchwork reduce_to_patchwork(const RestrictedPatchwork& v);

/// Every admissible restricted patchwork prefix of the given depth, in
/// lexicographic order with +1 before -1.
void enumerate_restricted(const FluteSurface& surface, int depth,
                          const std::function<void(const RestrictedPatchwork&)>& yield,
                          long hard_cap = 4'000'000);
std::vector<RestrictedPatchwork> all_restricted(const FluteSurface& surface, int depth);

/// Every admissible generalized patchwork with pants 1..pants_depth.
/// Pants 1 is the fixed cap (v'_1 = v'_2 = v1_cap, w_1 = w_2 = 0).  Per pants:
/// either entry and exit pentagons agree (w-pair 00) or they differ and the
/// orthoray crosses exactly one seam (w-pair 00, 01 or 10); crossings of both
/// cusp seams are excluded, as are prefixes with w_{2n} + w_{2n+1} = 2.
/// Twists 0 and 1/2 force the transition v'_{2n+1} = +-v'_{2n}.
void enumerate_generalized(const FluteSurface& surface, int pants_depth,
                           const std::function<void(const Patchwork&)>& yield,
                           long hard_cap = 4'000'000, int v1_cap = -1);
std::vector<Patchwork> all_generalized(const FluteSurface& surface, int pants_depth);

enum class SearchStrategy { exhaustive, beam };

struct ScanResult {
    Patchwork patchwork;
    double log_partial_sum = 0.0; // log of the cosh-form partial criterion sum
};

/// Evaluates the partial criterion sum of every admissible patchwork with
/// terms 1..term_count (pants depth term_count + 1).  The parallel variant
/// distributes the evaluation with OpenMP; results are identical to the
/// serial reference in content and order.
std::vector<ScanResult> scan_patchworks_serial(const FluteSurface& surface, int term_count);
std::vector<ScanResult> scan_patchworks_parallel(const FluteSurface& surface, int term_count);

struct SearchResult {
    Patchwork patchwork;
    double log_partial_sum = 0.0;
    bool exact = false; // exhaustive over the prefix space
};

/// Admissible patchwork minimizing the partial criterion sum through
/// `term_count` terms.  Exhaustive search is exact over the prefix space;
/// beam search is a labelled heuristic ranked by |S_n|.
SearchResult minimizing_patchwork_search(const FluteSurface& surface, int term_count,
                                         SearchStrategy strategy, int beam_width = 64);

/// Extends a patchwork to `pants_depth` pants: same-pentagon continuation,
/// w == 0, transitions forced by half-integral twists.
Patchwork canonical_extension(const Patchwork& p, const FluteSurface& surface, int pants_depth);

/// Extends by repeating the final `cycle_pants` pants choices (relative
/// pentagon moves) until `pants_depth`; nullopt when the wrap violates a
/// transition or w-sum constraint.
std::optional<Patchwork> periodic_extension(const Patchwork& p, const FluteSurface& surface,
                                            int cycle_pants, int pants_depth);

/// One local crossing configuration around a cuff: both adjacent pants are
/// traversed through both of their pentagons, each crossing one seam
/// (eta = the orthogonal between the two boundary cuffs, in = the cusp seam
/// on the entry side, out = the cusp seam on the exit side).
struct CrossingConfiguration {
    enum Seam { eta = 0, in = 1, out = 2 };
    Seam first;     // seam crossed in the first pants of the window
    Seam second;    // seam crossed in the second pants
    int entry_sign; // pentagon through which the window is entered
    int transition; // v'_{2m} * v'_{2m+1} across the cuff between the pants
    std::string label;
};

/// The admissible two-pants crossing configurations: of the 32 sign/seam
/// patterns with a cusp-seam crossing in the window, the 4 crossing both
/// cusp seams around the shared cuff are excluded (a shorter orthoray
/// realizes the same sums), leaving 28.
std::vector<CrossingConfiguration> crossing_configurations();

/// Patchwork of `pants_depth` pants realizing the configuration in pants
/// (window_pants, window_pants + 1); every other pants keeps its pentagon.
/// Requires free transitions (twists off {0, 1/2}) around the window.
Patchwork build_crossing_window(const CrossingConfiguration& c, const FluteSurface& surface,
                                int pants_depth, int window_pants);

} // namespace flute
