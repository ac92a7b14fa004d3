#pragma once
#include <memory>
#include <vector>

#include "flute/patchwork.hpp"
#include "flute/sequence_spec.hpp"
#include "flute/shear_sequence.hpp"

namespace flute {

struct precision_exhausted : std::runtime_error {
    int index;
    precision_exhausted(int n, const std::string& msg) : std::runtime_error(msg), index(n) {}
};

/// Boundary accumulation diagnostics of a developed chain.  Entry k describes
/// the chain after placing point p_{k+3}: the latest opposite-track pair in
/// the normalized chart, the exact log of their chart separation (computed
/// through the composed frame maps, immune to cancellation), and the gap in
/// the angle metric after the Cayley transform.
struct AccumulationEstimate {
    std::vector<double> x_even;        // chart position of the latest even-track point
    std::vector<double> x_odd;
    std::vector<double> log_gap_chart; // log |x_even - x_odd|, exact
    std::vector<double> gap_angle;     // may underflow to 0; log_gap_chart stays exact

    double final_gap_angle() const { return gap_angle.empty() ? 0.0 : gap_angle.back(); }
    double final_log_gap() const {
        return log_gap_chart.empty() ? 0.0 : log_gap_chart.back();
    }
};

/// Developed lift of a patchwork: the nested geodesic chain g_1, g_2, ... in
/// the upper half-plane, normalized so p_0 = infinity, p_1 = 0, p_2 = 1
/// (g_n runs from p_{n-1} to p_n; consecutive geodesics share a wedge
/// vertex).  Each development step is carried out in a renormalized local
/// frame, so arbitrarily deep chains stay well-conditioned; positions in the
/// base chart are recovered through the composed frame maps.
class LiftChain {
  public:
    int last_point() const;      // largest index m with p_m placed
    int precision_bits() const;
    int first_failing_index() const; // 0 when the full chain developed

    /// Shear across g_n measured from the four ideal points of the adjacent
    /// quadrilateral (feet-of-perpendicular convention; odd-indexed
    /// geodesics are oriented so the next odd geodesic lies to their right,
    /// matching the chain construction).
    double measure_shear(int n) const;

    /// Distance between g_{2n-1} and g_{2n+1} (the common perpendicular
    /// eta_n), measured from endpoint cross-ratios.
    double measure_eta(int n) const;

    AccumulationEstimate accumulation_gap() const;

    /// Ideal endpoints p_0, p_1, ... in the base chart (p_0 is +infinity).
    std::vector<double> chart_points() const;

    struct Impl;
    explicit LiftChain(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

  private:
    std::shared_ptr<const Impl> impl_;
};

/// Develops the chain of a patchwork given through its u-sequence, using the
/// closed-form shears.  pair_count is the number of (even, odd) shear pairs;
/// points p_0 .. p_{2 pair_count + 2} are placed.  precision_bits selects the
/// working significand: 53 (double), 113 or 256.
LiftChain develop_lift(const FluteSurface& surface, const USequence& u, int pair_count,
                       int precision_bits = 53);

/// Same, from an explicit shear sequence.
LiftChain develop_from_shears(const ShearSequence& shears, int precision_bits = 53);

struct LadderResult {
    LiftChain chain;
    int bits_used;
};

/// Precision ladder: develop at 53 bits and escalate to 113 then 256 bits
/// while the final gap is below ten times the working epsilon.
LadderResult accumulation_gap_ladder(const FluteSurface& surface, const USequence& u,
                                     int pair_count);

/// Round-trip residuals of one developed chain: closed-form shears and eta
/// lengths against their measured counterparts.
struct OracleCheckResult {
    int pair_count = 0;
    int bits = 53;
    int first_failing_index = 0;
    int shear_count = 0;
    int eta_count = 0;
    double max_shear_residual = 0.0;
    double max_eta_residual = 0.0;
    double final_gap_angle = 0.0;
    double final_log_gap = 0.0;
    double horocyclic_log_partial = 0.0;
};

OracleCheckResult oracle_roundtrip(const FluteSurface& surface, const USequence& u,
                                   int pair_count, int precision_bits = 53);

} // namespace flute
