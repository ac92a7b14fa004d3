#include "flute/lift_chain.hpp"

#include <array>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>

#include "flute/logspace.hpp"

namespace flute {

namespace mp = boost::multiprecision;
using real113 = mp::cpp_bin_float_quad;
using real256 = mp::number<mp::cpp_bin_float<256, mp::backends::digit_base_2>>;

namespace {

template <class R> bool finite_nonzero(const R& x) { return x != 0 && x - x == 0; }

template <class R> double dlog_abs(const R& x) {
    using std::log;
    using std::abs;
    return static_cast<double>(log(abs(x)));
}

// Projective point over R; w == 0 encodes infinity.
template <class R> struct HP {
    R x, w;
};

template <class R> R hbracket(const HP<R>& p, const HP<R>& q) { return p.x * q.w - q.x * p.w; }

// log |M(t)| - log |M(q)| with M: p -> 0, r -> inf; the shear of the
// quadrilateral with diagonal (p -> r) and opposite vertices q, t.
template <class R>
double shear_from_points(const HP<R>& p, const HP<R>& q, const HP<R>& r, const HP<R>& t) {
    using std::abs;
    using std::log;
    const R num = abs(hbracket(t, p)) * abs(hbracket(q, r));
    const R den = abs(hbracket(t, r)) * abs(hbracket(q, p));
    return static_cast<double>(log(num) - log(den));
}

template <class R>
double eta_from_points(const HP<R>& a, const HP<R>& b, const HP<R>& c, const HP<R>& d) {
    using std::atanh;
    using std::sqrt;
    const R chi = (hbracket(a, c) * hbracket(b, d)) / (hbracket(a, d) * hbracket(b, c));
    if (!(chi > 0) || chi == 1)
        throw domain_error("measure_eta: geodesics cross or share an endpoint");
    const R arg = chi > 1 ? 1 / sqrt(chi) : sqrt(chi);
    return static_cast<double>(2 * atanh(arg));
}

double angle_of(double x) {
    // Cayley angle: K(x) = (x - i)/(x + i); theta decreases from 2*pi at
    // -infinity to 0 at +infinity.
    if (std::isinf(x)) return x > 0 ? 0.0 : 2.0 * M_PI;
    return 2.0 * std::atan2(1.0, x);
}

} // namespace

struct LiftChain::Impl {
    virtual ~Impl() = default;
    virtual int last_point() const = 0;
    virtual int precision_bits() const = 0;
    virtual int first_failing_index() const = 0;
    virtual double measure_shear(int n) const = 0;
    virtual double measure_eta(int n) const = 0;
    virtual AccumulationEstimate accumulation_gap() const = 0;
    virtual std::vector<double> chart_points() const = 0;
};

namespace {

template <class R> struct ChainImpl final : LiftChain::Impl {
    int bits;
    int first_bad = 0;
    // tau[k] is the local coordinate of p_{n+1} in frame L_n, n = k + 2.
    std::vector<R> tau;
    // frames[k] is M : chart -> L_n for n = k + 2, scale-normalized; row
    // major (a b; c d).  logdet[k] tracks log |det| of the stored matrix.
    std::vector<std::array<R, 4>> frames;
    std::vector<double> logdet;

    explicit ChainImpl(int b) : bits(b) {}

    int step_count() const { return static_cast<int>(tau.size()); }
    int last_point() const override { return step_count() + 2; }
    int precision_bits() const override { return bits; }
    int first_failing_index() const override { return first_bad; }

    R tau_at(int n) const { return tau[static_cast<size_t>(n - 2)]; }

    double measure_shear(int n) const override {
        if (n < 2 || n > step_count() + 1)
            throw domain_error("measure_shear: index out of range");
        // In frame L_n: (p_{n-2}, p_{n-1}, p_n, p_{n+1}) = (1, inf, 0, tau).
        const HP<R> A{R(1), R(1)}, B{R(1), R(0)}, C{R(0), R(1)}, D{tau_at(n), R(1)};
        if (n % 2 == 0) return shear_from_points(B, A, C, D); // g_n from p_{n-1} to p_n
        return shear_from_points(C, A, B, D);                 // odd: reversed orientation
    }

    double measure_eta(int n) const override {
        if (n < 1 || 2 * n > step_count() + 1)
            throw domain_error("measure_eta: index out of range");
        // Frame L_{2n}: g_{2n-1} = (1, inf), g_{2n+1} = (0, tau_{2n}).
        const HP<R> a{R(1), R(1)}, b{R(1), R(0)}, c{R(0), R(1)}, d{tau_at(2 * n), R(1)};
        return eta_from_points(a, b, c, d);
    }

    // Base-chart image of the local point z under the inverse frame map.
    double chart_of(const std::array<R, 4>& M, const HP<R>& z) const {
        const R num = M[3] * z.x - M[1] * z.w;
        const R den = -M[2] * z.x + M[0] * z.w;
        if (den == 0) return std::numeric_limits<double>::infinity();
        return static_cast<double>(num / den);
    }

    AccumulationEstimate accumulation_gap() const override {
        AccumulationEstimate est;
        for (int k = 1; k < static_cast<int>(frames.size()); ++k) {
            // frame L_{k+2}: latest pair (p_{k+1}, p_{k+2}) = (inf, 0) there
            const auto& M = frames[static_cast<size_t>(k)];
            const double xa = chart_of(M, HP<R>{R(1), R(0)});
            const double xb = chart_of(M, HP<R>{R(0), R(1)});
            const int n_new = k + 2; // index of the newly placed point
            const double x_even = n_new % 2 == 0 ? xb : xa;
            const double x_odd = n_new % 2 == 0 ? xa : xb;
            // f(inf) - f(0) = det / (-c a): exact through the determinant log.
            const double lg = logdet[static_cast<size_t>(k)] - dlog_abs(M[2]) - dlog_abs(M[0]);
            double ga;
            const double scale = std::min(1.0 + xa * xa, 1.0 + xb * xb);
            if (lg < std::log(1e-3 * scale) || std::isinf(xa) || std::isinf(xb)) {
                ga = 2.0 * std::exp(lg) / std::sqrt((1.0 + xa * xa) * (1.0 + xb * xb));
            } else {
                ga = std::fabs(angle_of(xa) - angle_of(xb));
            }
            est.x_even.push_back(x_even);
            est.x_odd.push_back(x_odd);
            est.log_gap_chart.push_back(lg);
            est.gap_angle.push_back(ga);
        }
        return est;
    }

    std::vector<double> chart_points() const override {
        std::vector<double> pts{std::numeric_limits<double>::infinity(), 0.0, 1.0};
        for (int n = 2; n <= step_count() + 1; ++n) {
            const auto& M = frames[static_cast<size_t>(n - 2)];
            pts.push_back(chart_of(M, HP<R>{tau_at(n), R(1)}));
        }
        return pts;
    }
};

template <class R>
std::shared_ptr<const LiftChain::Impl> develop_impl(const ShearSequence& ss, int bits) {
    using std::abs;
    using std::exp;
    using std::log;
    auto chain = std::make_shared<ChainImpl<R>>(bits);
    const int last_step = ss.max_index();
    // Base frame L_2: (p_0, p_1, p_2) = (inf, 0, 1) -> (1, inf, 0).
    std::array<R, 4> M{R(1), R(-1), R(1), R(0)};
    double ld = 0.0;
    chain->frames.push_back(M);
    chain->logdet.push_back(ld);
    for (int n = 2; n <= last_step; ++n) {
        const double sigma = n % 2 == 0 ? ss.s[static_cast<size_t>(n)]
                                        : -ss.s[static_cast<size_t>(n)];
        const R t = -exp(R(-sigma));
        if (!finite_nonzero(t)) {
            chain->first_bad = n;
            break;
        }
        chain->tau.push_back(t);
        // Transition T_n = (1 -tau; 1 0), det = tau; M <- T_n * M.
        std::array<R, 4> Mn{M[0] - t * M[2], M[1] - t * M[3], M[0], M[1]};
        R m = abs(Mn[0]);
        for (int i = 1; i < 4; ++i) m = std::max(m, abs(Mn[i]));
        if (!finite_nonzero(m)) {
            chain->tau.pop_back();
            chain->first_bad = n;
            break;
        }
        for (auto& e : Mn) e /= m;
        ld += -sigma - 2.0 * static_cast<double>(log(m));
        M = Mn;
        chain->frames.push_back(M);
        chain->logdet.push_back(ld);
    }
    return chain;
}

} // namespace

int LiftChain::last_point() const { return impl_->last_point(); }
int LiftChain::precision_bits() const { return impl_->precision_bits(); }
int LiftChain::first_failing_index() const { return impl_->first_failing_index(); }
double LiftChain::measure_shear(int n) const { return impl_->measure_shear(n); }
double LiftChain::measure_eta(int n) const { return impl_->measure_eta(n); }
AccumulationEstimate LiftChain::accumulation_gap() const { return impl_->accumulation_gap(); }
std::vector<double> LiftChain::chart_points() const { return impl_->chart_points(); }

LiftChain develop_from_shears(const ShearSequence& shears, int precision_bits) {
    if (precision_bits <= 53) return LiftChain(develop_impl<double>(shears, 53));
    if (precision_bits <= 113) return LiftChain(develop_impl<real113>(shears, 113));
    if (precision_bits <= 256) return LiftChain(develop_impl<real256>(shears, 256));
    throw validation_error("develop_lift: precision above 256 bits is not built in");
}

LiftChain develop_lift(const FluteSurface& surface, const USequence& u, int pair_count,
                       int precision_bits) {
    if (precision_bits < 53) throw validation_error("develop_lift: precision must be >= 53");
    const ShearSequence ss = ShearSequence::build(surface, u, pair_count);
    return develop_from_shears(ss, precision_bits);
}

LadderResult accumulation_gap_ladder(const FluteSurface& surface, const USequence& u,
                                     int pair_count) {
    const int rungs[3] = {53, 113, 256};
    const ShearSequence ss = ShearSequence::build(surface, u, pair_count);
    for (int i = 0; i < 3; ++i) {
        LiftChain chain = develop_from_shears(ss, rungs[i]);
        const double eps = std::ldexp(1.0, 1 - rungs[i]);
        const double gap = chain.accumulation_gap().final_gap_angle();
        if (chain.first_failing_index() == 0 && (gap >= 10.0 * eps || i == 2))
            return LadderResult{std::move(chain), rungs[i]};
        if (i == 2) return LadderResult{std::move(chain), rungs[i]};
    }
    throw std::logic_error("accumulation_gap_ladder: unreachable");
}

OracleCheckResult oracle_roundtrip(const FluteSurface& surface, const USequence& u,
                                   int pair_count, int precision_bits) {
    OracleCheckResult out;
    out.pair_count = pair_count;
    const ShearSequence ss = ShearSequence::build(surface, u, pair_count);
    LiftChain chain = develop_from_shears(ss, precision_bits);
    out.bits = chain.precision_bits();
    out.first_failing_index = chain.first_failing_index();
    const int last_ok = out.first_failing_index ? out.first_failing_index - 1 : chain.last_point() - 1;
    for (int n = 2; n <= std::min(last_ok, ss.max_index()); ++n) {
        const double measured = chain.measure_shear(n);
        out.max_shear_residual =
            std::max(out.max_shear_residual, std::fabs(measured - ss.s[static_cast<size_t>(n)]));
        ++out.shear_count;
    }
    auto view = surface.view(pair_count + 2);
    for (int n = 1; 2 * n <= last_ok; ++n) {
        const double measured = chain.measure_eta(n);
        const double closed = eta_length(view.length(n), view.length(n + 1));
        out.max_eta_residual = std::max(out.max_eta_residual, std::fabs(measured - closed));
        ++out.eta_count;
    }
    const AccumulationEstimate est = chain.accumulation_gap();
    out.final_gap_angle = est.final_gap_angle();
    out.final_log_gap = est.final_log_gap();
    out.horocyclic_log_partial = horocyclic_partial_length(ss, pair_count).log_value;
    return out;
}

} // namespace flute
