#include "flute/patchwork.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <omp.h>

#include "flute/logspace.hpp"

namespace flute {

namespace {

bool forced_transition(double t, int prev, int& next) {
    if (t == 0.0) { next = prev; return true; }
    if (t == 0.5) { next = -prev; return true; }
    return false;
}

// Lexicographic key: +1 orders before -1, 0 before 1.
int sign_rank(int v) { return v == 1 ? 0 : 1; }

std::vector<int> encoding(const Patchwork& p) {
    std::vector<int> key;
    key.reserve(p.v_prime.size() * 2);
    for (int n = 1; n <= p.pants_depth(); ++n) {
        key.push_back(sign_rank(p.vp(2 * n - 1)));
        key.push_back(sign_rank(p.vp(2 * n)));
        key.push_back(p.wbit(2 * n - 1));
        key.push_back(p.wbit(2 * n));
    }
    return key;
}

} // namespace

std::optional<Violation> validate_restricted(const RestrictedPatchwork& v,
                                             const FluteSurface& surface, int depth) {
    if (depth < 2) throw validation_error("validate_restricted: depth must be >= 2");
    if (v.depth() < depth)
        throw validation_error("validate_restricted: patchwork shorter than depth");
    auto view = surface.view(depth);
    for (int n = 1; n < depth; ++n) {
        const int vn = v.at(n);
        const int vn1 = v.at(n + 1);
        if (vn != 1 && vn != -1)
            return Violation{n, "v_n must be +1 or -1"};
        if (vn1 != 1 && vn1 != -1)
            return Violation{n + 1, "v_n must be +1 or -1"};
        const double t = view.twist(n);
        if (t == 0.0 && vn1 != vn)
            return Violation{n + 1, "if t_" + std::to_string(n) + " = 0 then v_" +
                                        std::to_string(n + 1) + " = v_" + std::to_string(n)};
        if (t == 0.5 && vn1 != -vn)
            return Violation{n + 1, "if t_" + std::to_string(n) + " = 1/2 then v_" +
                                        std::to_string(n + 1) + " = -v_" + std::to_string(n)};
    }
    return std::nullopt;
}

RestrictedPatchwork canonical_restricted(const FluteSurface& surface, int depth, int v1) {
    if (v1 != 1 && v1 != -1) throw validation_error("canonical_restricted: v1 must be +-1");
    auto view = surface.view(std::max(depth, 1));
    RestrictedPatchwork rp;
    rp.v.resize(static_cast<size_t>(depth) + 1);
    rp.v[1] = v1;
    for (int n = 1; n < depth; ++n) {
        int next;
        if (!forced_transition(view.twist(n), rp.v[static_cast<size_t>(n)], next)) next = 1;
        rp.v[static_cast<size_t>(n + 1)] = next;
    }
    return rp;
}

USequence u_sequence(const RestrictedPatchwork& v, const FluteSurface& surface, int depth) {
    if (v.depth() < depth + 1)
        throw validation_error("u_sequence: need v through depth + 1");
    if (auto bad = validate_restricted(v, surface, depth + 1))
        throw validation_error("u_sequence: invalid patchwork at index " +
                               std::to_string(bad->index) + " (" + bad->rule + ")");
    auto view = surface.view(depth);
    USequence us;
    us.provenance = USequence::Provenance::restricted;
    us.u.resize(static_cast<size_t>(depth) + 1);
    for (int n = 1; n <= depth; ++n) {
        const double t = view.twist(n);
        const int vn = v.at(n);
        if (vn * v.at(n + 1) == 1 || vn * t > 0.0)
            us.u[static_cast<size_t>(n)] = t;
        else
            us.u[static_cast<size_t>(n)] = vn + t;
    }
    return us;
}

USequence u_prime_sequence(const Patchwork& p, const FluteSurface& surface, int depth) {
    if (p.pants_depth() < depth + 1)
        throw validation_error("u_prime_sequence: need pants through depth + 1");
    for (int n = 2; n <= p.pants_depth(); ++n)
        if (p.wbit(2 * n - 1) + p.wbit(2 * n) == 2)
            throw validation_error("u_prime_sequence: w_{2n-1} + w_{2n} = 2 at pants " +
                                   std::to_string(n));
    for (int n = 1; n <= depth; ++n)
        if (p.wbit(2 * n) + p.wbit(2 * n + 1) == 2)
            throw validation_error("u_prime_sequence: w_{2n} + w_{2n+1} = 2 at n = " +
                                   std::to_string(n));
    auto view = surface.view(depth);
    USequence us;
    us.provenance = USequence::Provenance::generalized;
    us.u.resize(static_cast<size_t>(depth) + 1);
    for (int n = 1; n <= depth; ++n) {
        const double t = view.twist(n);
        const int v2n = p.vp(2 * n);
        const int v2n1 = p.vp(2 * n + 1);
        const int wsum = p.wbit(2 * n) + p.wbit(2 * n + 1);
        double u;
        if (v2n * v2n1 == 1)
            u = t + wsum * p.vp(2 * n - 1) * (1 - 2 * p.wbit(2 * n - 1));
        else if (v2n * (1 - 2 * wsum) * t > 0.0)
            u = t;
        else
            u = t + v2n * (1 - 2 * wsum);
        us.u[static_cast<size_t>(n)] = u;
    }
    return us;
}

Patchwork reduce_to_patchwork(const RestrictedPatchwork& v) {
    Patchwork p;
    const int d = v.depth();
    p.v_prime.resize(static_cast<size_t>(2 * d) + 1);
    p.w.assign(static_cast<size_t>(2 * d) + 1, 0);
    for (int n = 1; n <= d; ++n) {
        p.v_prime[static_cast<size_t>(2 * n - 1)] = v.at(n);
        p.v_prime[static_cast<size_t>(2 * n)] = v.at(n);
    }
    return p;
}

void enumerate_restricted(const FluteSurface& surface, int depth,
                          const std::function<void(const RestrictedPatchwork&)>& yield,
                          long hard_cap) {
    if (depth < 1) throw validation_error("enumerate_restricted: depth must be >= 1");
    auto view = surface.view(depth);
    RestrictedPatchwork rp;
    rp.v.resize(static_cast<size_t>(depth) + 1);
    long count = 0;
    auto rec = [&](auto&& self, int n) -> void {
        if (n > depth) {
            if (++count > hard_cap)
                throw resource_error("enumerate_restricted: more than " +
                                     std::to_string(hard_cap) + " patchworks");
            yield(rp);
            return;
        }
        int forced;
        if (n > 1 && forced_transition(view.twist(n - 1), rp.v[static_cast<size_t>(n - 1)], forced)) {
            rp.v[static_cast<size_t>(n)] = forced;
            self(self, n + 1);
            return;
        }
        for (int s : {1, -1}) {
            rp.v[static_cast<size_t>(n)] = s;
            self(self, n + 1);
        }
    };
    rec(rec, 1);
}

std::vector<RestrictedPatchwork> all_restricted(const FluteSurface& surface, int depth) {
    std::vector<RestrictedPatchwork> out;
    enumerate_restricted(surface, depth, [&](const RestrictedPatchwork& rp) { out.push_back(rp); });
    return out;
}

namespace {

// Per-pants seam choices when entry and exit pentagons differ, ordered so the
// flattened (v', w) stream is lexicographic with 0 before 1.
constexpr int kSeamPairs[3][2] = {{0, 0}, {0, 1}, {1, 0}};

} // namespace

void enumerate_generalized(const FluteSurface& surface, int pants_depth,
                           const std::function<void(const Patchwork&)>& yield,
                           long hard_cap, int v1_cap) {
    if (pants_depth < 2) throw validation_error("enumerate_generalized: pants_depth must be >= 2");
    auto view = surface.view(pants_depth);
    Patchwork p;
    p.v_prime.resize(static_cast<size_t>(2 * pants_depth) + 1);
    p.w.assign(static_cast<size_t>(2 * pants_depth) + 1, 0);
    p.v_prime[1] = p.v_prime[2] = v1_cap;
    long count = 0;
    auto rec = [&](auto&& self, int n) -> void {
        if (n > pants_depth) {
            if (++count > hard_cap)
                throw resource_error("enumerate_generalized: more than " +
                                     std::to_string(hard_cap) + " patchworks");
            yield(p);
            return;
        }
        const int prev_exit = p.vp(2 * n - 2);
        const int prev_w = p.wbit(2 * n - 2);
        int forced;
        const bool is_forced = forced_transition(view.twist(n - 1), prev_exit, forced);
        for (int entry : {1, -1}) {
            if (is_forced && entry != forced) continue;
            p.v_prime[static_cast<size_t>(2 * n - 1)] = entry;
            for (int exit : {1, -1}) {
                p.v_prime[static_cast<size_t>(2 * n)] = exit;
                const int nseams = (entry == exit) ? 1 : 3;
                for (int k = 0; k < nseams; ++k) {
                    const int w_in = kSeamPairs[k][0];
                    const int w_out = kSeamPairs[k][1];
                    if (prev_w + w_in == 2) continue; // w_{2n-2} + w_{2n-1} != 2
                    p.w[static_cast<size_t>(2 * n - 1)] = w_in;
                    p.w[static_cast<size_t>(2 * n)] = w_out;
                    self(self, n + 1);
                }
            }
        }
        p.w[static_cast<size_t>(2 * n - 1)] = 0;
        p.w[static_cast<size_t>(2 * n)] = 0;
    };
    rec(rec, 2);
}

std::vector<Patchwork> all_generalized(const FluteSurface& surface, int pants_depth) {
    std::vector<Patchwork> out;
    enumerate_generalized(surface, pants_depth, [&](const Patchwork& p) { out.push_back(p); });
    return out;
}

namespace {

double log_partial_of(const FluteSurface& surface, const Patchwork& p, int term_count) {
    const USequence us = u_prime_sequence(p, surface, term_count);
    auto view = surface.view(term_count + 1);
    LogSum total;
    double S = 0.0;
    for (int n = 1; n <= term_count; ++n) {
        S += us.at(n) * view.length(n);
        const double base = logaddexp(-view.length(n + 1) / 2.0, -view.length(n) / 2.0);
        total.add(base + log_cosh(S));
    }
    return total.log_total;
}

std::vector<ScanResult> scan_impl(const FluteSurface& surface, int term_count, bool parallel) {
    const std::vector<Patchwork> all = all_generalized(surface, term_count + 1);
    std::vector<ScanResult> out(all.size());
    if (parallel) {
        #pragma omp parallel for schedule(dynamic, 16)
        for (long i = 0; i < static_cast<long>(all.size()); ++i) {
            out[static_cast<size_t>(i)] =
                ScanResult{all[static_cast<size_t>(i)],
                           log_partial_of(surface, all[static_cast<size_t>(i)], term_count)};
        }
    } else {
        for (size_t i = 0; i < all.size(); ++i)
            out[i] = ScanResult{all[i], log_partial_of(surface, all[i], term_count)};
    }
    return out;
}

} // namespace

std::vector<ScanResult> scan_patchworks_serial(const FluteSurface& surface, int term_count) {
    return scan_impl(surface, term_count, false);
}

std::vector<ScanResult> scan_patchworks_parallel(const FluteSurface& surface, int term_count) {
    return scan_impl(surface, term_count, true);
}

namespace {

struct BeamState {
    Patchwork prefix;
    double S = 0.0;          // running sum u'_1 l_1 + ... through the last term
    double log_partial = kNegInf;
};

SearchResult beam_search(const FluteSurface& surface, int term_count, int beam_width) {
    auto view = surface.view(term_count + 2);
    Patchwork seed;
    seed.v_prime = {0, -1, -1};
    seed.w = {0, 0, 0};
    std::vector<BeamState> beam{BeamState{seed, 0.0, kNegInf}};
    for (int n = 2; n <= term_count + 1; ++n) {
        std::vector<BeamState> next;
        for (const BeamState& st : beam) {
            const int prev_exit = st.prefix.vp(2 * n - 2);
            const int prev_w = st.prefix.wbit(2 * n - 2);
            int forced;
            const bool is_forced = forced_transition(view.twist(n - 1), prev_exit, forced);
            for (int entry : {1, -1}) {
                if (is_forced && entry != forced) continue;
                for (int exit : {1, -1}) {
                    const int nseams = (entry == exit) ? 1 : 3;
                    for (int k = 0; k < nseams; ++k) {
                        const int w_in = kSeamPairs[k][0];
                        const int w_out = kSeamPairs[k][1];
                        if (prev_w + w_in == 2) continue;
                        BeamState ns = st;
                        ns.prefix.v_prime.push_back(entry);
                        ns.prefix.v_prime.push_back(exit);
                        ns.prefix.w.push_back(w_in);
                        ns.prefix.w.push_back(w_out);
                        // one new term: index n - 1
                        const int m = n - 1;
                        const USequence us = u_prime_sequence(ns.prefix, surface, m);
                        ns.S = st.S + us.at(m) * view.length(m);
                        const double base =
                            logaddexp(-view.length(m + 1) / 2.0, -view.length(m) / 2.0);
                        ns.log_partial = logaddexp(st.log_partial, base + log_cosh(ns.S));
                        next.push_back(std::move(ns));
                    }
                }
            }
        }
        // merge states that agree exactly in structure and running sum
        std::sort(next.begin(), next.end(), [](const BeamState& a, const BeamState& b) {
            const int ea = sign_rank(a.prefix.v_prime.back());
            const int eb = sign_rank(b.prefix.v_prime.back());
            if (a.prefix.w.back() != b.prefix.w.back()) return a.prefix.w.back() < b.prefix.w.back();
            if (ea != eb) return ea < eb;
            if (a.S != b.S) return a.S < b.S;
            if (a.log_partial != b.log_partial) return a.log_partial < b.log_partial;
            return encoding(a.prefix) < encoding(b.prefix);
        });
        std::vector<BeamState> merged;
        for (auto& st : next) {
            if (!merged.empty()) {
                auto& last = merged.back();
                if (last.prefix.w.back() == st.prefix.w.back() &&
                    last.prefix.v_prime.back() == st.prefix.v_prime.back() && last.S == st.S) {
                    continue; // identical future; keep the smaller partial (sorted first)
                }
            }
            merged.push_back(std::move(st));
        }
        std::sort(merged.begin(), merged.end(), [](const BeamState& a, const BeamState& b) {
            if (std::fabs(a.S) != std::fabs(b.S)) return std::fabs(a.S) < std::fabs(b.S);
            if (a.log_partial != b.log_partial) return a.log_partial < b.log_partial;
            return encoding(a.prefix) < encoding(b.prefix);
        });
        if (static_cast<int>(merged.size()) > beam_width) merged.resize(static_cast<size_t>(beam_width));
        beam = std::move(merged);
    }
    const BeamState* best = nullptr;
    for (const auto& st : beam) {
        if (!best || st.log_partial < best->log_partial ||
            (st.log_partial == best->log_partial && encoding(st.prefix) < encoding(best->prefix)))
            best = &st;
    }
    return SearchResult{best->prefix, best->log_partial, false};
}

} // namespace

SearchResult minimizing_patchwork_search(const FluteSurface& surface, int term_count,
                                         SearchStrategy strategy, int beam_width) {
    if (strategy == SearchStrategy::beam) return beam_search(surface, term_count, beam_width);
    std::vector<ScanResult> scans = scan_patchworks_parallel(surface, term_count);
    if (scans.empty()) throw resource_error("minimizing_patchwork_search: empty scan");
    const ScanResult* best = &scans.front();
    for (const auto& sr : scans) {
        if (sr.log_partial_sum < best->log_partial_sum ||
            (sr.log_partial_sum == best->log_partial_sum &&
             encoding(sr.patchwork) < encoding(best->patchwork)))
            best = &sr;
    }
    return SearchResult{best->patchwork, best->log_partial_sum, true};
}

Patchwork canonical_extension(const Patchwork& p, const FluteSurface& surface, int pants_depth) {
    Patchwork q = p;
    auto view = surface.view(pants_depth);
    for (int n = q.pants_depth() + 1; n <= pants_depth; ++n) {
        int entry;
        if (!forced_transition(view.twist(n - 1), q.vp(2 * n - 2), entry)) entry = q.vp(2 * n - 2);
        q.v_prime.push_back(entry);
        q.v_prime.push_back(entry);
        q.w.push_back(0);
        q.w.push_back(0);
    }
    return q;
}

std::vector<CrossingConfiguration> crossing_configurations() {
    using CC = CrossingConfiguration;
    static const char* seam_name[3] = {"eta", "in", "out"};
    std::vector<CC> out;
    for (int f = 0; f < 3; ++f) {
        for (int s = 0; s < 3; ++s) {
            if (f == CC::eta && s == CC::eta) continue;  // no cusp seam in the window
            if (f == CC::out && s == CC::in) continue;   // both cusp seams at the shared cuff
            for (int e : {1, -1}) {
                for (int tr : {1, -1}) {
                    CC c{static_cast<CC::Seam>(f), static_cast<CC::Seam>(s), e, tr, ""};
                    c.label = std::string(seam_name[f]) + "/" + seam_name[s] +
                              (e == 1 ? " +" : " -") + (tr == 1 ? "=" : "x");
                    out.push_back(std::move(c));
                }
            }
        }
    }
    return out;
}

namespace {

std::pair<int, int> seam_wpair(CrossingConfiguration::Seam s) {
    switch (s) {
        case CrossingConfiguration::eta: return {0, 0};
        case CrossingConfiguration::in: return {1, 0};
        case CrossingConfiguration::out: return {0, 1};
    }
    return {0, 0};
}

} // namespace

Patchwork build_crossing_window(const CrossingConfiguration& c, const FluteSurface& surface,
                                int pants_depth, int window_pants) {
    const int m = window_pants;
    if (m < 3 || m + 1 >= pants_depth)
        throw validation_error("build_crossing_window: window must fit strictly inside");
    auto view = surface.view(pants_depth);
    for (int n = m - 1; n <= m + 1; ++n) {
        const double t = view.twist(n);
        if (t == 0.0 || t == 0.5)
            throw validation_error("build_crossing_window: transitions around the window "
                                   "must be free (twist off {0, 1/2} at cuff " +
                                   std::to_string(n) + ")");
    }
    Patchwork p;
    p.v_prime.assign(static_cast<size_t>(2 * pants_depth) + 1, 0);
    p.w.assign(static_cast<size_t>(2 * pants_depth) + 1, 0);
    p.v_prime[1] = p.v_prime[2] = c.entry_sign;
    auto set_pants = [&](int n, int entry, int exit, int win, int wout) {
        p.v_prime[static_cast<size_t>(2 * n - 1)] = entry;
        p.v_prime[static_cast<size_t>(2 * n)] = exit;
        p.w[static_cast<size_t>(2 * n - 1)] = win;
        p.w[static_cast<size_t>(2 * n)] = wout;
    };
    for (int n = 2; n < m; ++n) {
        int forced;
        int entry = p.vp(2 * n - 2);
        if (forced_transition(view.twist(n - 1), p.vp(2 * n - 2), forced)) entry = forced;
        set_pants(n, entry, entry, 0, 0);
    }
    const auto [w1i, w1o] = seam_wpair(c.first);
    const auto [w2i, w2o] = seam_wpair(c.second);
    set_pants(m, c.entry_sign, -c.entry_sign, w1i, w1o);
    const int entry2 = c.transition * p.vp(2 * m);
    set_pants(m + 1, entry2, -entry2, w2i, w2o);
    for (int n = m + 2; n <= pants_depth; ++n) {
        int forced;
        int entry = p.vp(2 * n - 2);
        if (forced_transition(view.twist(n - 1), p.vp(2 * n - 2), forced)) entry = forced;
        set_pants(n, entry, entry, 0, 0);
    }
    return p;
}

std::optional<Patchwork> periodic_extension(const Patchwork& p, const FluteSurface& surface,
                                            int cycle_pants, int pants_depth) {
    const int d = p.pants_depth();
    if (cycle_pants < 1 || cycle_pants > d - 1) return std::nullopt;
    auto view = surface.view(pants_depth);
    // relative moves of the cycle: entry relative to previous exit, exit
    // relative to entry, and the seam pair
    struct Move { int entry_rel, change, w_in, w_out; };
    std::vector<Move> cycle;
    for (int n = d - cycle_pants + 1; n <= d; ++n) {
        cycle.push_back(Move{p.vp(2 * n - 1) * p.vp(2 * n - 2), p.vp(2 * n) * p.vp(2 * n - 1),
                             p.wbit(2 * n - 1), p.wbit(2 * n)});
    }
    Patchwork q = p;
    size_t ci = 0;
    for (int n = d + 1; n <= pants_depth; ++n, ci = (ci + 1) % cycle.size()) {
        const Move& mv = cycle[ci];
        const int prev_exit = q.vp(2 * n - 2);
        const int prev_w = q.wbit(2 * n - 2);
        int entry = prev_exit * mv.entry_rel;
        int forced;
        if (forced_transition(view.twist(n - 1), prev_exit, forced) && entry != forced)
            return std::nullopt;
        if (prev_w + mv.w_in == 2) return std::nullopt;
        const int exit = entry * mv.change;
        if (entry == exit && (mv.w_in != 0 || mv.w_out != 0)) return std::nullopt;
        q.v_prime.push_back(entry);
        q.v_prime.push_back(exit);
        q.w.push_back(mv.w_in);
        q.w.push_back(mv.w_out);
    }
    return q;
}

} // namespace flute
