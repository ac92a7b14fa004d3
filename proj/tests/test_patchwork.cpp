#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "flute/criterion.hpp"
#include "flute/logspace.hpp"
#include "flute/patchwork.hpp"
#include "helpers.hpp"

using namespace flute;
using namespace flute::testing;

namespace {

FluteSurface const_surface(double length, double twist) {
    return FluteSurface(SequenceSpec::constant(length), SequenceSpec::constant(twist));
}

RestrictedPatchwork rp(std::initializer_list<int> signs) {
    RestrictedPatchwork out;
    out.v.insert(out.v.end(), signs.begin(), signs.end());
    return out;
}

// Literal case table of the u_n definition, kept separate from the library
// path as an oracle.
double u_case_table(int vn, int vn1, double t) {
    const bool same = vn * vn1 == 1;
    const bool aligned = vn * t > 0;
    if (same || aligned) return t;
    return vn + t;
}

} // namespace

TEST_CASE("restricted patchwork validation") {
    FluteSurface zero = const_surface(5.0, 0.0);
    CHECK_FALSE(validate_restricted(rp({1, 1, 1, 1, 1}), zero, 5).has_value());

    FluteSurface half = const_surface(5.0, 0.5);
    CHECK_FALSE(validate_restricted(rp({1, -1, 1, -1, 1}), half, 5).has_value());
    auto bad = validate_restricted(rp({1, 1, 1, 1, 1}), half, 5);
    REQUIRE(bad.has_value());
    CHECK(bad->index == 2);
    CHECK(bad->rule.find("1/2") != std::string::npos);

    // off {0, 1/2} the rule is silent
    FluteSurface quarter = const_surface(5.0, 0.25);
    CHECK_FALSE(validate_restricted(rp({1, -1, -1, 1}), quarter, 4).has_value());
}

TEST_CASE("u-sequence from the definition") {
    FluteSurface zero = const_surface(5.0, 0.0);
    auto u0 = u_sequence(canonical_restricted(zero, 9), zero, 8);
    for (int n = 1; n <= 8; ++n) CHECK(u0.at(n) == 0.0);

    // t = 1/2, alternating from v_1 = 1: u_n = v_n / 2
    FluteSurface half = const_surface(5.0, 0.5);
    auto vh = canonical_restricted(half, 9, 1);
    auto uh = u_sequence(vh, half, 8);
    for (int n = 1; n <= 8; ++n) CHECK(uh.at(n) == vh.at(n) * 0.5);

    // exhaustive case oracle over sign pairs and twist signs
    auto g = rng(301);
    std::uniform_real_distribution<double> tw(-0.499, 0.499);
    for (int i = 0; i < 400; ++i) {
        const double t = tw(g);
        for (int vn : {1, -1}) {
            for (int vn1 : {1, -1}) {
                FluteSurface s(SequenceSpec::constant(5.0),
                               SequenceSpec::constant(0.25).with_prefix({t}));
                RestrictedPatchwork v = rp({vn, vn1});
                auto u = u_sequence(v, s, 1);
                CHECK(u.at(1) == u_case_table(vn, vn1, t));
            }
        }
    }

    // worked case: t_3 = -1/4, v_3 = +1, v_4 = -1 -> u_3 = 3/4
    FluteSurface s3(SequenceSpec::constant(5.0),
                    SequenceSpec::constant(0.25).with_prefix({0.25, 0.25, -0.25, 0.25}));
    auto u3 = u_sequence(rp({1, 1, 1, -1, 1}), s3, 4);
    CHECK(u3.at(3) == doctest::Approx(0.75));
}

TEST_CASE("u-sequence values for half-integral twists stay in {-1/2, 0, 1/2}") {
    auto g = rng(302);
    for (int i = 0; i < 50; ++i) {
        FluteSurface s = random_surface(g, 24, 3.0, 9.0, /*half_integral=*/true);
        auto v = canonical_restricted(s, 25, i % 2 ? 1 : -1);
        auto u = u_sequence(v, s, 24);
        for (int n = 1; n <= 24; ++n) {
            const double x = u.at(n);
            CHECK((x == 0.0 || x == 0.5 || x == -0.5));
        }
    }
}

TEST_CASE("u-prime branch evaluations") {
    // branch 1 with a cusp-seam shift: u' = t + 1
    FluteSurface s(SequenceSpec::constant(6.0), SequenceSpec::constant(0.3));
    Patchwork p;
    p.v_prime = {0, 1, 1, 1, 1, 1, 1};
    p.w = {0, 0, 0, 0, 1, 0, 0};  // w_4 = w_{2n} = 1 at n = 2
    auto u = u_prime_sequence(p, s, 2);
    CHECK(u.at(2) == doctest::Approx(1.3));

    // branch 2: v'_{2n} v'_{2n+1} = -1 and v'_{2n}(1-2(w-sum)) t > 0
    FluteSurface s2(SequenceSpec::constant(6.0), SequenceSpec::constant(0.25));
    Patchwork p2;
    p2.v_prime = {0, 1, 1, 1, 1, -1, -1};
    p2.w = {0, 0, 0, 0, 0, 0, 0};
    auto u2 = u_prime_sequence(p2, s2, 2);
    CHECK(u2.at(2) == doctest::Approx(0.25));

    // inadmissible w-sums are rejected
    Patchwork bad;
    bad.v_prime = {0, 1, -1, 1, -1, 1, -1};
    bad.w = {0, 0, 1, 1, 0, 0, 0};
    CHECK_THROWS_AS(u_prime_sequence(bad, s2, 2), validation_error);
}

TEST_CASE("u-prime shifts are in {-1, 0, +1}") {
    auto g = rng(303);
    for (int i = 0; i < 30; ++i) {
        FluteSurface s = random_surface(g, 10, 3.0, 9.0);
        auto view = s.view(8);
        for (const Patchwork& p : all_generalized(s, 6)) {
            auto u = u_prime_sequence(p, s, 5);
            for (int n = 1; n <= 5; ++n) {
                const double d = u.at(n) - view.twist(n);
                const double shift = std::round(d);
                CHECK(std::fabs(d - shift) < 1e-12);
                CHECK((shift == 0.0 || shift == 1.0 || shift == -1.0));
            }
        }
    }
}

TEST_CASE("reduction to a generalized patchwork") {
    auto v = rp({1, 1, 1, 1});
    auto p = reduce_to_patchwork(v);
    for (int i = 1; i <= 8; ++i) {
        CHECK(p.vp(i) == 1);
        CHECK(p.wbit(i) == 0);
    }
    auto alt = reduce_to_patchwork(rp({1, -1, 1, -1}));
    const std::vector<int> expect{1, 1, -1, -1, 1, 1, -1, -1};
    for (int i = 1; i <= 8; ++i) CHECK(alt.vp(i) == expect[static_cast<size_t>(i - 1)]);

    // u' of the embedding equals u, over random valid (v, t)
    auto g = rng(304);
    for (int i = 0; i < 500; ++i) {
        FluteSurface s = random_surface(g, 12, 3.0, 9.0, i % 3 == 0);
        auto vv = canonical_restricted(s, 12, i % 2 ? 1 : -1);
        auto uu = u_sequence(vv, s, 10);
        auto up = u_prime_sequence(reduce_to_patchwork(vv), s, 10);
        for (int n = 1; n <= 10; ++n) CHECK(uu.at(n) == up.at(n));
    }
}

TEST_CASE("restricted enumeration counts") {
    CHECK(all_restricted(const_surface(5.0, 0.0), 5).size() == 2);   // forced propagation
    CHECK(all_restricted(const_surface(5.0, 0.25), 4).size() == 16); // unconstrained signs
    CHECK(all_restricted(const_surface(5.0, 0.5), 6).size() == 2);
    CHECK_THROWS_AS(all_restricted(const_surface(5.0, 0.25), 40), resource_error);
}

namespace {

// Brute-force generate-and-filter oracle for the generalized enumeration:
// all (v', w) bit patterns, filtered by the admissibility predicate.
std::set<std::pair<std::vector<int>, std::vector<int>>> brute_generalized(
    const FluteSurface& s, int pants_depth) {
    std::set<std::pair<std::vector<int>, std::vector<int>>> out;
    auto view = s.view(pants_depth);
    const int cells = 2 * (pants_depth - 1); // v' entries for pants 2..D
    for (long vmask = 0; vmask < (1L << cells); ++vmask) {
        for (long wmask = 0; wmask < (1L << cells); ++wmask) {
            std::vector<int> vp{0, -1, -1}, w{0, 0, 0};
            for (int i = 0; i < cells; ++i) {
                vp.push_back((vmask >> i) & 1 ? -1 : 1);
                w.push_back((wmask >> i) & 1 ? 1 : 0);
            }
            bool ok = true;
            for (int n = 2; n <= pants_depth && ok; ++n) {
                const int entry = vp[static_cast<size_t>(2 * n - 1)];
                const int exit = vp[static_cast<size_t>(2 * n)];
                const int wi = w[static_cast<size_t>(2 * n - 1)];
                const int wo = w[static_cast<size_t>(2 * n)];
                if (entry == exit && (wi || wo)) ok = false;       // no crossing
                if (wi + wo == 2) ok = false;                      // both cusp seams
                if (w[static_cast<size_t>(2 * n - 2)] + wi == 2) ok = false;
                const double t = view.twist(n - 1);
                const int prev = vp[static_cast<size_t>(2 * n - 2)];
                if (t == 0.0 && entry != prev) ok = false;
                if (t == 0.5 && entry != -prev) ok = false;
            }
            if (ok) out.insert({vp, w});
        }
    }
    return out;
}

} // namespace

TEST_CASE("generalized enumeration matches the generate-and-filter oracle") {
    for (double twist : {0.0, 0.25, 0.5}) {
        FluteSurface s = const_surface(5.0, twist);
        auto fast = all_generalized(s, 4);
        auto brute = brute_generalized(s, 4);
        CHECK(fast.size() == brute.size());
        std::set<std::pair<std::vector<int>, std::vector<int>>> seen;
        for (const auto& p : fast) {
            CHECK(brute.count({p.v_prime, p.w}) == 1);
            CHECK(seen.insert({p.v_prime, p.w}).second); // no duplicates
        }
    }
}

TEST_CASE("minimizing patchwork search") {
    // t = 0: the restricted embedding is optimal and the partial sum is the
    // bare sum of base terms (every other u' only increases |S_n|)
    FluteSurface g0(SequenceSpec::linear(1.0, 2.0), SequenceSpec::constant(0.0));
    auto res = minimizing_patchwork_search(g0, 8, SearchStrategy::exhaustive);
    CHECK(res.exact);
    LogSum base;
    auto view = g0.view(10);
    for (int n = 1; n <= 8; ++n)
        base.add(logaddexp(-view.length(n + 1) / 2.0, -view.length(n) / 2.0));
    CHECK(res.log_partial_sum == doctest::Approx(base.log_total).epsilon(1e-12));

    // t = 1/2: the exhaustive depth-10 minimizer matches the restricted
    // alternating patchwork
    FluteSurface gh(SequenceSpec::linear(1.0, 2.0), SequenceSpec::constant(0.5));
    auto rh = minimizing_patchwork_search(gh, 10, SearchStrategy::exhaustive);
    auto vh = canonical_restricted(gh, 12);
    auto uh = u_sequence(vh, gh, 11);
    auto th = criterion_terms(gh, uh, 10);
    CHECK(rh.log_partial_sum == doctest::Approx(th.log_partial_sums.back()).epsilon(1e-12));

    // the beam heuristic never beats the exhaustive optimum
    auto g = rng(305);
    for (int i = 0; i < 10; ++i) {
        FluteSurface s = random_surface(g, 9, 3.0, 8.0);
        auto ex = minimizing_patchwork_search(s, 6, SearchStrategy::exhaustive);
        auto bm = minimizing_patchwork_search(s, 6, SearchStrategy::beam, 24);
        CHECK(bm.log_partial_sum >= ex.log_partial_sum - 1e-12);
    }
}

TEST_CASE("crossing configuration catalogue") {
    auto configs = crossing_configurations();
    CHECK(configs.size() == 28);
    std::set<std::string> labels;
    int with_cusp_pair = 0;
    for (const auto& c : configs) {
        CHECK(labels.insert(c.label).second);
        CHECK_FALSE((c.first == CrossingConfiguration::eta &&
                     c.second == CrossingConfiguration::eta));
        if (c.first == CrossingConfiguration::out && c.second == CrossingConfiguration::in)
            ++with_cusp_pair;
    }
    CHECK(with_cusp_pair == 0); // the four excluded configurations are absent

    // every configuration yields an admissible patchwork
    FluteSurface s(SequenceSpec::constant(7.0), SequenceSpec::constant(0.3));
    for (const auto& c : configs) {
        Patchwork p = build_crossing_window(c, s, 10, 4);
        CHECK_NOTHROW(u_prime_sequence(p, s, 9));
    }
}

TEST_CASE("periodic and canonical extensions") {
    FluteSurface s(SequenceSpec::linear(1.0, 2.0), SequenceSpec::constant(0.25));
    auto base = minimizing_patchwork_search(s, 6, SearchStrategy::exhaustive).patchwork;
    auto can = canonical_extension(base, s, 20);
    CHECK(can.pants_depth() == 20);
    CHECK_NOTHROW(u_prime_sequence(can, s, 19));
    auto per = periodic_extension(base, s, 2, 20);
    REQUIRE(per.has_value());
    CHECK(per->pants_depth() == 20);
    CHECK_NOTHROW(u_prime_sequence(*per, s, 19));
}
