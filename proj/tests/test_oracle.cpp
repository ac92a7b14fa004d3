#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "flute/criterion.hpp"
#include "flute/horocyclic.hpp"
#include "flute/lift_chain.hpp"
#include "flute/render_svg.hpp"
#include "helpers.hpp"

using namespace flute;
using namespace flute::testing;

namespace {

ShearSequence manual_shears(const std::vector<double>& s_from_1) {
    ShearSequence ss;
    ss.s.assign(s_from_1.size() + 1, 0.0);
    for (size_t i = 0; i < s_from_1.size(); ++i) ss.s[i + 1] = s_from_1[i];
    ss.cum.assign(ss.s.size(), 0.0);
    for (size_t k = 1; k < ss.s.size(); ++k) ss.cum[k] = ss.cum[k - 1] + ss.s[k];
    return ss;
}

std::string slurp(const std::string& path) {
    std::ifstream is(path);
    REQUIRE(is.good());
    std::stringstream buf;
    buf << is.rdbuf();
    return buf.str();
}

size_t count_occurrences(const std::string& text, const std::string& needle) {
    size_t count = 0, pos = 0;
    while ((pos = text.find(needle, pos)) != std::string::npos) {
        ++count;
        pos += needle.size();
    }
    return count;
}

} // namespace

TEST_CASE("zero-shear fan: measured shears vanish and the fan closes up") {
    auto ss = manual_shears(std::vector<double>(41, 0.0));
    LiftChain chain = develop_from_shears(ss, 53);
    CHECK(chain.first_failing_index() == 0);
    for (int n = 2; n <= 40; ++n) CHECK(std::fabs(chain.measure_shear(n)) < 1e-12);
    auto est = chain.accumulation_gap();
    CHECK(est.gap_angle.front() > 0.1);
    CHECK(est.gap_angle.back() < 1e-3);
    for (size_t k = 1; k < est.gap_angle.size(); ++k)
        CHECK(est.log_gap_chart[k] <= est.log_gap_chart[k - 1] + 1e-12);
}

TEST_CASE("round-trip: closed-form shears equal measured shears") {
    auto g = rng(501);
    for (int rep = 0; rep < 25; ++rep) {
        FluteSurface s = random_surface(g, 55, 4.0, 16.0, rep % 2 == 0);
        auto v = canonical_restricted(s, 54);
        auto u = u_sequence(v, s, 53);
        auto oc = oracle_roundtrip(s, u, 50, 53);
        CHECK(oc.first_failing_index == 0);
        CHECK(oc.max_shear_residual < 1e-8);
        CHECK(oc.max_eta_residual < 1e-9);
        CHECK(oc.shear_count >= 99);
        CHECK(oc.eta_count == 50);
    }
}

TEST_CASE("round-trip covers generalized patchworks with seam crossings") {
    auto g = rng(502);
    std::uniform_real_distribution<double> len(4.0, 16.0);
    std::uniform_real_distribution<double> twi(-0.49, 0.49);
    for (const auto& c : crossing_configurations()) {
        std::vector<double> ls, ts;
        for (int i = 0; i < 14; ++i) {
            ls.push_back(len(g));
            ts.push_back(twi(g));
        }
        FluteSurface s(SequenceSpec::constant(8.0).with_prefix(ls),
                       SequenceSpec::constant(0.25).with_prefix(ts));
        Patchwork p = build_crossing_window(c, s, 12, 5);
        auto u = u_prime_sequence(p, s, 11);
        auto oc = oracle_roundtrip(s, u, 10, 53);
        CHECK_MESSAGE(oc.max_shear_residual < 1e-8, c.label);
        CHECK_MESSAGE(oc.max_eta_residual < 1e-9, c.label);
    }
}

TEST_CASE("re-development at doubled precision moves no endpoint") {
    auto g = rng(503);
    FluteSurface s = random_surface(g, 105, 4.0, 16.0);
    auto v = canonical_restricted(s, 104);
    auto u = u_sequence(v, s, 103);
    const ShearSequence ss = ShearSequence::build(s, u, 100);
    auto lo = develop_from_shears(ss, 53).chart_points();
    auto hi = develop_from_shears(ss, 113).chart_points();
    REQUIRE(lo.size() == hi.size());
    for (size_t i = 1; i < lo.size(); ++i)
        CHECK(std::fabs(lo[i] - hi[i]) < 1e-10);
}

TEST_CASE("measured eta: fixed point and randomized lengths") {
    const double fix = 2.0 * std::asinh(1.0);
    FluteSurface s(SequenceSpec::constant(fix), SequenceSpec::constant(0.0));
    auto v = canonical_restricted(s, 14);
    auto u = u_sequence(v, s, 13);
    LiftChain chain = develop_lift(s, u, 10, 53);
    for (int n = 1; n <= 10; ++n)
        CHECK(chain.measure_eta(n) == doctest::Approx(fix).epsilon(1e-12));

    auto g = rng(504);
    for (int rep = 0; rep < 15; ++rep) {
        FluteSurface r = random_surface(g, 25, 1.0, 20.0);
        auto vr = canonical_restricted(r, 24);
        auto ur = u_sequence(vr, r, 23);
        LiftChain cr = develop_lift(r, ur, 20, 53);
        auto view = r.view(22);
        for (int n = 1; n <= 20; ++n) {
            CHECK(std::fabs(cr.measure_eta(n) -
                            eta_length(view.length(n), view.length(n + 1))) < 1e-9);
        }
    }
}

TEST_CASE("accumulation gap: divergent chains close, convergent chains do not") {
    // convergent criterion: gap stabilizes above a strictly positive floor
    FluteSurface conv(SequenceSpec::logarithmic(4.0, 1.0), SequenceSpec::constant(0.0));
    auto vc = canonical_restricted(conv, 230);
    auto uc = u_sequence(vc, conv, 229);
    auto lad = accumulation_gap_ladder(conv, uc, 200);
    const double floor_gap = lad.chain.accumulation_gap().final_gap_angle();
    // frozen regression constant for this family at depth 200
    CHECK(floor_gap == doctest::Approx(0.3171021).epsilon(1e-4));
    CHECK(lad.bits_used == 53);

    // divergent: bounded lengths collapse the gap; the ladder escalates
    FluteSurface div(SequenceSpec::constant(1.0), SequenceSpec::constant(0.0));
    auto vd = canonical_restricted(div, 230);
    auto ud = u_sequence(vd, div, 229);
    auto ld = accumulation_gap_ladder(div, ud, 200);
    CHECK(ld.bits_used == 256);
    CHECK(ld.chain.accumulation_gap().final_log_gap() < std::log(1e-12));

    // the gap sequence never increases
    auto g = rng(505);
    for (int rep = 0; rep < 10; ++rep) {
        FluteSurface s = random_surface(g, 45, 2.0, 10.0);
        auto v = canonical_restricted(s, 44);
        auto u = u_sequence(v, s, 43);
        auto est = develop_lift(s, u, 40, 53).accumulation_gap();
        for (size_t k = 1; k < est.log_gap_chart.size(); ++k)
            CHECK(est.log_gap_chart[k] <= est.log_gap_chart[k - 1] + 1e-9);
    }
}

TEST_CASE("chain measurements are invariant under a global Moebius change") {
    // conjugating the whole chain is a change of base chart; measured shears
    // and etas only depend on local cross-ratios, so re-measuring after
    // moving the chart through an isometry must return the same values.
    // (shallow chain: the base-chart doubles must still resolve the points)
    FluteSurface s(SequenceSpec::constant(2.2), SequenceSpec::constant(0.3));
    auto v = canonical_restricted(s, 12);
    auto u = u_sequence(v, s, 11);
    LiftChain chain = develop_lift(s, u, 5, 53);
    auto pts = chain.chart_points();
    const Isometry f(2.0, 1.0, 0.5, 1.0);
    for (int n = 2; n <= 8; ++n) {
        // measure the shear from the four transported ideal points directly
        BoundaryPoint a = f.apply(std::isinf(pts[n - 2]) ? BoundaryPoint::infinity()
                                                         : BoundaryPoint::of(pts[n - 2]));
        BoundaryPoint b = f.apply(std::isinf(pts[n - 1]) ? BoundaryPoint::infinity()
                                                         : BoundaryPoint::of(pts[n - 1]));
        BoundaryPoint c = f.apply(BoundaryPoint::of(pts[n]));
        BoundaryPoint d = f.apply(BoundaryPoint::of(pts[n + 1]));
        const double direct = n % 2 == 0 ? shear_of_quad(b, a, c, d) : shear_of_quad(c, a, b, d);
        CHECK(std::fabs(direct - chain.measure_shear(n)) < 1e-10);
    }
}

TEST_CASE("horocyclic path: geometric arc lengths follow the cumulative shears") {
    auto g = rng(506);
    for (int rep = 0; rep < 8; ++rep) {
        FluteSurface s = random_surface(g, 16, 2.0, 6.0, rep % 2 == 0);
        auto v = canonical_restricted(s, 15);
        auto u = u_sequence(v, s, 14);
        const ShearSequence ss = ShearSequence::build(s, u, 12);
        LiftChain chain = develop_from_shears(ss, 53);
        auto hp = horocyclic_path(chain.chart_points());
        REQUIRE(hp.arc_lengths.size() >= 18);
        for (size_t k = 0; k < std::min<size_t>(hp.arc_lengths.size(), 18); ++k) {
            const int n = static_cast<int>(k) + 1; // wedge between g_n and g_{n+1}
            const double expect = n % 2 == 1 ? std::exp(-ss.cum[static_cast<size_t>(n)])
                                             : std::exp(ss.cum[static_cast<size_t>(n)]);
            CHECK(std::fabs(hp.arc_lengths[k] - expect) < 1e-8 * std::max(1.0, expect));
        }
    }
}

TEST_CASE("horocyclic path length and boundary gap decide accumulation together") {
    struct Family {
        SequenceSpec lengths;
        SequenceSpec twists;
        bool divergent;
    };
    const std::vector<Family> fams{
        {SequenceSpec::constant(1.0), SequenceSpec::constant(0.0), true},
        {SequenceSpec::constant(4.0), SequenceSpec::constant(0.5), true},
        {SequenceSpec::logarithmic(4.0, 1.0), SequenceSpec::constant(0.0), false},
        {SequenceSpec::linear(1.0, 2.0), SequenceSpec::constant(0.5), false},
    };
    for (const auto& fam : fams) {
        FluteSurface s(fam.lengths, fam.twists);
        auto v = canonical_restricted(s, 260);
        auto u = u_sequence(v, s, 259);
        const ShearSequence ss = ShearSequence::build(s, u, 250);
        LiftChain chain = develop_from_shears(ss, 256);
        const double horo = horocyclic_partial_length(ss, 250).log_value;
        const double gap = chain.accumulation_gap().final_log_gap();
        if (fam.divergent) {
            CHECK(horo > std::log(1e6));
            CHECK(gap < std::log(1e-12));
        } else {
            CHECK(horo < std::log(1e6));
            CHECK(gap > std::log(1e-12));
        }
    }
}

TEST_CASE("precision exhaustion is reported with the failing index") {
    // linear growth with slope 100: even shears reach -e^{700} territory and
    // the local coordinate overflows a double quickly
    FluteSurface s(SequenceSpec::linear(100.0, 10.0), SequenceSpec::constant(0.0));
    auto v = canonical_restricted(s, 40);
    auto u = u_sequence(v, s, 39);
    LiftChain chain = develop_lift(s, u, 30, 53);
    CHECK(chain.first_failing_index() > 0);
    // the same chain at 256 bits develops fully
    LiftChain wide = develop_lift(s, u, 30, 256);
    CHECK(wide.first_failing_index() == 0);
}

TEST_CASE("disk rendering") {
    const std::string dir = std::filesystem::temp_directory_path().string();

    // three-geodesic chain: exactly 3 geodesic arcs plus the boundary circle
    auto ss = manual_shears({0.0, 0.3});
    LiftChain small = develop_from_shears(ss, 53);
    const std::string out3 = dir + "/flute_three.svg";
    render_disk_svg({std::numeric_limits<double>::infinity(), 0.0, 1.0, 0.5}, std::nullopt,
                    out3, {});
    const std::string svg3 = slurp(out3);
    CHECK(count_occurrences(svg3, "class=\"geodesic\"") == 3);
    CHECK(count_occurrences(svg3, "class=\"boundary\"") == 1);
    CHECK(count_occurrences(svg3, "class=\"horocyclic\"") == 0);

    // golden file: the zero-shear fan at depth 10
    auto fan = manual_shears(std::vector<double>(21, 0.0));
    LiftChain chain = develop_from_shears(fan, 53);
    const std::string out = dir + "/flute_fan10.svg";
    auto hp = horocyclic_path(chain.chart_points());
    RenderOptions opt;
    opt.overlay_horocyclic = true;
    render_disk_svg(chain.chart_points(), hp, out, opt);
    const std::string got = slurp(out);
    const std::string want = slurp(std::string(FLUTE_GOLDEN_DIR) + "/fan_depth10.svg");
    CHECK(got == want);
    CHECK(count_occurrences(got, "class=\"horocyclic\"") == 1);

    CHECK_THROWS(render_disk_svg({0.0, 1.0}, std::nullopt,
                                 dir + "/no_such_dir_xyz/out.svg", {}));
}
