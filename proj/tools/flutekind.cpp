#include <fstream>
#include <iostream>
#include <random>

#include <CLI11.hpp>
#include <json.hpp>

#include "flute/config.hpp"
#include "flute/criterion.hpp"
#include "flute/horocyclic.hpp"
#include "flute/lift_chain.hpp"
#include "flute/render_svg.hpp"
#include "flute/report.hpp"

namespace {

using namespace flute;

constexpr int kExitError = 3;
constexpr int kExitResource = 4;
constexpr int kExitIo = 5;

struct CommonArgs {
    std::string config_path;
    int depth = 0;       // 0: use config
    int precision = 0;
    std::string patchwork_mode;
    std::string output;
    bool strict = true;
    bool no_timestamp = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("-c,--config", args.config_path, "configuration file (TOML-style or JSON)")
        ->required();
    cmd->add_option("--depth", args.depth, "override the configured depth");
    cmd->add_option("--precision", args.precision, "override the working precision (bits)");
    cmd->add_option("--patchwork", args.patchwork_mode, "auto | restricted | explicit");
    cmd->add_option("--output", args.output, "override the output path");
    cmd->add_flag("--strict,!--no-strict", args.strict, "reject unknown config keys (default on)");
    cmd->add_flag("--no-timestamp", args.no_timestamp, "omit the timestamp from reports");
}

RunConfig load(const CommonArgs& args) {
    RunConfig cfg = parse_config(args.config_path, args.strict);
    if (args.depth > 0) cfg.depth = args.depth;
    if (args.precision > 0) cfg.precision = args.precision;
    if (!args.patchwork_mode.empty()) {
        if (args.patchwork_mode == "auto") cfg.patchwork_mode = RunConfig::PatchworkMode::automatic;
        else if (args.patchwork_mode == "restricted")
            cfg.patchwork_mode = RunConfig::PatchworkMode::restricted;
        else if (args.patchwork_mode == "explicit")
            cfg.patchwork_mode = RunConfig::PatchworkMode::explicit_v;
        else throw config_error("--patchwork: unknown mode '" + args.patchwork_mode + "'");
    }
    if (args.no_timestamp) cfg.timestamp = false;
    if (cfg.depth < 2) throw config_error("depth must be >= 2");
    return cfg;
}

RestrictedPatchwork configured_restricted(const RunConfig& cfg, const FluteSurface& surface,
                                          int depth) {
    if (cfg.patchwork_mode == RunConfig::PatchworkMode::explicit_v) {
        RestrictedPatchwork rp;
        rp.v.insert(rp.v.end(), cfg.explicit_v.begin(), cfg.explicit_v.end());
        if (rp.depth() < depth) {
            // extend the explicit prefix canonically
            auto view = surface.view(depth);
            while (rp.depth() < depth) {
                const int n = rp.depth();
                const double t = view.twist(n);
                int next = 1;
                if (t == 0.0) next = rp.at(n);
                else if (t == 0.5) next = -rp.at(n);
                rp.v.push_back(next);
            }
        }
        return rp;
    }
    return canonical_restricted(surface, depth, cfg.v1);
}

// Classification of a single fixed restricted patchwork.  Sound conclusions
// only: a convergent series rules out the first kind for any twists; a
// divergent one settles the surface only when all twists are in {0, 1/2}.
CriterionReport classify_fixed(const FluteSurface& surface, const RunConfig& cfg) {
    const ClassifyOptions opt = cfg.classify_options();
    const int N = opt.depth;
    CriterionReport rep;
    rep.depth = N;
    RestrictedPatchwork v = configured_restricted(cfg, surface, N + 2);
    USequence u = u_sequence(v, surface, N + 1);
    rep.terms = criterion_terms(surface, u, N);
    rep.growth_fit = fit_growth(rep.terms);
    rep.witness_u = u.u;
    rep.patchwork_source = cfg.patchwork_mode == RunConfig::PatchworkMode::explicit_v
                               ? "explicit restricted patchwork"
                               : "canonical restricted patchwork";
    const bool symmetric = surface.twists_all_half_integral(N + 2);
    if (auto conf = confirm_series(surface.lengths_spec(), u.u, N)) {
        rep.confirmation = conf;
        if (conf->divergent) {
            rep.verdict = Verdict::DIVERGENT_CONFIRMED;
            if (symmetric) {
                rep.first_kind = FirstKind::FIRST_KIND;
                rep.parabolicity = Parabolicity::PARABOLIC;
                rep.justification = "restricted series diverges and twists are half-integral: "
                                    "first kind and parabolic (" + conf->detail + ")";
            } else {
                rep.first_kind = FirstKind::UNDETERMINED;
                rep.parabolicity = Parabolicity::UNDETERMINED;
                rep.justification =
                    "this restricted patchwork's series diverges (" + conf->detail +
                    "), which shows its lift accumulates to one boundary point; with twists "
                    "off {0, 1/2} that alone does not decide the first kind (other "
                    "patchworks may behave differently)";
            }
        } else {
            rep.verdict = Verdict::CONVERGENT_CONFIRMED;
            rep.first_kind = FirstKind::NOT_FIRST_KIND;
            rep.parabolicity = Parabolicity::NOT_PARABOLIC;
            rep.justification = "one patchwork with a convergent series rules out the first "
                                "kind (" + conf->detail + ")";
        }
        return rep;
    }
    rep.verdict = rep.growth_fit.partial_slope > opt.heuristic_divergent_slope
                      ? Verdict::HEURISTIC_DIVERGENT
                      : (rep.growth_fit.term_slope < -opt.heuristic_convergent_decay
                             ? Verdict::HEURISTIC_CONVERGENT
                             : Verdict::INCONCLUSIVE);
    rep.first_kind = FirstKind::UNDETERMINED;
    rep.parabolicity = Parabolicity::UNDETERMINED;
    rep.justification = "no registered comparison test applies; fitted log-slope of partial "
                        "sums " + std::to_string(rep.growth_fit.partial_slope) + " at depth " +
                        std::to_string(N);
    return rep;
}

int cmd_classify(const CommonArgs& args) {
    RunConfig cfg = load(args);
    if (!args.output.empty()) cfg.report_path = args.output;
    FluteSurface surface = cfg.make_surface();
    CriterionReport rep = cfg.patchwork_mode == RunConfig::PatchworkMode::automatic
                              ? classify(surface, cfg.classify_options())
                              : classify_fixed(surface, cfg);
    nlohmann::ordered_json j = report_to_json(rep, cfg, cfg.timestamp);
    write_text_file(cfg.report_path, j.dump(2) + "\n");
    std::cout << to_string(rep.verdict) << " first_kind=" << to_string(rep.first_kind)
              << " parabolicity=" << to_string(rep.parabolicity) << " -> " << cfg.report_path
              << "\n";
    return exit_status_of(rep);
}

int cmd_oracle_check(const CommonArgs& args, bool sweep) {
    RunConfig cfg = load(args);
    if (!args.output.empty()) cfg.report_path = args.output;
    FluteSurface surface = cfg.make_surface();
    const int pairs = cfg.depth;
    RestrictedPatchwork v = configured_restricted(cfg, surface, pairs + 3);
    USequence u = u_sequence(v, surface, pairs + 2);

    nlohmann::ordered_json j;
    j["schema_version"] = "1";
    j["tool"] = "flutekind oracle-check";
    j["surface"]["lengths"] = sequence_to_json(cfg.lengths);
    j["surface"]["twists"] = sequence_to_json(cfg.twists);
    j["depth"] = pairs;
    j["precision"] = cfg.precision;

    const OracleCheckResult r = oracle_roundtrip(surface, u, pairs, cfg.precision);
    j["roundtrip"]["max_shear_residual"] = r.max_shear_residual;
    j["roundtrip"]["shear_count"] = r.shear_count;
    j["roundtrip"]["max_eta_residual"] = r.max_eta_residual;
    j["roundtrip"]["eta_count"] = r.eta_count;
    j["roundtrip"]["final_gap_angle"] = r.final_gap_angle;
    j["roundtrip"]["final_log_gap_chart"] = r.final_log_gap;
    j["roundtrip"]["horocyclic_log_partial"] = r.horocyclic_log_partial;
    j["roundtrip"]["precision_bits"] = r.bits;
    bool failed = false;
    if (r.first_failing_index > 0) {
        failed = true;
        j["roundtrip"]["precision_exhausted_at"] = r.first_failing_index;
        std::cerr << "precision exhaustion: endpoints indistinguishable at "
                  << cfg.precision << " bits from chain index " << r.first_failing_index
                  << "\n";
    }

    if (sweep) {
        std::mt19937_64 rng(20240711u);
        std::uniform_real_distribution<double> len(4.0, 16.0);
        std::uniform_real_distribution<double> twi(-0.49, 0.49);
        auto configs = crossing_configurations();
        nlohmann::ordered_json sw = nlohmann::ordered_json::array();
        for (const auto& c : configs) {
            std::vector<double> ls, ts;
            for (int i = 0; i < 14; ++i) {
                ls.push_back(len(rng));
                double t = twi(rng);
                if (t == 0.0) t = 0.25;
                ts.push_back(t);
            }
            FluteSurface s(SequenceSpec::constant(6.0).with_prefix(ls),
                           SequenceSpec::constant(0.25).with_prefix(ts));
            Patchwork p = build_crossing_window(c, s, 12, 5);
            USequence up = u_prime_sequence(p, s, 11);
            OracleCheckResult rr = oracle_roundtrip(s, up, 10, cfg.precision);
            nlohmann::ordered_json e;
            e["configuration"] = c.label;
            e["max_shear_residual"] = rr.max_shear_residual;
            e["max_eta_residual"] = rr.max_eta_residual;
            sw.push_back(e);
        }
        j["configuration_sweep"] = sw;
        j["configuration_count"] = configs.size();
    }

    write_text_file(cfg.report_path, j.dump(2) + "\n");
    std::cout << "max shear residual " << r.max_shear_residual << ", max eta residual "
              << r.max_eta_residual << " -> " << cfg.report_path << "\n";
    return failed ? kExitError : 0;
}

int cmd_render(const CommonArgs& args, bool overlay) {
    RunConfig cfg = load(args);
    if (!args.output.empty()) cfg.svg_path = args.output;
    FluteSurface surface = cfg.make_surface();
    const int pairs = std::min(cfg.depth, 64);
    RestrictedPatchwork v = configured_restricted(cfg, surface, pairs + 3);
    USequence u = u_sequence(v, surface, pairs + 2);
    LiftChain chain = develop_lift(surface, u, pairs, 53);
    const std::vector<double> pts = chain.chart_points();
    RenderOptions opt;
    opt.overlay_horocyclic = overlay || cfg.overlay_horocyclic;
    std::optional<HorocyclicPath> path;
    if (opt.overlay_horocyclic) path = horocyclic_path(pts);
    render_disk_svg(pts, path, cfg.svg_path, opt);
    std::cout << "wrote " << cfg.svg_path << " (" << pts.size() << " ideal vertices)\n";
    return 0;
}

int cmd_enumerate(const CommonArgs& args, const std::string& kind) {
    RunConfig cfg = load(args);
    FluteSurface surface = cfg.make_surface();
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!args.output.empty()) {
        file.open(args.output);
        if (!file) throw std::runtime_error("cannot write '" + args.output + "'");
        os = &file;
    }
    const int depth = std::min(cfg.depth, 14);
    long count = 0;
    if (kind == "restricted") {
        enumerate_restricted(surface, depth, [&](const RestrictedPatchwork& rp) {
            nlohmann::ordered_json j;
            j["v"] = std::vector<int>(rp.v.begin() + 1, rp.v.end());
            *os << j.dump() << "\n";
            ++count;
        });
    } else if (kind == "generalized") {
        enumerate_generalized(surface, depth, [&](const Patchwork& p) {
            nlohmann::ordered_json j;
            j["v_prime"] = std::vector<int>(p.v_prime.begin() + 1, p.v_prime.end());
            j["w"] = std::vector<int>(p.w.begin() + 1, p.w.end());
            *os << j.dump() << "\n";
            ++count;
        });
    } else {
        throw config_error("--kind must be 'restricted' or 'generalized'");
    }
    std::cerr << count << " patchworks (depth " << depth << ")\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"flutekind: classifies flute surfaces from Fenchel-Nielsen data"};
    app.require_subcommand(1);

    CommonArgs a_classify, a_oracle, a_render, a_enum;
    bool sweep = false, overlay = false;
    std::string kind = "restricted";

    auto* c1 = app.add_subcommand("classify", "evaluate the divergence criterion and classify");
    add_common(c1, a_classify);
    auto* c2 = app.add_subcommand("oracle-check",
                                  "round-trip closed-form shears against the developed lift");
    add_common(c2, a_oracle);
    c2->add_flag("--sweep-configurations", sweep,
                 "also run every admissible crossing configuration");
    auto* c3 = app.add_subcommand("render", "render the developed lift in the Poincare disk");
    add_common(c3, a_render);
    c3->add_flag("--overlay-horocyclic", overlay, "draw the piecewise horocyclic path");
    auto* c4 = app.add_subcommand("enumerate", "dump admissible patchworks to depth");
    add_common(c4, a_enum);
    c4->add_option("--kind", kind, "restricted | generalized");

    CLI11_PARSE(app, argc, argv);

    try {
        if (c1->parsed()) return cmd_classify(a_classify);
        if (c2->parsed()) return cmd_oracle_check(a_oracle, sweep);
        if (c3->parsed()) return cmd_render(a_render, overlay);
        if (c4->parsed()) return cmd_enumerate(a_enum, kind);
    } catch (const resource_error& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return kExitResource;
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitError;
    } catch (const validation_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitError;
    } catch (const precision_exhausted& e) {
        std::cerr << "precision exhaustion at index " << e.index << ": " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitError;
}
