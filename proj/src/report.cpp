#include "flute/report.hpp"

#include <ctime>
#include <fstream>

namespace flute {

nlohmann::ordered_json sequence_to_json(const SequenceSpec& s) {
    nlohmann::ordered_json j;
    switch (s.tail) {
        case SequenceSpec::Tail::constant:
            j["tail"] = "constant";
            j["value"] = s.c0;
            break;
        case SequenceSpec::Tail::linear:
            j["tail"] = "linear";
            j["a"] = s.c0;
            j["b"] = s.c1;
            break;
        case SequenceSpec::Tail::logarithmic:
            j["tail"] = "logarithmic";
            j["c"] = s.c0;
            j["d"] = s.c1;
            break;
        case SequenceSpec::Tail::power:
            j["tail"] = "power";
            j["c"] = s.c0;
            j["p"] = s.c1;
            break;
        case SequenceSpec::Tail::periodic:
            j["tail"] = "periodic";
            j["cycle"] = s.cycle;
            break;
    }
    if (!s.prefix.empty()) j["prefix"] = s.prefix;
    return j;
}

int exit_status_of(const CriterionReport& report) {
    switch (report.first_kind) {
        case FirstKind::FIRST_KIND: return 0;
        case FirstKind::NOT_FIRST_KIND: return 1;
        case FirstKind::UNDETERMINED: return 2;
    }
    return 2;
}

nlohmann::ordered_json report_to_json(const CriterionReport& report, const RunConfig& config,
                                      bool include_timestamp) {
    nlohmann::ordered_json j;
    j["schema_version"] = "1";
    j["tool"] = "flutekind";
    j["surface"]["lengths"] = sequence_to_json(config.lengths);
    j["surface"]["twists"] = sequence_to_json(config.twists);
    j["depth"] = report.depth;
    j["patchwork_source"] = report.patchwork_source;
    j["verdict"] = to_string(report.verdict);
    j["classification"]["first_kind"] = to_string(report.first_kind);
    j["classification"]["parabolicity"] = to_string(report.parabolicity);
    j["justification"] = report.justification;
    if (report.confirmation) {
        j["confirmation"]["divergent"] = report.confirmation->divergent;
        j["confirmation"]["family"] = report.confirmation->family;
        j["confirmation"]["detail"] = report.confirmation->detail;
    } else {
        j["confirmation"] = nullptr;
    }
    j["growth_fit"]["partial_slope"] = report.growth_fit.partial_slope;
    j["growth_fit"]["term_slope"] = report.growth_fit.term_slope;
    j["growth_fit"]["window"] = {report.growth_fit.window_lo + 1, report.growth_fit.window_hi};
    j["criterion"]["form"] = "cosh";
    j["criterion"]["log_terms"] = report.terms.log_terms;
    j["criterion"]["log_partial_sums"] = report.terms.log_partial_sums;
    if (!report.witness_u.empty())
        j["criterion"]["u"] =
            std::vector<double>(report.witness_u.begin() + 1, report.witness_u.end());
    j["exit_status"] = exit_status_of(report);
    if (include_timestamp) {
        char buf[64];
        const std::time_t now = std::time(nullptr);
        std::tm tm{};
        gmtime_r(&now, &tm);
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
        j["timestamp"] = buf;
    }
    return j;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write file '" + path + "'");
    os << content;
}

} // namespace flute
