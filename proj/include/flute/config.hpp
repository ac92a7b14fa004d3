#pragma once
#include <string>
#include <vector>

#include "flute/criterion.hpp"
#include "flute/sequence_spec.hpp"

namespace flute {

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Validated run configuration.  The on-disk format is a small TOML-style
/// file (key = value with [tables]); JSON is accepted as an alternative.
struct RunConfig {
    int schema_version = 1;
    int depth = 200;
    int precision = 53;

    SequenceSpec lengths = SequenceSpec::constant(5.0);
    SequenceSpec twists = SequenceSpec::constant(0.0);

    enum class PatchworkMode { automatic, restricted, explicit_v };
    PatchworkMode patchwork_mode = PatchworkMode::automatic;
    int v1 = -1;
    std::vector<int> explicit_v;

    SearchStrategy strategy = SearchStrategy::exhaustive;
    int search_depth = 9;
    int beam_width = 64;

    double divergent_slope = 0.1;
    double convergent_decay = 1.1;

    std::string report_path = "report.json";
    std::string svg_path = "lift.svg";
    bool overlay_horocyclic = false;
    bool timestamp = true;

    FluteSurface make_surface() const { return FluteSurface(lengths, twists); }
    ClassifyOptions classify_options() const;
};

/// Parses and validates a config file; in strict mode unknown keys are
/// errors.  Syntax errors carry line/column, semantic errors name the field.
RunConfig parse_config(const std::string& path, bool strict = true);
RunConfig parse_config_text(const std::string& text, bool json, bool strict = true);

} // namespace flute
