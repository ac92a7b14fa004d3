#include "flute/config.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "flute/patchwork.hpp"

namespace flute {

namespace {

struct Value {
    enum Kind { number, text, boolean, number_list } kind = number;
    double num = 0.0;
    std::string str;
    bool flag = false;
    std::vector<double> nums;
    int line = 0;
};

using KeyMap = std::map<std::string, Value>;

[[noreturn]] void syntax_error(int line, int col, const std::string& what) {
    throw config_error("parse error at line " + std::to_string(line) + ", column " +
                       std::to_string(col) + ": " + what);
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

Value parse_scalar(const std::string& tok, int line, int col) {
    Value v;
    v.line = line;
    if (tok.empty()) syntax_error(line, col, "empty value");
    if (tok.front() == '"') {
        if (tok.size() < 2 || tok.back() != '"') syntax_error(line, col, "unterminated string");
        v.kind = Value::text;
        v.str = tok.substr(1, tok.size() - 2);
        return v;
    }
    if (tok == "true" || tok == "false") {
        v.kind = Value::boolean;
        v.flag = tok == "true";
        return v;
    }
    char* end = nullptr;
    v.num = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0') syntax_error(line, col, "not a number: '" + tok + "'");
    v.kind = Value::number;
    return v;
}

KeyMap parse_toml_subset(const std::string& text) {
    KeyMap out;
    std::istringstream is(text);
    std::string raw;
    std::string section;
    int lineno = 0;
    while (std::getline(is, raw)) {
        ++lineno;
        // strip comment (no # inside strings in this subset's keys; respect quotes)
        std::string line;
        bool in_str = false;
        for (char ch : raw) {
            if (ch == '"') in_str = !in_str;
            if (ch == '#' && !in_str) break;
            line += ch;
        }
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') syntax_error(lineno, static_cast<int>(line.size()), "expected ']'");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) syntax_error(lineno, 2, "empty table name");
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos) syntax_error(lineno, 1, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty()) syntax_error(lineno, 1, "empty key");
        const std::string path = section.empty() ? key : section + "." + key;
        if (out.count(path)) syntax_error(lineno, 1, "duplicate key '" + path + "'");
        if (!val.empty() && val.front() == '[') {
            if (val.back() != ']') syntax_error(lineno, static_cast<int>(eq + 2), "unterminated array");
            Value v;
            v.kind = Value::number_list;
            v.line = lineno;
            std::string body = trim(val.substr(1, val.size() - 2));
            if (!body.empty()) {
                std::istringstream bs(body);
                std::string item;
                while (std::getline(bs, item, ',')) {
                    Value sv = parse_scalar(trim(item), lineno, static_cast<int>(eq + 2));
                    if (sv.kind != Value::number)
                        syntax_error(lineno, static_cast<int>(eq + 2), "arrays hold numbers only");
                    v.nums.push_back(sv.num);
                }
            }
            out[path] = std::move(v);
        } else {
            out[path] = parse_scalar(val, lineno, static_cast<int>(eq + 2));
        }
    }
    return out;
}

void flatten_json(const nlohmann::json& j, const std::string& prefix, KeyMap& out) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            flatten_json(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
        return;
    }
    Value v;
    if (j.is_number()) {
        v.kind = Value::number;
        v.num = j.get<double>();
    } else if (j.is_string()) {
        v.kind = Value::text;
        v.str = j.get<std::string>();
    } else if (j.is_boolean()) {
        v.kind = Value::boolean;
        v.flag = j.get<bool>();
    } else if (j.is_array()) {
        v.kind = Value::number_list;
        for (const auto& e : j) {
            if (!e.is_number()) throw config_error("field '" + prefix + "': arrays hold numbers only");
            v.nums.push_back(e.get<double>());
        }
    } else {
        throw config_error("field '" + prefix + "': unsupported value type");
    }
    out[prefix] = std::move(v);
}

class Reader {
  public:
    Reader(KeyMap map, bool strict) : map_(std::move(map)), strict_(strict) {}

    const Value* get(const std::string& key) {
        seen_.insert(key);
        auto it = map_.find(key);
        return it == map_.end() ? nullptr : &it->second;
    }

    double number(const std::string& key, double dflt) {
        const Value* v = get(key);
        if (!v) return dflt;
        if (v->kind != Value::number) throw config_error("field '" + key + "' must be a number");
        return v->num;
    }

    std::string text(const std::string& key, const std::string& dflt) {
        const Value* v = get(key);
        if (!v) return dflt;
        if (v->kind != Value::text) throw config_error("field '" + key + "' must be a string");
        return v->str;
    }

    bool boolean(const std::string& key, bool dflt) {
        const Value* v = get(key);
        if (!v) return dflt;
        if (v->kind != Value::boolean) throw config_error("field '" + key + "' must be a boolean");
        return v->flag;
    }

    std::vector<double> numbers(const std::string& key) {
        const Value* v = get(key);
        if (!v) return {};
        if (v->kind != Value::number_list)
            throw config_error("field '" + key + "' must be an array of numbers");
        return v->nums;
    }

    void finish() const {
        if (!strict_) return;
        for (const auto& [k, v] : map_) {
            if (!seen_.count(k))
                throw config_error("unknown key '" + k + "'" +
                                   (v.line ? " at line " + std::to_string(v.line) : ""));
        }
    }

  private:
    KeyMap map_;
    bool strict_;
    std::set<std::string> seen_;
};

SequenceSpec read_sequence(Reader& r, const std::string& table) {
    const std::string tail = r.text(table + ".tail", "constant");
    SequenceSpec s;
    if (tail == "constant") {
        s = SequenceSpec::constant(r.number(table + ".value", 0.0));
    } else if (tail == "linear") {
        s = SequenceSpec::linear(r.number(table + ".a", 1.0), r.number(table + ".b", 0.0));
    } else if (tail == "logarithmic") {
        s = SequenceSpec::logarithmic(r.number(table + ".c", 1.0), r.number(table + ".d", 1.0));
    } else if (tail == "power") {
        s = SequenceSpec::power(r.number(table + ".c", 1.0), r.number(table + ".p", 1.0));
    } else if (tail == "periodic") {
        auto cyc = r.numbers(table + ".cycle");
        if (cyc.empty()) throw config_error("field '" + table + ".cycle' required for periodic tail");
        s = SequenceSpec::periodic(cyc);
    } else {
        throw config_error("field '" + table + ".tail': unknown tail '" + tail + "'");
    }
    auto pre = r.numbers(table + ".prefix");
    if (!pre.empty()) s = s.with_prefix(pre);
    return s;
}

RunConfig build(Reader& r) {
    RunConfig cfg;
    cfg.schema_version = static_cast<int>(r.number("schema_version", 1));
    cfg.depth = static_cast<int>(r.number("depth", 200));
    cfg.precision = static_cast<int>(r.number("precision", 53));
    if (cfg.depth < 2) throw config_error("field 'depth' must be >= 2");
    if (cfg.precision < 53) throw config_error("field 'precision' must be >= 53");

    if (r.get("surface.lengths.tail") || r.get("surface.lengths.value") ||
        r.get("surface.lengths.prefix"))
        cfg.lengths = read_sequence(r, "surface.lengths");
    if (r.get("surface.twists.tail") || r.get("surface.twists.value") ||
        r.get("surface.twists.prefix"))
        cfg.twists = read_sequence(r, "surface.twists");

    // Probe the surface so bad sequences fail at parse time, naming the field.
    {
        FluteSurface probe(cfg.lengths, cfg.twists);
        const int probe_depth = std::min(cfg.depth + 2, 512);
        try {
            probe.view(probe_depth);
        } catch (const validation_error& e) {
            const std::string field =
                std::string(e.what()).find("twist") != std::string::npos ? "surface.twists"
                                                                         : "surface.lengths";
            throw config_error("field '" + field + "': " + e.what());
        }
    }

    const std::string mode = r.text("patchwork.mode", "auto");
    if (mode == "auto") cfg.patchwork_mode = RunConfig::PatchworkMode::automatic;
    else if (mode == "restricted") cfg.patchwork_mode = RunConfig::PatchworkMode::restricted;
    else if (mode == "explicit") cfg.patchwork_mode = RunConfig::PatchworkMode::explicit_v;
    else throw config_error("field 'patchwork.mode': unknown mode '" + mode + "'");
    cfg.v1 = static_cast<int>(r.number("patchwork.v1", -1));
    if (cfg.v1 != 1 && cfg.v1 != -1) throw config_error("field 'patchwork.v1' must be +-1");
    for (double x : r.numbers("patchwork.v")) {
        if (x != 1.0 && x != -1.0) throw config_error("field 'patchwork.v' entries must be +-1");
        cfg.explicit_v.push_back(static_cast<int>(x));
    }
    if (cfg.patchwork_mode == RunConfig::PatchworkMode::explicit_v) {
        if (cfg.explicit_v.empty())
            throw config_error("field 'patchwork.v' required for explicit mode");
        RestrictedPatchwork rp;
        rp.v.insert(rp.v.end(), cfg.explicit_v.begin(), cfg.explicit_v.end());
        FluteSurface probe(cfg.lengths, cfg.twists);
        if (auto bad = validate_restricted(rp, probe, rp.depth()))
            throw config_error("field 'patchwork.v' violates the restricted-patchwork rule at "
                               "index " + std::to_string(bad->index) + ": " + bad->rule);
    }

    const std::string strat = r.text("search.strategy", "exhaustive");
    if (strat == "exhaustive") cfg.strategy = SearchStrategy::exhaustive;
    else if (strat == "beam") cfg.strategy = SearchStrategy::beam;
    else throw config_error("field 'search.strategy': unknown strategy '" + strat + "'");
    cfg.search_depth = static_cast<int>(r.number("search.depth", 9));
    cfg.beam_width = static_cast<int>(r.number("search.beam_width", 64));

    cfg.divergent_slope = r.number("thresholds.divergent_slope", 0.1);
    cfg.convergent_decay = r.number("thresholds.convergent_decay", 1.1);
    if (!(cfg.divergent_slope > 0.0) || !(cfg.convergent_decay > 0.0))
        throw config_error("field 'thresholds.*': thresholds must be positive");

    cfg.report_path = r.text("output.report", "report.json");
    cfg.svg_path = r.text("output.svg", "lift.svg");
    cfg.overlay_horocyclic = r.boolean("render.overlay_horocyclic", false);
    cfg.timestamp = r.boolean("report.timestamp", true);

    r.finish();
    return cfg;
}

} // namespace

ClassifyOptions RunConfig::classify_options() const {
    ClassifyOptions opt;
    opt.depth = depth;
    opt.search_depth = search_depth;
    opt.beam_width = beam_width;
    opt.heuristic_divergent_slope = divergent_slope;
    opt.heuristic_convergent_decay = convergent_decay;
    return opt;
}

RunConfig parse_config_text(const std::string& text, bool json, bool strict) {
    KeyMap map;
    if (json) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw config_error(std::string("JSON parse error: ") + e.what());
        }
        flatten_json(j, "", map);
    } else {
        map = parse_toml_subset(text);
    }
    Reader r(std::move(map), strict);
    return build(r);
}

RunConfig parse_config(const std::string& path, bool strict) {
    std::ifstream is(path);
    if (!is) throw config_error("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << is.rdbuf();
    const std::string text = buf.str();
    const bool json = path.size() > 5 && path.substr(path.size() - 5) == ".json";
    const size_t first = text.find_first_not_of(" \t\r\n");
    const bool looks_json = first != std::string::npos && text[first] == '{';
    return parse_config_text(text, json || looks_json, strict);
}

} // namespace flute
