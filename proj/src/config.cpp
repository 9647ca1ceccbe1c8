#include "pbundle/config.hpp"

#include "pbundle/csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace pbundle {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) {
        cur = trim(cur);
        if (!cur.empty()) out.push_back(cur);
    }
    return out;
}

std::vector<std::string> words(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    for (std::string w; is >> w;) out.push_back(w);
    return out;
}

double parse_number(const std::string& text, const std::string& key) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (first != last && *first == '+') ++first;
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last || !std::isfinite(v)) {
        throw ConfigError(key + ": expected a finite number, got '" + text + "'");
    }
    return v;
}

int parse_int(const std::string& text, const std::string& key) {
    int v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        throw ConfigError(key + ": expected an integer, got '" + text + "'");
    }
    return v;
}

const std::set<std::string> kDimensionalParams{"omega", "Omega", "delta", "g_x", "g_k", "kappa_e", "kappa_d", "gamma_d"};
const std::set<std::string> kAxisNames{"omega", "Omega", "delta", "g_k", "kappa_e", "kappa_d", "gamma_d"};

// A value as written plus where it came from, for unit resolution.
struct Dimensional {
    std::string key;
    Quantity q;
};

void require_unit(const Dimensional& d, UnitSystem units) {
    const bool lab = units == UnitSystem::laboratory;
    if (lab && d.q.unit != "kHz") {
        throw ConfigError(d.key + ": laboratory units are in use, so this value needs a kHz suffix (mixing unit systems is not allowed)");
    }
    if (!lab && !d.q.unit.empty()) {
        throw ConfigError(d.key + ": unit '" + d.q.unit + "' is not valid here");
    }
}

}  // namespace

const std::vector<std::string>& known_config_keys() {
    static const std::vector<std::string> keys{
        "omega", "Omega", "delta", "g_x", "g_k", "phi", "kappa_e", "kappa_d", "gamma_d",
        "n_max", "adaptive_truncation", "workers", "out",
        "scan_axis", "scan_min", "scan_max", "scan_count", "bind_Omega_to_omega", "levels",
        "n_list", "delta_list", "peak_check", "axis1", "axis2", "bind", "bundle_n"};
    return keys;
}

std::map<std::string, std::string> parse_key_values(const std::string& text, const std::string& origin) {
    std::map<std::string, std::string> kv;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    const auto& keys = known_config_keys();
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const std::string where = origin + ":" + std::to_string(lineno);
        if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
            throw ConfigError(where + ": unknown key '" + key + "'");
        }
        if (value.empty()) throw ConfigError(where + ": empty value for '" + key + "'");
        if (!kv.emplace(key, value).second) throw ConfigError(where + ": duplicate key '" + key + "'");
    }
    return kv;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_key_values(ss.str(), path);
}

Quantity parse_quantity(const std::string& text, const std::string& key) {
    std::string t = trim(text);
    Quantity q;
    for (const char* unit : {"kHz", "deg"}) {
        const std::string u(unit);
        if (t.size() > u.size() && t.compare(t.size() - u.size(), u.size(), u) == 0) {
            q.unit = u;
            t = trim(t.substr(0, t.size() - u.size()));
            break;
        }
    }
    q.value = parse_number(t, key);
    return q;
}

bool parse_bool(const std::string& text, const std::string& key) {
    std::string t = text;
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
    if (t == "false" || t == "0" || t == "no" || t == "off") return false;
    throw ConfigError(key + ": expected true/false, got '" + text + "'");
}

RunConfig resolve_config(const std::map<std::string, std::string>& file_values,
                         const std::map<std::string, std::string>& overrides) {
    std::map<std::string, std::string> kv = file_values;
    const auto& keys = known_config_keys();
    for (const auto& [k, v] : overrides) {
        if (std::find(keys.begin(), keys.end(), k) == keys.end()) throw ConfigError("unknown key '" + k + "'");
        kv[k] = v;
    }
    auto get = [&](const std::string& k) -> std::optional<std::string> {
        const auto it = kv.find(k);
        if (it == kv.end()) return std::nullopt;
        return it->second;
    };

    RunConfig c;

    // Gather every dimensional value to decide the unit system once.
    std::vector<Dimensional> dims;
    std::map<std::string, Quantity> params;
    for (const auto& k : kDimensionalParams) {
        if (auto v = get(k)) {
            params[k] = parse_quantity(*v, k);
            dims.push_back({k, params[k]});
        }
    }
    std::vector<Dimensional> delta_list;
    if (auto v = get("delta_list")) {
        for (const auto& item : split(*v, ',')) delta_list.push_back({"delta_list", parse_quantity(item, "delta_list")});
        dims.insert(dims.end(), delta_list.begin(), delta_list.end());
    }
    c.scan_axis = get("scan_axis").value_or("omega");
    if (c.scan_axis != "omega" && c.scan_axis != "delta") throw ConfigError("scan_axis: expected omega or delta");
    std::optional<Dimensional> scan_lo, scan_hi;
    if (auto v = get("scan_min")) scan_lo = Dimensional{"scan_min", parse_quantity(*v, "scan_min")};
    if (auto v = get("scan_max")) scan_hi = Dimensional{"scan_max", parse_quantity(*v, "scan_max")};
    if (scan_lo) dims.push_back(*scan_lo);
    if (scan_hi) dims.push_back(*scan_hi);

    struct RawAxis {
        std::string key, name;
        Dimensional lo, hi;
        int count;
        bool log;
    };
    std::vector<RawAxis> raw_axes;
    for (const char* ak : {"axis1", "axis2"}) {
        auto v = get(ak);
        if (!v) continue;
        const auto w = words(*v);
        if (w.size() < 4 || w.size() > 5) throw ConfigError(std::string(ak) + ": expected 'name min max count [linear|log]'");
        if (!kAxisNames.count(w[0])) throw ConfigError(std::string(ak) + ": cannot sweep '" + w[0] + "'");
        RawAxis ra{ak, w[0], {ak, parse_quantity(w[1], ak)}, {ak, parse_quantity(w[2], ak)}, parse_int(w[3], ak), false};
        if (w.size() == 5) {
            if (w[4] == "log") ra.log = true;
            else if (w[4] != "linear") throw ConfigError(std::string(ak) + ": scale must be linear or log");
        }
        dims.push_back(ra.lo);
        dims.push_back(ra.hi);
        raw_axes.push_back(ra);
    }
    if (get("axis2") && !get("axis1")) throw ConfigError("axis2 given without axis1");

    const bool any_khz = std::any_of(dims.begin(), dims.end(), [](const Dimensional& d) { return d.q.unit == "kHz"; });
    c.units = any_khz ? UnitSystem::laboratory : UnitSystem::model;
    for (const auto& d : dims) require_unit(d, c.units);

    double scale = 1.0;  // kHz per model unit
    if (c.units == UnitSystem::laboratory) {
        if (!params.count("g_x")) throw ConfigError("g_x: laboratory units need g_x in kHz as the energy scale");
        if (!params.count("omega")) throw ConfigError("omega: laboratory units need the trap frequency in kHz");
        scale = params["g_x"].value;
        if (!(scale > 0.0)) throw ConfigError("g_x: must be > 0");
        c.g_x_kHz = scale;
    }
    if (c.units == UnitSystem::model && params.count("g_x") && params["g_x"].value != 1.0) {
        throw ConfigError("g_x: model units are defined by g_x = 1; give laboratory values in kHz instead");
    }
    auto model_value = [&](const Quantity& q) { return q.value / scale; };

    if (params.count("omega")) c.model.omega = model_value(params["omega"]);
    if (params.count("Omega")) c.model.Omega = model_value(params["Omega"]);
    if (params.count("delta")) c.model.delta = model_value(params["delta"]);
    if (params.count("g_k")) c.model.g_k = model_value(params["g_k"]);
    c.model.g_x = 1.0;
    if (params.count("kappa_e")) c.dissipation.kappa_e = model_value(params["kappa_e"]);
    if (params.count("kappa_d")) c.dissipation.kappa_d = model_value(params["kappa_d"]);
    if (params.count("gamma_d")) c.dissipation.gamma_d = model_value(params["gamma_d"]);

    if (auto v = get("phi")) {
        const Quantity q = parse_quantity(*v, "phi");
        if (c.units != UnitSystem::laboratory) throw ConfigError("phi: only valid with laboratory (kHz) units");
        if (!q.unit.empty() && q.unit != "deg") throw ConfigError("phi: expected degrees");
        if (params.count("g_k")) throw ConfigError("phi: give either phi or g_k, not both");
        if (q.value < 0.0 || q.value > 180.0) throw ConfigError("phi: must lie in [0, 180] degrees");
        PhysicalParams p;
        p.phi = q.value * constants::pi / 180.0;
        p.omega_trap = 2.0 * constants::pi * params["omega"].value * 1e3;
        const ModelParams angular = physical_to_model(p);
        c.model.g_k = angular.g_k / (2.0 * constants::pi * 1e3) / scale;
    }

    try {
        c.model.validate();
        c.dissipation.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    if (auto v = get("n_max")) c.n_max = parse_int(*v, "n_max");
    if (c.n_max < 1) throw ConfigError("n_max: must be >= 1");
    if (auto v = get("adaptive_truncation")) c.adaptive = parse_bool(*v, "adaptive_truncation");
    if (auto v = get("workers")) c.workers = parse_int(*v, "workers");
    if (c.workers < 0) throw ConfigError("workers: must be >= 0");
    if (auto v = get("out")) c.out = *v;

    if (scan_lo) c.scan_min = model_value(scan_lo->q);
    if (scan_hi) c.scan_max = model_value(scan_hi->q);
    if (auto v = get("scan_count")) c.scan_count = parse_int(*v, "scan_count");
    if (auto v = get("bind_Omega_to_omega")) c.bind_Omega_to_omega = parse_bool(*v, "bind_Omega_to_omega");
    if (auto v = get("levels")) c.levels = parse_int(*v, "levels");
    if (c.levels < 1) throw ConfigError("levels: must be >= 1");

    if (auto v = get("n_list")) {
        c.n_list.clear();
        for (const auto& item : split(*v, ',')) {
            const int n = parse_int(item, "n_list");
            if (n < 1) throw ConfigError("n_list: orders must be >= 1");
            c.n_list.push_back(n);
        }
        if (c.n_list.empty()) throw ConfigError("n_list: empty list");
    }
    if (!delta_list.empty()) {
        c.delta_list.clear();
        for (const auto& d : delta_list) {
            if (d.q.value < 0.0) throw ConfigError("delta_list: values must be >= 0");
            c.delta_list.push_back(model_value(d.q));
        }
    }
    if (auto v = get("peak_check")) c.peak_check = parse_bool(*v, "peak_check");

    for (const auto& ra : raw_axes) {
        AxisSpec a{ra.name, model_value(ra.lo.q), model_value(ra.hi.q), ra.count, ra.log};
        c.axes.push_back(a);
    }
    if (auto v = get("bind")) c.bindings = split(*v, ',');
    if (auto v = get("bundle_n")) c.bundle_n = parse_int(*v, "bundle_n");
    if (c.bundle_n < 0) throw ConfigError("bundle_n: must be >= 0");

    // Echo in model units.
    auto& e = c.echo;
    e["units"] = c.units == UnitSystem::model ? "model" : "laboratory";
    if (c.units == UnitSystem::laboratory) e["g_x_kHz"] = format_double(c.g_x_kHz);
    e["omega"] = format_double(c.model.omega);
    e["Omega"] = format_double(c.model.Omega);
    e["delta"] = format_double(c.model.delta);
    e["g_x"] = format_double(c.model.g_x);
    e["g_k"] = format_double(c.model.g_k);
    e["kappa_e"] = format_double(c.dissipation.kappa_e);
    e["kappa_d"] = format_double(c.dissipation.kappa_d);
    e["gamma_d"] = format_double(c.dissipation.gamma_d);
    e["n_max"] = std::to_string(c.n_max);
    e["adaptive_truncation"] = c.adaptive ? "true" : "false";
    if (scan_lo) e["scan_min"] = format_double(c.scan_min);
    if (scan_hi) e["scan_max"] = format_double(c.scan_max);
    if (!delta_list.empty()) {
        std::string s;
        for (double d : c.delta_list) s += (s.empty() ? "" : ",") + format_double(d);
        e["delta_list"] = s;
    }
    for (std::size_t i = 0; i < c.axes.size(); ++i) {
        const auto& a = c.axes[i];
        e[raw_axes[i].key] = a.name + " " + format_double(a.min) + " " + format_double(a.max) + " " +
                             std::to_string(a.count) + (a.log_scale ? " log" : " linear");
    }
    for (const auto& [k, v] : kv) {
        if (!e.count(k) && !kDimensionalParams.count(k) && k != "phi" && k != "workers" && k != "out") e[k] = v;
    }
    return c;
}

}  // namespace pbundle
