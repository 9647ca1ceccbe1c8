// config.hpp: run configuration from key = value files and flag overrides
//
// File format: one `key = value` per line, `#` starts a comment, blank lines
// ignored, keys are the exact ModelParams / DissipationParams field names plus
// the run keys listed in config.cpp. Unknown or repeated keys are errors.
//
// Units: bare numbers are model units (g_x = 1). Laboratory input marks every
// dimensional value with a `kHz` suffix (frequency / 2pi) and requires g_x in
// kHz; `phi` (degrees) may replace g_k. Mixing the two systems is rejected.

#pragma once

#include "pbundle/dynamics.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pbundle {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class UnitSystem { model, laboratory };

struct AxisSpec {
    std::string name;
    double min{0.0};
    double max{0.0};
    int count{2};
    bool log_scale{false};
};

struct RunConfig {
    ModelParams model{1.0, 1.0, 0.005, 1.0, 1.0};  // single-phonon blockade point
    DissipationParams dissipation;
    UnitSystem units{UnitSystem::model};
    double g_x_kHz{0.0};  // laboratory scale, 0 in model units

    int n_max{20};
    bool adaptive{true};
    int workers{0};
    std::string out;

    // spectrum
    std::string scan_axis{"omega"};
    double scan_min{0.3};
    double scan_max{1.3};
    int scan_count{201};
    bool bind_Omega_to_omega{true};
    int levels{12};

    // correlation / resonances / sweep
    std::vector<int> n_list{1, 2};
    std::vector<double> delta_list{0.0};
    bool peak_check{true};
    std::vector<AxisSpec> axes;
    std::vector<std::string> bindings;  // "target=source"
    int bundle_n{0};                    // 0: no per-point two-time series

    std::map<std::string, std::string> echo;  // resolved key/value pairs
};

// Raw key/value pairs; line numbers appear in error messages.
std::map<std::string, std::string> parse_key_values(const std::string& text, const std::string& origin = "config");
std::map<std::string, std::string> read_config_file(const std::string& path);

// Applies raw pairs (file first, then overrides) and resolves units.
RunConfig resolve_config(const std::map<std::string, std::string>& file_values,
                         const std::map<std::string, std::string>& overrides = {});

// "1.5", "21.6 kHz", "30 deg"
struct Quantity {
    double value{0.0};
    std::string unit;  // "", "kHz" or "deg"
};
Quantity parse_quantity(const std::string& text, const std::string& key);

bool parse_bool(const std::string& text, const std::string& key);

const std::vector<std::string>& known_config_keys();

}  // namespace pbundle
