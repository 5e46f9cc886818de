#pragma once

#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include "aerocov/netmodel.hpp"

namespace aerocov {

inline constexpr const char* kToolVersion = "aerocov 1.0.0";

namespace config_detail {

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

struct KeyValues {
    std::map<std::string, std::string> kv;  // "section.key" -> raw value
    std::set<std::string> consumed;

    double number(const std::string& key, bool allow_inf = false) {
        auto it = kv.find(key);
        if (it == kv.end()) throw std::invalid_argument("config: missing key: " + key);
        consumed.insert(key);
        const std::string v = it->second;
        if (v == "inf" || v == "+inf" || v == "infinity") {
            if (!allow_inf)
                throw std::invalid_argument("config: key " + key + " must be finite");
            return std::numeric_limits<double>::infinity();
        }
        std::size_t pos = 0;
        double out;
        try {
            out = std::stod(v, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument("config: key " + key + " is not a number: " + v);
        }
        if (pos != v.size())
            throw std::invalid_argument("config: trailing characters on key " + key + ": " + v);
        return out;
    }

    bool has(const std::string& key) const { return kv.count(key) != 0; }

    /// Reads `key` or its dB-suffixed twin (converted to linear), exactly one
    /// of which must be present.
    double linear_or_db(const std::string& key, bool allow_inf) {
        const std::string dbkey = key + "_db";
        const bool a = has(key), b = has(dbkey);
        if (a && b)
            throw std::invalid_argument("config: both " + key + " and " + dbkey + " given");
        if (!a && !b) throw std::invalid_argument("config: missing key: " + key + " (or " + dbkey + ")");
        if (a) return number(key, allow_inf);
        const double db = number(dbkey, allow_inf);
        return std::isinf(db) ? db : db_to_linear(db);
    }

    int integer(const std::string& key) {
        const double v = number(key);
        const double r = std::round(v);
        if (std::abs(v - r) > 1e-9 || r < -2e9 || r > 2e9)
            throw std::invalid_argument("config: key " + key + " must be an integer");
        return static_cast<int>(r);
    }
};

inline KeyValues parse_ini(std::istream& in) {
    KeyValues out;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument("config: malformed section header at line " +
                                            std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: expected key = value at line " +
                                        std::to_string(lineno));
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty())
            throw std::invalid_argument("config: empty key or value at line " +
                                        std::to_string(lineno));
        const std::string full = section.empty() ? key : section + "." + key;
        if (out.kv.count(full))
            throw std::invalid_argument("config: duplicate key: " + full);
        out.kv[full] = val;
    }
    return out;
}

inline TierRadio read_tier(KeyValues& kv, const std::string& section) {
    TierRadio t;
    t.tx_power = kv.number(section + ".tx_power");
    t.alpha = kv.number(section + ".alpha");
    t.psi_los = kv.linear_or_db(section + ".psi_los", false);
    t.psi_nlos = kv.linear_or_db(section + ".psi_nlos", true);
    t.n_antennas = kv.integer(section + ".n_antennas");
    return t;
}

}  // namespace config_detail

inline NetworkConfig load_config(std::istream& in) {
    using namespace config_detail;
    KeyValues kv = parse_ini(in);
    NetworkConfig cfg;
    cfg.lambda_g = kv.number("lambda_g");
    cfg.lambda_u = kv.number("lambda_u");
    cfg.beta = kv.number("beta");
    cfg.noise_uav = kv.number("noise_uav");
    cfg.ground = read_tier(kv, "ground");
    cfg.uav = read_tier(kv, "uav");
    cfg.pattern.theta0 = kv.number("pattern.theta0");
    cfg.pattern.phi0 = kv.number("pattern.phi0");
    cfg.pattern.delta_m = kv.number("pattern.delta_m");
    cfg.pattern.delta_s = kv.number("pattern.delta_s");
    cfg.placement.h_o = kv.number("placement.h_o");
    cfg.placement.nu = kv.number("placement.nu");
    cfg.placement.h_max = kv.number("placement.h_max");
    cfg.env.c1 = kv.number("env.c1");
    cfg.env.c2 = kv.number("env.c2");
    for (const auto& [key, value] : kv.kv)
        if (!kv.consumed.count(key))
            throw std::invalid_argument("config: unknown key: " + key);
    validate(cfg);
    return cfg;
}

inline NetworkConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open file: " + path);
    return load_config(in);
}

/// Contents of the bundled default configuration (configs/table1.conf): the
/// simulation parameter set the acceptance datasets are generated from. The
/// UAV NLoS intercept is the measured 100 dB; analytic paths substitute the
/// infinity sentinel through analytic_view().
inline const char* table1_config_text() {
    return R"(# Two-tier (UHF ground + mmWave UAV) network defaults.

lambda_g = 1e-6
lambda_u = 6e-5
beta = 1.0
noise_uav = 0.0

[ground]
tx_power = 25.0
alpha = 4.0
psi_los_db = 37.2
psi_nlos_db = 38.7
n_antennas = 16

[uav]
tx_power = 2.0
alpha = 2.5
psi_los_db = 61.4
psi_nlos_db = 100.0
n_antennas = 8

[pattern]
theta0 = 2.0943951023931953  # 2 pi / 3
phi0 = 1.0471975511965976    # pi / 3
delta_m = 1.0
delta_s = 0.1

[placement]
h_o = 40.0
nu = 0.0
h_max = 200.0

[env]
c1 = 0.43
c2 = 4.88
)";
}

inline NetworkConfig table1_config() {
    std::istringstream in(table1_config_text());
    return load_config(in);
}

}  // namespace aerocov
