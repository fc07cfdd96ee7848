#include "debiaskf/config.hpp"

#include <fstream>
#include <sstream>

namespace debiaskf {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
    throw ConfigError(origin + ":" + std::to_string(line) + ": " + msg);
}

std::vector<double> parse_numbers(const std::string& origin, int line, const std::string& value) {
    std::istringstream is(value);
    std::vector<double> out;
    double x;
    while (is >> x) out.push_back(x);
    std::string rest;
    if (is.fail() && !is.eof()) fail(origin, line, "expected numbers, got '" + value + "'");
    return out;
}

double parse_one(const std::string& origin, int line, const std::string& value) {
    const auto xs = parse_numbers(origin, line, value);
    if (xs.size() != 1) fail(origin, line, "expected one number, got '" + value + "'");
    return xs[0];
}

Vec to_vec(const std::vector<double>& xs) {
    Vec v(static_cast<int>(xs.size()));
    for (size_t i = 0; i < xs.size(); ++i) v[static_cast<int>(i)] = xs[i];
    return v;
}

}  // namespace

ScenarioConfig parse_config_text(const std::string& text, const std::string& origin) {
    ScenarioConfig cfg;
    cfg.geometry = Geometry{};
    cfg.target_pos.clear();
    cfg.target_vel.clear();

    bool saw_receiver = false;
    std::istringstream is(text);
    std::string raw;
    int line = 0;
    while (std::getline(is, raw)) {
        ++line;
        std::string s = raw;
        const auto hash = s.find('#');
        if (hash != std::string::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos) fail(origin, line, "expected 'key = value'");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (value.empty()) fail(origin, line, "empty value for '" + key + "'");

        if (key == "dynamic_model") {
            cfg.dynamic_model = value;
        } else if (key == "duration_s") {
            cfg.duration_s = parse_one(origin, line, value);
        } else if (key == "dt_s") {
            cfg.dt_s = parse_one(origin, line, value);
        } else if (key == "sigma_range_m") {
            cfg.sigma_range = parse_one(origin, line, value);
        } else if (key == "sigma_vel_mps") {
            cfg.sigma_vel = parse_one(origin, line, value);
        } else if (key == "sigma_bias_m") {
            cfg.sigma_bias = parse_one(origin, line, value);
        } else if (key == "sigma_accel_mps2") {
            cfg.sigma_accel = parse_one(origin, line, value);
        } else if (key == "init_accel_sigma_mps2") {
            cfg.init_accel_sigma = parse_one(origin, line, value);
        } else if (key == "n_monte_carlo") {
            cfg.n_monte_carlo = static_cast<int>(parse_one(origin, line, value));
        } else if (key == "seed") {
            cfg.seed = static_cast<std::uint64_t>(parse_one(origin, line, value));
        } else if (key == "receiver") {
            cfg.geometry.receiver = to_vec(parse_numbers(origin, line, value));
            saw_receiver = true;
        } else if (key == "transmitter") {
            cfg.geometry.transmitters.push_back(to_vec(parse_numbers(origin, line, value)));
        } else if (key == "target") {
            const auto xs = parse_numbers(origin, line, value);
            if (xs.size() % 2 != 0 || xs.empty())
                fail(origin, line, "target needs position then velocity, same dimensionality");
            const size_t d = xs.size() / 2;
            cfg.target_pos.push_back(to_vec({xs.begin(), xs.begin() + static_cast<long>(d)}));
            cfg.target_vel.push_back(to_vec({xs.begin() + static_cast<long>(d), xs.end()}));
        } else {
            fail(origin, line, "unknown key '" + key + "'");
        }
    }
    if (!saw_receiver) throw ConfigError(origin + ": missing required key 'receiver'");
    if (cfg.geometry.transmitters.empty())
        throw ConfigError(origin + ": missing required key 'transmitter'");
    if (cfg.target_pos.empty()) throw ConfigError(origin + ": missing required key 'target'");
    try {
        cfg.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    return cfg;
}

ScenarioConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

}  // namespace debiaskf
