#include "dickesim/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace dickesim {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

double parse_double(const std::string& text, const std::string& what) {
    try {
        std::size_t pos = 0;
        double v = std::stod(text, &pos);
        if (pos != text.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: cannot parse number '" + text + "' for " + what);
    }
}

std::int64_t parse_int(const std::string& text, const std::string& what) {
    try {
        std::size_t pos = 0;
        long long v = std::stoll(text, &pos);
        if (pos != text.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: cannot parse integer '" + text + "' for " + what);
    }
}

}  // namespace

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str(), path);
}

Config Config::parse_text(const std::string& text, const std::string& origin) {
    Config cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: " + origin + ":" + std::to_string(lineno) +
                              ": expected 'key = value', got '" + line + "'");
        std::string key = lower(trim(line.substr(0, eq)));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("config: " + origin + ":" + std::to_string(lineno) +
                              ": empty key or value");
        if (cfg.values.count(key))
            throw ConfigError("config: " + origin + ":" + std::to_string(lineno) +
                              ": duplicate key '" + key + "'");
        cfg.values[key] = value;
        cfg.lines[key] = lineno;
    }
    return cfg;
}

std::string Config::get(const std::string& key) const {
    auto it = values.find(key);
    if (it == values.end()) throw ConfigError("config: missing required key '" + key + "'");
    return it->second;
}

std::string Config::get_or(const std::string& key, const std::string& fallback) const {
    auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
}

double parse_frequency(const std::string& raw, double g_reference) {
    std::string text = lower(trim(raw));
    // "2pi*<x>mhz" (also accepts kHz/Hz/GHz suffixes)
    if (text.rfind("2pi*", 0) == 0) {
        std::string rest = trim(text.substr(4));
        double unit = 0.0;
        for (auto [suffix, scale] : {std::pair<const char*, double>{"ghz", 1e9},
                                     {"mhz", 1e6},
                                     {"khz", 1e3},
                                     {"hz", 1.0}}) {
            std::string suf(suffix);
            if (rest.size() > suf.size() && rest.compare(rest.size() - suf.size(), suf.size(), suf) == 0) {
                unit = scale;
                rest = trim(rest.substr(0, rest.size() - suf.size()));
                break;
            }
        }
        if (unit == 0.0)
            throw ConfigError("config: frequency '" + raw + "' needs a Hz/kHz/MHz/GHz suffix");
        return 2.0 * M_PI * parse_double(rest, "frequency") * unit;
    }
    // "<x>g": multiples of the coupling rate
    if (text.size() > 1 && text.back() == 'g') {
        if (g_reference == 0.0)
            throw ConfigError("config: '" + raw + "' given in units of g but g is not set");
        return parse_double(trim(text.substr(0, text.size() - 1)), "frequency") * g_reference;
    }
    return parse_double(text, "frequency");
}

double parse_duration(const std::string& raw, double g_reference) {
    std::string text = lower(trim(raw));
    if (text.size() > 2 && text.compare(text.size() - 2, 2, "/g") == 0) {
        if (g_reference == 0.0)
            throw ConfigError("config: '" + raw + "' given in units of 1/g but g is not set");
        return parse_double(trim(text.substr(0, text.size() - 2)), "duration") / g_reference;
    }
    if (text.size() > 2 && text.compare(text.size() - 2, 2, "us") == 0)
        return parse_double(trim(text.substr(0, text.size() - 2)), "duration") * 1e-6;
    if (text.size() > 2 && text.compare(text.size() - 2, 2, "ns") == 0)
        return parse_double(trim(text.substr(0, text.size() - 2)), "duration") * 1e-9;
    return parse_double(text, "duration");
}

ResolvedConfig resolve_config(const Config& config) {
    ResolvedConfig rc;

    double g = config.has("g") ? parse_frequency(config.get("g"), 0.0) : 0.0;
    rc.params.g_L = config.has("g_l") ? parse_frequency(config.get("g_l"), g) : g;
    rc.params.g_R = config.has("g_r") ? parse_frequency(config.get("g_r"), g) : g;
    if (rc.params.g_L == 0.0 && rc.params.g_R == 0.0 && !config.has("g"))
        throw ConfigError("config: missing required key 'g'");

    double kappa = config.has("kappa") ? parse_frequency(config.get("kappa"), g) : 0.0;
    rc.params.kappa_L = config.has("kappa_l") ? parse_frequency(config.get("kappa_l"), g) : kappa;
    rc.params.kappa_R = config.has("kappa_r") ? parse_frequency(config.get("kappa_r"), g) : kappa;

    rc.params.n_atoms = static_cast<int>(parse_int(config.get_or("n", "1"), "n"));
    rc.params.delta_L = parse_frequency(config.get("delta_l"), g);

    rc.basis = lower(config.get_or("basis", "reduced"));
    if (rc.basis != "reduced" && rc.basis != "single" && rc.basis != "ladder" && rc.basis != "full")
        throw ConfigError("config: basis must be reduced|single|ladder|full, got '" + rc.basis + "'");
    rc.ladder_step = static_cast<int>(parse_int(config.get_or("m", "0"), "m"));
    rc.target_m = static_cast<int>(parse_int(config.get_or("target_m", "1"), "target_m"));

    std::string delta_r = lower(config.get_or("delta_r", "auto"));
    if (delta_r == "auto") {
        rc.delta_r_auto = true;
        rc.params.delta_R = rc.params.delta_L;  // placeholder until optimal_detuning runs
    } else {
        rc.params.delta_R = parse_frequency(delta_r, g);
    }

    rc.params.wait_time = config.has("t") ? parse_duration(config.get("t"), g) : 0.0;
    rc.params.gamma_s = config.has("gamma_s") ? parse_frequency(config.get("gamma_s"), g) : 0.0;
    rc.params.detector_efficiency = parse_double(config.get_or("eta", "1"), "eta");

    rc.t_end = config.has("t_end") ? parse_duration(config.get("t_end"), g) : 0.0;
    rc.samples = static_cast<int>(parse_int(config.get_or("samples", "200"), "samples"));
    rc.seed = static_cast<std::uint64_t>(parse_int(config.get_or("seed", "0"), "seed"));
    rc.n_traj = parse_int(config.get_or("n_traj", "10000"), "n_traj");
    rc.sweep_n_traj = parse_int(config.get_or("sweep.n_traj", "0"), "sweep.n_traj");
    rc.max_trials = parse_int(config.get_or("max_trials", "10"), "max_trials");
    rc.jobs = static_cast<int>(parse_int(config.get_or("jobs", "1"), "jobs"));
    rc.hist_bins = static_cast<int>(parse_int(config.get_or("hist_bins", "50"), "hist_bins"));
    rc.emit_events = config.get_or("emit_events", "false") == "true";

    if (config.has("grid.g_over_kappa")) {
        std::istringstream gs(config.get("grid.g_over_kappa"));
        std::string lo, hi, steps;
        if (!std::getline(gs, lo, ',') || !std::getline(gs, hi, ',') || !std::getline(gs, steps, ','))
            throw ConfigError("config: grid.g_over_kappa needs 'min,max,steps'");
        rc.grid.g_over_kappa_min = parse_double(trim(lo), "grid.g_over_kappa");
        rc.grid.g_over_kappa_max = parse_double(trim(hi), "grid.g_over_kappa");
        rc.grid.g_over_kappa_steps = static_cast<int>(parse_int(trim(steps), "grid.g_over_kappa"));
    }
    if (config.has("grid.n")) {
        std::istringstream ns(config.get("grid.n"));
        std::string item;
        while (std::getline(ns, item, ','))
            rc.grid.n_values.push_back(static_cast<int>(parse_int(trim(item), "grid.n")));
    }

    if (config.has("profile.g0")) {
        CouplingProfile profile;
        profile.g0 = parse_frequency(config.get("profile.g0"), g);
        profile.w0 = parse_double(config.get("profile.w0"), "profile.w0");
        profile.wave_number = parse_double(config.get("profile.k"), "profile.k");
        std::istringstream ps(config.get("profile.positions"));
        std::string triple;
        while (std::getline(ps, triple, ';')) {
            std::istringstream ts(triple);
            std::string x, y, z;
            if (!std::getline(ts, x, ',') || !std::getline(ts, y, ',') || !std::getline(ts, z, ','))
                throw ConfigError("config: profile.positions needs 'x,y,z; x,y,z; ...'");
            profile.positions.push_back({parse_double(trim(x), "position"),
                                         parse_double(trim(y), "position"),
                                         parse_double(trim(z), "position")});
        }
        rc.profile = std::move(profile);
    }

    try {
        rc.params.validate();
    } catch (const std::invalid_argument& err) {
        throw ConfigError(std::string("config: ") + err.what());
    }

    rc.resolved_text = config.values;
    return rc;
}

}  // namespace dickesim
