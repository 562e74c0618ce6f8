#ifndef DICKESIM_CONFIG_HPP
#define DICKESIM_CONFIG_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dickesim/params.hpp"

namespace dickesim {

/// Config parse/validation failure with line/key diagnostics.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Line-based "key = value" text. '#' starts a comment. Frequencies accept
// plain rad/s, "2pi*<x>MHz", or "<x>g" (multiples of the coupling g);
// durations accept seconds or "<x>/g". "delta_R = auto" selects the optimal
// detuning for the configured ladder step.
struct Config {
    std::map<std::string, std::string> values;   // normalized key -> raw value
    std::map<std::string, int> lines;            // key -> line number (diagnostics)

    static Config parse_file(const std::string& path);
    static Config parse_text(const std::string& text, const std::string& origin = "<string>");

    bool has(const std::string& key) const { return values.count(key) > 0; }
    std::string get(const std::string& key) const;
    std::string get_or(const std::string& key, const std::string& fallback) const;
};

struct SweepGrid {
    double g_over_kappa_min = 0.0;
    double g_over_kappa_max = 0.0;
    int g_over_kappa_steps = 0;
    std::vector<int> n_values;
};

/// Everything a CLI command needs, with all units normalized to rad/s and s.
struct ResolvedConfig {
    SystemParams params;
    bool delta_r_auto = false;
    std::string basis = "reduced";   // reduced | single | ladder | full
    int ladder_step = 0;             // m, for basis = ladder
    double t_end = 0.0;              // evolve horizon (s); 0 = detection horizon
    int samples = 200;               // evolve CSV rows
    std::uint64_t seed = 0;
    std::int64_t n_traj = 10000;
    std::int64_t sweep_n_traj = 0;   // 0 = closed form only
    std::int64_t max_trials = 10;
    int target_m = 1;
    int jobs = 1;
    int hist_bins = 50;
    bool emit_events = false;
    std::optional<CouplingProfile> profile;
    std::map<std::string, std::string> resolved_text;  // metadata block
    SweepGrid grid;
};

ResolvedConfig resolve_config(const Config& config);

// Unit parsing helpers (exposed for tests).
double parse_frequency(const std::string& text, double g_reference);
double parse_duration(const std::string& text, double g_reference);

}  // namespace dickesim

#endif
