#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "dickesim/commands.hpp"

namespace {

// Exit codes: 0 success, 2 config error, 3 numerical failure, 4 protocol
// failure (trial budget exhausted).

struct CliOptions {
    std::string config_path;
    std::string out_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int jobs = 0;
};

int write_result(const dickesim::CommandResult& result, const CliOptions& opts) {
    if (opts.out_path.empty()) {
        std::cout << result.text;
        if (!result.aux_text.empty()) std::cout << result.aux_text;
    } else {
        std::ofstream out(opts.out_path, std::ios::binary);
        if (!out) {
            std::cerr << "error: cannot write " << opts.out_path << "\n";
            return 3;
        }
        out << result.text;
        if (!result.aux_text.empty()) {
            std::ofstream aux(opts.out_path + result.aux_suffix, std::ios::binary);
            if (!aux) {
                std::cerr << "error: cannot write " << opts.out_path << result.aux_suffix << "\n";
                return 3;
            }
            aux << result.aux_text;
        }
    }
    return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Heralded Dicke-state preparation in a leaky bimodal cavity"};
    app.require_subcommand(1);

    CliOptions opts;
    std::string command;
    for (const char* name : {"analytic", "evolve", "trajectories", "sweep", "ladder"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", opts.config_path, "key = value config file")->required();
        sub->add_option("--out", opts.out_path, "output file (stdout if omitted)");
        auto* seed_opt = sub->add_option("--seed", opts.seed, "RNG seed (overrides config)");
        sub->add_option("--jobs", opts.jobs, "worker threads (overrides config)");
        sub->callback([&, name, seed_opt] {
            command = name;
            opts.seed_set = seed_opt->count() > 0;
        });
    }

    CLI11_PARSE(app, argc, argv);

    try {
        auto config = dickesim::Config::parse_file(opts.config_path);
        auto resolved = dickesim::resolve_config(config);
        if (opts.seed_set) {
            resolved.seed = opts.seed;
            resolved.resolved_text["seed"] = std::to_string(opts.seed);
        }
        if (opts.jobs > 0) resolved.jobs = opts.jobs;

        dickesim::CommandResult result;
        if (command == "analytic")
            result = dickesim::cmd_analytic(resolved);
        else if (command == "evolve")
            result = dickesim::cmd_evolve(resolved);
        else if (command == "trajectories")
            result = dickesim::cmd_trajectories(resolved);
        else if (command == "sweep")
            result = dickesim::cmd_sweep(resolved);
        else
            result = dickesim::cmd_ladder(resolved);
        return write_result(result, opts);
    } catch (const dickesim::ConfigError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 3;
    }
}
