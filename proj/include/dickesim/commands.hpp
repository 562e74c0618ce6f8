#ifndef DICKESIM_COMMANDS_HPP
#define DICKESIM_COMMANDS_HPP

#include <string>

#include "dickesim/config.hpp"
#include "dickesim/integrator.hpp"

namespace dickesim {

// Output of one CLI subcommand. `text` is the primary document (JSON with
// stable key order, or CSV with a '#'-commented metadata block). Commands
// that produce a companion file (the per-event CSV of `trajectories`) put it
// in `aux_text`; the driver appends `aux_suffix` to the output path for it.
struct CommandResult {
    std::string text;
    std::string aux_text;
    std::string aux_suffix;
    int exit_code = 0;
};

CommandResult cmd_analytic(const ResolvedConfig& config);
CommandResult cmd_evolve(const ResolvedConfig& config, const IntegratorControls& controls = {});
CommandResult cmd_trajectories(const ResolvedConfig& config, const IntegratorControls& controls = {});
CommandResult cmd_sweep(const ResolvedConfig& config, const IntegratorControls& controls = {});
CommandResult cmd_ladder(const ResolvedConfig& config, const IntegratorControls& controls = {});

}  // namespace dickesim

#endif
