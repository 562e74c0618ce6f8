#ifndef DICKESIM_TRAJECTORY_HPP
#define DICKESIM_TRAJECTORY_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "dickesim/analysis.hpp"
#include "dickesim/dynamics.hpp"
#include "dickesim/rng.hpp"

namespace dickesim {

struct DetectionEvent {
    double time = 0.0;
    int detector = 0;  // 0 = D0 (a_L), 1 = D1 (a_R)
    std::int64_t trial_index = 0;
    int ladder_step = 0;
};

enum class Terminal { D0Click, D1Click, Timeout };

struct TrialOutcome {
    Terminal terminal = Terminal::Timeout;
    std::optional<DetectionEvent> event;
    // Normalized collapsed state after a click; the unnormalized conditional
    // state at the horizon (or at an unobserved loss) otherwise.
    StateVector post_state;
};

struct ProtocolResult {
    bool success = false;
    std::vector<std::int64_t> trials_used;  // one entry per ladder step
    double elapsed_time = 0.0;              // total simulated time across trials
    StateVector final_state;
    std::uint64_t rng_seed = 0;
    std::vector<DetectionEvent> events;
};

/// Eq.-11 collapse: C_k|psi> / ||C_k|psi>||, expressed in the channel's
/// post-jump labelled basis. Throws std::logic_error on zero-norm collapse.
StateVector apply_jump(const StateVector& psi, const JumpChannel& channel);

// Waiting-time sampler over a fixed (H, psi0, T_max). The conditional
// no-click trajectory does not depend on the random draws, so it is
// integrated once on construction and shared by all trials.
class TrialSampler {
public:
    TrialSampler(const EffectiveHamiltonian& hamiltonian, const StateVector& psi0, double t_max,
                 double detector_efficiency = 1.0, const IntegratorControls& controls = {});

    TrialOutcome sample(TrialRng& rng) const;
    double t_max() const { return evolution_.t_end(); }
    const ConditionalEvolution& evolution() const { return evolution_; }

private:
    EffectiveHamiltonian hamiltonian_;
    ConditionalEvolution evolution_;
    double efficiency_;
};

/// One-shot convenience wrapper around TrialSampler.
TrialOutcome sample_trial(const EffectiveHamiltonian& hamiltonian, const StateVector& psi0,
                          double t_max, TrialRng& rng, double detector_efficiency = 1.0,
                          const IntegratorControls& controls = {});

/// max(wait_time, 10/kappa): horizon after which an undetected photon is
/// negligible (e^-10) and the trial is scored as a timeout.
double detection_horizon(const SystemParams& params);

// W-state preparation loop: reinject |0..0>|L>, wait for a click, retry on D0
// or timeout, succeed on D1.
class ProtocolRunner {
public:
    ProtocolRunner(const SystemParams& params, std::int64_t max_trials,
                   const IntegratorControls& controls = {});
    ProtocolResult run(std::uint64_t seed, std::uint64_t run_index = 0) const;

private:
    std::int64_t max_trials_;
    TrialSampler sampler_;
};

ProtocolResult run_protocol(const SystemParams& params, std::int64_t max_trials,
                            std::uint64_t seed, std::uint64_t run_index = 0);

// Dicke-ladder preparation |n,0> -> |n,1> -> ... -> |n,target_m>, retuning
// delta_R per step; a D0 click inside step m only repeats that step.
class LadderRunner {
public:
    LadderRunner(const SystemParams& params, int target_m, std::int64_t max_trials_per_step,
                 const IntegratorControls& controls = {});
    ProtocolResult run(std::uint64_t seed, std::uint64_t run_index = 0) const;
    const TrialSampler& step_sampler(int m) const { return samplers_.at(static_cast<std::size_t>(m)); }
    int target_m() const { return target_m_; }

private:
    int n_;
    int target_m_;
    std::int64_t max_trials_per_step_;
    std::vector<TrialSampler> samplers_;
};

ProtocolResult run_ladder(const SystemParams& params, int target_m,
                          std::int64_t max_trials_per_step, std::uint64_t seed,
                          std::uint64_t run_index = 0);

struct SuccessEstimate {
    double p_hat = 0.0;
    double stderr_ = 0.0;
    std::int64_t n_traj = 0;
    std::uint64_t seed = 0;
    std::int64_t d0_clicks = 0;
    std::int64_t d1_clicks = 0;
    std::int64_t timeouts = 0;
    double hist_bin_width = 0.0;
    std::vector<std::int64_t> d1_click_histogram;
    std::vector<DetectionEvent> events;  // observed clicks, in trial order (opt-in)
};

// Batched Monte Carlo estimate of the single-trial success probability, with
// a fixed-bin-width histogram of D1 click times. Deterministic for a fixed
// seed independent of the number of worker threads.
SuccessEstimate estimate_success(const SystemParams& params, std::int64_t n_traj,
                                 std::uint64_t seed, int jobs = 1, int hist_bins = 50,
                                 const IntegratorControls& controls = {},
                                 bool record_events = false);

/// Same estimator over a caller-supplied sampler (used for ladder steps).
SuccessEstimate estimate_success(const TrialSampler& sampler, std::int64_t n_traj,
                                 std::uint64_t seed, int jobs = 1, int hist_bins = 50,
                                 bool record_events = false);

}  // namespace dickesim

#endif
