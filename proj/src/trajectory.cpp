#include "dickesim/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <thread>

namespace dickesim {

namespace {

using cplx = std::complex<double>;

constexpr double kJumpTimeTolFactor = 1e-9;  // root-finding accuracy, fraction of T_max

}  // namespace

StateVector apply_jump(const StateVector& psi, const JumpChannel& channel) {
    if (!channel.collapsible())
        throw std::logic_error("apply_jump: channel " + channel.name + " has no collapsed basis");
    if (channel.action.size() != static_cast<std::size_t>(psi.amplitudes.size()))
        throw std::invalid_argument("apply_jump: channel/state dimension mismatch");

    std::map<std::string, cplx> collapsed;
    for (std::size_t i = 0; i < channel.action.size(); ++i)
        for (const auto& [label, amp] : channel.action[i])
            collapsed[label] += amp * psi.amplitudes(static_cast<Eigen::Index>(i));

    double norm_sq = 0.0;
    for (const auto& [label, amp] : collapsed) norm_sq += std::norm(amp);
    if (norm_sq <= 0.0)
        throw std::logic_error("apply_jump: channel " + channel.name +
                               " annihilates the state (zero-norm collapse)");

    std::vector<std::string> labels;
    labels.reserve(collapsed.size());
    for (const auto& [label, amp] : collapsed) labels.push_back(label);
    auto basis = build_basis(AtomicStrings{psi.basis->n_atoms()}, labels);
    StateVector out{basis, Eigen::VectorXcd::Zero(basis->dim())};
    double scale = 1.0 / std::sqrt(norm_sq);
    for (const auto& [label, amp] : collapsed)
        out.amplitudes(basis->require_index(label)) = amp * scale;
    return out;
}

TrialSampler::TrialSampler(const EffectiveHamiltonian& hamiltonian, const StateVector& psi0,
                           double t_max, double detector_efficiency,
                           const IntegratorControls& controls)
    : hamiltonian_(hamiltonian),
      evolution_(hamiltonian, psi0, t_max, controls),
      efficiency_(detector_efficiency) {
    if (detector_efficiency < 0.0 || detector_efficiency > 1.0)
        throw std::invalid_argument("TrialSampler: detector efficiency must lie in [0,1]");
}

TrialOutcome TrialSampler::sample(TrialRng& rng) const {
    TrialOutcome outcome;
    double u = rng.uniform_open_left();
    auto t_click = evolution_.dense().find_norm_crossing(u, kJumpTimeTolFactor * t_max());
    if (!t_click) {
        outcome.terminal = Terminal::Timeout;
        outcome.post_state = evolution_.state_at(t_max());
        return outcome;
    }

    StateVector at_click = evolution_.state_at(*t_click);
    std::vector<double> weights;
    double total = 0.0;
    for (const auto& ch : hamiltonian_.channels) {
        double w = 0.0;
        for (int i = 0; i < hamiltonian_.dim(); ++i)
            w += ch.occupation(i) * std::norm(at_click.amplitudes(i));
        w *= ch.rate;
        weights.push_back(w);
        total += w;
    }
    if (total <= 0.0)
        throw std::runtime_error("TrialSampler: norm crossed with zero total click density");

    double pick = rng.uniform() * total;
    std::size_t k = 0;
    for (; k + 1 < weights.size(); ++k) {
        if (pick < weights[k]) break;
        pick -= weights[k];
    }
    const JumpChannel& channel = hamiltonian_.channels[k];

    // Unobserved losses: a gamma_s event, or a photon the detector misses.
    bool observed = channel.detector.has_value() &&
                    (efficiency_ >= 1.0 || rng.uniform() < efficiency_);
    if (!observed) {
        outcome.terminal = Terminal::Timeout;
        outcome.post_state = at_click;
        return outcome;
    }

    outcome.terminal = (*channel.detector == 1) ? Terminal::D1Click : Terminal::D0Click;
    outcome.event = DetectionEvent{*t_click, *channel.detector, 0, 0};
    outcome.post_state = apply_jump(at_click, channel);
    return outcome;
}

TrialOutcome sample_trial(const EffectiveHamiltonian& hamiltonian, const StateVector& psi0,
                          double t_max, TrialRng& rng, double detector_efficiency,
                          const IntegratorControls& controls) {
    TrialSampler sampler(hamiltonian, psi0, t_max, detector_efficiency, controls);
    return sampler.sample(rng);
}

double detection_horizon(const SystemParams& params) {
    double kappa = 0.0;
    if (params.kappa_L > 0.0 && params.kappa_R > 0.0)
        kappa = std::min(params.kappa_L, params.kappa_R);
    else
        kappa = std::max(params.kappa_L, params.kappa_R);
    double horizon = params.wait_time;
    if (kappa > 0.0) horizon = std::max(horizon, 10.0 / kappa);
    if (horizon <= 0.0)
        throw std::invalid_argument("detection_horizon: need wait_time > 0 or kappa > 0");
    return horizon;
}

ProtocolRunner::ProtocolRunner(const SystemParams& params, std::int64_t max_trials,
                               const IntegratorControls& controls)
    : max_trials_(max_trials),
      sampler_(
          [&] {
              auto basis = build_basis(ReducedSymmetric{params.n_atoms});
              return build_hamiltonian(params, basis);
          }(),
          basis_state(build_basis(ReducedSymmetric{params.n_atoms}), 0), detection_horizon(params),
          params.detector_efficiency, controls) {
    if (max_trials < 1) throw std::invalid_argument("ProtocolRunner: max_trials must be >= 1");
}

ProtocolResult ProtocolRunner::run(std::uint64_t seed, std::uint64_t run_index) const {
    TrialRng rng(seed, run_index);
    ProtocolResult result;
    result.rng_seed = seed;
    result.trials_used = {0};
    for (std::int64_t trial = 0; trial < max_trials_; ++trial) {
        ++result.trials_used[0];
        TrialOutcome outcome = sampler_.sample(rng);
        double elapsed = outcome.event ? outcome.event->time : sampler_.t_max();
        result.elapsed_time += elapsed;
        if (outcome.event) {
            DetectionEvent ev = *outcome.event;
            ev.trial_index = trial;
            result.events.push_back(ev);
        }
        if (outcome.terminal == Terminal::D1Click) {
            result.success = true;
            result.final_state = outcome.post_state;
            return result;
        }
        // D0 click or timeout: atoms back in the ground state, reinject.
    }
    // budget exhausted: atoms left in the ground state
    result.final_state = dicke_state(sampler_.evolution().basis()->n_atoms(), 0);
    return result;
}

ProtocolResult run_protocol(const SystemParams& params, std::int64_t max_trials,
                            std::uint64_t seed, std::uint64_t run_index) {
    return ProtocolRunner(params, max_trials).run(seed, run_index);
}

LadderRunner::LadderRunner(const SystemParams& params, int target_m,
                           std::int64_t max_trials_per_step, const IntegratorControls& controls)
    : n_(params.n_atoms), target_m_(target_m), max_trials_per_step_(max_trials_per_step) {
    if (target_m < 1 || target_m > params.n_atoms)
        throw std::invalid_argument("LadderRunner: need 1 <= target_m <= n");
    if (max_trials_per_step < 1)
        throw std::invalid_argument("LadderRunner: max_trials_per_step must be >= 1");
    if (!params.uniform_g())
        throw std::invalid_argument("LadderRunner: ladder steps require uniform couplings");
    samplers_.reserve(static_cast<std::size_t>(target_m));
    for (int m = 0; m < target_m; ++m) {
        SystemParams step = params;
        step.delta_R = optimal_detuning(params, m);
        auto basis = build_basis(SymmetricLadder{params.n_atoms, m});
        samplers_.emplace_back(build_hamiltonian(step, basis), basis_state(basis, 0),
                               detection_horizon(step), params.detector_efficiency, controls);
    }
}

ProtocolResult LadderRunner::run(std::uint64_t seed, std::uint64_t run_index) const {
    TrialRng rng(seed, run_index);
    ProtocolResult result;
    result.rng_seed = seed;
    for (int m = 0; m < target_m_; ++m) {
        const TrialSampler& sampler = samplers_[static_cast<std::size_t>(m)];
        result.trials_used.push_back(0);
        bool advanced = false;
        for (std::int64_t trial = 0; trial < max_trials_per_step_; ++trial) {
            ++result.trials_used.back();
            TrialOutcome outcome = sampler.sample(rng);
            result.elapsed_time += outcome.event ? outcome.event->time : sampler.t_max();
            if (outcome.event) {
                DetectionEvent ev = *outcome.event;
                ev.trial_index = trial;
                ev.ladder_step = m;
                result.events.push_back(ev);
            }
            if (outcome.terminal == Terminal::D1Click) {
                result.final_state = outcome.post_state;
                advanced = true;
                break;
            }
            // D0 returns the atoms to |n,m>; timeout discards the photon.
            // Either way the same step restarts with a fresh injection.
        }
        if (!advanced) {
            result.success = false;
            result.final_state = dicke_state(n_, m);  // highest rung reached
            return result;
        }
    }
    result.success = true;
    return result;
}

ProtocolResult run_ladder(const SystemParams& params, int target_m,
                          std::int64_t max_trials_per_step, std::uint64_t seed,
                          std::uint64_t run_index) {
    return LadderRunner(params, target_m, max_trials_per_step).run(seed, run_index);
}

SuccessEstimate estimate_success(const SystemParams& params, std::int64_t n_traj,
                                 std::uint64_t seed, int jobs, int hist_bins,
                                 const IntegratorControls& controls, bool record_events) {
    auto basis = build_basis(ReducedSymmetric{params.n_atoms});
    TrialSampler sampler(build_hamiltonian(params, basis), basis_state(basis, 0),
                         detection_horizon(params), params.detector_efficiency, controls);
    return estimate_success(sampler, n_traj, seed, jobs, hist_bins, record_events);
}

SuccessEstimate estimate_success(const TrialSampler& sampler, std::int64_t n_traj,
                                 std::uint64_t seed, int jobs, int hist_bins, bool record_events) {
    if (n_traj < 1) throw std::invalid_argument("estimate_success: n_traj must be >= 1");
    if (hist_bins < 1) throw std::invalid_argument("estimate_success: hist_bins must be >= 1");
    jobs = std::max(1, jobs);

    SuccessEstimate est;
    est.n_traj = n_traj;
    est.seed = seed;
    est.hist_bin_width = sampler.t_max() / hist_bins;
    est.d1_click_histogram.assign(static_cast<std::size_t>(hist_bins), 0);

    struct Partial {
        std::int64_t d0 = 0, d1 = 0, timeout = 0;
        std::vector<std::int64_t> hist;
        std::vector<DetectionEvent> events;
    };
    auto worker = [&](std::int64_t begin, std::int64_t end, Partial& out) {
        out.hist.assign(static_cast<std::size_t>(hist_bins), 0);
        for (std::int64_t i = begin; i < end; ++i) {
            TrialRng rng(seed, static_cast<std::uint64_t>(i));
            TrialOutcome outcome = sampler.sample(rng);
            if (record_events && outcome.event) {
                DetectionEvent ev = *outcome.event;
                ev.trial_index = i;
                out.events.push_back(ev);
            }
            switch (outcome.terminal) {
                case Terminal::D0Click: ++out.d0; break;
                case Terminal::Timeout: ++out.timeout; break;
                case Terminal::D1Click: {
                    ++out.d1;
                    auto bin = static_cast<std::size_t>(
                        std::min<double>(hist_bins - 1.0, outcome.event->time / est.hist_bin_width));
                    ++out.hist[bin];
                    break;
                }
            }
        }
    };

    std::vector<Partial> partials(static_cast<std::size_t>(jobs));
    if (jobs == 1) {
        worker(0, n_traj, partials[0]);
    } else {
        std::vector<std::thread> threads;
        std::int64_t chunk = (n_traj + jobs - 1) / jobs;
        for (int j = 0; j < jobs; ++j) {
            std::int64_t begin = j * chunk;
            std::int64_t end = std::min<std::int64_t>(n_traj, begin + chunk);
            if (begin >= end) break;
            threads.emplace_back(worker, begin, end, std::ref(partials[static_cast<std::size_t>(j)]));
        }
        for (auto& th : threads) th.join();
    }

    // Integer merges commute, so the reduction is thread-count independent.
    for (const auto& p : partials) {
        if (p.hist.empty()) continue;
        est.d0_clicks += p.d0;
        est.d1_clicks += p.d1;
        est.timeouts += p.timeout;
        for (std::size_t b = 0; b < p.hist.size(); ++b) est.d1_click_histogram[b] += p.hist[b];
        est.events.insert(est.events.end(), p.events.begin(), p.events.end());
    }
    est.p_hat = static_cast<double>(est.d1_clicks) / static_cast<double>(n_traj);
    est.stderr_ = std::sqrt(std::max(0.0, est.p_hat * (1.0 - est.p_hat) / static_cast<double>(n_traj)));
    return est;
}

}  // namespace dickesim
