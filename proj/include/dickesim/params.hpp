#ifndef DICKESIM_PARAMS_HPP
#define DICKESIM_PARAMS_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace dickesim {

/// Physical parameters of the driven bimodal-cavity system.
/// All rates and detunings are angular frequencies in rad/s.
struct SystemParams {
    double g_L = 0.0;
    double g_R = 0.0;
    double kappa_L = 0.0;
    double kappa_R = 0.0;
    double delta_L = 0.0;
    double delta_R = 0.0;
    int n_atoms = 1;
    double wait_time = 0.0;            // detector waiting time T (s)
    double gamma_s = 0.0;              // atomic spontaneous emission rate
    double detector_efficiency = 1.0;  // eta, per detector

    // Convenience for the uniform-coupling case g_R = g_L = g.
    double g() const { return g_L; }
    bool uniform_g() const { return g_L == g_R; }

    // True when |delta| >= ratio * g for both modes (adiabatic-elimination regime).
    bool strongly_detuned(double ratio = 10.0) const {
        double gmax = std::max(g_L, g_R);
        return std::abs(delta_L) >= ratio * gmax && std::abs(delta_R) >= ratio * gmax;
    }

    // Throws std::invalid_argument on hard violations. Returns a list of
    // soft warnings (e.g. weak detuning) instead of rejecting them.
    std::vector<std::string> validate() const {
        if (g_L < 0 || g_R < 0 || kappa_L < 0 || kappa_R < 0 || gamma_s < 0)
            throw std::invalid_argument("SystemParams: rates must be non-negative");
        if (n_atoms < 1)
            throw std::invalid_argument("SystemParams: n_atoms must be >= 1");
        if (detector_efficiency < 0.0 || detector_efficiency > 1.0)
            throw std::invalid_argument("SystemParams: detector_efficiency must lie in [0,1]");
        if (wait_time < 0.0)
            throw std::invalid_argument("SystemParams: wait_time must be >= 0");
        std::vector<std::string> warnings;
        if (!strongly_detuned())
            warnings.push_back("detuning/coupling ratio below 10: adiabatic elimination is inaccurate");
        return warnings;
    }
};

/// Gaussian cavity-mode profile determining per-atom couplings.
struct CouplingProfile {
    double g0 = 0.0;           // peak coupling rate (rad/s)
    double w0 = 0.0;           // mode waist (m)
    double wave_number = 0.0;  // k = 2*pi/lambda (1/m)
    struct Position { double x, y, z; };
    std::vector<Position> positions;
};

/// chi(r) = sin(k z) exp(-(x^2+y^2)/w0^2), coupling g0 * chi(r).
inline double mode_coupling(const CouplingProfile& profile, std::size_t atom_index) {
    if (atom_index >= profile.positions.size())
        throw std::out_of_range("mode_coupling: atom_index out of range");
    const auto& p = profile.positions[atom_index];
    double chi = std::sin(profile.wave_number * p.z) *
                 std::exp(-(p.x * p.x + p.y * p.y) / (profile.w0 * profile.w0));
    return profile.g0 * chi;
}

}  // namespace dickesim

#endif
