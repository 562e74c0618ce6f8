#include "dickesim/analytic.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace dickesim {

namespace {

using cplx = std::complex<double>;

void require_uniform(const SystemParams& params) {
    if (params.g_L != params.g_R)
        throw std::invalid_argument("analytic: closed forms assume uniform g (g_R = g_L)");
    if (params.kappa_L != params.kappa_R)
        throw std::invalid_argument("analytic: closed forms assume kappa_L = kappa_R");
    if (params.delta_L == 0.0)
        throw std::invalid_argument("analytic: delta_L must be nonzero");
}

RabiPair step_frequencies(const SystemParams& params, int m) {
    require_uniform(params);
    double kl = static_cast<double>(params.n_atoms - m);
    double kr = static_cast<double>(m + 1);
    double x = params.g() * params.g() / params.delta_L;
    double detu = params.delta_L - params.delta_R;
    RabiPair w;
    w.omega0 = (kl + kr) * x - detu;
    double s = (kl - kr) * x + detu;
    w.omega1 = std::sqrt(s * s + 4.0 * kl * kr * x * x);
    return w;
}

// Amplitude of the sin(omega1 t/2) component of lambda1; equals 1 at the
// optimal detuning.
double lambda1_envelope(const SystemParams& params, const RabiPair& w) {
    double n = static_cast<double>(params.n_atoms);
    double g2 = params.g() * params.g();
    double dl = params.delta_L;
    double num = dl * dl * w.omega1 * w.omega1 - std::pow(dl * w.omega0 - 2.0 * n * g2, 2);
    return num / (2.0 * std::sqrt(n) * g2 * dl * w.omega1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double fa, double fm, double fb, double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    // Never demand accuracy below rounding noise of the panel itself,
    // otherwise the recursion bottoms out at full depth everywhere.
    double floor_tol = 16.0 * std::numeric_limits<double>::epsilon() * std::abs(left + right);
    if (depth <= 0 || std::abs(left + right - whole) <= std::max(15.0 * tol, floor_tol))
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    // Pre-split into panels so oscillations cannot hide from the estimator.
    const int panels = 64;
    double h = (b - a) / panels;
    double total = 0.0;
    for (int i = 0; i < panels; ++i) {
        double x0 = a + i * h, x1 = x0 + h, xm = 0.5 * (x0 + x1);
        double f0 = f(x0), fm = f(xm), f1 = f(x1);
        if (!std::isfinite(f0) || !std::isfinite(fm) || !std::isfinite(f1))
            throw std::domain_error("integrate: integrand is not finite");
        double whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
        total += adaptive_simpson(f, x0, x1, f0, fm, f1, whole, tol / panels, 40);
    }
    return total;
}

}  // namespace

RabiPair rabi_frequencies(const SystemParams& params) { return step_frequencies(params, 0); }

RabiPair rabi_frequencies_step(const SystemParams& params, int ladder_step) {
    if (ladder_step < 0 || ladder_step >= params.n_atoms)
        throw std::invalid_argument("rabi_frequencies_step: ladder step out of range");
    return step_frequencies(params, ladder_step);
}

AmplitudePair amplitudes_general(const SystemParams& params, double t) {
    RabiPair w = rabi_frequencies(params);
    if (w.omega1 == 0.0)
        throw std::domain_error("amplitudes_general: omega1 = 0 (degenerate limit)");
    double n = static_cast<double>(params.n_atoms);
    double g2 = params.g() * params.g();
    double dl = params.delta_L;
    double kappa = params.kappa_L;

    cplx envelope = std::exp(cplx(-0.5 * kappa * t, 0.5 * w.omega0 * t));
    double c = std::cos(0.5 * w.omega1 * t);
    double s = std::sin(0.5 * w.omega1 * t);
    double chi = (2.0 * n * g2 - dl * w.omega0) / (dl * w.omega1);
    cplx l0 = envelope * (cplx(c, 0.0) + cplx(0.0, chi * s));
    cplx l1 = cplx(0.0, 1.0) * envelope * lambda1_envelope(params, w) * s;
    return {l0, l1};
}

AmplitudePair amplitudes_resonant(const SystemParams& params, double t) {
    require_uniform(params);
    double n = static_cast<double>(params.n_atoms);
    double x = params.g() * params.g() / params.delta_L;
    double detu = params.delta_L - params.delta_R;
    double target = (1.0 - n) * x;
    if (std::abs(detu - target) > 1e-9 * std::abs(x) + 1e-15 * std::abs(params.delta_L))
        throw std::invalid_argument("amplitudes_resonant: optimal-detuning condition violated");
    double w0 = 2.0 * n * x;
    double w1 = 2.0 * std::sqrt(n) * x;
    cplx envelope = std::exp(cplx(-0.5 * params.kappa_L * t, 0.5 * w0 * t));
    return {envelope * std::cos(0.5 * w1 * t),
            cplx(0.0, 1.0) * envelope * std::sin(0.5 * w1 * t)};
}

double success_probability_integral(const SystemParams& params, double T) {
    if (T < 0.0) throw std::invalid_argument("success_probability_integral: T must be >= 0");
    if (T == 0.0) return 0.0;
    RabiPair w = rabi_frequencies(params);
    // g = 0 leaves omega1 = |detuning|, but nothing couples: no transfer.
    if (w.omega1 == 0.0 || params.g() == 0.0) return 0.0;
    double beta = lambda1_envelope(params, w);
    double kappa = params.kappa_R;
    auto density = [&](double t) {
        double s = std::sin(0.5 * w.omega1 * t);
        return kappa * std::exp(-kappa * t) * beta * beta * s * s;
    };
    return params.detector_efficiency * integrate(density, 0.0, T, 1e-8);
}

double success_probability_closed(const SystemParams& params) {
    return success_probability_closed_step(params, 0);
}

double success_probability_closed_step(const SystemParams& params, int ladder_step) {
    require_uniform(params);
    if (ladder_step < 0 || ladder_step >= params.n_atoms)
        throw std::invalid_argument("success_probability_closed_step: ladder step out of range");
    double kl = static_cast<double>(params.n_atoms - ladder_step);
    double kr = static_cast<double>(ladder_step + 1);
    double g4 = std::pow(params.g(), 4);
    double dk = params.delta_L * params.kappa_L;
    return 2.0 * kl * kr * g4 / (dk * dk + 4.0 * kl * kr * g4);
}

double cumulative_success(double p_single, int trials) {
    if (p_single < 0.0 || p_single > 1.0)
        throw std::invalid_argument("cumulative_success: p must lie in [0,1]");
    if (trials < 0) throw std::invalid_argument("cumulative_success: trials must be >= 0");
    return 1.0 - std::pow(1.0 - p_single, trials);
}

double excited_population_bound(const SystemParams& params) {
    require_uniform(params);
    double r = (std::sqrt(static_cast<double>(params.n_atoms)) + 1.0) * params.g() / params.delta_L;
    return r * r;
}

}  // namespace dickesim
