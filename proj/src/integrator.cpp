#include "dickesim/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dickesim {

namespace {

// Dormand-Prince 5(4) tableau, FSAL.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// 5th-order minus embedded 4th-order weights (error estimator).
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

DenseTrajectory::DenseTrajectory(std::vector<double> ts, std::vector<Eigen::VectorXcd> ys,
                                 std::vector<Eigen::VectorXcd> fs)
    : ts_(std::move(ts)), ys_(std::move(ys)), fs_(std::move(fs)) {
    if (ts_.size() < 2 || ts_.size() != ys_.size() || ts_.size() != fs_.size())
        throw std::invalid_argument("DenseTrajectory: inconsistent node arrays");
}

std::size_t DenseTrajectory::segment_of(double t) const {
    if (t < ts_.front() - 1e-12 * (ts_.back() - ts_.front()) || t > ts_.back() + 1e-12 * (ts_.back() - ts_.front()))
        throw std::out_of_range("DenseTrajectory::eval: t outside integration range");
    auto it = std::upper_bound(ts_.begin(), ts_.end(), t);
    std::size_t k = static_cast<std::size_t>(it - ts_.begin());
    if (k == 0) return 0;
    if (k >= ts_.size()) return ts_.size() - 2;
    return k - 1;
}

Eigen::VectorXcd DenseTrajectory::eval(double t) const {
    std::size_t k = segment_of(t);
    double h = ts_[k + 1] - ts_[k];
    double s = (t - ts_[k]) / h;
    double s2 = s * s, s3 = s2 * s;
    double h00 = 2 * s3 - 3 * s2 + 1;
    double h10 = s3 - 2 * s2 + s;
    double h01 = -2 * s3 + 3 * s2;
    double h11 = s3 - s2;
    return h00 * ys_[k] + (h10 * h) * fs_[k] + h01 * ys_[k + 1] + (h11 * h) * fs_[k + 1];
}

double DenseTrajectory::norm_sq(double t) const { return eval(t).squaredNorm(); }

std::optional<double> DenseTrajectory::find_norm_crossing(double target, double time_tol) const {
    if (ys_.front().squaredNorm() <= target) return ts_.front();
    if (ys_.back().squaredNorm() > target) return std::nullopt;
    // First node whose norm has dropped to the target.
    std::size_t lo = 0, hi = ts_.size() - 1;
    while (hi - lo > 1) {
        std::size_t mid = lo + (hi - lo) / 2;
        if (ys_[mid].squaredNorm() <= target) hi = mid;
        else lo = mid;
    }
    double a = ts_[lo], b = ts_[hi];
    while (b - a > time_tol) {
        double m = 0.5 * (a + b);
        if (norm_sq(m) <= target) b = m;
        else a = m;
    }
    return 0.5 * (a + b);
}

DenseTrajectory integrate_adaptive(const OdeRhs& rhs, const Eigen::VectorXcd& y0,
                                   double t0, double t1, const IntegratorControls& controls) {
    if (!(t1 > t0)) throw std::invalid_argument("integrate_adaptive: need t1 > t0");
    const Eigen::Index n = y0.size();

    std::vector<double> ts{t0};
    std::vector<Eigen::VectorXcd> ys{y0};
    std::vector<Eigen::VectorXcd> fs;

    Eigen::VectorXcd f0(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n), err(n);
    rhs(t0, y0, f0);
    fs.push_back(f0);

    // Initial step from the derivative scale.
    double ynorm = y0.norm(), fnorm = f0.norm();
    double h = (fnorm > 0.0) ? 0.01 * std::max(ynorm, 1e-6) / fnorm : (t1 - t0) / 100.0;
    h = std::min({h, t1 - t0, controls.max_step});

    double t = t0;
    Eigen::VectorXcd y = y0;
    Eigen::VectorXcd f = f0;
    long nsteps = 0;

    while (t < t1) {
        if (++nsteps > controls.max_steps)
            throw std::runtime_error("integrate_adaptive: step budget exhausted");
        if (h < 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), std::abs(t1)))
            throw std::runtime_error("integrate_adaptive: step-size underflow");
        bool last = false;
        if (t + h >= t1) { h = t1 - t; last = true; }

        ytmp = y + h * a21 * f;
        rhs(t + c2 * h, ytmp, k2);
        ytmp = y + h * (a31 * f + a32 * k2);
        rhs(t + c3 * h, ytmp, k3);
        ytmp = y + h * (a41 * f + a42 * k2 + a43 * k3);
        rhs(t + c4 * h, ytmp, k4);
        ytmp = y + h * (a51 * f + a52 * k2 + a53 * k3 + a54 * k4);
        rhs(t + c5 * h, ytmp, k5);
        ytmp = y + h * (a61 * f + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        rhs(t + h, ytmp, k6);
        ynew = y + h * (b1 * f + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        rhs(t + h, ynew, k7);  // FSAL
        err = h * (e1 * f + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        double errnorm = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            double sc = controls.atol + controls.rtol * std::max(std::abs(y(i)), std::abs(ynew(i)));
            double r = std::abs(err(i)) / sc;
            errnorm += r * r;
        }
        errnorm = std::sqrt(errnorm / static_cast<double>(n));

        if (errnorm <= 1.0) {
            t = last ? t1 : t + h;
            y.swap(ynew);
            f.swap(k7);
            ts.push_back(t);
            ys.push_back(y);
            fs.push_back(f);
        }
        double factor = (errnorm > 0.0) ? 0.9 * std::pow(errnorm, -0.2) : 5.0;
        h *= std::clamp(factor, 0.2, 5.0);
        h = std::min(h, controls.max_step);
    }
    return DenseTrajectory(std::move(ts), std::move(ys), std::move(fs));
}

}  // namespace dickesim
