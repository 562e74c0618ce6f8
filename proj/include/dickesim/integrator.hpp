#ifndef DICKESIM_INTEGRATOR_HPP
#define DICKESIM_INTEGRATOR_HPP

#include <Eigen/Dense>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

namespace dickesim {

struct IntegratorControls {
    double rtol = 1e-9;
    double atol = 1e-12;
    double max_step = std::numeric_limits<double>::infinity();
    long max_steps = 50'000'000;
};

using OdeRhs = std::function<void(double, const Eigen::VectorXcd&, Eigen::VectorXcd&)>;

// Accepted-step record of an adaptive integration, evaluable anywhere in
// [t_begin, t_end] by cubic Hermite interpolation between nodes.
class DenseTrajectory {
public:
    DenseTrajectory(std::vector<double> ts, std::vector<Eigen::VectorXcd> ys,
                    std::vector<Eigen::VectorXcd> fs);

    double t_begin() const { return ts_.front(); }
    double t_end() const { return ts_.back(); }
    std::size_t steps() const { return ts_.size() - 1; }

    Eigen::VectorXcd eval(double t) const;
    double norm_sq(double t) const;

    const std::vector<double>& nodes() const { return ts_; }
    const Eigen::VectorXcd& node_state(std::size_t k) const { return ys_[k]; }

    // First t with ||y(t)||^2 = target, assuming the squared norm is
    // nonincreasing along the trajectory (conditional no-click evolution).
    // Returns nullopt when the norm never drops to `target`.
    std::optional<double> find_norm_crossing(double target, double time_tol) const;

private:
    std::size_t segment_of(double t) const;
    std::vector<double> ts_;
    std::vector<Eigen::VectorXcd> ys_;
    std::vector<Eigen::VectorXcd> fs_;
};

// Adaptive embedded Dormand-Prince 4(5) integration of dy/dt = rhs(t, y).
// Throws std::runtime_error on step-size underflow or step budget exhaustion.
DenseTrajectory integrate_adaptive(const OdeRhs& rhs, const Eigen::VectorXcd& y0,
                                   double t0, double t1, const IntegratorControls& controls = {});

}  // namespace dickesim

#endif
