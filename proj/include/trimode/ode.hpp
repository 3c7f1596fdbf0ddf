// ode.hpp: adaptive Dormand-Prince 5(4) integrator over Eigen-valued
// states.  Used to cross-check closed-form evolutions and to integrate the
// interaction-frame equations when no closed form applies.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace trimode {

struct OdeOptions {
    double rtol = 1e-11;
    double atol = 1e-13;
    double initial_step = 1e-3;
    std::size_t max_steps = 2000000;
};

// Integrates dy/dt = deriv(t, y) from t0 to t1 (either direction).  State
// must support Eigen coefficient-wise operations (VectorXcd, Matrix3cd, ...).
template <typename State, typename Deriv>
State integrate_adaptive(const Deriv& deriv, State y, double t0, double t1,
                         const OdeOptions& opt = {}) {
    if (!(std::isfinite(t0) && std::isfinite(t1))) {
        throw std::invalid_argument("integrate_adaptive: endpoints must be finite");
    }
    if (t0 == t1) {
        return y;
    }
    const double direction = t1 > t0 ? 1.0 : -1.0;
    const double span = std::abs(t1 - t0);
    double h = direction * std::min(std::abs(opt.initial_step), span);
    double t = t0;

    State k1 = deriv(t, y);
    for (std::size_t step = 0; step < opt.max_steps; ++step) {
        if (direction * (t + h - t1) > 0.0) {
            h = t1 - t;
        }
        const State k2 = deriv(t + h / 5.0, (y + h * (k1 / 5.0)).eval());
        const State k3 = deriv(t + 3.0 * h / 10.0,
                               (y + h * (3.0 / 40.0 * k1 + 9.0 / 40.0 * k2)).eval());
        const State k4 = deriv(t + 4.0 * h / 5.0,
                               (y + h * (44.0 / 45.0 * k1 - 56.0 / 15.0 * k2 +
                                         32.0 / 9.0 * k3)).eval());
        const State k5 = deriv(t + 8.0 * h / 9.0,
                               (y + h * (19372.0 / 6561.0 * k1 - 25360.0 / 2187.0 * k2 +
                                         64448.0 / 6561.0 * k3 - 212.0 / 729.0 * k4)).eval());
        const State k6 = deriv(t + h,
                               (y + h * (9017.0 / 3168.0 * k1 - 355.0 / 33.0 * k2 +
                                         46732.0 / 5247.0 * k3 + 49.0 / 176.0 * k4 -
                                         5103.0 / 18656.0 * k5)).eval());
        const State y5 = (y + h * (35.0 / 384.0 * k1 + 500.0 / 1113.0 * k3 +
                                   125.0 / 192.0 * k4 - 2187.0 / 6784.0 * k5 +
                                   11.0 / 84.0 * k6)).eval();
        const State k7 = deriv(t + h, y5);
        const State err = (h * (71.0 / 57600.0 * k1 - 71.0 / 16695.0 * k3 +
                                71.0 / 1920.0 * k4 - 17253.0 / 339200.0 * k5 +
                                22.0 / 525.0 * k6 - 1.0 / 40.0 * k7)).eval();

        const auto scale = (opt.atol +
                            opt.rtol * y.cwiseAbs().cwiseMax(y5.cwiseAbs()).array()).eval();
        const double err_norm = (err.cwiseAbs().array() / scale).maxCoeff();

        if (err_norm <= 1.0) {
            t += h;
            y = y5;
            k1 = k7;
            if (direction * (t - t1) >= 0.0) {
                return y;
            }
        }
        const double safe = err_norm > 0.0
                                ? 0.9 * std::pow(err_norm, -0.2)
                                : 5.0;
        h *= std::clamp(safe, 0.2, 5.0);
        if (std::abs(h) < 1e-15 * std::max(1.0, std::abs(t))) {
            throw std::runtime_error("integrate_adaptive: step size underflow");
        }
    }
    throw std::runtime_error("integrate_adaptive: exceeded max_steps");
}

}  // namespace trimode
