// rk4.hpp - classical fixed-step Runge-Kutta over a flat complex state.

#pragma once

#include "polariton/core_model.hpp"

#include <span>
#include <vector>

namespace polariton {

class Rk4Stepper {
public:
    explicit Rk4Stepper(std::size_t size) : k1_(size), k2_(size), k3_(size), k4_(size), stage_(size) {}

    /// Advances y by dt. `rhs(t, y, dy)` must fill dy.
    template <class Rhs>
    void step(double t, double dt, std::vector<cplx>& y, Rhs&& rhs)
    {
        const std::size_t n = y.size();
        const double half = 0.5 * dt;

        rhs(t, std::span<const cplx>(y), std::span<cplx>(k1_));
        for (std::size_t i = 0; i < n; ++i) {
            stage_[i] = y[i] + half * k1_[i];
        }
        rhs(t + half, std::span<const cplx>(stage_), std::span<cplx>(k2_));
        for (std::size_t i = 0; i < n; ++i) {
            stage_[i] = y[i] + half * k2_[i];
        }
        rhs(t + half, std::span<const cplx>(stage_), std::span<cplx>(k3_));
        for (std::size_t i = 0; i < n; ++i) {
            stage_[i] = y[i] + dt * k3_[i];
        }
        rhs(t + dt, std::span<const cplx>(stage_), std::span<cplx>(k4_));

        const double sixth = dt / 6.0;
        for (std::size_t i = 0; i < n; ++i) {
            y[i] += sixth * (k1_[i] + 2.0 * (k2_[i] + k3_[i]) + k4_[i]);
        }
    }

private:
    std::vector<cplx> k1_, k2_, k3_, k4_, stage_;
};

}  // namespace polariton
