// Shared fixtures for the unit tests.

#pragma once

#include "polariton/core_model.hpp"
#include "polariton/meanfield.hpp"
#include "polariton/pulses.hpp"

#include <cmath>
#include <numbers>
#include <span>

namespace testing {

inline constexpr double kPi = std::numbers::pi;

// Short chain with the default site spacing; keeps trajectories cheap.
inline polariton::ModelParams small_model(int sites = 121)
{
    polariton::ModelParams p;
    p.numSites = sites;
    p.lengthL = sites * (200.0 / 601.0);
    p.numMolecules = 1000 * sites;
    return p;
}

inline polariton::PulseSpec pulse_at(const polariton::ModelParams& p, double center, double k, double arrival = 100.0)
{
    polariton::PulseSpec s;
    s.center = center;
    s.kCenter = k;
    s.arrival = arrival;
    s.omegaDrive = polariton::polariton_frequencies(std::abs(k), p).lower;
    return s;
}

template <class T>
double l2(std::span<const T> v)
{
    double s = 0.0;
    for (const auto& x : v) {
        s += std::norm(x);
    }
    return std::sqrt(s);
}

template <class T>
double l2_diff(std::span<const T> a, std::span<const T> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += std::norm(a[i] - b[i]);
    }
    return std::sqrt(s);
}

}  // namespace testing
