// observables.hpp - populations, bright/dark decomposition and spatial moments.

#pragma once

#include "polariton/core_model.hpp"
#include "polariton/record.hpp"

#include <span>
#include <vector>

namespace polariton {

struct PopulationMaps {
    FieldSeries photon;     ///< |a_n|^2 per site (multiply by N_E for totals)
    FieldSeries molecular;  ///< (1 + z_n) / 2 per molecule
};

/// Throws MissingFieldError unless the record has photon and inversion.
PopulationMaps populations(const SpatioTemporalRecord& record);

struct BrightDarkMaps {
    FieldSeries bright;  ///< |s_n|^2
    FieldSeries dark;    ///< (1 + z_n)/2 - |s_n|^2
    FieldSeries imPi;    ///< Im[a_n conj(s_n)]
};

BrightDarkMaps bright_dark(const SpatioTemporalRecord& record);

/// Right-hand sides of the bright and dark rate equations implied by the
/// mean-field equations, in 1/fs:
///   dpB/dt = -gphi pB / hbar + 2 Omega imPi (1 - 2 pm) / hbar
///   dpD/dt = +gphi pB / hbar + 2 Omega imPi 2 pm / hbar
/// with imPi = Im[a conj(s)] and pm = (1 + z) / 2.
struct BrightDarkRates {
    double bright;
    double dark;
};
BrightDarkRates bright_dark_rates(double pB, double imPi, double pm, const ModelParams& p);

/// sqrt(sum w (r - origin)^2 / sum w) for one profile. Throws EmptyWeightError.
double rms_of_profile(std::span<const double> weights, std::span<const double> positions, double origin);

/// Position of max |w| refined by a three-point parabola; ties go to the
/// leftmost maximum. Throws EmptyWeightError.
double peak_of_profile(std::span<const double> weights, std::span<const double> positions);

/// Per-snapshot versions over a real field series.
std::vector<double> rms_displacement(const FieldSeries& weights, std::span<const double> positions,
                                     double origin);
std::vector<double> peak_position(const FieldSeries& weights, std::span<const double> positions);

/// Sum over sites of a real field, per snapshot.
std::vector<double> spatial_sum(const FieldSeries& field);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rSquared = 0.0;
};

/// Ordinary least squares. rSquared is 1 for an exact fit, including a
/// constant series.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace polariton
