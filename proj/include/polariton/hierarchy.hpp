// hierarchy.hpp - perturbative pump-probe expansion of the mean-field equations.
//
// Fields are expanded as sum_{a,b} eta_pump^a eta_probe^b X^(a,b). Starting
// from the vacuum (z^(0,0) = -1, everything else zero), the coefficients
// needed for the lowest-order differential transmission are
//   (1,0): alpha10, sigma10     (0,1): alpha01, sigma01
//   (2,0): z20                  (1,1): z11
//   (2,1): alpha21, sigma21
// Drives enter with unit amplitude; the eta factors are applied by callers.

#pragma once

#include "polariton/core_model.hpp"
#include "polariton/meanfield.hpp"
#include "polariton/pulses.hpp"
#include "polariton/record.hpp"

#include <span>
#include <vector>

namespace polariton {

struct PerturbativeState {
    std::vector<cplx> alpha10, sigma10, alpha01, sigma01, alpha21, sigma21;
    std::vector<double> z20, z11;
    double time = 0.0;

    static PerturbativeState zero(std::size_t numSites);
};

/// Lab-frame derivative. Drives are per-site shapes with the eta factor
/// removed (unit amplitude), in eV.
PerturbativeState hierarchy_rhs(const PerturbativeState& state, std::span<const cplx> pumpDrive,
                                std::span<const cplx> probeDrive, const ModelParams& p);

struct HierarchyOptions {
    /// Record all eight fields instead of only alpha01 and alpha21.
    bool recordAllFields = false;
    /// When false only the first- and second-order sectors are integrated.
    bool includeThirdOrder = true;
};

/// RK4 trajectory from the zero state. A pulse whose amplitude is zero is
/// switched off; otherwise its drive shape is used with unit amplitude.
/// Records "alpha01" and "alpha21" (plus "alpha10", "sigma10", "sigma01",
/// "sigma21", "z20", "z11" when requested).
SpatioTemporalRecord evolve_hierarchy(const PulseSpec& pump, const PulseSpec& probe,
                                      const IntegratorConfig& cfg, const ModelParams& p,
                                      const HierarchyOptions& options = {});

}  // namespace polariton
