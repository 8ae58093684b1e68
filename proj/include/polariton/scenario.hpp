// scenario.hpp - end-to-end pipelines behind the command-line tool.

#pragma once

#include "polariton/config.hpp"
#include "polariton/export.hpp"
#include "polariton/transport.hpp"

#include <filesystem>
#include <vector>

namespace polariton {

const char* library_version();

/// (k, omega_k, omega_LP, omega_UP, X^2, v_grp) over the grid momenta.
Table dispersion_table(const ModelParams& p);

/// Sites ahead of the pump spot used for the spatial decay fit when the
/// configuration leaves it open: from 4 sigmaR to 4 sigmaR + 40 um past the
/// spot, on the side the pulse travels to.
SiteRange default_fit_range(const ModelParams& p, const PulseSpec& pump);

/// Run length that lets the pump front cover the fit range, never shorter than `tEnd`.
double beer_lambert_duration(const ModelParams& p, const PulseSpec& pump, const SiteRange& range, double tEnd);

/// Pump-probe setup described by a configuration.
PumpProbeSetup pump_probe_setup(const ScenarioConfig& cfg);

struct ScenarioOutcome {
    std::vector<std::filesystem::path> files;  // data files, manifest excluded
    nlohmann::json results = nlohmann::json::object();
};

/// Runs cfg.scenario, writing data files, config.yaml and manifest.json into
/// cfg.output.directory. Throws the module errors unchanged.
ScenarioOutcome run_scenario(const ScenarioConfig& cfg);

}  // namespace polariton
