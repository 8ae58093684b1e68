// config.hpp - YAML scenario configuration with strict keys and overrides.

#pragma once

#include "polariton/core_model.hpp"
#include "polariton/meanfield.hpp"
#include "polariton/pulses.hpp"
#include "polariton/spectrum.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace polariton {

enum class Scenario { Dispersion, PumpOnly, PumpProbe, SweepMomentum, SweepDephasing, BeerLambert };

std::string to_string(Scenario s);
/// Throws ValidationError listing the accepted names.
Scenario scenario_from_string(const std::string& name);

enum class OutputFormat { Text, Binary, Both };

std::string to_string(OutputFormat f);
OutputFormat output_format_from_string(const std::string& name);

struct AnalysisConfig {
    std::vector<double> delays;              // fs; nine over [-800, 800] by default
    double bandHalfWidth = 0.1;              // eV
    double earliestArrival = 200.0;          // fs
    double tailDistance = 20.0;              // um
    double probeMask = 3.0;                  // probe sigmaR excluded around the probe spot in fits
    bool autoDuration = true;
    FftWindow window;
    std::optional<SiteRange> fitRange;       // beer-lambert; derived from the pump when unset

    bool operator==(const AnalysisConfig&) const = default;
};

struct OutputConfig {
    std::string directory = "out";
    OutputFormat format = OutputFormat::Text;

    bool operator==(const OutputConfig&) const = default;
};

struct ScenarioConfig {
    ModelParams model;
    PulseSpec pump;
    PulseSpec probe;
    /// When set the carrier follows omega_LP(|kCenter|) instead of omegaDrive.
    bool pumpOmegaAuto = true;
    bool probeOmegaAuto = true;
    IntegratorConfig integrator;
    Scenario scenario = Scenario::PumpOnly;
    std::vector<double> sweepAxis;
    AnalysisConfig analysis;
    OutputConfig output;
    unsigned threads = 1;

    /// Throws ValidationError. Also resolves automatic carriers.
    void finalize();

    bool operator==(const ScenarioConfig&) const = default;
};

/// Reference parameter set, finalized.
ScenarioConfig default_config();

/// Parses YAML text; `overrides` are "section.key=value" strings applied
/// before validation. Throws ParseError, UnknownKeyError, ValidationError.
ScenarioConfig parse_config(const std::string& text, const std::vector<std::string>& overrides = {});

/// Reads a file (IoError when unreadable) and parses it.
ScenarioConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

/// Complete YAML echo; parse_config(dump_config(c)) == c.
std::string dump_config(const ScenarioConfig& cfg);
void save_config(const ScenarioConfig& cfg, const std::filesystem::path& path);

}  // namespace polariton
