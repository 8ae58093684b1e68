// transport.hpp - velocity extraction from pump-probe maps and parameter sweeps.

#pragma once

#include "polariton/core_model.hpp"
#include "polariton/meanfield.hpp"
#include "polariton/pulses.hpp"
#include "polariton/spectrum.hpp"

#include <span>
#include <string>
#include <vector>

namespace polariton {

/// Spatial weight profile (normally the band-integrated |dT|) at one probe delay.
struct DelayProfile {
    double delay = 0.0;  // fs
    std::vector<double> profile;
};

struct TransportFit {
    double vPeak = 0.0;  // um/fs
    double vRms = 0.0;
    double vGrp = 0.0;
    double rSquaredPeak = 0.0;
    double rSquaredRms = 0.0;
    /// Raw slopes of position against delay are multiplied by this factor.
    double geometryFactor = 2.0;
    std::vector<double> delays;
    std::vector<double> peakPositions;
    std::vector<double> rmsPositions;
    std::vector<std::string> notes;
};

inline constexpr std::size_t kMinFitDelays = 5;
inline constexpr double kMinFitDelaySpan = 1000.0;  // fs

/// Straight-line fits of peak position and rms displacement (about `origin`)
/// against delay. The pump-induced feature is met by a counter-propagating
/// probe, so it sits at r = v delay / 2 and the slopes are doubled.
/// A position series that is exactly constant gives zero velocity with
/// R^2 = 1. A series that moves by less than two sites has an undefined
/// velocity: it is reported as NaN with a note, and if both series are like
/// that DegenerateFitError is thrown. Fewer than 5 delays or a delay span
/// under 1 ps also throw.
TransportFit fit_velocities(std::span<const DelayProfile> profiles, double kp, const ModelParams& p, double origin);

/// Everything needed to run the perturbative pipeline at a list of delays.
struct PumpProbeSetup {
    ModelParams model;
    PulseSpec pump;
    PulseSpec probe;
    IntegratorConfig integrator;
    std::vector<double> delays;         // fs
    FftWindow window;
    double bandHalfWidth = 0.1;         // eV, around the pump carrier
    double earliestArrival = 200.0;     // fs
    bool autoDuration = true;           // derive tEnd per delay
    double tailDistance = 20.0;         // um the probe travels past the pump spot
    double probeMask = 3.0;             // probe sigmaR; see fit_pump_probe
};

/// Reference counter-propagating geometry at wavevector kp, both
/// carriers at the LP frequency, nine delays over [-800, 800] fs.
/// Velocity fit for a pump-probe scan. Sites within probeMask * sigmaR of the
/// probe spot are zeroed first: the probe leaves a slowly decaying response
/// there, and a pump reaching it late in the record adds a feature that does
/// not move with the delay.
TransportFit fit_pump_probe(std::span<const DelayProfile> profiles, const PumpProbeSetup& setup);

PumpProbeSetup default_pump_probe(const ModelParams& p, double kp);

std::vector<double> uniform_delays(double first, double last, int count);

struct DelayResult {
    double delay = 0.0;
    ArrivalPair arrivals{};
    double tEnd = 0.0;
    RealSpectrumMap deltaT;        // cropped to the analysis band
    std::vector<double> profile;   // band-integrated |dT|
};

/// Probe run duration for a given arrival pair.
double pump_probe_duration(const PumpProbeSetup& setup, const ArrivalPair& arrivals);

DelayResult run_pump_probe_delay(const PumpProbeSetup& setup, double delay);

struct PumpProbeResult {
    std::vector<DelayResult> delays;
    TransportFit fit;
};

/// Runs every delay (in parallel) and fits the profiles.
PumpProbeResult run_pump_probe(const PumpProbeSetup& setup, unsigned threads = 1);

struct SweepResult {
    std::string axisName;
    std::vector<double> axis;
    std::vector<TransportFit> fits;
    std::vector<double> renormalization;    // vRms / vGrp, NaN for failed points
    std::vector<double> excitonFraction;    // X^2 of the LP at kp
    std::vector<std::string> errors;        // empty when the point succeeded
};

/// One pump-probe pipeline per kp with carriers at omega_LP(kp) and the probe at -kp.
SweepResult sweep_momentum(std::span<const double> kpValues, const PumpProbeSetup& base, unsigned threads = 1);

/// One pump-probe pipeline per dephasing rate at the base setup's kp.
SweepResult sweep_dephasing(std::span<const double> gammaValues, const PumpProbeSetup& base,
                            unsigned threads = 1);

/// Re-centres a setup on wavevector kp (pump +kp, probe -kp, carriers at omega_LP).
PumpProbeSetup retarget_momentum(const PumpProbeSetup& base, double kp);

}  // namespace polariton
