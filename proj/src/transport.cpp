#include "polariton/transport.hpp"

#include "polariton/errors.hpp"
#include "polariton/hierarchy.hpp"
#include "polariton/observables.hpp"
#include "polariton/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace polariton {

namespace {

struct SeriesFit {
    double velocity;
    double rSquared;
};

SeriesFit fit_series(std::span<const double> delays, std::span<const double> positions, double spacing,
                     double factor, const char* label, std::vector<std::string>& problems)
{
    const auto [lo, hi] = std::minmax_element(positions.begin(), positions.end());
    const double span = *hi - *lo;
    if (span == 0.0) {
        return {0.0, 1.0};
    }
    if (span < 2.0 * spacing) {
        problems.push_back(std::string(label) + " positions vary by " + std::to_string(span) +
                           " um, less than two sites; velocity is undefined");
        return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
    }
    const auto line = fit_line(delays, positions);
    return {factor * line.slope, line.rSquared};
}

}  // namespace

TransportFit fit_velocities(std::span<const DelayProfile> profiles, double kp, const ModelParams& p, double origin)
{
    if (profiles.size() < kMinFitDelays) {
        throw DegenerateFitError("velocity fit needs at least " + std::to_string(kMinFitDelays) + " delays, got " +
                                 std::to_string(profiles.size()));
    }
    const auto grid = LatticeGrid::from(p);
    TransportFit fit;
    fit.vGrp = group_velocity_LP(kp, p);
    for (const auto& dp : profiles) {
        if (dp.profile.size() != grid.size()) {
            throw DegenerateFitError("profile length does not match the grid");
        }
        fit.delays.push_back(dp.delay);
        fit.peakPositions.push_back(peak_of_profile(dp.profile, grid.positions));
        fit.rmsPositions.push_back(rms_of_profile(dp.profile, grid.positions, origin));
    }
    const auto [dLo, dHi] = std::minmax_element(fit.delays.begin(), fit.delays.end());
    if (*dHi - *dLo < kMinFitDelaySpan) {
        throw DegenerateFitError("delays span " + std::to_string(*dHi - *dLo) + " fs, below 1 ps");
    }
    std::vector<std::string> problems;
    const auto peak = fit_series(fit.delays, fit.peakPositions, grid.spacing, fit.geometryFactor, "peak", problems);
    const auto rms = fit_series(fit.delays, fit.rmsPositions, grid.spacing, fit.geometryFactor, "rms", problems);
    if (problems.size() == 2) {
        throw DegenerateFitError(problems[0] + "; " + problems[1]);
    }
    fit.notes.insert(fit.notes.end(), problems.begin(), problems.end());
    fit.vPeak = peak.velocity;
    fit.rSquaredPeak = peak.rSquared;
    fit.vRms = rms.velocity;
    fit.rSquaredRms = rms.rSquared;
    fit.notes.push_back("slopes doubled: counter-propagating fronts meet at r = v * delay / 2");
    return fit;
}

TransportFit fit_pump_probe(std::span<const DelayProfile> profiles, const PumpProbeSetup& setup)
{
    const auto grid = LatticeGrid::from(setup.model);
    const double radius = setup.probeMask * setup.probe.sigmaR;
    const double length = setup.model.lengthL;
    std::vector<DelayProfile> masked(profiles.begin(), profiles.end());
    for (auto& dp : masked) {
        for (std::size_t i = 0; i < dp.profile.size() && i < grid.size(); ++i) {
            double d = std::abs(grid.positions[i] - setup.probe.center);
            d = std::min(d, length - d);
            if (d < radius) {
                dp.profile[i] = 0.0;
            }
        }
    }
    auto fit = fit_velocities(masked, setup.pump.kCenter, setup.model, setup.pump.center);
    if (radius > 0) {
        fit.notes.push_back("sites within " + std::to_string(radius) + " um of the probe spot left out");
    }
    return fit;
}

std::vector<double> uniform_delays(double first, double last, int count)
{
    std::vector<double> out;
    if (count == 1) {
        out.push_back(first);
        return out;
    }
    for (int i = 0; i < count; ++i) {
        out.push_back(first + (last - first) * i / (count - 1));
    }
    return out;
}

PumpProbeSetup retarget_momentum(const PumpProbeSetup& base, double kp)
{
    PumpProbeSetup s = base;
    const double omegaLP = polariton_frequencies(kp, s.model).lower;
    s.pump.kCenter = kp;
    s.probe.kCenter = -kp;
    s.pump.omegaDrive = omegaLP;
    s.probe.omegaDrive = omegaLP;
    return s;
}

PumpProbeSetup default_pump_probe(const ModelParams& p, double kp)
{
    PumpProbeSetup s;
    s.model = p;
    s.pump.center = -50.0;
    s.probe.center = 50.0;
    s.delays = uniform_delays(-800.0, 800.0, 9);
    return retarget_momentum(s, kp);
}

double pump_probe_duration(const PumpProbeSetup& setup, const ArrivalPair& arrivals)
{
    const double v = std::abs(group_velocity_LP(setup.probe.kCenter, setup.model));
    const double travel = (std::abs(setup.probe.center - setup.pump.center) + setup.tailDistance) / v;
    const double raw = std::max(arrivals.pump, arrivals.probe) + travel + 4.0 * setup.probe.sigmaT;
    const double block = setup.integrator.dt * setup.integrator.snapshotStride;
    return std::ceil(raw / block) * block;
}

DelayResult run_pump_probe_delay(const PumpProbeSetup& setup, double delay)
{
    DelayResult out;
    out.delay = delay;
    out.arrivals = arrivals_for_delay(delay, setup.pump, setup.probe, setup.model, setup.earliestArrival);
    PulseSpec pump = setup.pump;
    PulseSpec probe = setup.probe;
    pump.arrival = out.arrivals.pump;
    probe.arrival = out.arrivals.probe;
    IntegratorConfig cfg = setup.integrator;
    if (setup.autoDuration) {
        cfg.tEnd = pump_probe_duration(setup, out.arrivals);
    }
    out.tEnd = cfg.tEnd;
    const auto record = evolve_hierarchy(pump, probe, cfg, setup.model);
    const double center = pump.omegaDrive;
    const FrequencyBand band{center - setup.bandHalfWidth, center + setup.bandHalfWidth};
    out.deltaT = differential_transmission(record, setup.window, band);
    out.profile = band_integrated_magnitude(out.deltaT, center, setup.bandHalfWidth);
    return out;
}

PumpProbeResult run_pump_probe(const PumpProbeSetup& setup, unsigned threads)
{
    PumpProbeResult result;
    result.delays.resize(setup.delays.size());
    parallel_for(setup.delays.size(), threads,
                 [&](std::size_t i) { result.delays[i] = run_pump_probe_delay(setup, setup.delays[i]); });
    std::vector<DelayProfile> profiles;
    for (const auto& d : result.delays) {
        profiles.push_back({d.delay, d.profile});
    }
    result.fit = fit_pump_probe(profiles, setup);
    return result;
}

namespace {

SweepResult run_sweep(std::string axisName, std::span<const double> axis, std::vector<PumpProbeSetup> setups,
                      unsigned threads)
{
    const std::size_t points = setups.size();
    const std::size_t perPoint = setups.empty() ? 0 : setups.front().delays.size();
    std::vector<std::vector<DelayProfile>> profiles(points);
    for (std::size_t i = 0; i < points; ++i) {
        profiles[i].resize(setups[i].delays.size());
    }
    std::vector<std::string> taskErrors(points * perPoint);

    // Flatten (point, delay) so a small sweep still fills every worker.
    parallel_for(points * perPoint, threads, [&](std::size_t task) {
        const std::size_t i = task / perPoint;
        const std::size_t j = task % perPoint;
        try {
            auto r = run_pump_probe_delay(setups[i], setups[i].delays[j]);
            profiles[i][j] = {r.delay, std::move(r.profile)};
        } catch (const std::exception& e) {
            taskErrors[task] = "delay " + std::to_string(setups[i].delays[j]) + " fs: " + e.what();
        }
    });

    SweepResult out;
    out.axisName = std::move(axisName);
    out.axis.assign(axis.begin(), axis.end());
    for (std::size_t i = 0; i < points; ++i) {
        const auto& s = setups[i];
        out.excitonFraction.push_back(exciton_fraction_LP(s.pump.kCenter, s.model));
        std::string error;
        for (std::size_t j = 0; j < perPoint && error.empty(); ++j) {
            error = taskErrors[i * perPoint + j];
        }
        TransportFit fit;
        fit.vGrp = group_velocity_LP(s.pump.kCenter, s.model);
        if (error.empty()) {
            try {
                fit = fit_pump_probe(profiles[i], s);
            } catch (const std::exception& e) {
                error = e.what();
            }
        }
        out.renormalization.push_back(error.empty() ? fit.vRms / fit.vGrp
                                                    : std::numeric_limits<double>::quiet_NaN());
        out.fits.push_back(std::move(fit));
        out.errors.push_back(error);
    }
    return out;
}

}  // namespace

SweepResult sweep_momentum(std::span<const double> kpValues, const PumpProbeSetup& base, unsigned threads)
{
    std::vector<PumpProbeSetup> setups;
    for (double kp : kpValues) {
        setups.push_back(retarget_momentum(base, kp));
    }
    return run_sweep("kp", kpValues, std::move(setups), threads);
}

SweepResult sweep_dephasing(std::span<const double> gammaValues, const PumpProbeSetup& base, unsigned threads)
{
    std::vector<PumpProbeSetup> setups;
    for (double g : gammaValues) {
        if (!(g >= 0)) {
            throw ValidationError("dephasing sweep values must be >= 0");
        }
        PumpProbeSetup s = base;
        s.model.gammaPhi = g;
        setups.push_back(std::move(s));
    }
    return run_sweep("gammaPhi", gammaValues, std::move(setups), threads);
}

}  // namespace polariton
