#include "polariton/pulses.hpp"

#include "polariton/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace polariton {

void PulseSpec::validate(const ModelParams& p, const char* label) const
{
    const std::string prefix = std::string(label) + ": ";
    if (!(std::isfinite(amplitude) && amplitude >= 0)) {
        throw ValidationError(prefix + "amplitude >= 0");
    }
    if (!(std::isfinite(sigmaT) && sigmaT > 0)) {
        throw ValidationError(prefix + "sigmaT > 0");
    }
    if (!(std::isfinite(sigmaR) && sigmaR > 0)) {
        throw ValidationError(prefix + "sigmaR > 0");
    }
    const double kMax = std::numbers::pi / p.siteSpacing();
    if (!(std::isfinite(kCenter) && std::abs(kCenter) <= kMax)) {
        throw ValidationError(prefix + "|kCenter| <= pi / dr (resolvable on grid)");
    }
    if (!std::isfinite(omegaDrive) || !std::isfinite(center) || !std::isfinite(arrival) || !std::isfinite(phase)) {
        throw ValidationError(prefix + "omegaDrive, center, arrival and phase must be finite");
    }
}

double temporal_envelope(double t, const PulseSpec& spec)
{
    const double u = (t - spec.arrival) / spec.sigmaT;
    if (std::abs(u) > kPulseTruncation) {
        return 0.0;
    }
    return std::exp(-0.5 * u * u);
}

std::vector<cplx> spatial_profile(const PulseSpec& spec, const LatticeGrid& grid)
{
    std::vector<cplx> out(grid.size());
    for (std::size_t n = 0; n < grid.size(); ++n) {
        const double r = grid.positions[n];
        const double u = (r - spec.center) / spec.sigmaR;
        out[n] = std::exp(-0.5 * u * u) * std::polar(1.0, spec.kCenter * r + spec.phase);
    }
    return out;
}

std::vector<cplx> drive_field(double t, const PulseSpec& spec, const LatticeGrid& grid)
{
    const DriveSource source(spec, grid);
    const cplx factor = source.timeFactor(t);
    std::vector<cplx> out(grid.size());
    const auto profile = source.profile();
    for (std::size_t n = 0; n < out.size(); ++n) {
        out[n] = factor * profile[n];
    }
    return out;
}

std::vector<cplx> two_pulse_drive(double t, const PulseSpec& pump, const PulseSpec& probe,
                                  const LatticeGrid& grid)
{
    auto out = drive_field(t, pump, grid);
    const auto second = drive_field(t, probe, grid);
    for (std::size_t n = 0; n < out.size(); ++n) {
        out[n] += second[n];
    }
    return out;
}

DriveSource::DriveSource(const PulseSpec& spec, const LatticeGrid& grid, double amplitudeOverride)
    : spec_(spec), amplitude_(amplitudeOverride), profile_(spatial_profile(spec, grid))
{
}

bool DriveSource::active(double t) const
{
    return amplitude_ != 0.0 &&
           std::abs(t - spec_.arrival) <= kPulseTruncation * spec_.sigmaT;
}

cplx DriveSource::timeFactor(double t) const
{
    if (!active(t)) {
        return {0.0, 0.0};
    }
    return amplitude_ * temporal_envelope(t, spec_) *
           std::polar(1.0, -spec_.omegaDrive * t / units::kHbar);
}

ArrivalPair arrivals_for_delay(double delay, const PulseSpec& pump, const PulseSpec& probe,
                               const ModelParams& p, double earliest)
{
    const double vPump = std::abs(group_velocity_LP(pump.kCenter, p));
    const double vProbe = std::abs(group_velocity_LP(probe.kCenter, p));
    // Time for each center to reach r = 0.
    const double pumpTravel = std::abs(pump.center) / vPump;
    const double probeTravel = std::abs(probe.center) / vProbe;
    double tPump = 0.0;
    double tProbe = pumpTravel - probeTravel + delay;
    const double shift = earliest - std::min(tPump, tProbe);
    return {tPump + shift, tProbe + shift};
}

}  // namespace polariton
