// pulses.hpp - Gaussian pump and probe drives for the photon field.

#pragma once

#include "polariton/core_model.hpp"

#include <span>
#include <vector>

namespace polariton {

/// Declarative Gaussian pulse. The drive it produces enters the photon
/// equation as amplitude * f(t) * exp(-i omegaDrive t / hbar) * D_n / hbar,
/// so `amplitude` is measured in eV.
struct PulseSpec {
    double amplitude = 1e-3;  ///< eta
    double omegaDrive = 0.0;  ///< carrier (eV)
    double sigmaT = 25.0;     ///< temporal width (fs)
    double sigmaR = 5.0;      ///< spatial width (um)
    double kCenter = 0.0;     ///< central wavevector (1/um)
    double center = 0.0;      ///< spot center (um)
    double arrival = 200.0;   ///< temporal center (fs)
    double phase = 0.0;       ///< constant carrier phase (rad); pi flips the drive sign

    /// Throws ValidationError; `label` prefixes the message ("pump", "probe").
    void validate(const ModelParams& p, const char* label = "pulse") const;

    bool operator==(const PulseSpec&) const = default;
};

/// Envelopes are cut to zero beyond this many sigmaT from the arrival time.
inline constexpr double kPulseTruncation = 8.0;

/// f(t) = exp(-(t - arrival)^2 / 2 sigmaT^2), truncated.
double temporal_envelope(double t, const PulseSpec& spec);

/// D_n = exp(-(r_n - center)^2 / 2 sigmaR^2) exp(i (kCenter r_n + phase)).
std::vector<cplx> spatial_profile(const PulseSpec& spec, const LatticeGrid& grid);

std::vector<cplx> drive_field(double t, const PulseSpec& spec, const LatticeGrid& grid);
std::vector<cplx> two_pulse_drive(double t, const PulseSpec& pump, const PulseSpec& probe,
                                  const LatticeGrid& grid);

/// Precomputed drive used inside the integrators: the spatial profile is
/// evaluated once and only the scalar time factor changes per stage.
class DriveSource {
public:
    DriveSource(const PulseSpec& spec, const LatticeGrid& grid, double amplitudeOverride);
    DriveSource(const PulseSpec& spec, const LatticeGrid& grid)
        : DriveSource(spec, grid, spec.amplitude) {}

    /// amplitude * f(t) * exp(-i omegaDrive t / hbar); zero outside the truncation window.
    cplx timeFactor(double t) const;
    std::span<const cplx> profile() const { return profile_; }
    bool active(double t) const;

private:
    PulseSpec spec_;
    double amplitude_;
    std::vector<cplx> profile_;
};

/// Arrival times (pump, probe) for a probe delay. At zero delay the two
/// wavepacket centers, moving toward each other at the LP group velocity,
/// meet at r = 0. Both are shifted so the earlier pulse arrives at `earliest`.
struct ArrivalPair {
    double pump;
    double probe;
};
ArrivalPair arrivals_for_delay(double delay, const PulseSpec& pump, const PulseSpec& probe,
                               const ModelParams& p, double earliest);

}  // namespace polariton
