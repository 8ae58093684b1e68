// meanfield.hpp - coarse-grained mean-field Tavis-Cummings dynamics.
//
// Per site n:
//   d<a_n>/dt   = [-(i wc + k/2) a_n - i Omega s_n + i C d2 a_n + drive_n] / hbar
//   d<s_n>/dt   = [-(i w0 + gphi/2) s_n + i Omega z_n a_n] / hbar
//   d<z_n>/dt   = -4 Omega Im[s_n conj(a_n)] / hbar
// where a is the photon amplitude rescaled by sqrt(Nk/N), s = <sigma^-> and
// z = <sigma^z>. The stencil d2 is periodic.

#pragma once

#include "polariton/core_model.hpp"
#include "polariton/laplacian.hpp"
#include "polariton/pulses.hpp"
#include "polariton/record.hpp"

#include <optional>
#include <span>
#include <vector>

namespace polariton {

struct MeanFieldState {
    std::vector<cplx> photon;
    std::vector<cplx> coherence;
    std::vector<double> inversion;
    double time = 0.0;

    /// All molecules in the ground state, empty cavity.
    static MeanFieldState vacuum(std::size_t numSites);
    void validate(std::size_t numSites) const;
};

struct IntegratorConfig {
    double dt = 0.1;       // fs
    double tEnd = 1000.0;  // fs
    int snapshotStride = 10;
    Stencil stencil = Stencil::ThreePoint;
    /// Frequency (eV) of the rotating frame used internally. Recorded fields
    /// are always in the lab frame. Unset means "use the first pulse carrier".
    std::optional<double> frameOmega;

    /// Largest stable step, s * hbar / (4 C) with safety s = 0.5.
    static double maxStableStep(const ModelParams& p);
    void validate(const ModelParams& p) const;
    std::size_t numSteps() const;

    bool operator==(const IntegratorConfig&) const = default;
};

/// Fields larger than this abort the run with InstabilityError.
inline constexpr double kBlowUpThreshold = 1e6;

/// Lab-frame time derivative for a given drive (eV), three-point stencil.
MeanFieldState rhs(const MeanFieldState& state, std::span<const cplx> drive, const ModelParams& p);

/// Same as above with an explicit hopping operator.
MeanFieldState rhs(const MeanFieldState& state, std::span<const cplx> drive, const ModelParams& p,
                   HoppingOperator& hopping);

/// Fixed-step RK4 trajectory. Snapshots of "photon", "coherence" (complex)
/// and "inversion" (real) are taken every snapshotStride steps, starting at
/// the initial time. Reruns with identical inputs are bit-identical.
SpatioTemporalRecord evolve(const MeanFieldState& initial, std::span<const PulseSpec> pulses,
                            const IntegratorConfig& cfg, const ModelParams& p);

/// Vacuum start, pump drive only.
SpatioTemporalRecord pump_only(const ModelParams& p, const PulseSpec& pump, const IntegratorConfig& cfg);

/// Snapshot of a record row as a state (lab frame).
MeanFieldState state_at(const SpatioTemporalRecord& record, std::size_t snapshot);

/// Provenance blocks shared by all records.
nlohmann::json to_json(const ModelParams& p);
nlohmann::json to_json(const PulseSpec& s);
nlohmann::json to_json(const IntegratorConfig& c);

}  // namespace polariton
