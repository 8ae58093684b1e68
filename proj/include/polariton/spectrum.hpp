// spectrum.hpp - windowed time Fourier transforms, differential transmission
// and the spatial decay check for the photon population.

#pragma once

#include "polariton/core_model.hpp"
#include "polariton/record.hpp"

#include <json.hpp>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace polariton {

enum class Apodization { Rectangular, Exponential };

std::string to_string(Apodization a);
Apodization apodization_from_string(const std::string& name);

/// Time segment fed to the transform. Unset bounds are resolved against the
/// record: tStart defaults to probe arrival + 4 sigmaT (or the first sample
/// when the record has no probe), tEnd to the last sample. The exponential
/// window multiplies by exp(-(t - tStart) / tau), tau defaulting to 4 hbar / kappa.
struct FftWindow {
    std::optional<double> tStart;
    std::optional<double> tEnd;
    Apodization apodization = Apodization::Rectangular;
    std::optional<double> tau;

    bool operator==(const FftWindow&) const = default;
};

struct ResolvedWindow {
    double tStart = 0.0;
    double tEnd = 0.0;
    Apodization apodization = Apodization::Rectangular;
    double tau = 0.0;  ///< zero for rectangular
    std::size_t firstSample = 0;
    std::size_t numSamples = 0;
};

/// Throws WindowOutOfRangeError for bounds outside the record, an empty
/// segment or a non-uniform time grid.
ResolvedWindow resolve_window(const SpatioTemporalRecord& record, const FftWindow& window);

nlohmann::json to_json(const ResolvedWindow& w);

/// Optional frequency crop applied after the transform (inclusive, eV).
struct FrequencyBand {
    double lo;
    double hi;
};

/// values[m * numSites + n] at omegas[m]; omegas ascending and uniform.
struct SpectrumMap {
    std::vector<double> omegas;
    std::size_t numSites = 0;
    std::vector<cplx> values;
    ResolvedWindow window;

    std::size_t numFreqs() const { return omegas.size(); }
    std::span<const cplx> row(std::size_t m) const { return {values.data() + m * numSites, numSites}; }
};

struct RealSpectrumMap {
    std::vector<double> omegas;
    std::size_t numSites = 0;
    std::vector<double> values;
    ResolvedWindow window;

    std::size_t numFreqs() const { return omegas.size(); }
    std::span<const double> row(std::size_t m) const { return {values.data() + m * numSites, numSites}; }
};

/// alpha_n(omega) = dt sum_j exp(+i omega t_j / hbar) a_n(t_j) * w(t_j) over the
/// window, on the grid omega_m = 2 pi hbar m / (M dt). Parseval reads
/// sum |a|^2 dt = sum |alpha|^2 domega / (2 pi hbar).
SpectrumMap time_fft(const SpatioTemporalRecord& record, const std::string& fieldName,
                     const FftWindow& window = {}, std::optional<FrequencyBand> band = std::nullopt);

/// (kappa^2 / 2) Re[alpha01(omega) conj(alpha21(omega))] with kappa taken from
/// the record's model metadata. Amplitude factors are not included.
RealSpectrumMap differential_transmission(const SpatioTemporalRecord& hierRecord, const FftWindow& window = {},
                                          std::optional<FrequencyBand> band = std::nullopt);

/// Multiplies by etaPump^2 etaProbe^2 in place.
void scale_transmission(RealSpectrumMap& map, double etaPump, double etaProbe);

/// sum over omega in [center - halfWidth, center + halfWidth] of |values| domega, per site.
std::vector<double> band_integrated_magnitude(const RealSpectrumMap& map, double center, double halfWidth);

/// Profile at the frequency bin closest to omega.
std::vector<double> frequency_slice(const RealSpectrumMap& map, double omega);

struct SiteRange {
    int first;  ///< inclusive
    int last;   ///< inclusive

    bool operator==(const SiteRange&) const = default;
};

struct BeerLambertResult {
    double simSlope = 0.0;   ///< 1/um, from the time-maximum envelope of |a|^2
    double predSlope = 0.0;  ///< 2 Re lambda(omega) / dr
    double rSquared = 0.0;
};

/// Throws FitRangeError when the range has fewer than 8 sites, leaves the
/// grid, or contains a non-positive envelope value.
BeerLambertResult beer_lambert_check(const SpatioTemporalRecord& record, double omega, SiteRange fitRange,
                                     const ModelParams& p);

}  // namespace polariton
