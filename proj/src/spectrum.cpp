#include "polariton/spectrum.hpp"

#include "fftw_lock.hpp"
#include "polariton/errors.hpp"
#include "polariton/observables.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace polariton {

std::string to_string(Apodization a)
{
    return a == Apodization::Rectangular ? "rectangular" : "exponential";
}

Apodization apodization_from_string(const std::string& name)
{
    if (name == "rectangular") {
        return Apodization::Rectangular;
    }
    if (name == "exponential") {
        return Apodization::Exponential;
    }
    throw ValidationError("apodization must be 'rectangular' or 'exponential', got '" + name + "'");
}

namespace {

double meta_number(const nlohmann::json& meta, const char* section, const char* key)
{
    if (!meta.contains(section) || !meta[section].contains(key) || !meta[section][key].is_number()) {
        throw MissingFieldError(std::string("record metadata lacks ") + section + "." + key);
    }
    return meta[section][key].get<double>();
}

}  // namespace

ResolvedWindow resolve_window(const SpatioTemporalRecord& record, const FftWindow& window)
{
    const auto& t = record.times;
    if (t.size() < 2) {
        throw WindowOutOfRangeError("time transform needs at least two snapshots");
    }
    const double dt = t[1] - t[0];
    if (!(dt > 0)) {
        throw WindowOutOfRangeError("time grid is not increasing");
    }
    for (std::size_t j = 1; j < t.size(); ++j) {
        if (std::abs((t[j] - t[j - 1]) - dt) > 1e-6 * dt) {
            throw WindowOutOfRangeError("time grid is not uniform");
        }
    }

    ResolvedWindow w;
    w.apodization = window.apodization;
    if (window.tStart) {
        w.tStart = *window.tStart;
    } else if (record.meta.contains("probe")) {
        w.tStart = meta_number(record.meta, "probe", "arrival") + 4.0 * meta_number(record.meta, "probe", "sigmaT");
    } else {
        w.tStart = t.front();
    }
    w.tEnd = window.tEnd.value_or(t.back());

    const double eps = 1e-9 * dt;
    if (w.tStart < t.front() - eps || w.tEnd > t.back() + eps) {
        throw WindowOutOfRangeError("window [" + std::to_string(w.tStart) + ", " + std::to_string(w.tEnd) +
                                    "] fs lies outside the record [" + std::to_string(t.front()) + ", " +
                                    std::to_string(t.back()) + "] fs");
    }
    const auto first = std::lower_bound(t.begin(), t.end(), w.tStart - eps);
    const auto last = std::upper_bound(t.begin(), t.end(), w.tEnd + eps);
    if (last - first < 2) {
        throw WindowOutOfRangeError("window holds fewer than two samples");
    }
    w.firstSample = static_cast<std::size_t>(first - t.begin());
    w.numSamples = static_cast<std::size_t>(last - first);

    if (w.apodization == Apodization::Exponential) {
        if (window.tau) {
            w.tau = *window.tau;
        } else {
            w.tau = 4.0 * units::kHbar / meta_number(record.meta, "model", "kappa");
        }
        if (!(w.tau > 0) || !std::isfinite(w.tau)) {
            throw WindowOutOfRangeError("apodization time constant must be positive");
        }
    }
    return w;
}

nlohmann::json to_json(const ResolvedWindow& w)
{
    return {{"tStart", w.tStart},         {"tEnd", w.tEnd},
            {"apodization", to_string(w.apodization)},
            {"tau", w.tau},               {"firstSample", w.firstSample},
            {"numSamples", w.numSamples}};
}

SpectrumMap time_fft(const SpatioTemporalRecord& record, const std::string& fieldName, const FftWindow& window,
                     std::optional<FrequencyBand> band)
{
    const auto& field = record.field(fieldName);
    const auto w = resolve_window(record, window);
    const std::size_t n = field.numSites;
    const std::size_t m = w.numSamples;
    const double dt = record.times[1] - record.times[0];
    const double t0 = record.times[w.firstSample];

    auto* buffer = fftw_alloc_complex(m * n);
    auto* data = reinterpret_cast<cplx*>(buffer);
    for (std::size_t j = 0; j < m; ++j) {
        const std::size_t s = w.firstSample + j;
        double weight = 1.0;
        if (w.apodization == Apodization::Exponential) {
            weight = std::exp(-(record.times[s] - w.tStart) / w.tau);
        }
        if (field.isComplex) {
            const auto row = field.complexRow(s);
            for (std::size_t i = 0; i < n; ++i) {
                data[j * n + i] = weight * row[i];
            }
        } else {
            const auto row = field.realRow(s);
            for (std::size_t i = 0; i < n; ++i) {
                data[j * n + i] = weight * row[i];
            }
        }
    }

    fftw_plan plan;
    {
        std::lock_guard lock(detail::fftw_planner_mutex());
        const int len = static_cast<int>(m);
        plan = fftw_plan_many_dft(1, &len, static_cast<int>(n), buffer, nullptr, static_cast<int>(n), 1, buffer,
                                  nullptr, static_cast<int>(n), 1, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);

    // Ascending order: bins -floor(M/2) .. ceil(M/2) - 1.
    const auto half = static_cast<long>(m / 2);
    const double dOmega = 2.0 * std::numbers::pi * units::kHbar / (static_cast<double>(m) * dt);
    SpectrumMap out;
    out.numSites = n;
    out.window = w;
    for (long k = -half; k < static_cast<long>(m) - half; ++k) {
        const double omega = static_cast<double>(k) * dOmega;
        if (band && (omega < band->lo || omega > band->hi)) {
            continue;
        }
        const std::size_t src = static_cast<std::size_t>((k + static_cast<long>(m)) % static_cast<long>(m));
        const cplx factor = dt * std::polar(1.0, omega * t0 / units::kHbar);
        out.omegas.push_back(omega);
        for (std::size_t i = 0; i < n; ++i) {
            out.values.push_back(factor * data[src * n + i]);
        }
    }

    {
        std::lock_guard lock(detail::fftw_planner_mutex());
        fftw_destroy_plan(plan);
        fftw_free(buffer);
    }
    return out;
}

RealSpectrumMap differential_transmission(const SpatioTemporalRecord& hierRecord, const FftWindow& window,
                                          std::optional<FrequencyBand> band)
{
    const double kappa = meta_number(hierRecord.meta, "model", "kappa");
    const auto probe = time_fft(hierRecord, "alpha01", window, band);
    const auto signal = time_fft(hierRecord, "alpha21", window, band);
    RealSpectrumMap out;
    out.omegas = probe.omegas;
    out.numSites = probe.numSites;
    out.window = probe.window;
    out.values.resize(probe.values.size());
    const double prefactor = 0.5 * kappa * kappa;
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        out.values[i] = prefactor * std::real(probe.values[i] * std::conj(signal.values[i]));
    }
    return out;
}

void scale_transmission(RealSpectrumMap& map, double etaPump, double etaProbe)
{
    const double factor = etaPump * etaPump * etaProbe * etaProbe;
    for (auto& v : map.values) {
        v *= factor;
    }
}

std::vector<double> band_integrated_magnitude(const RealSpectrumMap& map, double center, double halfWidth)
{
    std::vector<double> out(map.numSites, 0.0);
    if (map.omegas.size() < 2) {
        return out;
    }
    const double dOmega = map.omegas[1] - map.omegas[0];
    for (std::size_t m = 0; m < map.numFreqs(); ++m) {
        if (std::abs(map.omegas[m] - center) > halfWidth) {
            continue;
        }
        const auto row = map.row(m);
        for (std::size_t i = 0; i < map.numSites; ++i) {
            out[i] += std::abs(row[i]) * dOmega;
        }
    }
    return out;
}

std::vector<double> frequency_slice(const RealSpectrumMap& map, double omega)
{
    if (map.omegas.empty()) {
        throw WindowOutOfRangeError("frequency slice of an empty spectrum");
    }
    std::size_t best = 0;
    for (std::size_t m = 1; m < map.numFreqs(); ++m) {
        if (std::abs(map.omegas[m] - omega) < std::abs(map.omegas[best] - omega)) {
            best = m;
        }
    }
    const auto row = map.row(best);
    return {row.begin(), row.end()};
}

BeerLambertResult beer_lambert_check(const SpatioTemporalRecord& record, double omega, SiteRange fitRange,
                                     const ModelParams& p)
{
    const auto& a = record.field("photon");
    if (fitRange.first < 0 || fitRange.last >= static_cast<int>(a.numSites) || fitRange.last < fitRange.first) {
        throw FitRangeError("fit range leaves the grid");
    }
    if (fitRange.last - fitRange.first + 1 < 8) {
        throw FitRangeError("fit range needs at least 8 sites");
    }
    const auto grid = LatticeGrid::from(p);
    std::vector<double> r;
    std::vector<double> logEnvelope;
    for (int site = fitRange.first; site <= fitRange.last; ++site) {
        double peak = 0.0;
        for (std::size_t s = 0; s < a.numSnapshots(); ++s) {
            peak = std::max(peak, std::norm(a.complexRow(s)[static_cast<std::size_t>(site)]));
        }
        if (!(peak > 0)) {
            throw FitRangeError("non-positive photon population at site " + std::to_string(site));
        }
        r.push_back(grid.positions[static_cast<std::size_t>(site)]);
        logEnvelope.push_back(std::log(peak));
    }
    const auto fit = fit_line(r, logEnvelope);
    BeerLambertResult out;
    out.simSlope = fit.slope;
    out.rSquared = fit.rSquared;
    out.predSlope = 2.0 * lambda_of_omega(omega, -1.0, p).real() / p.siteSpacing();
    return out;
}

}  // namespace polariton
