#include "polariton/observables.hpp"

#include "polariton/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace polariton {

PopulationMaps populations(const SpatioTemporalRecord& record)
{
    const auto& a = record.field("photon");
    const auto& z = record.field("inversion");
    PopulationMaps maps{FieldSeries::makeReal(a.numSites, a.numSnapshots()),
                        FieldSeries::makeReal(z.numSites, z.numSnapshots())};
    for (std::size_t i = 0; i < a.complex.size(); ++i) {
        maps.photon.real[i] = std::norm(a.complex[i]);
    }
    for (std::size_t i = 0; i < z.real.size(); ++i) {
        maps.molecular.real[i] = 0.5 * (1.0 + z.real[i]);
    }
    return maps;
}

BrightDarkMaps bright_dark(const SpatioTemporalRecord& record)
{
    const auto& a = record.field("photon");
    const auto& s = record.field("coherence");
    const auto& z = record.field("inversion");
    const std::size_t n = s.numSites;
    const std::size_t snaps = s.numSnapshots();
    BrightDarkMaps maps{FieldSeries::makeReal(n, snaps), FieldSeries::makeReal(n, snaps),
                        FieldSeries::makeReal(n, snaps)};
    for (std::size_t i = 0; i < s.complex.size(); ++i) {
        const double pB = std::norm(s.complex[i]);
        maps.bright.real[i] = pB;
        maps.dark.real[i] = 0.5 * (1.0 + z.real[i]) - pB;
        maps.imPi.real[i] = std::imag(a.complex[i] * std::conj(s.complex[i]));
    }
    return maps;
}

BrightDarkRates bright_dark_rates(double pB, double imPi, double pm, const ModelParams& p)
{
    const double invHbar = 1.0 / units::kHbar;
    const double source = 2.0 * p.rabi * imPi;
    return {(-p.gammaPhi * pB + source * (1.0 - 2.0 * pm)) * invHbar,
            (p.gammaPhi * pB + source * 2.0 * pm) * invHbar};
}

double rms_of_profile(std::span<const double> weights, std::span<const double> positions, double origin)
{
    double total = 0.0;
    double moment = 0.0;
    for (std::size_t n = 0; n < weights.size(); ++n) {
        const double d = positions[n] - origin;
        total += weights[n];
        moment += weights[n] * d * d;
    }
    if (!(total >= 1e-300)) {
        throw EmptyWeightError("rms displacement: total weight below 1e-300");
    }
    return std::sqrt(moment / total);
}

double peak_of_profile(std::span<const double> weights, std::span<const double> positions)
{
    if (weights.empty()) {
        throw EmptyWeightError("peak position: empty profile");
    }
    std::size_t best = 0;
    double bestValue = std::abs(weights[0]);
    double total = bestValue;
    for (std::size_t n = 1; n < weights.size(); ++n) {
        const double v = std::abs(weights[n]);
        total += v;
        if (v > bestValue) {
            bestValue = v;
            best = n;
        }
    }
    if (!(total >= 1e-300)) {
        throw EmptyWeightError("peak position: total weight below 1e-300");
    }
    double r = positions[best];
    if (best > 0 && best + 1 < weights.size()) {
        const double left = std::abs(weights[best - 1]);
        const double right = std::abs(weights[best + 1]);
        const double curvature = left - 2.0 * bestValue + right;
        if (curvature < 0.0) {
            const double offset = 0.5 * (left - right) / curvature;
            const double spacing = 0.5 * (positions[best + 1] - positions[best - 1]);
            r += offset * spacing;
        }
    }
    return r;
}

std::vector<double> rms_displacement(const FieldSeries& weights, std::span<const double> positions,
                                     double origin)
{
    std::vector<double> out(weights.numSnapshots());
    for (std::size_t s = 0; s < out.size(); ++s) {
        out[s] = rms_of_profile(weights.realRow(s), positions, origin);
    }
    return out;
}

std::vector<double> peak_position(const FieldSeries& weights, std::span<const double> positions)
{
    std::vector<double> out(weights.numSnapshots());
    for (std::size_t s = 0; s < out.size(); ++s) {
        out[s] = peak_of_profile(weights.realRow(s), positions);
    }
    return out;
}

std::vector<double> spatial_sum(const FieldSeries& field)
{
    std::vector<double> out(field.numSnapshots());
    for (std::size_t s = 0; s < out.size(); ++s) {
        const auto row = field.realRow(s);
        out[s] = std::accumulate(row.begin(), row.end(), 0.0);
    }
    return out;
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y)
{
    const auto m = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / m;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / m;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    LinearFit fit;
    fit.slope = sxx > 0 ? sxy / sxx : 0.0;
    fit.intercept = my - fit.slope * mx;
    double ssRes = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * x[i]);
        ssRes += r * r;
    }
    fit.rSquared = syy > 0 ? std::clamp(1.0 - ssRes / syy, 0.0, 1.0) : 1.0;
    return fit;
}

}  // namespace polariton
