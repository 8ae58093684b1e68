#include "helpers.hpp"

#include "polariton/errors.hpp"
#include "polariton/hierarchy.hpp"
#include "polariton/observables.hpp"
#include "polariton/spectrum.hpp"

#include <doctest.h>

#include <numeric>
#include <random>

using namespace polariton;
using testing::kPi;

namespace {

SpatioTemporalRecord mean_field_record(std::size_t sites, std::size_t snaps)
{
    SpatioTemporalRecord r;
    for (std::size_t s = 0; s < snaps; ++s) {
        r.times.push_back(0.5 * static_cast<double>(s));
    }
    r.fields.emplace("photon", FieldSeries::makeComplex(sites, snaps));
    r.fields.emplace("coherence", FieldSeries::makeComplex(sites, snaps));
    auto z = FieldSeries::makeReal(sites, snaps);
    std::fill(z.real.begin(), z.real.end(), -1.0);
    r.fields.emplace("inversion", z);
    return r;
}

std::vector<double> positions(std::size_t n, double spacing)
{
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) {
        r[i] = (static_cast<double>(i) - static_cast<double>(n / 2)) * spacing;
    }
    return r;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y)
{
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace

TEST_CASE("populations of simple states")
{
    auto r = mean_field_record(5, 3);
    const auto vac = populations(r);
    for (double v : vac.photon.real) {
        CHECK(v == 0.0);
    }
    for (double v : vac.molecular.real) {
        CHECK(v == 0.0);
    }
    const auto bdVac = bright_dark(r);
    for (std::size_t i = 0; i < bdVac.bright.real.size(); ++i) {
        CHECK(bdVac.bright.real[i] == 0.0);
        CHECK(bdVac.dark.real[i] == 0.0);
        CHECK(bdVac.imPi.real[i] == 0.0);
    }

    r.fields.at("inversion").realRow(1)[2] = 1.0;
    r.fields.at("photon").complexRow(1)[2] = {0.3, 0.4};
    const auto pops = populations(r);
    CHECK(pops.molecular.realRow(1)[2] == 1.0);
    CHECK(pops.photon.realRow(1)[2] == doctest::Approx(0.25));

    SpatioTemporalRecord missing;
    missing.times = {0.0};
    CHECK_THROWS_AS(populations(missing), MissingFieldError);
}

TEST_CASE("coherently excited molecules are fully bright")
{
    auto r = mean_field_record(4, 1);
    const cplx values[] = {{0.25, 0.0}, {0.1, -0.2}, {0.0, 0.05}, {0.3, 0.3}};
    for (std::size_t n = 0; n < 4; ++n) {
        r.fields.at("coherence").complexRow(0)[n] = values[n];
        r.fields.at("inversion").realRow(0)[n] = -1.0 + 2.0 * std::norm(values[n]);
        r.fields.at("photon").complexRow(0)[n] = {0.1, 0.2};
    }
    const auto bd = bright_dark(r);
    CHECK(bd.dark.realRow(0)[0] == 0.0);
    for (std::size_t n = 0; n < 4; ++n) {
        CHECK(std::abs(bd.dark.realRow(0)[n]) < 1e-16);
        const cplx expected = cplx(0.1, 0.2) * std::conj(values[n]);
        CHECK(bd.imPi.realRow(0)[n] == doctest::Approx(expected.imag()));
    }
}

TEST_CASE("bright and dark populations along a dephasing trajectory")
{
    auto p = testing::small_model();
    p.gammaPhi = p.kappa / 2;
    const auto pump = testing::pulse_at(p, -5.0, kPi / 2);
    IntegratorConfig ic;
    ic.tEnd = 400.0;
    const auto rec = pump_only(p, pump, ic);
    const auto bd = bright_dark(rec);
    const auto pops = populations(rec);
    double worstSum = 0.0;
    double minDark = 0.0;
    double maxDark = 0.0;
    for (std::size_t i = 0; i < bd.dark.real.size(); ++i) {
        worstSum = std::max(worstSum, std::abs(bd.bright.real[i] + bd.dark.real[i] - pops.molecular.real[i]));
        minDark = std::min(minDark, bd.dark.real[i]);
        maxDark = std::max(maxDark, bd.dark.real[i]);
    }
    CHECK(worstSum < 1e-16);
    CHECK(minDark > -1e-9);
    CHECK(maxDark > 0.0);
}

TEST_CASE("bright and dark rates add up to the inversion source")
{
    // dark + bright must change at the rate implied by the inversion equation
    const ModelParams p;
    const double pB = 0.02, imPi = 0.003, pm = 0.03;
    const auto rates = bright_dark_rates(pB, imPi, pm, p);
    CHECK(rates.bright + rates.dark == doctest::Approx(2.0 * p.rabi * imPi / units::kHbar).epsilon(1e-14));
    const auto quiet = bright_dark_rates(pB, 0.0, pm, p);
    CHECK(quiet.bright == doctest::Approx(-p.gammaPhi * pB / units::kHbar));
    CHECK(quiet.dark == doctest::Approx(p.gammaPhi * pB / units::kHbar));
}

TEST_CASE("photon and molecular totals move together without dephasing")
{
    ModelParams p;
    p.gammaPhi = 0.0;
    const auto pump = testing::pulse_at(p, -50.0, kPi / 2, 200.0);
    IntegratorConfig ic;
    ic.tEnd = 1000.0;
    const auto rec = pump_only(p, pump, ic);
    const auto pops = populations(rec);
    CHECK(pearson(spatial_sum(pops.photon), spatial_sum(pops.molecular)) > 0.99);
}

TEST_CASE("rms and peak of fixed profiles")
{
    const auto r = positions(101, 0.5);
    std::vector<double> w(101, 0.0);
    w[50] = 1.0;
    CHECK(rms_of_profile(w, r, 0.0) == 0.0);
    CHECK(peak_of_profile(w, r) == r[50]);
    w[50] = 0.0;
    w[40] = 2.0;
    w[60] = 2.0;
    CHECK(rms_of_profile(w, r, 0.0) == doctest::Approx(5.0));
    CHECK(peak_of_profile(w, r) == r[40]);
    w.assign(101, 0.0);
    w[73] = 3.0;
    CHECK(peak_of_profile(w, r) == r[73]);
    CHECK_THROWS_AS(rms_of_profile(std::vector<double>(101, 0.0), r, 0.0), EmptyWeightError);

    const auto fine = positions(601, 200.0 / 601.0);
    std::vector<double> g(601);
    for (std::size_t i = 0; i < 601; ++i) {
        g[i] = std::exp(-fine[i] * fine[i] / (2 * 25.0));
    }
    CHECK(rms_of_profile(g, fine, 0.0) == doctest::Approx(5.0).epsilon(0.01));
}

TEST_CASE("peak of a moving Gaussian follows its centre")
{
    const auto r = positions(601, 200.0 / 601.0);
    auto series = FieldSeries::makeReal(r.size());
    std::vector<double> t;
    for (int s = 0; s <= 40; ++s) {
        const double time = 25.0 * s;
        const double c = -30.0 + 0.05 * time;
        std::vector<double> row(r.size());
        for (std::size_t i = 0; i < r.size(); ++i) {
            row[i] = std::exp(-std::pow(r[i] - c, 2) / (2 * 16.0));
        }
        series.appendRow(std::span<const double>(row));
        t.push_back(time);
    }
    const auto peaks = peak_position(series, r);
    for (std::size_t s = 0; s < t.size(); ++s) {
        CHECK(std::abs(peaks[s] - (-30.0 + 0.05 * t[s])) < 0.1);
    }
    const auto fit = fit_line(t, peaks);
    CHECK(fit.slope == doctest::Approx(0.05).epsilon(1e-3));
    const auto rms = rms_displacement(series, r, -30.0);
    CHECK(rms.front() == doctest::Approx(4.0).epsilon(0.01));
}

TEST_CASE("line fit")
{
    const std::vector<double> x{0, 1, 2, 3};
    const auto exact = fit_line(x, std::vector<double>{1, 3, 5, 7});
    CHECK(exact.slope == doctest::Approx(2.0));
    CHECK(exact.intercept == doctest::Approx(1.0));
    CHECK(exact.rSquared == doctest::Approx(1.0));
    const auto flat = fit_line(x, std::vector<double>{4, 4, 4, 4});
    CHECK(flat.slope == 0.0);
    CHECK(flat.rSquared == 1.0);
    const auto noisy = fit_line(x, std::vector<double>{0, 1, 0, 1});
    CHECK(noisy.rSquared >= 0.0);
    CHECK(noisy.rSquared <= 1.0);
}

namespace {

SpatioTemporalRecord series_record(const std::vector<double>& t, const std::vector<cplx>& values)
{
    SpatioTemporalRecord r;
    r.times = t;
    auto f = FieldSeries::makeComplex(1);
    for (const auto& v : values) {
        f.appendRow(std::span<const cplx>(&v, 1));
    }
    r.fields.emplace("photon", f);
    return r;
}

}  // namespace

TEST_CASE("Fourier transform of a monochromatic signal")
{
    std::vector<double> t;
    std::vector<cplx> v;
    const double w0 = 0.93;
    for (int i = 0; i < 2048; ++i) {
        t.push_back(100.0 + 0.5 * i);
        v.push_back(std::polar(1.0, -w0 * t.back() / units::kHbar));
    }
    const auto spec = time_fft(series_record(t, v), "photon");
    std::size_t best = 0;
    for (std::size_t m = 0; m < spec.numFreqs(); ++m) {
        if (std::abs(spec.values[m]) > std::abs(spec.values[best])) {
            best = m;
        }
    }
    const double bin = spec.omegas[1] - spec.omegas[0];
    CHECK(bin == doctest::Approx(2 * kPi * units::kHbar / (2048 * 0.5)));
    CHECK(std::abs(spec.omegas[best] - w0) <= bin);
    for (std::size_t m = 1; m < spec.numFreqs(); ++m) {
        CHECK(spec.omegas[m] > spec.omegas[m - 1]);
    }
}

TEST_CASE("Fourier transform of a real signal is Hermitian and preserves energy")
{
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    std::vector<double> t;
    std::vector<cplx> real;
    std::vector<cplx> complex;
    for (int i = 0; i < 1000; ++i) {
        t.push_back(0.2 * i);
        real.push_back(g(rng));
        complex.push_back({g(rng), g(rng)});
    }
    const auto spec = time_fft(series_record(t, real), "photon");
    const std::size_t m = spec.numFreqs();
    const double bin = spec.omegas[1] - spec.omegas[0];
    std::size_t zero = 0;
    for (std::size_t i = 0; i < m; ++i) {
        if (std::abs(spec.omegas[i]) < std::abs(spec.omegas[zero])) {
            zero = i;
        }
    }
    CHECK(std::abs(spec.omegas[zero]) < 1e-12);
    for (std::size_t j = 1; zero + j < m && j <= zero; ++j) {
        CHECK(spec.omegas[zero + j] == doctest::Approx(-spec.omegas[zero - j]));
        CHECK(std::abs(spec.values[zero + j] - std::conj(spec.values[zero - j])) < 1e-10);
    }

    const auto cspec = time_fft(series_record(t, complex), "photon");
    double timeEnergy = 0.0;
    for (const auto& v : complex) {
        timeEnergy += std::norm(v) * 0.2;
    }
    double freqEnergy = 0.0;
    for (const auto& v : cspec.values) {
        freqEnergy += std::norm(v) * bin / (2 * kPi * units::kHbar);
    }
    CHECK(freqEnergy == doctest::Approx(timeEnergy).epsilon(1e-10));
}

TEST_CASE("window resolution")
{
    std::vector<double> t;
    std::vector<cplx> v;
    for (int i = 0; i < 100; ++i) {
        t.push_back(1.0 * i);
        v.push_back(1.0);
    }
    auto r = series_record(t, v);
    FftWindow w;
    w.tStart = 10.0;
    w.tEnd = 50.0;
    const auto resolved = resolve_window(r, w);
    CHECK(resolved.firstSample == 10);
    CHECK(resolved.numSamples == 41);
    w.tStart = 200.0;
    CHECK_THROWS_AS(resolve_window(r, w), WindowOutOfRangeError);
    r.meta["probe"] = {{"arrival", 20.0}, {"sigmaT", 5.0}};
    CHECK(resolve_window(r, FftWindow{}).tStart == doctest::Approx(40.0));
    r.meta["model"] = {{"kappa", 0.01}};
    FftWindow apod;
    apod.apodization = Apodization::Exponential;
    CHECK(resolve_window(r, apod).tau == doctest::Approx(4 * units::kHbar / 0.01));
    r.times[50] += 0.3;
    CHECK_THROWS_AS(resolve_window(r, FftWindow{}), WindowOutOfRangeError);
}

TEST_CASE("differential transmission scaling and band handling")
{
    const auto p = testing::small_model();
    const auto pump = testing::pulse_at(p, -5.0, kPi / 2);
    const auto probe = testing::pulse_at(p, 5.0, -kPi / 2);
    IntegratorConfig ic;
    ic.tEnd = 400.0;
    const auto hier = evolve_hierarchy(pump, probe, ic, p);
    const FrequencyBand band{pump.omegaDrive - 0.1, pump.omegaDrive + 0.1};
    const auto base = differential_transmission(hier, {}, band);
    CHECK(base.omegas.front() >= band.lo);
    CHECK(base.omegas.back() <= band.hi);
    auto once = base;
    auto quadrupled = base;
    scale_transmission(once, 1e-3, 1e-3);
    scale_transmission(quadrupled, 2e-3, 1e-3);
    double peak = 0.0;
    for (std::size_t i = 0; i < base.values.size(); ++i) {
        CHECK(quadrupled.values[i] == doctest::Approx(4.0 * once.values[i]).epsilon(1e-12));
        peak = std::max(peak, std::abs(base.values[i]));
    }
    CHECK(peak > 0.0);

    const auto profile = band_integrated_magnitude(base, pump.omegaDrive, 0.1);
    CHECK(profile.size() == static_cast<std::size_t>(p.numSites));
    const auto slice = frequency_slice(base, pump.omegaDrive);
    CHECK(slice.size() == static_cast<std::size_t>(p.numSites));
}

TEST_CASE("spatial decay fit guards")
{
    const auto p = testing::small_model();
    const auto pump = testing::pulse_at(p, -5.0, kPi / 2);
    IntegratorConfig ic;
    ic.tEnd = 300.0;
    const auto rec = pump_only(p, pump, ic);
    CHECK_THROWS_AS(beer_lambert_check(rec, pump.omegaDrive, SiteRange{70, 75}, p), FitRangeError);
    CHECK_THROWS_AS(beer_lambert_check(rec, pump.omegaDrive, SiteRange{110, 130}, p), FitRangeError);

    auto silent = pump;
    silent.amplitude = 0.0;
    const auto empty = pump_only(p, silent, ic);
    CHECK_THROWS_AS(beer_lambert_check(empty, pump.omegaDrive, SiteRange{70, 90}, p), FitRangeError);
}
