#include "helpers.hpp"

#include "polariton/errors.hpp"
#include "polariton/observables.hpp"

#include <doctest.h>

#include <random>

using namespace polariton;
using testing::kPi;

namespace {

MeanFieldState random_state(std::size_t n, unsigned seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 0.1);
    auto s = MeanFieldState::vacuum(n);
    for (std::size_t i = 0; i < n; ++i) {
        s.photon[i] = {g(rng), g(rng)};
        s.coherence[i] = {g(rng), g(rng)};
        s.inversion[i] = -1.0 + std::abs(g(rng));
    }
    return s;
}

}  // namespace

TEST_CASE("vacuum is a fixed point")
{
    const auto p = testing::small_model();
    const auto n = static_cast<std::size_t>(p.numSites);
    const std::vector<cplx> noDrive(n);
    const auto d = rhs(MeanFieldState::vacuum(n), noDrive, p);
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(d.photon[i] == cplx(0.0, 0.0));
        CHECK(d.coherence[i] == cplx(0.0, 0.0));
        CHECK(d.inversion[i] == 0.0);
    }
}

TEST_CASE("uniform uncoupled photon is a damped oscillator")
{
    auto p = testing::small_model();
    p.rabi = 0.0;
    const auto n = static_cast<std::size_t>(p.numSites);
    auto s = MeanFieldState::vacuum(n);
    const cplx a0(0.3, -0.2);
    std::fill(s.photon.begin(), s.photon.end(), a0);
    const std::vector<cplx> noDrive(n);
    const auto d = rhs(s, noDrive, p);
    const cplx expected = -cplx(p.kappa / 2, p.omegaC) * a0 / units::kHbar;
    CHECK(std::abs(d.photon[17] - expected) < 1e-15);

    IntegratorConfig ic;
    ic.tEnd = 500.0;
    ic.frameOmega = p.omegaC;
    const auto rec = evolve(s, {}, ic, p);
    const auto last = rec.field("photon").complexRow(rec.numSnapshots() - 1);
    const double t = rec.times.back();
    CHECK(std::norm(last[40]) == doctest::Approx(std::norm(a0) * std::exp(-p.kappa * t / units::kHbar)).epsilon(1e-9));
}

TEST_CASE("rhs commutes with lattice translation")
{
    const auto p = testing::small_model();
    const auto n = static_cast<std::size_t>(p.numSites);
    const auto s = random_state(n, 3);
    const std::size_t shift = 7;
    auto shifted = s;
    for (std::size_t i = 0; i < n; ++i) {
        shifted.photon[(i + shift) % n] = s.photon[i];
        shifted.coherence[(i + shift) % n] = s.coherence[i];
        shifted.inversion[(i + shift) % n] = s.inversion[i];
    }
    const std::vector<cplx> noDrive(n);
    const auto d = rhs(s, noDrive, p);
    const auto ds = rhs(shifted, noDrive, p);
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(std::abs(ds.photon[(i + shift) % n] - d.photon[i]) < 1e-15);
        CHECK(std::abs(ds.coherence[(i + shift) % n] - d.coherence[i]) < 1e-15);
        CHECK(std::abs(ds.inversion[(i + shift) % n] - d.inversion[i]) < 1e-15);
    }
}

TEST_CASE("zero amplitude pump leaves the vacuum untouched")
{
    const auto p = testing::small_model();
    auto pump = testing::pulse_at(p, -5.0, kPi / 2);
    pump.amplitude = 0.0;
    IntegratorConfig ic;
    ic.tEnd = 200.0;
    const auto rec = pump_only(p, pump, ic);
    for (const auto& v : rec.field("photon").complex) {
        CHECK(v == cplx(0.0, 0.0));
    }
    for (const auto& z : rec.field("inversion").real) {
        CHECK(z == -1.0);
    }
}

TEST_CASE("photon-only dynamics agree with exact evolution of lattice modes")
{
    auto p = testing::small_model();
    p.rabi = 0.0;
    const auto n = static_cast<std::size_t>(p.numSites);
    const auto grid = LatticeGrid::from(p);
    auto s = MeanFieldState::vacuum(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = grid.positions[i];
        s.photon[i] = std::exp(-r * r / 18.0) * std::polar(1.0, 1.2 * r) * 0.1;
    }
    IntegratorConfig ic;
    ic.tEnd = 300.0;
    ic.frameOmega = p.omegaC;

    const auto rec = evolve(s, {}, ic, p);
    const auto final = rec.field("photon").complexRow(rec.numSnapshots() - 1);

    // Each lattice mode is an eigenvector of the periodic stencil, so RK4 acts on it
    // through its scalar amplification polynomial.
    const double c = p.hoppingC();
    const auto steps = ic.numSteps();
    std::vector<cplx> expected(n);
    for (std::size_t q = 0; q < n; ++q) {
        const double k = grid.momenta[q];
        cplx coeff = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            coeff += s.photon[i] * std::polar(1.0, -k * grid.positions[i]);
        }
        coeff /= static_cast<double>(n);
        const double energy = p.omegaC + 2.0 * c * (1.0 - std::cos(k * grid.spacing)) - p.omegaC;
        const cplx z = ic.dt * cplx(-p.kappa / 2, -energy) / units::kHbar;
        const cplx amp = 1.0 + z + z * z / 2.0 + z * z * z / 6.0 + z * z * z * z / 24.0;
        coeff *= std::pow(amp, static_cast<double>(steps)) * std::polar(1.0, -p.omegaC * rec.times.back() / units::kHbar);
        for (std::size_t i = 0; i < n; ++i) {
            expected[i] += coeff * std::polar(1.0, k * grid.positions[i]);
        }
    }
    const double rel = testing::l2_diff<cplx>(final, expected) / testing::l2<cplx>(expected);
    CHECK(rel < 1e-10);
}

TEST_CASE("time step convergence is fourth order")
{
    auto p = testing::small_model();
    p.gammaPhi = p.kappa / 2;
    const auto pump = testing::pulse_at(p, -5.0, kPi / 2);
    auto final_photon = [&](double dt) {
        IntegratorConfig ic;
        ic.dt = dt;
        ic.tEnd = 240.0;
        ic.snapshotStride = static_cast<int>(std::lround(240.0 / dt));
        const auto rec = pump_only(p, pump, ic);
        const auto row = rec.field("photon").complexRow(rec.numSnapshots() - 1);
        return std::vector<cplx>(row.begin(), row.end());
    };
    const auto coarse = final_photon(0.4);
    const auto mid = final_photon(0.2);
    const auto fine = final_photon(0.1);
    const double ratio =
        testing::l2_diff<cplx>(coarse, mid) / testing::l2_diff<cplx>(mid, fine);
    CHECK(ratio > 12.0);
    CHECK(ratio < 20.0);
}

TEST_CASE("closed system conserves excitations after the pulse")
{
    auto p = testing::small_model();
    p.kappa = 0.0;
    p.gammaPhi = 0.0;
    auto pump = testing::pulse_at(p, -5.0, kPi / 2);
    pump.amplitude = 0.01;
    IntegratorConfig ic;
    const double quiet = pump.arrival + 8 * pump.sigmaT;
    ic.tEnd = quiet + 1000.0;
    const auto rec = pump_only(p, pump, ic);
    const auto pops = populations(rec);
    const auto nph = spatial_sum(pops.photon);
    const auto nm = spatial_sum(pops.molecular);
    double ref = -1.0;
    double drift = 0.0;
    for (std::size_t s = 0; s < rec.numSnapshots(); ++s) {
        if (rec.times[s] >= quiet) {
            const double total = nph[s] + nm[s];
            ref = ref < 0 ? total : ref;
            drift = std::max(drift, std::abs(total / ref - 1.0));
        }
    }
    CHECK(ref > 0.0);
    CHECK(drift < 1e-6);
}

TEST_CASE("Bloch vector stays inside the sphere")
{
    auto p = testing::small_model();
    auto pump = testing::pulse_at(p, 0.0, 0.0);
    pump.amplitude = 0.05;
    IntegratorConfig ic;
    ic.tEnd = 400.0;
    const auto rec = pump_only(p, pump, ic);
    const auto& s = rec.field("coherence").complex;
    const auto& z = rec.field("inversion").real;
    double worst = 0.0;
    double zMax = -1.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        worst = std::max(worst, 4 * std::norm(s[i]) + z[i] * z[i]);
        zMax = std::max(zMax, z[i]);
    }
    CHECK(zMax > -0.9);  // strongly driven, so the bound is exercised
    CHECK(worst <= 1.0 + 1e-9);
}

TEST_CASE("weak driving is linear up to quadratic corrections")
{
    const auto p = testing::small_model();
    IntegratorConfig ic;
    ic.tEnd = 300.0;
    auto coefficient = [&](double eta) {
        auto pump = testing::pulse_at(p, -5.0, kPi / 2);
        pump.amplitude = eta;
        const auto one = pump_only(p, pump, ic);
        pump.amplitude = 2 * eta;
        const auto two = pump_only(p, pump, ic);
        const auto& a1 = one.field("photon").complex;
        const auto& a2 = two.field("photon").complex;
        std::vector<cplx> twice(a1.size());
        for (std::size_t i = 0; i < a1.size(); ++i) {
            twice[i] = 2.0 * a1[i];
        }
        return testing::l2_diff<cplx>(a2, twice) / testing::l2<cplx>(a1) / (eta * eta);
    };
    const double cSmall = coefficient(1e-4);
    const double cLarge = coefficient(1e-3);
    CHECK(cSmall > 0.0);
    CHECK(cLarge / cSmall == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("reruns are bit-identical")
{
    const auto p = testing::small_model();
    const auto pump = testing::pulse_at(p, -5.0, kPi / 2);
    IntegratorConfig ic;
    ic.tEnd = 250.0;
    const auto a = pump_only(p, pump, ic);
    const auto b = pump_only(p, pump, ic);
    CHECK(a.field("photon").complex == b.field("photon").complex);
    CHECK(a.field("inversion").real == b.field("inversion").real);
}

TEST_CASE("integrator guards")
{
    const auto p = testing::small_model();
    IntegratorConfig ic;
    ic.dt = 1.0;
    CHECK_THROWS_AS(ic.validate(p), ValidationError);
    CHECK(IntegratorConfig::maxStableStep(p) == doctest::Approx(0.5 * units::kHbar / (4 * p.hoppingC())));

    auto pump = testing::pulse_at(p, 0.0, 0.0);
    pump.amplitude = 1e9;
    IntegratorConfig ok;
    ok.tEnd = 200.0;
    CHECK_THROWS_AS(pump_only(p, pump, ok), InstabilityError);
}

TEST_CASE("state_at recovers snapshots")
{
    const auto p = testing::small_model();
    const auto pump = testing::pulse_at(p, -5.0, kPi / 2);
    IntegratorConfig ic;
    ic.tEnd = 200.0;
    const auto rec = pump_only(p, pump, ic);
    const auto s = state_at(rec, 10);
    CHECK(s.time == rec.times[10]);
    CHECK(s.photon[50] == rec.field("photon").complexRow(10)[50]);
}

TEST_CASE("dephasing leaves a dragged molecular population at the launch site")
{
    ModelParams p;
    p.gammaPhi = p.kappa / 2;
    const auto pump = testing::pulse_at(p, -50.0, kPi / 2, 200.0);
    IntegratorConfig ic;
    ic.tEnd = 1300.0;
    const auto rec = pump_only(p, pump, ic);
    const auto grid = LatticeGrid::from(p);
    std::size_t site = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (std::abs(grid.positions[i] + 50.0) < std::abs(grid.positions[site] + 50.0)) {
            site = i;
        }
    }
    const auto pops = populations(rec);
    std::vector<double> t, nm;
    for (std::size_t s = 0; s < rec.numSnapshots(); ++s) {
        if (rec.times[s] >= pump.arrival + 500.0) {
            t.push_back(rec.times[s]);
            nm.push_back(pops.molecular.realRow(s)[site]);
        }
    }
    const auto fit = fit_line(t, nm);
    CHECK(nm.front() > 0.0);
    CHECK(std::abs(fit.slope) * 1000.0 / nm.front() < 0.01);
}
