#include "polariton/core_model.hpp"

#include "polariton/errors.hpp"

#include <cmath>
#include <string>

namespace polariton {

namespace {

void require(bool ok, const std::string& invariant)
{
    if (!ok) {
        throw ValidationError("model: " + invariant);
    }
}

}  // namespace

void ModelParams::validate() const
{
    require(std::isfinite(omega0) && omega0 > 0, "omega0 > 0");
    require(std::isfinite(omegaC) && omegaC > 0, "omegaC > 0");
    require(std::isfinite(rabi) && rabi >= 0, "rabi >= 0");
    require(std::isfinite(kappa) && kappa >= 0, "kappa >= 0");
    require(std::isfinite(gammaPhi) && gammaPhi >= 0, "gammaPhi >= 0");
    require(std::isfinite(lengthL) && lengthL > 0, "lengthL > 0");
    require(numSites >= 3, "numSites >= 3");
    require(numSites % 2 == 1, "numSites must be odd (parity invariant)");
    require(numMolecules >= numSites, "numMolecules >= numSites");
    require(disorder.empty() || disorder.size() == static_cast<std::size_t>(numSites),
            "disorder length equals numSites");
    const double c = hoppingC();
    require(std::isfinite(c) && c > 0, "hopping C finite and positive");
}

double ModelParams::hoppingC() const
{
    const double dr = siteSpacing();
    return units::kHbarC * units::kHbarC / (2.0 * omegaC * dr * dr);
}

double ModelParams::singleMoleculeCoupling() const
{
    return rabi / std::sqrt(static_cast<double>(numMolecules));
}

LatticeGrid LatticeGrid::from(const ModelParams& p)
{
    LatticeGrid grid;
    const auto n = static_cast<std::size_t>(p.numSites);
    grid.spacing = p.siteSpacing();
    grid.positions.resize(n);
    grid.momenta.resize(n);
    const int half = p.numSites / 2;
    for (std::size_t i = 0; i < n; ++i) {
        grid.positions[i] = static_cast<double>(i) * grid.spacing - 0.5 * p.lengthL;
        const int q = static_cast<int>(i) - half;
        grid.momenta[i] = 2.0 * std::numbers::pi * q / p.lengthL;
    }
    return grid;
}

double omega_cavity(double k, const ModelParams& p)
{
    const double e = units::kHbarC * k;
    return p.omegaC + e * e / (2.0 * p.omegaC);
}

PolaritonPair polariton_frequencies(double k, const ModelParams& p)
{
    const double wk = omega_cavity(k, p);
    const double delta = p.omega0 - wk;
    const double root = std::hypot(delta, 2.0 * p.rabi);
    const double mean = p.omega0 + wk;
    return {0.5 * (mean + root), 0.5 * (mean - root)};
}

double exciton_fraction_LP(double k, const ModelParams& p)
{
    const double delta = omega_cavity(k, p) - p.omega0;
    const double root = std::hypot(delta, 2.0 * p.rabi);
    if (root == 0.0) {
        return 0.5;
    }
    return 0.5 * (1.0 + delta / root);
}

double exciton_fraction_UP(double k, const ModelParams& p)
{
    const double delta = omega_cavity(k, p) - p.omega0;
    const double root = std::hypot(delta, 2.0 * p.rabi);
    if (root == 0.0) {
        return 0.5;
    }
    return 0.5 * (1.0 - delta / root);
}

double group_velocity_LP(double k, const ModelParams& p)
{
    // d omega_k / dk = (hbar c)^2 k / omegaC; the LP carries the photon weight 1 - X^2.
    const double cavitySlope = units::kHbarC * units::kHbarC * k / p.omegaC;
    return (1.0 - exciton_fraction_LP(k, p)) * cavitySlope / units::kHbar;
}

cplx susceptibility(double omega, double z0, const ModelParams& p)
{
    const double detuning = omega - p.omega0;
    if (detuning == 0.0 && p.gammaPhi == 0.0) {
        throw PoleError("susceptibility pole at omega = omega0 with gammaPhi = 0");
    }
    return z0 / cplx(detuning, 0.5 * p.gammaPhi);
}

cplx lambda_squared(double omega, double z0, const ModelParams& p)
{
    const cplx chi = susceptibility(omega, z0, p);
    const cplx bracket = cplx(omega - p.omegaC, 0.5 * p.kappa) + p.rabi * p.rabi * chi;
    return -bracket / p.hoppingC();
}

cplx lambda_of_omega(double omega, double z0, const ModelParams& p)
{
    cplx root = std::sqrt(lambda_squared(omega, z0, p));
    // Principal sqrt has Re >= 0; flip to the decaying branch.
    if (root.real() > 0.0 || (root.real() == 0.0 && root.imag() < 0.0)) {
        root = -root;
    }
    return root;
}

}  // namespace polariton
