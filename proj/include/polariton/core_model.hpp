// core_model.hpp - physical parameters, lattice grid and polariton dispersions.
//
// Unit system: energies in eV, times in fs, lengths in um. Every equation of
// motion divides its energy terms by hbar exactly once.

#pragma once

#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

namespace polariton {

using cplx = std::complex<double>;

namespace units {
inline constexpr double kHbar = 0.6582119569;          // eV fs
inline constexpr double kSpeedOfLight = 0.299792458;   // um / fs
inline constexpr double kHbarC = kHbar * kSpeedOfLight;  // eV um
}  // namespace units

/// Physical constants and rates of the coarse-grained Tavis-Cummings chain.
struct ModelParams {
    double omega0 = 1.0;     ///< molecular transition (eV)
    double omegaC = 0.9;     ///< cavity cutoff (eV)
    double rabi = 0.05;      ///< collective coupling Omega = g sqrt(N) (eV)
    double kappa = 0.01;     ///< cavity decay (eV)
    double gammaPhi = 0.005; ///< pure dephasing (eV)
    double lengthL = 200.0;  ///< chain length (um)
    int numSites = 601;
    std::int64_t numMolecules = 1000000;
    std::vector<double> disorder;  ///< optional per-site offsets of omega0 (eV)

    /// Throws ValidationError naming the first violated invariant.
    void validate() const;

    double siteSpacing() const { return lengthL / numSites; }
    /// Photon hopping energy C = (hbar c)^2 / (2 omegaC dr^2) in eV.
    double hoppingC() const;
    double moleculesPerSite() const { return static_cast<double>(numMolecules) / numSites; }
    double singleMoleculeCoupling() const;
    /// omega0 plus the site's disorder offset, if any.
    double siteTransition(std::size_t n) const
    {
        return disorder.empty() ? omega0 : omega0 + disorder[n];
    }

    bool operator==(const ModelParams&) const = default;
};

/// Site positions r_n = n dr - L/2 and grid momenta k_Q = 2 pi Q / L.
struct LatticeGrid {
    std::vector<double> positions;  // um
    std::vector<double> momenta;    // 1/um, ascending, symmetric about zero
    double spacing = 0.0;

    static LatticeGrid from(const ModelParams& p);
    std::size_t size() const { return positions.size(); }
};

struct PolaritonPair {
    double upper;
    double lower;
};

double omega_cavity(double k, const ModelParams& p);
PolaritonPair polariton_frequencies(double k, const ModelParams& p);

// Hopfield matter weights; the two branches sum to one.
double exciton_fraction_LP(double k, const ModelParams& p);
double exciton_fraction_UP(double k, const ModelParams& p);

/// d omega_LP / dk / hbar in um/fs.
double group_velocity_LP(double k, const ModelParams& p);

/// Linear molecular susceptibility z0 / ((omega - omega0) + i gammaPhi / 2).
/// Throws PoleError on the undamped resonance.
cplx susceptibility(double omega, double z0, const ModelParams& p);

/// lambda^2(omega) = -[(omega - omegaC) + i kappa/2 + Omega^2 chi(omega)] / C, per site^2.
cplx lambda_squared(double omega, double z0, const ModelParams& p);

/// Root of lambda_squared with Re <= 0, so e^{lambda |n - n0|} decays away from n0.
/// Per site; divide by the site spacing for a per-um constant.
cplx lambda_of_omega(double omega, double z0, const ModelParams& p);

}  // namespace polariton
