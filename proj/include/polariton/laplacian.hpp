// laplacian.hpp - photon hopping operator C d^2/dn^2 on the periodic chain.

#pragma once

#include "polariton/core_model.hpp"

#include <memory>
#include <span>
#include <string>

namespace polariton {

enum class Stencil {
    ThreePoint,  ///< C (a_{n+1} - 2 a_n + a_{n-1}); dispersion 2C (1 - cos k dr)
    Spectral,    ///< exact quadratic dispersion applied in k-space
};

std::string to_string(Stencil s);
Stencil stencil_from_string(const std::string& name);

/// Applies C d^2/dn^2 (in eV) with periodic boundaries. Holds FFT scratch
/// buffers for the spectral variant, so an instance is not shareable across
/// threads; create one per trajectory.
class HoppingOperator {
public:
    HoppingOperator(const ModelParams& p, Stencil stencil);
    ~HoppingOperator();
    HoppingOperator(HoppingOperator&&) noexcept;
    HoppingOperator& operator=(HoppingOperator&&) noexcept;

    void apply(std::span<const cplx> in, std::span<cplx> out);

    /// Eigenvalue of the operator on the plane wave exp(i k r_n).
    double eigenvalue(double k) const;
    Stencil stencil() const { return stencil_; }

private:
    struct SpectralPlan;
    Stencil stencil_;
    double c_;
    double spacing_;
    std::unique_ptr<SpectralPlan> spectral_;
};

}  // namespace polariton
