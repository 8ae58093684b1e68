#include "polariton/laplacian.hpp"

#include "polariton/errors.hpp"
#include "fftw_lock.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>
#include <vector>

namespace polariton {

std::mutex& detail::fftw_planner_mutex()
{
    static std::mutex m;
    return m;
}

std::string to_string(Stencil s)
{
    return s == Stencil::ThreePoint ? "three-point" : "spectral";
}

Stencil stencil_from_string(const std::string& name)
{
    if (name == "three-point") {
        return Stencil::ThreePoint;
    }
    if (name == "spectral") {
        return Stencil::Spectral;
    }
    throw ValidationError("integrator.stencil must be 'three-point' or 'spectral', got '" + name + "'");
}

struct HoppingOperator::SpectralPlan {
    int n;
    fftw_complex* buffer;
    fftw_plan forward;
    fftw_plan backward;
    std::vector<double> multiplier;  // eigenvalue / n

    SpectralPlan(int size, double c) : n(size)
    {
        std::lock_guard lock(detail::fftw_planner_mutex());
        buffer = fftw_alloc_complex(static_cast<std::size_t>(n));
        forward = fftw_plan_dft_1d(n, buffer, buffer, FFTW_FORWARD, FFTW_ESTIMATE);
        backward = fftw_plan_dft_1d(n, buffer, buffer, FFTW_BACKWARD, FFTW_ESTIMATE);
        multiplier.resize(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) {
            const int q = j <= n / 2 ? j : j - n;
            const double x = 2.0 * std::numbers::pi * q / n;  // k dr
            multiplier[static_cast<std::size_t>(j)] = -c * x * x / n;
        }
    }

    ~SpectralPlan()
    {
        std::lock_guard lock(detail::fftw_planner_mutex());
        fftw_destroy_plan(forward);
        fftw_destroy_plan(backward);
        fftw_free(buffer);
    }

    SpectralPlan(const SpectralPlan&) = delete;
    SpectralPlan& operator=(const SpectralPlan&) = delete;
};

HoppingOperator::HoppingOperator(const ModelParams& p, Stencil stencil)
    : stencil_(stencil), c_(p.hoppingC()), spacing_(p.siteSpacing())
{
    if (stencil_ == Stencil::Spectral) {
        spectral_ = std::make_unique<SpectralPlan>(p.numSites, c_);
    }
}

HoppingOperator::~HoppingOperator() = default;
HoppingOperator::HoppingOperator(HoppingOperator&&) noexcept = default;
HoppingOperator& HoppingOperator::operator=(HoppingOperator&&) noexcept = default;

void HoppingOperator::apply(std::span<const cplx> in, std::span<cplx> out)
{
    const std::size_t n = in.size();
    if (stencil_ == Stencil::ThreePoint) {
        out[0] = c_ * (in[1] - 2.0 * in[0] + in[n - 1]);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            out[i] = c_ * (in[i + 1] - 2.0 * in[i] + in[i - 1]);
        }
        out[n - 1] = c_ * (in[0] - 2.0 * in[n - 1] + in[n - 2]);
        return;
    }
    auto& plan = *spectral_;
    std::memcpy(plan.buffer, in.data(), n * sizeof(cplx));
    fftw_execute(plan.forward);
    for (std::size_t j = 0; j < n; ++j) {
        plan.buffer[j][0] *= plan.multiplier[j];
        plan.buffer[j][1] *= plan.multiplier[j];
    }
    fftw_execute(plan.backward);
    std::memcpy(static_cast<void*>(out.data()), plan.buffer, n * sizeof(cplx));
}

double HoppingOperator::eigenvalue(double k) const
{
    const double x = k * spacing_;
    if (stencil_ == Stencil::ThreePoint) {
        return -2.0 * c_ * (1.0 - std::cos(x));
    }
    return -c_ * x * x;
}

}  // namespace polariton
