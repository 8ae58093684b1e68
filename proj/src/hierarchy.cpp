#include "polariton/hierarchy.hpp"

#include "polariton/errors.hpp"
#include "polariton/rk4.hpp"

#include <array>
#include <cmath>
#include <string>

namespace polariton {

PerturbativeState PerturbativeState::zero(std::size_t numSites)
{
    PerturbativeState s;
    for (auto* v : {&s.alpha10, &s.sigma10, &s.alpha01, &s.sigma01, &s.alpha21, &s.sigma21}) {
        v->assign(numSites, cplx{});
    }
    s.z20.assign(numSites, 0.0);
    s.z11.assign(numSites, 0.0);
    return s;
}

namespace {

// Block order inside the packed state vector.
enum Block : std::size_t { A10, S10, Z20, A01, S01, Z11, A21, S21, kNumBlocks };

constexpr double kGroundInversion = -1.0;  // z^(0,0)

struct BlockView {
    std::size_t n;
    std::span<const cplx> y;
    std::span<const cplx> operator[](Block b) const { return y.subspan(b * n, n); }
};

/// Derivative in a frame rotating at `frame`. z blocks are complex with an
/// exactly zero imaginary part. When `thirdOrder` is false only the blocks
/// up to Z11 are read or written.
void hierarchy_kernel(BlockView in, std::span<cplx> out, std::span<const cplx> pumpDrive,
                      std::span<const cplx> probeDrive, const ModelParams& p, double frame,
                      HoppingOperator& hopping, std::span<cplx> lap, bool thirdOrder)
{
    const std::size_t n = in.n;
    const double invHbar = 1.0 / units::kHbar;
    const cplx photonRate(-0.5 * p.kappa, -(p.omegaC - frame));
    const cplx iRabi(0.0, p.rabi);
    const cplx iUnit(0.0, 1.0);
    auto dst = [&](Block b) { return out.subspan(b * n, n); };

    auto photonBlock = [&](Block ab, Block sb, std::span<const cplx> drive) {
        const auto a = in[ab];
        const auto s = in[sb];
        hopping.apply(a, lap);
        auto da = dst(ab);
        for (std::size_t i = 0; i < n; ++i) {
            cplx v = photonRate * a[i] + iUnit * lap[i] - iRabi * s[i];
            if (!drive.empty()) {
                v += drive[i];
            }
            da[i] = v * invHbar;
        }
    };

    photonBlock(A10, S10, pumpDrive);
    photonBlock(A01, S01, probeDrive);

    const auto a10 = in[A10];
    const auto s10 = in[S10];
    const auto a01 = in[A01];
    const auto s01 = in[S01];
    auto ds10 = dst(S10);
    auto ds01 = dst(S01);
    auto dz20 = dst(Z20);
    auto dz11 = dst(Z11);
    for (std::size_t i = 0; i < n; ++i) {
        const cplx coherenceRate(-0.5 * p.gammaPhi, -(p.siteTransition(i) - frame));
        ds10[i] = (coherenceRate * s10[i] + iRabi * kGroundInversion * a10[i]) * invHbar;
        ds01[i] = (coherenceRate * s01[i] + iRabi * kGroundInversion * a01[i]) * invHbar;
        dz20[i] = cplx(-4.0 * p.rabi * std::imag(s10[i] * std::conj(a10[i])) * invHbar, 0.0);
        dz11[i] = cplx(-4.0 * p.rabi *
                           std::imag(s10[i] * std::conj(a01[i]) + s01[i] * std::conj(a10[i])) *
                           invHbar,
                       0.0);
    }

    if (!thirdOrder) {
        return;
    }

    photonBlock(A21, S21, {});
    const auto a21 = in[A21];
    const auto s21 = in[S21];
    const auto z20 = in[Z20];
    const auto z11 = in[Z11];
    auto ds21 = dst(S21);
    for (std::size_t i = 0; i < n; ++i) {
        const cplx coherenceRate(-0.5 * p.gammaPhi, -(p.siteTransition(i) - frame));
        const cplx source = kGroundInversion * a21[i] + z11[i].real() * a10[i] + z20[i].real() * a01[i];
        ds21[i] = (coherenceRate * s21[i] + iRabi * source) * invHbar;
    }
}

class HierarchySystem {
public:
    HierarchySystem(const ModelParams& p, const PulseSpec& pump, const PulseSpec& probe,
                    const LatticeGrid& grid, Stencil stencil, double frame, bool thirdOrder)
        : p_(p), n_(static_cast<std::size_t>(p.numSites)), hopping_(p, stencil), frame_(frame),
          thirdOrder_(thirdOrder), pump_(pump, grid, pump.amplitude > 0 ? 1.0 : 0.0),
          probe_(probe, grid, probe.amplitude > 0 ? 1.0 : 0.0), lap_(n_), pumpDrive_(n_), probeDrive_(n_)
    {
    }

    void operator()(double t, std::span<const cplx> y, std::span<cplx> dy)
    {
        fill(pump_, t, pumpDrive_);
        fill(probe_, t, probeDrive_);
        hierarchy_kernel(BlockView{n_, y}, dy, pumpDrive_, probeDrive_, p_, frame_, hopping_, lap_,
                         thirdOrder_);
    }

private:
    void fill(const DriveSource& src, double t, std::vector<cplx>& out) const
    {
        if (!src.active(t)) {
            std::fill(out.begin(), out.end(), cplx{});
            return;
        }
        const cplx factor = src.timeFactor(t) * std::polar(1.0, frame_ * t / units::kHbar);
        const auto profile = src.profile();
        for (std::size_t i = 0; i < n_; ++i) {
            out[i] = factor * profile[i];
        }
    }

    const ModelParams& p_;
    std::size_t n_;
    HoppingOperator hopping_;
    double frame_;
    bool thirdOrder_;
    DriveSource pump_;
    DriveSource probe_;
    std::vector<cplx> lap_, pumpDrive_, probeDrive_;
};

}  // namespace

PerturbativeState hierarchy_rhs(const PerturbativeState& state, std::span<const cplx> pumpDrive,
                                std::span<const cplx> probeDrive, const ModelParams& p)
{
    const std::size_t n = state.alpha10.size();
    std::vector<cplx> y(kNumBlocks * n);
    auto put = [&](Block b, const auto& v) {
        for (std::size_t i = 0; i < n; ++i) {
            y[b * n + i] = v[i];
        }
    };
    put(A10, state.alpha10);
    put(S10, state.sigma10);
    put(Z20, state.z20);
    put(A01, state.alpha01);
    put(S01, state.sigma01);
    put(Z11, state.z11);
    put(A21, state.alpha21);
    put(S21, state.sigma21);

    std::vector<cplx> dy(y.size());
    std::vector<cplx> lap(n);
    HoppingOperator hopping(p, Stencil::ThreePoint);
    hierarchy_kernel(BlockView{n, y}, dy, pumpDrive, probeDrive, p, 0.0, hopping, lap, true);

    PerturbativeState out;
    out.time = state.time;
    auto getC = [&](Block b) { return std::vector<cplx>(dy.begin() + b * n, dy.begin() + (b + 1) * n); };
    auto getR = [&](Block b) {
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) {
            v[i] = dy[b * n + i].real();
        }
        return v;
    };
    out.alpha10 = getC(A10);
    out.sigma10 = getC(S10);
    out.z20 = getR(Z20);
    out.alpha01 = getC(A01);
    out.sigma01 = getC(S01);
    out.z11 = getR(Z11);
    out.alpha21 = getC(A21);
    out.sigma21 = getC(S21);
    return out;
}

SpatioTemporalRecord evolve_hierarchy(const PulseSpec& pump, const PulseSpec& probe,
                                      const IntegratorConfig& cfg, const ModelParams& p,
                                      const HierarchyOptions& options)
{
    p.validate();
    cfg.validate(p);
    pump.validate(p, "pump");
    probe.validate(p, "probe");
    const auto n = static_cast<std::size_t>(p.numSites);
    const auto grid = LatticeGrid::from(p);
    const double frame = cfg.frameOmega.value_or(pump.omegaDrive);
    const std::size_t blocks = options.includeThirdOrder ? kNumBlocks : Z11 + 1;

    HierarchySystem system(p, pump, probe, grid, cfg.stencil, frame, options.includeThirdOrder);
    Rk4Stepper stepper(blocks * n);
    std::vector<cplx> y(blocks * n, cplx{});

    struct Recorded {
        const char* name;
        Block block;
        bool complex;
    };
    std::vector<Recorded> recorded;
    if (options.recordAllFields) {
        recorded = {{"alpha10", A10, true}, {"sigma10", S10, true}, {"z20", Z20, false},
                    {"alpha01", A01, true}, {"sigma01", S01, true}, {"z11", Z11, false}};
        if (options.includeThirdOrder) {
            recorded.push_back({"alpha21", A21, true});
            recorded.push_back({"sigma21", S21, true});
        }
    } else {
        recorded = {{"alpha01", A01, true}};
        if (options.includeThirdOrder) {
            recorded.push_back({"alpha21", A21, true});
        }
    }

    SpatioTemporalRecord record;
    for (const auto& r : recorded) {
        record.fields.emplace(r.name, r.complex ? FieldSeries::makeComplex(n) : FieldSeries::makeReal(n));
    }

    std::vector<cplx> rowC(n);
    std::vector<double> rowR(n);
    auto snapshot = [&](double t) {
        for (const auto& v : y) {
            const double m = std::abs(v);
            if (!std::isfinite(m) || m > kBlowUpThreshold) {
                throw InstabilityError("hierarchy fields exceeded " + std::to_string(kBlowUpThreshold) +
                                       " at t = " + std::to_string(t) + " fs");
            }
        }
        for (Block zb : {Z20, Z11}) {
            for (std::size_t i = 0; i < n; ++i) {
                if (y[zb * n + i].imag() != 0.0) {
                    throw InstabilityError("second-order inversion acquired an imaginary part");
                }
            }
        }
        const cplx toLab = std::polar(1.0, -frame * t / units::kHbar);
        record.times.push_back(t);
        for (const auto& r : recorded) {
            auto& series = record.fields.at(r.name);
            if (r.complex) {
                for (std::size_t i = 0; i < n; ++i) {
                    rowC[i] = y[r.block * n + i] * toLab;
                }
                series.appendRow(std::span<const cplx>(rowC));
            } else {
                for (std::size_t i = 0; i < n; ++i) {
                    rowR[i] = y[r.block * n + i].real();
                }
                series.appendRow(std::span<const double>(rowR));
            }
        }
    };

    const auto steps = cfg.numSteps();
    const auto stride = static_cast<std::size_t>(cfg.snapshotStride);
    snapshot(0.0);
    for (std::size_t step = 0; step < steps; ++step) {
        const double t = static_cast<double>(step) * cfg.dt;
        stepper.step(t, cfg.dt, y, system);
        if ((step + 1) % stride == 0) {
            snapshot(static_cast<double>(step + 1) * cfg.dt);
        }
    }

    record.meta["kind"] = "hierarchy";
    record.meta["model"] = to_json(p);
    record.meta["integrator"] = to_json(cfg);
    record.meta["frameOmega"] = frame;
    record.meta["pump"] = to_json(pump);
    record.meta["probe"] = to_json(probe);
    return record;
}

}  // namespace polariton
