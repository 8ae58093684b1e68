#include "polariton/meanfield.hpp"

#include "polariton/errors.hpp"
#include "polariton/rk4.hpp"

#include <cmath>
#include <string>

namespace polariton {

MeanFieldState MeanFieldState::vacuum(std::size_t numSites)
{
    MeanFieldState s;
    s.photon.assign(numSites, cplx{});
    s.coherence.assign(numSites, cplx{});
    s.inversion.assign(numSites, -1.0);
    return s;
}

void MeanFieldState::validate(std::size_t numSites) const
{
    if (photon.size() != numSites || coherence.size() != numSites || inversion.size() != numSites) {
        throw ValidationError("mean-field state: all arrays must have numSites entries");
    }
}

double IntegratorConfig::maxStableStep(const ModelParams& p)
{
    return 0.5 * units::kHbar / (4.0 * p.hoppingC());
}

void IntegratorConfig::validate(const ModelParams& p) const
{
    if (!(std::isfinite(dt) && dt > 0)) {
        throw ValidationError("integrator: dt > 0");
    }
    if (dt >= maxStableStep(p)) {
        throw ValidationError("integrator: dt must stay below 0.5 hbar / (4 C) = " +
                              std::to_string(maxStableStep(p)) + " fs");
    }
    if (!(std::isfinite(tEnd) && tEnd >= 0)) {
        throw ValidationError("integrator: tEnd >= 0");
    }
    if (snapshotStride < 1) {
        throw ValidationError("integrator: snapshotStride >= 1");
    }
    if (frameOmega && !std::isfinite(*frameOmega)) {
        throw ValidationError("integrator: frameOmega must be finite");
    }
}

std::size_t IntegratorConfig::numSteps() const
{
    return static_cast<std::size_t>(std::llround(tEnd / dt));
}

namespace {

/// Derivative kernel in a frame rotating at `frame` (eV). The z block is
/// stored as complex with an exactly zero imaginary part.
void meanfield_kernel(std::span<const cplx> a, std::span<const cplx> s, std::span<const cplx> z,
                      std::span<const cplx> drive, const ModelParams& p, double frame,
                      HoppingOperator& hopping, std::span<cplx> lap, std::span<cplx> da,
                      std::span<cplx> ds, std::span<cplx> dz)
{
    const double invHbar = 1.0 / units::kHbar;
    const std::size_t n = a.size();
    hopping.apply(a, lap);
    const cplx photonRate(-0.5 * p.kappa, -(p.omegaC - frame));
    const cplx iRabi(0.0, p.rabi);
    const cplx iUnit(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        da[i] = (photonRate * a[i] - iRabi * s[i] + iUnit * lap[i] + drive[i]) * invHbar;
        const cplx coherenceRate(-0.5 * p.gammaPhi, -(p.siteTransition(i) - frame));
        ds[i] = (coherenceRate * s[i] + iRabi * z[i].real() * a[i]) * invHbar;
        dz[i] = cplx(-4.0 * p.rabi * std::imag(s[i] * std::conj(a[i])) * invHbar, 0.0);
    }
}

class MeanFieldSystem {
public:
    MeanFieldSystem(const ModelParams& p, std::span<const PulseSpec> pulses, const LatticeGrid& grid,
                    Stencil stencil, double frame)
        : p_(p), n_(static_cast<std::size_t>(p.numSites)), hopping_(p, stencil), frame_(frame),
          lap_(n_), drive_(n_)
    {
        for (const auto& spec : pulses) {
            sources_.emplace_back(spec, grid);
        }
    }

    void operator()(double t, std::span<const cplx> y, std::span<cplx> dy)
    {
        fillDrive(t);
        meanfield_kernel(y.subspan(0, n_), y.subspan(n_, n_), y.subspan(2 * n_, n_), drive_, p_, frame_,
                         hopping_, lap_, dy.subspan(0, n_), dy.subspan(n_, n_), dy.subspan(2 * n_, n_));
    }

private:
    void fillDrive(double t)
    {
        std::fill(drive_.begin(), drive_.end(), cplx{});
        const cplx rotation = std::polar(1.0, frame_ * t / units::kHbar);
        for (const auto& src : sources_) {
            if (!src.active(t)) {
                continue;
            }
            const cplx factor = src.timeFactor(t) * rotation;
            const auto profile = src.profile();
            for (std::size_t i = 0; i < n_; ++i) {
                drive_[i] += factor * profile[i];
            }
        }
    }

    const ModelParams& p_;
    std::size_t n_;
    HoppingOperator hopping_;
    double frame_;
    std::vector<DriveSource> sources_;
    std::vector<cplx> lap_;
    std::vector<cplx> drive_;
};

void check_finite(std::span<const cplx> y, double t)
{
    for (const auto& v : y) {
        const double m = std::abs(v);
        if (!std::isfinite(m) || m > kBlowUpThreshold) {
            throw InstabilityError("mean-field fields exceeded " + std::to_string(kBlowUpThreshold) +
                                   " at t = " + std::to_string(t) + " fs");
        }
    }
}

}  // namespace

MeanFieldState rhs(const MeanFieldState& state, std::span<const cplx> drive, const ModelParams& p,
                   HoppingOperator& hopping)
{
    const std::size_t n = state.photon.size();
    std::vector<cplx> z(n);
    for (std::size_t i = 0; i < n; ++i) {
        z[i] = state.inversion[i];
    }
    MeanFieldState out;
    out.time = state.time;
    out.photon.resize(n);
    out.coherence.resize(n);
    std::vector<cplx> dz(n);
    std::vector<cplx> lap(n);
    meanfield_kernel(state.photon, state.coherence, z, drive, p, 0.0, hopping, lap, out.photon,
                     out.coherence, dz);
    out.inversion.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.inversion[i] = dz[i].real();
    }
    return out;
}

MeanFieldState rhs(const MeanFieldState& state, std::span<const cplx> drive, const ModelParams& p)
{
    HoppingOperator hopping(p, Stencil::ThreePoint);
    return rhs(state, drive, p, hopping);
}

nlohmann::json to_json(const ModelParams& p)
{
    return {{"omega0", p.omega0},     {"omegaC", p.omegaC},     {"rabi", p.rabi},
            {"kappa", p.kappa},       {"gammaPhi", p.gammaPhi}, {"lengthL", p.lengthL},
            {"numSites", p.numSites}, {"numMolecules", p.numMolecules}, {"disorder", p.disorder}};
}

nlohmann::json to_json(const PulseSpec& s)
{
    return {{"amplitude", s.amplitude}, {"omegaDrive", s.omegaDrive}, {"sigmaT", s.sigmaT},
            {"sigmaR", s.sigmaR},       {"kCenter", s.kCenter},       {"center", s.center},
            {"arrival", s.arrival},     {"phase", s.phase}};
}

nlohmann::json to_json(const IntegratorConfig& c)
{
    nlohmann::json j = {{"dt", c.dt},
                        {"tEnd", c.tEnd},
                        {"snapshotStride", c.snapshotStride},
                        {"method", "rk4"},
                        {"stencil", to_string(c.stencil)}};
    j["frameOmega"] = c.frameOmega ? nlohmann::json(*c.frameOmega) : nlohmann::json(nullptr);
    return j;
}

SpatioTemporalRecord evolve(const MeanFieldState& initial, std::span<const PulseSpec> pulses,
                            const IntegratorConfig& cfg, const ModelParams& p)
{
    p.validate();
    cfg.validate(p);
    const auto n = static_cast<std::size_t>(p.numSites);
    initial.validate(n);
    const auto grid = LatticeGrid::from(p);
    for (const auto& spec : pulses) {
        spec.validate(p);
    }

    double frame = p.omega0;
    if (cfg.frameOmega) {
        frame = *cfg.frameOmega;
    } else if (!pulses.empty()) {
        frame = pulses.front().omegaDrive;
    }

    MeanFieldSystem system(p, pulses, grid, cfg.stencil, frame);
    Rk4Stepper stepper(3 * n);

    const double t0 = initial.time;
    std::vector<cplx> y(3 * n);
    {
        const cplx toFrame = std::polar(1.0, frame * t0 / units::kHbar);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = initial.photon[i] * toFrame;
            y[n + i] = initial.coherence[i] * toFrame;
            y[2 * n + i] = initial.inversion[i];
        }
    }

    SpatioTemporalRecord record;
    record.fields.emplace("photon", FieldSeries::makeComplex(n));
    record.fields.emplace("coherence", FieldSeries::makeComplex(n));
    record.fields.emplace("inversion", FieldSeries::makeReal(n));
    auto& photon = record.fields.at("photon");
    auto& coherence = record.fields.at("coherence");
    auto& inversion = record.fields.at("inversion");

    std::vector<cplx> rowA(n), rowS(n);
    std::vector<double> rowZ(n);
    auto snapshot = [&](double t) {
        check_finite(y, t);
        const cplx toLab = std::polar(1.0, -frame * t / units::kHbar);
        for (std::size_t i = 0; i < n; ++i) {
            rowA[i] = y[i] * toLab;
            rowS[i] = y[n + i] * toLab;
            rowZ[i] = y[2 * n + i].real();
        }
        record.times.push_back(t);
        photon.appendRow(std::span<const cplx>(rowA));
        coherence.appendRow(std::span<const cplx>(rowS));
        inversion.appendRow(std::span<const double>(rowZ));
    };

    const double span = cfg.tEnd - t0;
    const auto steps = span > 0 ? static_cast<std::size_t>(std::llround(span / cfg.dt)) : 0;
    const auto stride = static_cast<std::size_t>(cfg.snapshotStride);
    snapshot(t0);
    for (std::size_t step = 0; step < steps; ++step) {
        const double t = t0 + static_cast<double>(step) * cfg.dt;
        stepper.step(t, cfg.dt, y, system);
        if ((step + 1) % stride == 0) {
            snapshot(t0 + static_cast<double>(step + 1) * cfg.dt);
        }
    }

    record.meta["kind"] = "mean-field";
    record.meta["model"] = to_json(p);
    record.meta["integrator"] = to_json(cfg);
    record.meta["frameOmega"] = frame;
    nlohmann::json pulseBlock = nlohmann::json::array();
    for (const auto& spec : pulses) {
        pulseBlock.push_back(to_json(spec));
    }
    record.meta["pulses"] = pulseBlock;
    return record;
}

SpatioTemporalRecord pump_only(const ModelParams& p, const PulseSpec& pump, const IntegratorConfig& cfg)
{
    const auto initial = MeanFieldState::vacuum(static_cast<std::size_t>(p.numSites));
    const PulseSpec pulses[] = {pump};
    auto record = evolve(initial, pulses, cfg, p);
    record.meta["kind"] = "pump-only";
    record.meta["pump"] = to_json(pump);
    return record;
}

MeanFieldState state_at(const SpatioTemporalRecord& record, std::size_t snapshot)
{
    MeanFieldState s;
    const auto a = record.field("photon").complexRow(snapshot);
    const auto c = record.field("coherence").complexRow(snapshot);
    const auto z = record.field("inversion").realRow(snapshot);
    s.photon.assign(a.begin(), a.end());
    s.coherence.assign(c.begin(), c.end());
    s.inversion.assign(z.begin(), z.end());
    s.time = record.times.at(snapshot);
    return s;
}

}  // namespace polariton
