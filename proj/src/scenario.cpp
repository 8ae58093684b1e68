#include "polariton/scenario.hpp"

#include "polariton/errors.hpp"
#include "polariton/meanfield.hpp"
#include "polariton/observables.hpp"
#include "polariton/parallel.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace polariton {

const char* library_version()
{
    return POLARITON_VERSION;
}

Table dispersion_table(const ModelParams& p)
{
    p.validate();
    const auto grid = LatticeGrid::from(p);
    std::vector<double> wk, lp, up, x2, vg;
    for (double k : grid.momenta) {
        const auto pair = polariton_frequencies(k, p);
        wk.push_back(omega_cavity(k, p));
        lp.push_back(pair.lower);
        up.push_back(pair.upper);
        x2.push_back(exciton_fraction_LP(k, p));
        vg.push_back(group_velocity_LP(k, p));
    }
    Table t;
    t.addColumn("k", "1/um", grid.momenta);
    t.addColumn("omega_k", "eV", wk);
    t.addColumn("omega_LP", "eV", lp);
    t.addColumn("omega_UP", "eV", up);
    t.addColumn("X2_LP", "1", x2);
    t.addColumn("v_grp", "um/fs", vg);
    t.meta["model"] = to_json(p);
    return t;
}

namespace {

int site_of(const ModelParams& p, double r)
{
    const double index = (r + 0.5 * p.lengthL) / p.siteSpacing();
    return static_cast<int>(std::lround(index));
}

}  // namespace

SiteRange default_fit_range(const ModelParams& p, const PulseSpec& pump)
{
    const double direction = pump.kCenter < 0 ? -1.0 : 1.0;
    const double near = pump.center + direction * 4.0 * pump.sigmaR;
    const double far = near + direction * 40.0;
    int a = site_of(p, near);
    int b = site_of(p, far);
    if (a > b) {
        std::swap(a, b);
    }
    return {std::max(a, 0), std::min(b, p.numSites - 1)};
}

double beer_lambert_duration(const ModelParams& p, const PulseSpec& pump, const SiteRange& range, double tEnd)
{
    const auto grid = LatticeGrid::from(p);
    const double reach = std::max(std::abs(grid.positions[static_cast<std::size_t>(range.first)] - pump.center),
                                  std::abs(grid.positions[static_cast<std::size_t>(range.last)] - pump.center));
    const double v = std::abs(group_velocity_LP(pump.kCenter, p));
    const double needed = pump.arrival + 4.0 * pump.sigmaT + (reach + 10.0) / v;
    return std::max(tEnd, std::ceil(needed / 10.0) * 10.0);
}

PumpProbeSetup pump_probe_setup(const ScenarioConfig& cfg)
{
    PumpProbeSetup s;
    s.model = cfg.model;
    s.pump = cfg.pump;
    s.probe = cfg.probe;
    s.integrator = cfg.integrator;
    s.delays = cfg.analysis.delays;
    s.window = cfg.analysis.window;
    s.bandHalfWidth = cfg.analysis.bandHalfWidth;
    s.earliestArrival = cfg.analysis.earliestArrival;
    s.autoDuration = cfg.analysis.autoDuration;
    s.tailDistance = cfg.analysis.tailDistance;
    s.probeMask = cfg.analysis.probeMask;
    return s;
}

namespace {

class Writer {
public:
    explicit Writer(const ScenarioConfig& cfg)
        : dir_(cfg.output.directory), text_(cfg.output.format != OutputFormat::Binary),
          binary_(cfg.output.format != OutputFormat::Text)
    {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec || !std::filesystem::is_directory(dir_)) {
            throw IoError("cannot create output directory " + dir_.string());
        }
    }

    void record(const SpatioTemporalRecord& r, const std::string& stem)
    {
        append(export_record(r, dir_, stem, text_, binary_));
    }
    void table(const Table& t, const std::string& stem) { append(export_table(t, dir_, stem, text_, binary_)); }

    const std::filesystem::path& dir() const { return dir_; }
    std::vector<std::filesystem::path> files;

private:
    void append(const std::vector<std::filesystem::path>& more) { files.insert(files.end(), more.begin(), more.end()); }

    std::filesystem::path dir_;
    bool text_;
    bool binary_;
};

double safe(auto&& fn)
{
    try {
        return fn();
    } catch (const EmptyWeightError&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

Table pump_only_summary(const SpatioTemporalRecord& record, const ModelParams& p, const PulseSpec& pump)
{
    const auto grid = LatticeGrid::from(p);
    const auto pops = populations(record);
    const auto bd = bright_dark(record);
    Table t;
    t.addColumn("time", "fs", record.times);
    t.addColumn("photon_total", "1", spatial_sum(pops.photon));
    t.addColumn("molecular_total", "1", spatial_sum(pops.molecular));
    t.addColumn("bright_total", "1", spatial_sum(bd.bright));
    t.addColumn("dark_total", "1", spatial_sum(bd.dark));
    std::vector<double> peak, rms;
    for (std::size_t s = 0; s < record.numSnapshots(); ++s) {
        const auto row = pops.photon.realRow(s);
        peak.push_back(safe([&] { return peak_of_profile(row, grid.positions); }));
        rms.push_back(safe([&] { return rms_of_profile(row, grid.positions, pump.center); }));
    }
    t.addColumn("photon_peak", "um", peak);
    t.addColumn("photon_rms", "um", rms);
    return t;
}

nlohmann::json fit_json(const TransportFit& fit)
{
    return {{"vPeak", fit.vPeak},
            {"vRms", fit.vRms},
            {"vGrp", fit.vGrp},
            {"rSquaredPeak", fit.rSquaredPeak},
            {"rSquaredRms", fit.rSquaredRms},
            {"geometryFactor", fit.geometryFactor},
            {"notes", fit.notes}};
}

std::string delay_stem(std::size_t index)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "delta_T_%02zu", index);
    return buf;
}

nlohmann::json run_pump_only(const ScenarioConfig& cfg, Writer& out)
{
    const auto record = pump_only(cfg.model, cfg.pump, cfg.integrator);
    out.record(record, "pump_only");
    out.table(pump_only_summary(record, cfg.model, cfg.pump), "pump_only_summary");
    return {{"snapshots", record.numSnapshots()}};
}

nlohmann::json run_beer_lambert(const ScenarioConfig& cfg, Writer& out)
{
    const auto range = cfg.analysis.fitRange.value_or(default_fit_range(cfg.model, cfg.pump));
    IntegratorConfig ic = cfg.integrator;
    ic.tEnd = beer_lambert_duration(cfg.model, cfg.pump, range, ic.tEnd);
    const auto record = pump_only(cfg.model, cfg.pump, ic);
    const auto check = beer_lambert_check(record, cfg.pump.omegaDrive, range, cfg.model);
    out.record(record, "pump_only");

    const auto grid = LatticeGrid::from(cfg.model);
    const auto& a = record.field("photon");
    std::vector<double> r, envelope;
    for (std::size_t n = 0; n < grid.size(); ++n) {
        double peak = 0.0;
        for (std::size_t s = 0; s < a.numSnapshots(); ++s) {
            peak = std::max(peak, std::norm(a.complexRow(s)[n]));
        }
        r.push_back(grid.positions[n]);
        envelope.push_back(peak);
    }
    Table t;
    t.addColumn("position", "um", r);
    t.addColumn("photon_envelope", "1", envelope);
    t.meta = {{"fitFirst", range.first}, {"fitLast", range.last}};
    out.table(t, "photon_envelope");
    return {{"simSlope", check.simSlope},
            {"predSlope", check.predSlope},
            {"ratio", check.simSlope / check.predSlope},
            {"rSquared", check.rSquared},
            {"fitRange", {range.first, range.last}},
            {"tEnd", ic.tEnd}};
}

nlohmann::json run_pump_probe_scenario(const ScenarioConfig& cfg, Writer& out)
{
    const auto setup = pump_probe_setup(cfg);
    std::vector<DelayResult> results(setup.delays.size());
    parallel_for(results.size(), cfg.threads,
                 [&](std::size_t i) { results[i] = run_pump_probe_delay(setup, setup.delays[i]); });

    const auto grid = LatticeGrid::from(cfg.model);
    Table profiles;
    profiles.addColumn("position", "um", grid.positions);
    nlohmann::json delays = nlohmann::json::array();
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& d = results[i];
        auto rec = spectrum_to_record(d.deltaT, "delta_T");
        rec.meta["delay"] = d.delay;
        rec.meta["pumpArrival"] = d.arrivals.pump;
        rec.meta["probeArrival"] = d.arrivals.probe;
        rec.meta["tEnd"] = d.tEnd;
        rec.meta["amplitudeScale"] = std::pow(cfg.pump.amplitude * cfg.probe.amplitude, 2);
        out.record(rec, delay_stem(i));
        char name[48];
        std::snprintf(name, sizeof name, "delay_%+.1f", d.delay);
        profiles.addColumn(name, "eV", d.profile);
        delays.push_back({{"delay", d.delay}, {"pumpArrival", d.arrivals.pump},
                          {"probeArrival", d.arrivals.probe}, {"tEnd", d.tEnd}});
    }
    profiles.meta["bandHalfWidth"] = setup.bandHalfWidth;
    out.table(profiles, "band_profiles");

    nlohmann::json result = {{"delays", delays}};
    if (results.size() < kMinFitDelays) {
        result["fit"] = nullptr;
        result["fitSkipped"] = "fewer than 5 delays";
        return result;
    }
    std::vector<DelayProfile> dp;
    for (const auto& d : results) {
        dp.push_back({d.delay, d.profile});
    }
    const auto fit = fit_pump_probe(dp, setup);
    Table ft;
    ft.addColumn("delay", "fs", fit.delays);
    ft.addColumn("peak_position", "um", fit.peakPositions);
    ft.addColumn("rms_displacement", "um", fit.rmsPositions);
    ft.meta = fit_json(fit);
    out.table(ft, "transport_fit");
    result["fit"] = fit_json(fit);
    return result;
}

nlohmann::json run_sweep_scenario(const ScenarioConfig& cfg, Writer& out)
{
    const auto base = pump_probe_setup(cfg);
    const auto sweep = cfg.scenario == Scenario::SweepMomentum ? sweep_momentum(cfg.sweepAxis, base, cfg.threads)
                                                               : sweep_dephasing(cfg.sweepAxis, base, cfg.threads);
    std::vector<double> vPeak, vRms, vGrp;
    for (const auto& f : sweep.fits) {
        vPeak.push_back(f.vPeak);
        vRms.push_back(f.vRms);
        vGrp.push_back(f.vGrp);
    }
    Table t;
    t.addColumn("axisValue", sweep.axisName == "kp" ? "1/um" : "eV", sweep.axis);
    t.addColumn("vPeak", "um/fs", vPeak);
    t.addColumn("vRms", "um/fs", vRms);
    t.addColumn("vGrp", "um/fs", vGrp);
    t.addColumn("renorm", "1", sweep.renormalization);
    t.addColumn("X2", "1", sweep.excitonFraction);
    t.meta = {{"axis", sweep.axisName}, {"errors", sweep.errors}};
    out.table(t, "sweep");
    return {{"axis", sweep.axisName}, {"errors", sweep.errors}, {"renormalization", sweep.renormalization}};
}

}  // namespace

ScenarioOutcome run_scenario(const ScenarioConfig& cfg)
{
    const auto started = std::chrono::steady_clock::now();
    Writer out(cfg);
    nlohmann::json results;
    switch (cfg.scenario) {
    case Scenario::Dispersion:
        out.table(dispersion_table(cfg.model), "dispersion");
        break;
    case Scenario::PumpOnly:
        results = run_pump_only(cfg, out);
        break;
    case Scenario::BeerLambert:
        results = run_beer_lambert(cfg, out);
        break;
    case Scenario::PumpProbe:
        results = run_pump_probe_scenario(cfg, out);
        break;
    case Scenario::SweepMomentum:
    case Scenario::SweepDephasing:
        results = run_sweep_scenario(cfg, out);
        break;
    }
    save_config(cfg, out.dir() / "config.yaml");
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    nlohmann::json files = nlohmann::json::array();
    for (const auto& f : out.files) {
        files.push_back(f.filename().string());
    }
    const nlohmann::json manifest = {{"program", "polsim"},
                                     {"version", library_version()},
                                     {"scenario", to_string(cfg.scenario)},
                                     {"config", dump_config(cfg)},
                                     {"files", files},
                                     {"results", results},
                                     {"wallTimeSeconds", wall}};
    const auto manifestPath = out.dir() / "manifest.json";
    std::ofstream m(manifestPath, std::ios::trunc);
    m << manifest.dump(2) << "\n";
    if (!m) {
        throw IoError("cannot write " + manifestPath.string());
    }
    return {out.files, results};
}

}  // namespace polariton
