#include "helpers.hpp"

#include "polariton/cli.hpp"
#include "polariton/config.hpp"
#include "polariton/errors.hpp"
#include "polariton/export.hpp"
#include "polariton/scenario.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace polariton;
using testing::kPi;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    const auto dir = fs::temp_directory_path() / ("polariton_unit_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

SpatioTemporalRecord random_record(std::size_t sites, std::size_t snaps, unsigned seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    SpatioTemporalRecord r;
    auto a = FieldSeries::makeComplex(sites, snaps);
    auto z = FieldSeries::makeReal(sites, snaps);
    for (auto& v : a.complex) {
        v = {g(rng), g(rng) * 1e-7};
    }
    for (auto& v : z.real) {
        v = g(rng) * 1e5;
    }
    for (std::size_t s = 0; s < snaps; ++s) {
        r.times.push_back(1.0 / 3.0 * static_cast<double>(s));
    }
    r.fields.emplace("photon", a);
    r.fields.emplace("inversion", z);
    r.meta["kind"] = "test";
    return r;
}

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "polsim");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("empty configuration yields the reference parameter set")
{
    const auto cfg = parse_config("");
    CHECK(cfg.model.omega0 == 1.0);
    CHECK(cfg.model.omegaC == 0.9);
    CHECK(cfg.model.rabi == 0.05);
    CHECK(cfg.model.kappa == 0.01);
    CHECK(cfg.model.numSites == 601);
    CHECK(cfg.model.lengthL == 200.0);
    CHECK(cfg.model.numMolecules == 1000000);
    CHECK(cfg.pump.sigmaT == 25.0);
    CHECK(cfg.pump.sigmaR == 5.0);
    CHECK(cfg.pump.kCenter == doctest::Approx(kPi / 2));
    CHECK(cfg.probe.kCenter == doctest::Approx(-kPi / 2));
    CHECK(cfg.pump.omegaDrive == polariton_frequencies(kPi / 2, cfg.model).lower);
    CHECK(cfg.scenario == Scenario::PumpOnly);
    CHECK(cfg.analysis.delays.size() == 9);
    CHECK(cfg == default_config());
}

TEST_CASE("configuration errors")
{
    try {
        parse_config("model:\n  numSites: 600\n");
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("parity") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config("model:\n  kapa: 0.02\n"), UnknownKeyError);
    CHECK_THROWS_AS(parse_config("bogus: 1\n"), UnknownKeyError);
    try {
        parse_config("model:\n  kappa: 0.02\n  rabi: [1, 2\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() >= 3);
    }
    CHECK_THROWS_AS(parse_config("model:\n  kappa: fast\n"), ParseError);
    CHECK_THROWS_AS(parse_config("scenario: sweep-momentum\n"), ValidationError);
    CHECK_THROWS_AS(parse_config("scenario: teleport\n"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.yaml"), IoError);
}

TEST_CASE("overrides use dotted keys")
{
    const auto cfg = parse_config("model:\n  kappa: 0.02\n", {"model.gammaPhi=0.0125", "scenario=pump-probe",
                                                             "analysis.window.apodization=exponential"});
    CHECK(cfg.model.kappa == 0.02);
    CHECK(cfg.model.gammaPhi == 0.0125);
    CHECK(cfg.scenario == Scenario::PumpProbe);
    CHECK(cfg.analysis.window.apodization == Apodization::Exponential);
    CHECK_THROWS_AS(parse_config("", {"model.nope=1"}), UnknownKeyError);
    CHECK_THROWS_AS(parse_config("", {"no-equals-sign"}), ConfigError);
}

TEST_CASE("configuration survives a save and load")
{
    auto cfg = parse_config("", {"model.gammaPhi=0.0071", "scenario=sweep-dephasing", "sweep.values=[0.001, 0.002]",
                                 "pump.center=-40.5", "probe.phase=0.3", "integrator.stencil=spectral",
                                 "analysis.fitRange={first: 320, last: 400}", "analysis.window.tStart=510.25",
                                 "output.format=both", "threads=3", "pump.omegaDrive=0.93"});
    cfg.model.disorder.assign(601, 0.0);
    cfg.model.disorder[5] = 1.0 / 3.0;
    const auto dir = scratch("roundtrip");
    save_config(cfg, dir / "c.yaml");
    const auto back = load_config(dir / "c.yaml");
    CHECK(back == cfg);
    CHECK_FALSE(back.pumpOmegaAuto);
    CHECK(back.probeOmegaAuto);
}

TEST_CASE("empty record export")
{
    const auto dir = scratch("empty");
    SpatioTemporalRecord r;
    r.fields.emplace("photon", FieldSeries::makeComplex(4));
    write_text_record(r, dir / "e.txt");
    write_binary_record(r, dir / "e.pltr");
    const auto text = slurp(dir / "e.txt");
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        CHECK(line.rfind("#", 0) == 0);
    }
    CHECK(fs::file_size(dir / "e.pltr") == binary_header_size(r));
    CHECK(slurp(dir / "e.pltr").substr(0, 5) == "PLTR1");
    const auto back = read_binary_record(dir / "e.pltr");
    CHECK(back.numSnapshots() == 0);
    CHECK(back.numSites() == 4);
    CHECK(read_text_record(dir / "e.txt").field("photon").isComplex);
}

TEST_CASE("text and binary exports carry the same values")
{
    const auto dir = scratch("cross");
    const auto r = random_record(7, 13, 9);
    write_text_record(r, dir / "r.txt");
    write_binary_record(r, dir / "r.pltr");
    const auto fromText = read_text_record(dir / "r.txt");
    const auto fromBinary = read_binary_record(dir / "r.pltr");
    CHECK(fromBinary.times == r.times);
    CHECK(fromBinary.field("photon").complex == r.field("photon").complex);
    CHECK(fromBinary.field("inversion").real == r.field("inversion").real);
    CHECK(fromBinary.meta == r.meta);
    const auto& a = fromText.field("photon").complex;
    const auto& b = fromBinary.field("photon").complex;
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(std::abs(a[i] - b[i]) <= 1e-15 * std::abs(b[i]));
    }
    const auto& za = fromText.field("inversion").real;
    for (std::size_t i = 0; i < za.size(); ++i) {
        CHECK(za[i] == doctest::Approx(r.field("inversion").real[i]).epsilon(1e-15));
    }
}

TEST_CASE("binary size of a full-size mean-field record")
{
    const std::size_t sites = 601, snaps = 1000;
    SpatioTemporalRecord r;
    for (std::size_t s = 0; s < snaps; ++s) {
        r.times.push_back(static_cast<double>(s));
    }
    r.fields.emplace("photon", FieldSeries::makeComplex(sites, snaps));
    r.fields.emplace("coherence", FieldSeries::makeComplex(sites, snaps));
    r.fields.emplace("inversion", FieldSeries::makeReal(sites, snaps));
    const auto dir = scratch("size");
    write_binary_record(r, dir / "big.pltr");
    CHECK(fs::file_size(dir / "big.pltr") == binary_header_size(r) + snaps * sites * (2 + 2 + 1) * 8);
}

TEST_CASE("tables in both formats")
{
    Table t;
    t.addColumn("k", "1/um", {0.0, 0.5, 1.0 / 3.0});
    t.addColumn("omega", "eV", {0.9, 0.91, 0.95});
    t.meta["note"] = "x";
    const auto dir = scratch("table");
    write_text_table(t, dir / "t.txt");
    write_binary_table(t, dir / "t.pltr");
    const auto a = read_text_table(dir / "t.txt");
    const auto b = read_binary_table(dir / "t.pltr");
    for (const auto& back : {a, b}) {
        CHECK(back.names == t.names);
        CHECK(back.units == t.units);
        CHECK(back.columns == t.columns);
        CHECK(back.meta.at("note") == "x");
    }
    const auto files = export_table(t, dir, "stem", true, true);
    CHECK(files.size() == 2);
}

TEST_CASE("dispersion table")
{
    const ModelParams p;
    const auto t = dispersion_table(p);
    REQUIRE(t.names.size() == 6);
    CHECK(t.numRows() == 601);
    for (std::size_t i = 0; i < t.numRows(); ++i) {
        const double k = t.columns[0][i];
        CHECK(t.columns[2][i] == polariton_frequencies(k, p).lower);
        CHECK(t.columns[4][i] == exciton_fraction_LP(k, p));
    }
}

TEST_CASE("command line exit codes and reports")
{
    const auto dir = scratch("cli");
    const auto ok = cli({"--scenario", "dispersion", "--out", (dir / "disp").string()});
    CHECK(ok.code == kExitOk);
    CHECK(fs::exists(dir / "disp" / "dispersion.txt"));
    CHECK(fs::exists(dir / "disp" / "manifest.json"));
    CHECK(fs::exists(dir / "disp" / "config.yaml"));
    const auto manifest = nlohmann::json::parse(slurp(dir / "disp" / "manifest.json"));
    CHECK(manifest.at("scenario") == "dispersion");
    CHECK(manifest.contains("version"));
    CHECK(manifest.contains("wallTimeSeconds"));
    CHECK(load_config(dir / "disp" / "config.yaml") ==
          parse_config("", {"scenario=dispersion", "output.directory=\"" + (dir / "disp").string() + "\""}));

    const auto bad = cli({"--set", "model.kapa=1", "--out", (dir / "bad").string()});
    CHECK(bad.code == kExitConfig);
    const auto report = nlohmann::json::parse(slurp(dir / "bad" / "error.json"));
    CHECK(report.at("error") == "UnknownKeyError");
    CHECK(report.at("exitCode") == 2);

    // a window that starts after the record ends is a numerical failure
    const auto numeric = cli({"--scenario", "pump-probe", "--set", "analysis.delays=[0]", "--set",
                              "model.numSites=121", "--set", "model.lengthL=40.27", "--set", "pump.center=-5",
                              "--set", "probe.center=5", "--set", "analysis.autoDuration=false", "--set",
                              "integrator.tEnd=300", "--set", "analysis.window.tStart=5000", "--out",
                              (dir / "num").string()});
    CHECK(numeric.code == kExitNumerical);
    CHECK(nlohmann::json::parse(slurp(dir / "num" / "error.json")).at("error") == "WindowOutOfRangeError");

    std::ofstream(dir / "blocker") << "file";
    const auto io = cli({"--scenario", "dispersion", "--out", (dir / "blocker" / "sub").string()});
    CHECK(io.code == kExitIo);

    CHECK(cli({"--format", "xml"}).code == kExitConfig);
    CHECK(cli({"--version"}).code == kExitOk);
}

TEST_CASE("reruns produce byte-identical data files")
{
    const auto dir = scratch("rerun");
    const std::vector<std::string> common = {"--scenario", "pump-only", "--format", "both", "--set", "model.numSites=121",
                                             "--set", "model.lengthL=40.27", "--set", "pump.center=-5", "--set",
                                             "integrator.tEnd=300"};
    auto first = common;
    first.insert(first.end(), {"--out", (dir / "a").string()});
    auto second = common;
    second.insert(second.end(), {"--out", (dir / "b").string()});
    REQUIRE(cli(first).code == kExitOk);
    REQUIRE(cli(second).code == kExitOk);
    int compared = 0;
    for (const auto& entry : fs::directory_iterator(dir / "a")) {
        const auto name = entry.path().filename();
        if (name == "manifest.json" || name == "config.yaml") {
            continue;
        }
        CHECK(slurp(entry.path()) == slurp(dir / "b" / name));
        ++compared;
    }
    CHECK(compared >= 4);
    const auto rec = read_binary_record(dir / "a" / "pump_only.pltr");
    CHECK(rec.numSites() == 121);
    CHECK(rec.meta.contains("pulses"));
}
