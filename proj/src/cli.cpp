#include "polariton/cli.hpp"

#include "polariton/errors.hpp"
#include "polariton/scenario.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace polariton {

namespace {

struct Failure {
    int code;
    std::string type;
};

Failure classify(const std::exception& e)
{
    if (dynamic_cast<const ParseError*>(&e)) {
        return {kExitConfig, "ParseError"};
    }
    if (dynamic_cast<const UnknownKeyError*>(&e)) {
        return {kExitConfig, "UnknownKeyError"};
    }
    if (dynamic_cast<const ValidationError*>(&e)) {
        return {kExitConfig, "ValidationError"};
    }
    if (dynamic_cast<const ConfigError*>(&e)) {
        return {kExitConfig, "ConfigError"};
    }
    if (dynamic_cast<const PoleError*>(&e)) {
        return {kExitNumerical, "PoleError"};
    }
    if (dynamic_cast<const InstabilityError*>(&e)) {
        return {kExitNumerical, "InstabilityError"};
    }
    if (dynamic_cast<const DegenerateFitError*>(&e)) {
        return {kExitNumerical, "DegenerateFitError"};
    }
    if (dynamic_cast<const FitRangeError*>(&e)) {
        return {kExitNumerical, "FitRangeError"};
    }
    if (dynamic_cast<const WindowOutOfRangeError*>(&e)) {
        return {kExitNumerical, "WindowOutOfRangeError"};
    }
    if (dynamic_cast<const NumericalError*>(&e)) {
        return {kExitNumerical, "NumericalError"};
    }
    if (dynamic_cast<const IoError*>(&e)) {
        return {kExitIo, "IoError"};
    }
    return {kExitNumerical, "Error"};
}

void write_error_report(const std::filesystem::path& dir, const Failure& f, const std::string& message,
                        const std::string& scenario)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    std::ofstream file(dir / "error.json", std::ios::trunc);
    if (!file) {
        return;
    }
    const nlohmann::json report = {
        {"error", f.type}, {"message", message}, {"exitCode", f.code}, {"scenario", scenario}};
    file << report.dump(2) << "\n";
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Mean-field and perturbative pump-probe simulation of polariton transport", "polsim"};
    std::string configPath;
    std::vector<std::string> overrides;
    std::string scenario;
    std::string outDir;
    std::optional<unsigned> threads;
    std::string format;
    bool dumpConfig = false;
    app.add_option("--config", configPath, "YAML configuration file")->check(CLI::ExistingFile);
    app.add_option("--set", overrides, "Override a key, e.g. model.gammaPhi=0.005 (repeatable)");
    app.add_option("--scenario", scenario,
                   "dispersion | pump-only | pump-probe | sweep-momentum | sweep-dephasing | beer-lambert");
    app.add_option("--out", outDir, "Output directory");
    app.add_option("--threads", threads, "Worker threads for delays and sweep points")->check(CLI::PositiveNumber);
    app.add_option("--format", format, "text | binary | both")->check(CLI::IsMember({"text", "binary", "both"}));
    app.add_flag("--print-config", dumpConfig, "Print the effective configuration and exit");
    app.set_version_flag("--version", library_version());

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    // Command-line shortcuts become overrides so they share validation.
    if (!scenario.empty()) {
        overrides.push_back("scenario=" + scenario);
    }
    if (!outDir.empty()) {
        overrides.push_back("output.directory=\"" + outDir + "\"");
    }
    if (threads) {
        overrides.push_back("threads=" + std::to_string(*threads));
    }
    if (!format.empty()) {
        overrides.push_back("output.format=" + format);
    }

    std::filesystem::path reportDir = outDir.empty() ? std::filesystem::path("out") : std::filesystem::path(outDir);
    std::string scenarioName = scenario;
    try {
        const ScenarioConfig cfg = configPath.empty() ? parse_config("", overrides) : load_config(configPath, overrides);
        reportDir = cfg.output.directory;
        scenarioName = to_string(cfg.scenario);
        if (dumpConfig) {
            out << dump_config(cfg);
            return kExitOk;
        }
        const auto outcome = run_scenario(cfg);
        out << "scenario " << scenarioName << ": wrote " << outcome.files.size() << " data files to "
            << cfg.output.directory << "\n";
        if (!outcome.results.empty()) {
            out << outcome.results.dump(2) << "\n";
        }
        return kExitOk;
    } catch (const Error& e) {
        const auto f = classify(e);
        err << "polsim: " << f.type << ": " << e.what() << "\n";
        write_error_report(reportDir, f, e.what(), scenarioName);
        return f.code;
    } catch (const std::exception& e) {
        const Failure f{kExitNumerical, "InternalError"};
        err << "polsim: " << e.what() << "\n";
        write_error_report(reportDir, f, e.what(), scenarioName);
        return f.code;
    }
}

}  // namespace polariton
