#include "polariton/config.hpp"

#include "polariton/errors.hpp"
#include "polariton/transport.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace polariton {

namespace {

const std::pair<Scenario, const char*> kScenarioNames[] = {
    {Scenario::Dispersion, "dispersion"},         {Scenario::PumpOnly, "pump-only"},
    {Scenario::PumpProbe, "pump-probe"},          {Scenario::SweepMomentum, "sweep-momentum"},
    {Scenario::SweepDephasing, "sweep-dephasing"}, {Scenario::BeerLambert, "beer-lambert"},
};

int line_of(const YAML::Node& node)
{
    return node.Mark().line >= 0 ? node.Mark().line + 1 : 0;
}

/// One YAML mapping being consumed. Every key read is remembered so that
/// leftovers can be reported as unknown.
class Section {
public:
    Section(YAML::Node node, std::string path) : node_(std::move(node)), path_(std::move(path))
    {
        if (node_.IsNull() || !node_.IsDefined()) {
            node_ = YAML::Node(YAML::NodeType::Map);
        }
        if (!node_.IsMap()) {
            throw ParseError("'" + label() + "' must be a mapping", line_of(node_));
        }
    }

    template <class T>
    void get(const char* key, T& out)
    {
        const auto value = fetch(key);
        if (!value) {
            return;
        }
        try {
            out = value.template as<T>();
        } catch (const YAML::Exception&) {
            throw ParseError("cannot read " + qualified(key) + " from '" + text_of(value) + "'", line_of(value));
        }
    }

    /// Accepts a number, null, or the word `auto` (both meaning unset).
    void get_optional(const char* key, std::optional<double>& out)
    {
        const auto value = fetch(key);
        if (!value) {
            return;
        }
        if (value.IsNull() || (value.IsScalar() && value.Scalar() == "auto")) {
            out.reset();
            return;
        }
        double v = 0.0;
        get(key, v);
        out = v;
    }

    std::vector<double> get_list(const char* key, std::vector<double> fallback)
    {
        const auto value = fetch(key);
        if (!value) {
            return fallback;
        }
        if (!value.IsSequence()) {
            throw ParseError(qualified(key) + " must be a list of numbers", line_of(value));
        }
        std::vector<double> out;
        for (const auto& item : value) {
            try {
                out.push_back(item.as<double>());
            } catch (const YAML::Exception&) {
                throw ParseError(qualified(key) + " entry '" + text_of(item) + "' is not a number", line_of(item));
            }
        }
        return out;
    }

    YAML::Node child(const char* key) { return fetch(key); }
    bool has(const char* key) const
    {
        const YAML::Node& view = node_;
        return view[key].IsDefined();
    }

    void finish() const
    {
        for (const auto& kv : node_) {
            const auto key = kv.first.as<std::string>();
            if (!known_.contains(key)) {
                throw UnknownKeyError("unknown key " + qualified(key.c_str()) + " (line " +
                                      std::to_string(line_of(kv.first)) + ")");
            }
        }
    }

private:
    YAML::Node fetch(const char* key)
    {
        known_.insert(key);
        const YAML::Node& view = node_;
        const YAML::Node value = view[key];
        return value.IsDefined() ? value : YAML::Node(YAML::NodeType::Undefined);
    }

    std::string label() const { return path_.empty() ? "<root>" : path_; }
    std::string qualified(const char* key) const { return path_.empty() ? key : path_ + "." + key; }
    static std::string text_of(const YAML::Node& n) { return n.IsScalar() ? n.Scalar() : "<non-scalar>"; }

    YAML::Node node_;
    std::string path_;
    std::set<std::string> known_;
};

void read_model(Section s, ModelParams& m)
{
    s.get("omega0", m.omega0);
    s.get("omegaC", m.omegaC);
    s.get("rabi", m.rabi);
    s.get("kappa", m.kappa);
    s.get("gammaPhi", m.gammaPhi);
    s.get("lengthL", m.lengthL);
    s.get("numSites", m.numSites);
    s.get("numMolecules", m.numMolecules);
    m.disorder = s.get_list("disorder", m.disorder);
    s.finish();
}

void read_pulse(Section s, PulseSpec& p, bool& omegaAuto)
{
    s.get("amplitude", p.amplitude);
    if (s.has("omegaDrive")) {
        std::optional<double> w;
        s.get_optional("omegaDrive", w);
        omegaAuto = !w.has_value();
        if (w) {
            p.omegaDrive = *w;
        }
    }
    s.get("sigmaT", p.sigmaT);
    s.get("sigmaR", p.sigmaR);
    s.get("kCenter", p.kCenter);
    s.get("center", p.center);
    s.get("arrival", p.arrival);
    s.get("phase", p.phase);
    s.finish();
}

void read_integrator(Section s, IntegratorConfig& c)
{
    s.get("dt", c.dt);
    s.get("tEnd", c.tEnd);
    s.get("snapshotStride", c.snapshotStride);
    if (s.has("stencil")) {
        std::string name;
        s.get("stencil", name);
        c.stencil = stencil_from_string(name);
    }
    s.get_optional("frameOmega", c.frameOmega);
    s.finish();
}

void read_analysis(Section s, AnalysisConfig& a)
{
    a.delays = s.get_list("delays", a.delays);
    s.get("bandHalfWidth", a.bandHalfWidth);
    s.get("earliestArrival", a.earliestArrival);
    s.get("tailDistance", a.tailDistance);
    s.get("probeMask", a.probeMask);
    s.get("autoDuration", a.autoDuration);
    {
        Section w(s.child("window"), "analysis.window");
        w.get_optional("tStart", a.window.tStart);
        w.get_optional("tEnd", a.window.tEnd);
        if (w.has("apodization")) {
            std::string name;
            w.get("apodization", name);
            a.window.apodization = apodization_from_string(name);
        }
        w.get_optional("tau", a.window.tau);
        w.finish();
    }
    const auto range = s.child("fitRange");
    if (range && !range.IsNull()) {
        Section r(range, "analysis.fitRange");
        SiteRange sr{0, 0};
        if (!r.has("first") || !r.has("last")) {
            throw ParseError("analysis.fitRange needs both 'first' and 'last'", line_of(range));
        }
        r.get("first", sr.first);
        r.get("last", sr.last);
        r.finish();
        a.fitRange = sr;
    }
    s.finish();
}

void apply_override(YAML::Node& root, const std::string& assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ParseError("override '" + assignment + "' is not of the form key.path=value", 0);
    }
    const std::string path = assignment.substr(0, eq);
    YAML::Node value;
    try {
        value = YAML::Load(assignment.substr(eq + 1));
    } catch (const YAML::ParserException& e) {
        throw ParseError("override '" + assignment + "': " + e.msg, 0);
    }
    std::vector<std::string> keys;
    std::stringstream ss(path);
    for (std::string part; std::getline(ss, part, '.');) {
        if (part.empty()) {
            throw ParseError("override '" + assignment + "' has an empty key", 0);
        }
        keys.push_back(part);
    }
    // Node assignment writes through in yaml-cpp, so handles are rebound with reset().
    YAML::Node cursor;
    cursor.reset(root);
    for (std::size_t i = 0; i + 1 < keys.size(); ++i) {
        YAML::Node next;
        next.reset(cursor[keys[i]]);
        if (!next.IsDefined() || next.IsNull()) {
            cursor[keys[i]] = YAML::Node(YAML::NodeType::Map);
            next.reset(cursor[keys[i]]);
        }
        if (!next.IsMap()) {
            throw ParseError("override '" + assignment + "': '" + keys[i] + "' is not a section", 0);
        }
        cursor.reset(next);
    }
    cursor[keys.back()] = value;
}

void check(bool ok, const std::string& invariant)
{
    if (!ok) {
        throw ValidationError(invariant);
    }
}

}  // namespace

std::string to_string(Scenario s)
{
    for (const auto& [value, name] : kScenarioNames) {
        if (value == s) {
            return name;
        }
    }
    return "unknown";
}

Scenario scenario_from_string(const std::string& name)
{
    std::string accepted;
    for (const auto& [value, label] : kScenarioNames) {
        if (name == label) {
            return value;
        }
        accepted += accepted.empty() ? label : std::string(", ") + label;
    }
    throw ValidationError("scenario '" + name + "' is not one of: " + accepted);
}

std::string to_string(OutputFormat f)
{
    switch (f) {
    case OutputFormat::Text: return "text";
    case OutputFormat::Binary: return "binary";
    case OutputFormat::Both: return "both";
    }
    return "text";
}

OutputFormat output_format_from_string(const std::string& name)
{
    if (name == "text") {
        return OutputFormat::Text;
    }
    if (name == "binary") {
        return OutputFormat::Binary;
    }
    if (name == "both") {
        return OutputFormat::Both;
    }
    throw ValidationError("output format must be text, binary or both, got '" + name + "'");
}

void ScenarioConfig::finalize()
{
    model.validate();
    if (pumpOmegaAuto) {
        pump.omegaDrive = polariton_frequencies(std::abs(pump.kCenter), model).lower;
    }
    if (probeOmegaAuto) {
        probe.omegaDrive = polariton_frequencies(std::abs(probe.kCenter), model).lower;
    }
    pump.validate(model, "pump");
    probe.validate(model, "probe");
    integrator.validate(model);

    if (analysis.delays.empty()) {
        analysis.delays = uniform_delays(-800.0, 800.0, 9);
    }
    for (double d : analysis.delays) {
        check(std::isfinite(d), "analysis: delays must be finite");
    }
    check(analysis.bandHalfWidth > 0, "analysis: bandHalfWidth > 0");
    check(analysis.tailDistance >= 0, "analysis: tailDistance >= 0");
    check(analysis.probeMask >= 0, "analysis: probeMask >= 0");
    check(std::isfinite(analysis.earliestArrival), "analysis: earliestArrival must be finite");
    check(!analysis.window.tau || *analysis.window.tau > 0, "analysis.window: tau > 0");
    check(!(analysis.window.tStart && analysis.window.tEnd) || *analysis.window.tStart < *analysis.window.tEnd,
          "analysis.window: tStart < tEnd");
    if (analysis.fitRange) {
        check(analysis.fitRange->first >= 0 && analysis.fitRange->last < model.numSites &&
                  analysis.fitRange->first <= analysis.fitRange->last,
              "analysis.fitRange: 0 <= first <= last < numSites");
    }
    check(threads >= 1, "threads >= 1");
    check(!output.directory.empty(), "output: directory must not be empty");

    const bool sweep = scenario == Scenario::SweepMomentum || scenario == Scenario::SweepDephasing;
    check(!sweep || !sweepAxis.empty(), "sweep scenarios require sweep.values");
    if (scenario == Scenario::SweepMomentum) {
        const double kMax = std::numbers::pi / model.siteSpacing();
        for (double k : sweepAxis) {
            check(k > 0 && k <= kMax, "sweep.values: momenta must lie in (0, pi / dr]");
        }
    }
    if (scenario == Scenario::SweepDephasing) {
        for (double g : sweepAxis) {
            check(g >= 0 && std::isfinite(g), "sweep.values: dephasing rates >= 0");
        }
    }
    check(!sweep || analysis.delays.size() >= kMinFitDelays, "analysis: sweeps need at least 5 delays");
}

ScenarioConfig default_config()
{
    ScenarioConfig cfg;
    const double kp = std::numbers::pi / 2.0;
    cfg.pump.center = -50.0;
    cfg.pump.kCenter = kp;
    cfg.probe.center = 50.0;
    cfg.probe.kCenter = -kp;
    cfg.finalize();
    return cfg;
}

ScenarioConfig parse_config(const std::string& text, const std::vector<std::string>& overrides)
{
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw ParseError(e.msg, e.mark.line + 1);
    }
    if (root.IsNull() || !root.IsDefined()) {
        root = YAML::Node(YAML::NodeType::Map);
    }
    if (!root.IsMap()) {
        throw ParseError("configuration must be a mapping of sections", line_of(root));
    }
    for (const auto& o : overrides) {
        apply_override(root, o);
    }

    ScenarioConfig cfg = default_config();
    Section top(root, "");
    read_model(Section(top.child("model"), "model"), cfg.model);
    read_pulse(Section(top.child("pump"), "pump"), cfg.pump, cfg.pumpOmegaAuto);
    read_pulse(Section(top.child("probe"), "probe"), cfg.probe, cfg.probeOmegaAuto);
    read_integrator(Section(top.child("integrator"), "integrator"), cfg.integrator);
    if (top.has("scenario")) {
        std::string name;
        top.get("scenario", name);
        cfg.scenario = scenario_from_string(name);
    }
    {
        Section sweep(top.child("sweep"), "sweep");
        cfg.sweepAxis = sweep.get_list("values", {});
        sweep.finish();
    }
    read_analysis(Section(top.child("analysis"), "analysis"), cfg.analysis);
    {
        Section out(top.child("output"), "output");
        out.get("directory", cfg.output.directory);
        if (out.has("format")) {
            std::string name;
            out.get("format", name);
            cfg.output.format = output_format_from_string(name);
        }
        out.finish();
    }
    top.get("threads", cfg.threads);
    top.finish();
    cfg.finalize();
    return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read configuration file " + path.string());
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), overrides);
}

namespace {

void emit_optional(YAML::Emitter& out, const char* key, const std::optional<double>& v, const char* unset)
{
    out << YAML::Key << key << YAML::Value;
    if (v) {
        out << *v;
    } else {
        out << unset;
    }
}

void emit_list(YAML::Emitter& out, const char* key, const std::vector<double>& values)
{
    out << YAML::Key << key << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (double v : values) {
        out << v;
    }
    out << YAML::EndSeq;
}

void emit_pulse(YAML::Emitter& out, const char* name, const PulseSpec& p, bool omegaAuto)
{
    out << YAML::Key << name << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "amplitude" << YAML::Value << p.amplitude;
    out << YAML::Key << "omegaDrive" << YAML::Value;
    if (omegaAuto) {
        out << "auto";
    } else {
        out << p.omegaDrive;
    }
    out << YAML::Key << "sigmaT" << YAML::Value << p.sigmaT;
    out << YAML::Key << "sigmaR" << YAML::Value << p.sigmaR;
    out << YAML::Key << "kCenter" << YAML::Value << p.kCenter;
    out << YAML::Key << "center" << YAML::Value << p.center;
    out << YAML::Key << "arrival" << YAML::Value << p.arrival;
    out << YAML::Key << "phase" << YAML::Value << p.phase;
    out << YAML::EndMap;
}

}  // namespace

std::string dump_config(const ScenarioConfig& cfg)
{
    YAML::Emitter out;
    out.SetDoublePrecision(17);
    out << YAML::BeginMap;
    out << YAML::Key << "scenario" << YAML::Value << to_string(cfg.scenario);
    out << YAML::Key << "threads" << YAML::Value << cfg.threads;

    const auto& m = cfg.model;
    out << YAML::Key << "model" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "omega0" << YAML::Value << m.omega0;
    out << YAML::Key << "omegaC" << YAML::Value << m.omegaC;
    out << YAML::Key << "rabi" << YAML::Value << m.rabi;
    out << YAML::Key << "kappa" << YAML::Value << m.kappa;
    out << YAML::Key << "gammaPhi" << YAML::Value << m.gammaPhi;
    out << YAML::Key << "lengthL" << YAML::Value << m.lengthL;
    out << YAML::Key << "numSites" << YAML::Value << m.numSites;
    out << YAML::Key << "numMolecules" << YAML::Value << m.numMolecules;
    emit_list(out, "disorder", m.disorder);
    out << YAML::EndMap;

    emit_pulse(out, "pump", cfg.pump, cfg.pumpOmegaAuto);
    emit_pulse(out, "probe", cfg.probe, cfg.probeOmegaAuto);

    const auto& c = cfg.integrator;
    out << YAML::Key << "integrator" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "dt" << YAML::Value << c.dt;
    out << YAML::Key << "tEnd" << YAML::Value << c.tEnd;
    out << YAML::Key << "snapshotStride" << YAML::Value << c.snapshotStride;
    out << YAML::Key << "stencil" << YAML::Value << to_string(c.stencil);
    emit_optional(out, "frameOmega", c.frameOmega, "auto");
    out << YAML::EndMap;

    out << YAML::Key << "sweep" << YAML::Value << YAML::BeginMap;
    emit_list(out, "values", cfg.sweepAxis);
    out << YAML::EndMap;

    const auto& a = cfg.analysis;
    out << YAML::Key << "analysis" << YAML::Value << YAML::BeginMap;
    emit_list(out, "delays", a.delays);
    out << YAML::Key << "bandHalfWidth" << YAML::Value << a.bandHalfWidth;
    out << YAML::Key << "earliestArrival" << YAML::Value << a.earliestArrival;
    out << YAML::Key << "tailDistance" << YAML::Value << a.tailDistance;
    out << YAML::Key << "probeMask" << YAML::Value << a.probeMask;
    out << YAML::Key << "autoDuration" << YAML::Value << a.autoDuration;
    out << YAML::Key << "window" << YAML::Value << YAML::BeginMap;
    emit_optional(out, "tStart", a.window.tStart, "auto");
    emit_optional(out, "tEnd", a.window.tEnd, "auto");
    out << YAML::Key << "apodization" << YAML::Value << to_string(a.window.apodization);
    emit_optional(out, "tau", a.window.tau, "auto");
    out << YAML::EndMap;
    out << YAML::Key << "fitRange" << YAML::Value;
    if (a.fitRange) {
        out << YAML::Flow << YAML::BeginMap << YAML::Key << "first" << YAML::Value << a.fitRange->first
            << YAML::Key << "last" << YAML::Value << a.fitRange->last << YAML::EndMap;
    } else {
        out << YAML::Null;
    }
    out << YAML::EndMap;

    out << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "directory" << YAML::Value << YAML::DoubleQuoted << cfg.output.directory;
    out << YAML::Key << "format" << YAML::Value << to_string(cfg.output.format);
    out << YAML::EndMap;

    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

void save_config(const ScenarioConfig& cfg, const std::filesystem::path& path)
{
    std::ofstream file(path);
    if (!file) {
        throw IoError("cannot write configuration file " + path.string());
    }
    file << dump_config(cfg);
    if (!file) {
        throw IoError("failed writing configuration file " + path.string());
    }
}

}  // namespace polariton
