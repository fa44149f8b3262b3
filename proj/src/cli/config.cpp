#include "kaczmod/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>

namespace kaczmod::cli {

using nlohmann::json;

namespace {

void only_keys(const json& object, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!object.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& item : object.items()) {
        const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* k) { return item.key() == k; });
        if (!known) throw ConfigError(where + ": unknown key \"" + item.key() + "\"");
    }
}

double get_number(const json& object, const char* key, const std::string& where) {
    const auto& v = object.at(key);
    if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(where + "." + key + ": must be finite");
    return d;
}

std::uint64_t get_count(const json& object, const char* key, const std::string& where) {
    const auto& v = object.at(key);
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0))
        throw ConfigError(where + "." + key + ": expected a non-negative integer");
    return v.get<std::uint64_t>();
}

std::string get_string(const json& object, const char* key, const std::string& where) {
    const auto& v = object.at(key);
    if (!v.is_string()) throw ConfigError(where + "." + key + ": expected a string");
    return v.get<std::string>();
}

std::vector<double> get_numbers(const json& object, const char* key, const std::string& where) {
    const auto& v = object.at(key);
    if (!v.is_array()) throw ConfigError(where + "." + key + ": expected an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
        if (!x.is_number()) throw ConfigError(where + "." + key + ": expected an array of numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

Experiment parse_experiment(const std::string& name) {
    if (name == "finite-periodic") return Experiment::FinitePeriodic;
    if (name == "stationary-single") return Experiment::StationarySingle;
    if (name == "stationary-family") return Experiment::StationaryFamily;
    if (name == "cauchy-diagnostics") return Experiment::CauchyDiagnostics;
    if (name == "frame-orbit") return Experiment::FrameOrbit;
    throw ConfigError("experiment: unknown experiment \"" + name + "\"");
}

MeasureSpec parse_measure(const json& j) {
    const std::string where = "measure";
    only_keys(j, where, {"kind", "alpha", "atoms"});
    MeasureSpec m;
    m.kind = get_string(j, "kind", where);
    if (m.kind != "atomic" && m.kind != "lebesgue" && m.kind != "mixture")
        throw ConfigError("measure.kind: expected atomic, lebesgue or mixture");
    if (j.contains("alpha")) m.alpha = get_number(j, "alpha", where);
    if (j.contains("atoms")) {
        if (!j["atoms"].is_array()) throw ConfigError("measure.atoms: expected an array");
        for (std::size_t i = 0; i < j["atoms"].size(); ++i) {
            const auto& a = j["atoms"][i];
            const std::string at = "measure.atoms[" + std::to_string(i) + "]";
            only_keys(a, at, {"position", "weight"});
            if (!a.contains("position") || !a.contains("weight")) throw ConfigError(at + ": needs position and weight");
            m.atoms.push_back({get_number(a, "position", at), get_number(a, "weight", at)});
        }
    }
    if (m.kind == "mixture" && !j.contains("alpha")) throw ConfigError("measure.alpha: required for a mixture");
    if (m.kind != "lebesgue" && m.atoms.empty()) throw ConfigError("measure.atoms: required for " + m.kind);
    return m;
}

FamilySpec parse_family(const json& j) {
    const std::string where = "family";
    only_keys(j, where, {"grid", "alpha", "atoms", "continuity_budget", "check_frequency"});
    FamilySpec f;
    const auto& g = j.at("grid");
    only_keys(g, "family.grid", {"start", "stop", "points"});
    f.grid_start = get_number(g, "start", "family.grid");
    f.grid_stop = get_number(g, "stop", "family.grid");
    f.grid_points = get_count(g, "points", "family.grid");
    if (j.contains("alpha")) f.alpha = get_number(j, "alpha", where);
    if (j.contains("continuity_budget")) f.continuity_budget = get_number(j, "continuity_budget", where);
    if (j.contains("check_frequency")) f.check_frequency = get_count(j, "check_frequency", where);
    if (!j.contains("atoms") || !j["atoms"].is_array()) throw ConfigError("family.atoms: expected an array");
    for (std::size_t i = 0; i < j["atoms"].size(); ++i) {
        const auto& a = j["atoms"][i];
        const std::string at = "family.atoms[" + std::to_string(i) + "]";
        only_keys(a, at, {"position", "weight"});
        const auto& w = a.at("weight");
        only_keys(w, at + ".weight", {"intercept", "slope"});
        f.atoms.push_back({get_number(a, "position", at), get_number(w, "intercept", at + ".weight"),
                           w.contains("slope") ? get_number(w, "slope", at + ".weight") : 0.0});
    }
    return f;
}

template <class Fn>
auto field(const char* where, Fn&& fn) {
    try {
        return fn();
    } catch (const json::out_of_range&) {
        throw ConfigError(std::string(where) + ": missing required key");
    } catch (const json::type_error& e) {
        throw ConfigError(std::string(where) + ": " + e.what());
    }
}

}  // namespace

const char* to_string(Experiment e) noexcept {
    switch (e) {
        case Experiment::FinitePeriodic: return "finite-periodic";
        case Experiment::StationarySingle: return "stationary-single";
        case Experiment::StationaryFamily: return "stationary-family";
        case Experiment::CauchyDiagnostics: return "cauchy-diagnostics";
        case Experiment::FrameOrbit: return "frame-orbit";
    }
    return "stationary-single";
}

ExperimentConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto upto = std::min<std::size_t>(e.byte, text.size());
        const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
        throw ConfigError("config parse error at line " + std::to_string(line) + ": " + e.what());
    }

    only_keys(root, "config", {"experiment", "measure", "family", "module", "target", "periodic", "numeric", "output"});
    ExperimentConfig c;
    c.experiment = field("experiment", [&] { return parse_experiment(get_string(root, "experiment", "config")); });
    if (root.contains("measure")) c.measure = field("measure", [&] { return parse_measure(root["measure"]); });
    if (root.contains("family")) c.family = field("family", [&] { return parse_family(root["family"]); });

    if (root.contains("module")) {
        const auto& m = root["module"];
        only_keys(m, "module", {"realization", "max_frequency"});
        if (m.contains("realization")) c.module.realization = get_string(m, "realization", "module");
        if (c.module.realization != "trig" && c.module.realization != "atomic")
            throw ConfigError("module.realization: expected trig or atomic");
        if (m.contains("max_frequency")) c.module.max_frequency = get_count(m, "max_frequency", "module");
    }

    if (root.contains("target")) {
        const auto& t = root["target"];
        only_keys(t, "target", {"kind", "index", "degree", "re", "im"});
        if (t.contains("kind")) c.target.kind = get_string(t, "kind", "target");
        if (c.target.kind != "exponential" && c.target.kind != "random" && c.target.kind != "coefficients")
            throw ConfigError("target.kind: expected exponential, random or coefficients");
        if (t.contains("index")) c.target.index = get_count(t, "index", "target");
        if (t.contains("degree")) c.target.degree = get_count(t, "degree", "target");
        if (t.contains("re")) c.target.re = get_numbers(t, "re", "target");
        if (t.contains("im")) c.target.im = get_numbers(t, "im", "target");
        if (c.target.kind == "coefficients" && c.target.re.empty())
            throw ConfigError("target.re: required for explicit coefficients");
        if (!c.target.im.empty() && c.target.im.size() != c.target.re.size())
            throw ConfigError("target.im: must match the length of target.re");
    }

    if (root.contains("periodic")) {
        const auto& p = root["periodic"];
        only_keys(p, "periodic", {"construction", "unitary_seed"});
        if (p.contains("construction")) c.periodic.construction = get_string(p, "construction", "periodic");
        if (c.periodic.construction != "co-isometry-example")
            throw ConfigError("periodic.construction: only co-isometry-example is available");
        if (p.contains("unitary_seed")) c.periodic.unitary_seed = get_count(p, "unitary_seed", "periodic");
    }

    if (root.contains("numeric")) {
        const auto& n = root["numeric"];
        only_keys(n, "numeric",
                  {"max_iter", "tol", "truncation", "r_max", "sample_points", "test_degree", "classification_tol",
                   "seed"});
        if (n.contains("max_iter")) c.numeric.max_iter = get_count(n, "max_iter", "numeric");
        if (n.contains("tol")) c.numeric.tol = get_number(n, "tol", "numeric");
        if (n.contains("truncation")) c.numeric.truncation = get_count(n, "truncation", "numeric");
        if (n.contains("r_max")) c.numeric.r_max = get_number(n, "r_max", "numeric");
        if (n.contains("sample_points")) c.numeric.sample_points = get_count(n, "sample_points", "numeric");
        if (n.contains("test_degree")) c.numeric.test_degree = get_count(n, "test_degree", "numeric");
        if (n.contains("classification_tol"))
            c.numeric.classification_tol = get_number(n, "classification_tol", "numeric");
        if (n.contains("seed")) c.numeric.seed = get_count(n, "seed", "numeric");
    }
    if (!(c.numeric.tol > 0.0)) throw ConfigError("numeric.tol: must be > 0");
    if (!(c.numeric.r_max > 0.0 && c.numeric.r_max <= 0.95)) throw ConfigError("numeric.r_max: must lie in (0, 0.95]");

    if (root.contains("output")) {
        const auto& o = root["output"];
        only_keys(o, "output", {"directory", "formats"});
        if (o.contains("directory")) c.output.directory = get_string(o, "directory", "output");
        if (o.contains("formats")) {
            if (!o["formats"].is_array()) throw ConfigError("output.formats: expected an array");
            c.output.formats.clear();
            for (const auto& f : o["formats"]) {
                if (!f.is_string() || (f != "csv" && f != "json"))
                    throw ConfigError("output.formats: entries must be \"csv\" or \"json\"");
                c.output.formats.push_back(f.get<std::string>());
            }
        }
    }

    // Cross-field requirements.
    const bool needs_measure = c.experiment != Experiment::FinitePeriodic && c.experiment != Experiment::StationaryFamily;
    if (needs_measure && !c.measure) throw ConfigError("measure: required for " + std::string(to_string(c.experiment)));
    if (c.experiment == Experiment::StationaryFamily && !c.family)
        throw ConfigError("family: required for stationary-family");
    const bool random_target = c.target.kind == "random" || c.experiment == Experiment::FinitePeriodic ||
                               c.experiment == Experiment::FrameOrbit;
    if (random_target && !c.numeric.seed) throw ConfigError("numeric.seed: required when a random target or probe is used");
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

json to_json(const ExperimentConfig& c) {
    json j;
    j["experiment"] = to_string(c.experiment);
    if (c.measure) {
        json m{{"kind", c.measure->kind}};
        if (c.measure->kind == "mixture") m["alpha"] = c.measure->alpha;
        json atoms = json::array();
        for (const auto& a : c.measure->atoms) atoms.push_back({{"position", a.position}, {"weight", a.weight}});
        if (!c.measure->atoms.empty()) m["atoms"] = atoms;
        j["measure"] = m;
    }
    if (c.family) {
        const auto& f = *c.family;
        json atoms = json::array();
        for (const auto& a : f.atoms)
            atoms.push_back({{"position", a.position}, {"weight", {{"intercept", a.intercept}, {"slope", a.slope}}}});
        j["family"] = {{"grid", {{"start", f.grid_start}, {"stop", f.grid_stop}, {"points", f.grid_points}}},
                       {"alpha", f.alpha},
                       {"atoms", atoms},
                       {"continuity_budget", f.continuity_budget},
                       {"check_frequency", f.check_frequency}};
    }
    j["module"] = {{"realization", c.module.realization}};
    if (c.module.max_frequency) j["module"]["max_frequency"] = *c.module.max_frequency;
    j["target"] = {{"kind", c.target.kind}, {"index", c.target.index}, {"degree", c.target.degree}};
    if (!c.target.re.empty()) {
        j["target"]["re"] = c.target.re;
        j["target"]["im"] = c.target.im;
    }
    if (c.experiment == Experiment::FinitePeriodic)
        j["periodic"] = {{"construction", c.periodic.construction}, {"unitary_seed", c.periodic.unitary_seed}};
    j["numeric"] = {{"max_iter", c.numeric.max_iter},           {"tol", c.numeric.tol},
                    {"truncation", c.numeric.truncation},       {"r_max", c.numeric.r_max},
                    {"sample_points", c.numeric.sample_points}, {"test_degree", c.numeric.test_degree},
                    {"classification_tol", c.numeric.classification_tol}};
    if (c.numeric.seed) j["numeric"]["seed"] = *c.numeric.seed;
    j["output"] = {{"formats", c.output.formats}};
    if (c.output.directory) j["output"]["directory"] = *c.output.directory;
    return j;
}

}  // namespace kaczmod::cli
