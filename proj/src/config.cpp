#include "matrel/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "matrel/release.hpp"

namespace matrel {

using nlohmann::json;

const std::vector<std::string>& known_experiments()
{
    static const std::vector<std::string> names = {
        "release-profile", "channel-response", "absorption-rate", "regime-nrmse",
        "regime-deviation", "micelle-release", "micelle-response", "regime-report"};
    return names;
}

const std::vector<std::string>& known_presets()
{
    static const std::vector<std::string> names = {
        "dox-ph5", "dox-ph74", "beta-lap", "eval-secVIA", "eval-secVIC"};
    return names;
}

namespace {

std::string join(const std::vector<std::string>& items)
{
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i)
            out += ", ";
        out += items[i];
    }
    return out;
}

[[noreturn]] void fail(const std::string& field, const std::string& what)
{
    throw std::invalid_argument("config." + field + ": " + what);
}

double get_number(const json& obj, const std::string& scope, const char* key, double fallback)
{
    if (!obj.contains(key))
        return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number())
        fail(scope + "." + key, "expected a number");
    return v.get<double>();
}

std::uint64_t get_u64(const json& obj, const std::string& scope, const char* key,
                      std::uint64_t fallback)
{
    if (!obj.contains(key))
        return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number_unsigned() && !v.is_number_integer())
        fail(scope + "." + key, "expected a non-negative integer");
    return v.get<std::uint64_t>();
}

std::string get_string(const json& obj, const std::string& scope, const char* key,
                       const std::string& fallback)
{
    if (!obj.contains(key))
        return fallback;
    const auto& v = obj.at(key);
    if (!v.is_string())
        fail(scope + "." + key, "expected a string");
    return v.get<std::string>();
}

std::vector<double> get_array(const json& obj, const std::string& scope, const char* key)
{
    if (!obj.contains(key))
        return {};
    const auto& v = obj.at(key);
    if (!v.is_array())
        fail(scope + "." + key, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number())
            fail(scope + "." + key, "expected an array of numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

} // namespace

ExperimentConfig parse_config(const std::string& json_text)
{
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: not valid JSON: ") + e.what());
    }
    if (!doc.is_object())
        throw std::invalid_argument("config: top level must be a JSON object");

    ExperimentConfig cfg;
    cfg.experiment = get_string(doc, "", "experiment", "");
    cfg.provenance = get_string(doc, "", "provenance", "");

    if (doc.contains("matrix")) {
        const auto& m = doc.at("matrix");
        if (!m.is_object())
            fail("matrix", "expected an object");
        cfg.matrix.radius = get_number(m, "matrix", "a_m", cfg.matrix.radius);
        cfg.matrix.diffusion = get_number(m, "matrix", "D_m_m2s", cfg.matrix.diffusion);
        cfg.matrix.loading_ratio = get_number(m, "matrix", "A_over_Cs", cfg.matrix.loading_ratio);
        cfg.matrix.total_molecules = get_number(m, "matrix", "M_inf", cfg.matrix.total_molecules);
    }
    if (doc.contains("channel")) {
        const auto& c = doc.at("channel");
        if (!c.is_object())
            fail("channel", "expected an object");
        cfg.channel.diffusion = get_number(c, "channel", "D_c_m2s", cfg.channel.diffusion);
        cfg.channel.distance = get_number(c, "channel", "d_m", cfg.channel.distance);
        cfg.channel.receiver_radius = get_number(c, "channel", "r_rx_m", cfg.channel.receiver_radius);
    }
    if (doc.contains("regime")) {
        const auto& r = doc.at("regime");
        if (!r.is_object())
            fail("regime", "expected an object");
        cfg.sigma = get_number(r, "regime", "sigma", cfg.sigma);
    }
    if (doc.contains("grid")) {
        const auto& g = doc.at("grid");
        if (!g.is_object())
            fail("grid", "expected an object");
        cfg.grid.t_end_s = get_number(g, "grid", "t_end_s", cfg.grid.t_end_s);
        cfg.grid.n_points = static_cast<int>(get_number(g, "grid", "n_points", cfg.grid.n_points));
        const std::string spacing = get_string(g, "grid", "spacing",
                                               cfg.grid.spacing == GridSpacing::linear
                                                   ? "linear" : "logarithmic");
        if (spacing == "linear")
            cfg.grid.spacing = GridSpacing::linear;
        else if (spacing == "logarithmic")
            cfg.grid.spacing = GridSpacing::logarithmic;
        else
            fail("grid.spacing", "expected \"linear\" or \"logarithmic\"");
    }
    if (doc.contains("pbs")) {
        const auto& p = doc.at("pbs");
        if (!p.is_object())
            fail("pbs", "expected an object");
        cfg.pbs.dt_s = get_number(p, "pbs", "dt_s", cfg.pbs.dt_s);
        cfg.pbs.realizations = static_cast<int>(get_number(p, "pbs", "realizations",
                                                           cfg.pbs.realizations));
        cfg.pbs.seed = get_u64(p, "pbs", "seed", cfg.pbs.seed);
        const std::string mode = get_string(p, "pbs", "absorption_mode",
                                            cfg.pbs.absorption_mode == pbs::AbsorptionMode::end_of_step
                                                ? "end-of-step" : "intra-step-crossing");
        if (mode == "end-of-step")
            cfg.pbs.absorption_mode = pbs::AbsorptionMode::end_of_step;
        else if (mode == "intra-step-crossing")
            cfg.pbs.absorption_mode = pbs::AbsorptionMode::intra_step_crossing;
        else
            fail("pbs.absorption_mode", "expected \"end-of-step\" or \"intra-step-crossing\"");
    }
    if (doc.contains("sweep")) {
        const auto& s = doc.at("sweep");
        if (!s.is_object())
            fail("sweep", "expected an object");
        cfg.sweep.ratios = get_array(s, "sweep", "ratios");
        cfg.sweep.distances_m = get_array(s, "sweep", "distances_m");
        cfg.sweep.taus = get_array(s, "sweep", "taus");
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("config: cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::vector<std::string> validate_config(const ExperimentConfig& cfg)
{
    std::vector<std::string> errors;
    auto check = [&errors](bool ok, const std::string& message) {
        if (!ok)
            errors.push_back(message);
    };

    bool known = false;
    for (const auto& name : known_experiments())
        known = known || name == cfg.experiment;
    check(known, "config.experiment: unknown experiment '" + cfg.experiment
                     + "' (valid: " + join(known_experiments()) + ")");

    try {
        cfg.matrix.validate();
    } catch (const std::invalid_argument& e) {
        errors.push_back(std::string("config.matrix: ") + e.what());
    }
    try {
        cfg.channel.validate_with(cfg.matrix);
    } catch (const std::invalid_argument& e) {
        errors.push_back(std::string("config.channel: ") + e.what());
    }

    check(cfg.sigma > 0.0 && cfg.sigma < 1.0, "config.regime.sigma: must lie in (0, 1)");
    check(cfg.grid.n_points >= 2, "config.grid.n_points: must be >= 2");
    check(cfg.grid.t_end_s >= 0.0, "config.grid.t_end_s: must be >= 0 (0 selects a default)");
    check(cfg.pbs.dt_s > 0.0, "config.pbs.dt_s: must be > 0");
    check(cfg.pbs.realizations >= 0,
          "config.pbs.realizations: must be >= 0 (0 skips the particle simulation)");
    for (double r : cfg.sweep.ratios)
        check(r > 0.0, "config.sweep.ratios: entries must be > 0");
    for (double d : cfg.sweep.distances_m)
        check(d > cfg.matrix.radius + cfg.channel.receiver_radius,
              "config.sweep.distances_m: entries must exceed a + r_rx");
    for (double tau : cfg.sweep.taus)
        check(tau > 0.0, "config.sweep.taus: entries must be > 0");
    return errors;
}

std::string to_json(const ExperimentConfig& cfg)
{
    json doc;
    doc["experiment"] = cfg.experiment;
    doc["matrix"] = {{"a_m", cfg.matrix.radius},
                     {"D_m_m2s", cfg.matrix.diffusion},
                     {"A_over_Cs", cfg.matrix.loading_ratio},
                     {"M_inf", cfg.matrix.total_molecules}};
    doc["channel"] = {{"D_c_m2s", cfg.channel.diffusion},
                      {"d_m", cfg.channel.distance},
                      {"r_rx_m", cfg.channel.receiver_radius}};
    doc["regime"] = {{"sigma", cfg.sigma}};
    doc["grid"] = {{"t_end_s", cfg.grid.t_end_s},
                   {"n_points", cfg.grid.n_points},
                   {"spacing", cfg.grid.spacing == GridSpacing::linear ? "linear" : "logarithmic"}};
    doc["pbs"] = {{"dt_s", cfg.pbs.dt_s},
                  {"realizations", cfg.pbs.realizations},
                  {"seed", cfg.pbs.seed},
                  {"absorption_mode",
                   cfg.pbs.absorption_mode == pbs::AbsorptionMode::end_of_step
                       ? "end-of-step" : "intra-step-crossing"}};
    json sweep = json::object();
    if (!cfg.sweep.ratios.empty())
        sweep["ratios"] = cfg.sweep.ratios;
    if (!cfg.sweep.distances_m.empty())
        sweep["distances_m"] = cfg.sweep.distances_m;
    if (!cfg.sweep.taus.empty())
        sweep["taus"] = cfg.sweep.taus;
    doc["sweep"] = sweep;
    if (!cfg.provenance.empty())
        doc["provenance"] = cfg.provenance;
    return doc.dump(2) + "\n";
}

std::uint64_t config_hash(const ExperimentConfig& cfg)
{
    // FNV-1a 64 over the canonical serialization
    const std::string text = to_json(cfg);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

ExperimentConfig preset(const std::string& name)
{
    ExperimentConfig cfg;
    cfg.matrix.total_molecules = 1e4;

    if (name == "dox-ph5" || name == "dox-ph74" || name == "beta-lap") {
        // micelle core loaded with drug molecules; RX is a cell nucleus
        cfg.matrix.radius = 4.5e-9;
        cfg.channel.distance = 10e-6;
        cfg.channel.receiver_radius = 5e-6;
        cfg.experiment = "regime-report";
        cfg.grid.spacing = GridSpacing::logarithmic;
        cfg.pbs.dt_s = 360.0;  // coarse step; release horizon spans days
        if (name == "dox-ph5") {
            cfg.matrix.diffusion = 1.82e-22;
            cfg.matrix.loading_ratio = 63.7;
            cfg.channel.diffusion = 5e-11;
        } else if (name == "dox-ph74") {
            cfg.matrix.diffusion = 1.82e-22;
            cfg.matrix.loading_ratio = 757.5;
            cfg.channel.diffusion = 5e-11;
        } else {
            cfg.matrix.diffusion = 2.42e-21;
            cfg.matrix.loading_ratio = 370.4;
            cfg.channel.diffusion = 1e-9;
            cfg.provenance = "D_c for beta-lap not reported in the literature; "
                             "a value larger than DOX's was assumed";
        }
        return cfg;
    }
    if (name == "eval-secVIA") {
        cfg.experiment = "channel-response";
        cfg.matrix = {1e-6, 1e-9, 1.0, 1e4};
        cfg.channel = {1e-9, 5e-6, 1e-6};
        cfg.sweep.ratios = {1.0, 25.0, 100.0, 400.0};
        cfg.sweep.distances_m = {2e-6, 5e-6};
        cfg.pbs.dt_s = 1e-6;
        return cfg;
    }
    if (name == "eval-secVIC") {
        cfg.experiment = "regime-nrmse";
        cfg.matrix = {1e-6, 1e-8, 1.0, 1e4};
        cfg.channel = {1e-8, 20e-6, 1e-6};
        cfg.sweep.taus = {1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3, 1e4};
        return cfg;
    }
    throw std::invalid_argument("preset: unknown name '" + name
                                + "' (valid: " + join(known_presets()) + ")");
}

} // namespace matrel
