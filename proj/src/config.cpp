#include "stochns/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "stochns/io.hpp"

namespace stochns {

using nlohmann::json;

namespace {

std::string join(const std::vector<std::string>& errors) {
    std::string out = errors.size() == 1 ? "invalid config: " : "invalid config (" + std::to_string(errors.size()) + " errors):";
    for (std::size_t i = 0; i < errors.size(); ++i) out += (errors.size() == 1 ? "" : "\n  ") + errors[i];
    return out;
}

/// Reads one section, remembering every problem.
class Section {
public:
    Section(const json& root, std::string name, std::set<std::string> allowed, std::vector<std::string>& errors)
        : name_(std::move(name)), errors_(errors) {
        if (!root.contains(name_)) return;
        const json& s = root.at(name_);
        if (!s.is_object()) {
            errors_.push_back(name_ + ": expected an object");
            return;
        }
        node_ = &s;
        for (const auto& [k, v] : s.items())
            if (!allowed.count(k)) errors_.push_back(name_ + "." + k + ": unknown key");
    }

    bool has(const std::string& key) const { return node_ && node_->contains(key); }
    const json* raw(const std::string& key) const { return has(key) ? &node_->at(key) : nullptr; }
    std::string path(const std::string& key) const { return name_ + "." + key; }
    void error(const std::string& key, const std::string& what) { errors_.push_back(path(key) + ": " + what); }

    template <class T>
    void read(const std::string& key, T& out) {
        if (!has(key)) return;
        const json& v = node_->at(key);
        try {
            if constexpr (std::is_same_v<T, bool>) {
                if (!v.is_boolean()) throw std::invalid_argument("expected true or false");
            } else if constexpr (std::is_integral_v<T>) {
                if (!v.is_number_integer()) throw std::invalid_argument("expected an integer");
                if constexpr (std::is_unsigned_v<T>)
                    if (v.is_number_integer() && !v.is_number_unsigned()) throw std::invalid_argument("expected a nonnegative integer");
            } else if constexpr (std::is_floating_point_v<T>) {
                if (!v.is_number()) throw std::invalid_argument("expected a number");
            } else {
                if (!v.is_string()) throw std::invalid_argument("expected a string");
            }
            out = v.get<T>();
        } catch (const std::exception& e) {
            error(key, e.what());
        }
    }

private:
    std::string name_;
    std::vector<std::string>& errors_;
    const json* node_ = nullptr;
};

template <class E, class F>
void read_enum(Section& s, const std::string& key, E& out, F parse) {
    std::string name;
    if (!s.has(key)) return;
    s.read(key, name);
    if (name.empty()) return;
    try {
        out = parse(name);
    } catch (const ConfigError& e) {
        s.error(key, e.what());
    }
}

}  // namespace

ConfigErrors::ConfigErrors(std::vector<std::string> errors) : ConfigError(join(errors)), errors_(std::move(errors)) {}

double resolve_viscosity(const json& value, int n) {
    if (value.is_number()) return value.get<double>();
    if (!value.is_string()) throw ConfigError("expected a number or a string like \"0.05/N\"");
    std::string s = value.get<std::string>();
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
    const auto slash = s.find('/');
    if (slash == std::string::npos || (s.substr(slash + 1) != "N" && s.substr(slash + 1) != "n"))
        throw ConfigError("cannot resolve viscosity '" + value.get<std::string>() + "' (expected a number or \"c/N\")");
    try {
        return parse_double(s.substr(0, slash)) / n;
    } catch (const IoError&) {
        throw ConfigError("cannot resolve viscosity '" + value.get<std::string>() + "'");
    }
}

RunConfig config_from_json(const json& j) {
    std::vector<std::string> errors;
    RunConfig cfg;
    EnsembleSpec& e = cfg.ensemble;
    if (!j.is_object()) throw ConfigErrors({"top level: expected an object"});

    const std::set<std::string> sections = {"grid", "integrator", "forcing", "initial_condition", "ensemble", "output"};
    for (const auto& [k, v] : j.items())
        if (!sections.count(k)) errors.push_back(k + ": unknown section");

    Section grid(j, "grid", {"n", "dealias"}, errors);
    grid.read("n", e.grid_n);
    read_enum(grid, "dealias", e.integrator.dealias, parse_dealias);
    bool grid_ok = true;
    try {
        Grid g(e.grid_n);
    } catch (const ConfigError& err) {
        grid.error("n", err.what());
        grid_ok = false;
    }

    Section integ(j, "integrator",
                  {"dt", "t_end", "scheme", "cfl", "dt_max", "record_every", "project_every_step"}, errors);
    if (const json* dt = integ.raw("dt")) {
        if (dt->is_string() && dt->get<std::string>() == "auto")
            e.integrator.dt.reset();
        else if (dt->is_number())
            e.integrator.dt = dt->get<double>();
        else
            integ.error("dt", "expected a positive number or \"auto\"");
    }
    integ.read("t_end", e.integrator.t_end);
    read_enum(integ, "scheme", e.integrator.scheme, parse_scheme);
    integ.read("cfl", e.integrator.cfl);
    integ.read("dt_max", e.integrator.dt_max);
    integ.read("record_every", e.integrator.record_every);
    integ.read("project_every_step", e.integrator.project_every_step);
    if (e.integrator.dt && !(*e.integrator.dt > 0.0)) integ.error("dt", "must be > 0");
    if (!(e.integrator.t_end > 0.0) || !std::isfinite(e.integrator.t_end)) integ.error("t_end", "must be finite and > 0");
    if (!(e.integrator.cfl > 0.0 && e.integrator.cfl <= 1.0)) integ.error("cfl", "must lie in (0, 1]");
    if (!(e.integrator.dt_max > 0.0)) integ.error("dt_max", "must be > 0");
    if (e.integrator.record_every < 1) integ.error("record_every", "must be >= 1");

    Section forcing(j, "forcing", {"n_b", "sigma"}, errors);
    forcing.read("n_b", e.n_b);
    if (!forcing.has("sigma"))
        errors.push_back("forcing.sigma: missing required key (noise amplitude, e.g. 0.01)");
    forcing.read("sigma", e.sigma);
    if (forcing.has("sigma") && (!(e.sigma >= 0.0) || !std::isfinite(e.sigma))) forcing.error("sigma", "must be finite and >= 0");
    if (e.n_b < 1) forcing.error("n_b", "must be >= 1");
    else if (grid_ok && 4 * e.n_b > e.grid_n)
        forcing.error("n_b", "basis modes up to 2 n_b = " + std::to_string(2 * e.n_b) + " are not representable on n = " +
                                 std::to_string(e.grid_n) + " (need n >= 4 n_b)");

    Section ic(j, "initial_condition", {"kind", "rho", "delta", "p_modes", "hurst", "amplitude"}, errors);
    read_enum(ic, "kind", e.ic.kind, parse_ic_kind);
    ic.read("rho", e.ic.sheet.rho);
    ic.read("delta", e.ic.sheet.delta);
    ic.read("p_modes", e.ic.sheet.p_modes);
    ic.read("hurst", e.ic.fbb.hurst);
    ic.read("amplitude", e.ic.amplitude);
    if (!(e.ic.sheet.rho > 0.0)) ic.error("rho", "must be > 0");
    if (!(e.ic.sheet.delta >= 0.0)) ic.error("delta", "must be >= 0");
    if (e.ic.sheet.p_modes < 0) ic.error("p_modes", "must be >= 0");
    if (!(e.ic.fbb.hurst > 0.0 && e.ic.fbb.hurst < 1.0)) ic.error("hurst", "must lie in (0, 1)");

    Section ens(j, "ensemble",
                {"realizations", "viscosities", "seed", "workers", "common_noise", "skip_failed", "aggregation_points"},
                errors);
    ens.read("realizations", e.realizations);
    ens.read("seed", e.master_seed);
    ens.read("workers", e.workers);
    ens.read("common_noise", e.common_noise);
    ens.read("skip_failed", e.skip_failed);
    ens.read("aggregation_points", e.aggregation_points);
    json nus = json::array({"0.05/N", "0.1/N", "0.2/N"});
    if (const json* v = ens.raw("viscosities")) {
        if (v->is_array() && !v->empty())
            nus = *v;
        else
            ens.error("viscosities", "expected a nonempty list");
    }
    for (std::size_t i = 0; i < nus.size(); ++i) {
        try {
            const double nu = resolve_viscosity(nus[i], e.grid_n);
            if (!(nu >= 0.0) || !std::isfinite(nu)) throw ConfigError("must be finite and >= 0");
            e.viscosities.push_back(nu);
        } catch (const ConfigError& err) {
            ens.error("viscosities[" + std::to_string(i) + "]", err.what());
        }
    }
    if (e.realizations < 1) ens.error("realizations", "must be >= 1");
    if (e.workers < 1) ens.error("workers", "must be >= 1");
    if (e.aggregation_points < 2) ens.error("aggregation_points", "must be >= 2");

    Section out(j, "output", {"dir", "sf_radii", "sf_every", "sf_normalization", "n_rect", "write_snapshots"}, errors);
    std::string dir = cfg.out_dir.string();
    out.read("dir", dir);
    cfg.out_dir = dir;
    out.read("sf_every", e.sf_every);
    read_enum(out, "sf_normalization", e.sf_normalization, parse_sf_normalization);
    out.read("n_rect", e.n_rect);
    out.read("write_snapshots", e.write_snapshots);
    if (e.sf_every < 1) out.error("sf_every", "must be >= 1");
    if (e.n_rect < 1) out.error("n_rect", "must be >= 1");
    if (const json* r = out.raw("sf_radii")) {
        if (r->is_array() && !r->empty() && std::all_of(r->begin(), r->end(), [](const json& x) { return x.is_number(); }))
            e.sf_radii = r->get<std::vector<double>>();
        else
            out.error("sf_radii", "expected a nonempty list of numbers");
    }
    if (e.sf_radii.empty() && grid_ok) e.sf_radii = default_sf_radii(e.grid_n);
    for (std::size_t i = 0; i < e.sf_radii.size() && grid_ok; ++i) {
        if (e.sf_radii[i] * e.grid_n < 1.0 - 1e-12 || e.sf_radii[i] > std::sqrt(0.5))
            out.error("sf_radii", "entry " + format_double(e.sf_radii[i]) + " outside [1/n, sqrt(2)/2]");
        if (i && !(e.sf_radii[i] > e.sf_radii[i - 1])) out.error("sf_radii", "must be increasing");
    }

    if (!errors.empty()) throw ConfigErrors(errors);
    try {
        e.validate();
    } catch (const ConfigError& err) {
        throw ConfigErrors({err.what()});
    }
    return cfg;
}

RunConfig parse_config_text(std::string_view text) {
    const auto blank = text.find_first_not_of(" \t\r\n");
    if (blank == std::string_view::npos) return config_from_json(json::object());
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigErrors({std::string("parse error: ") + e.what()});
    }
    return config_from_json(j);
}

RunConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigErrors({"cannot read config file " + path.string()});
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

json config_to_json(const RunConfig& cfg) {
    const EnsembleSpec& e = cfg.ensemble;
    json j;
    j["grid"] = {{"n", e.grid_n}, {"dealias", to_string(e.integrator.dealias)}};
    j["integrator"] = {{"t_end", e.integrator.t_end},
                       {"scheme", to_string(e.integrator.scheme)},
                       {"cfl", e.integrator.cfl},
                       {"dt_max", e.integrator.dt_max},
                       {"record_every", e.integrator.record_every},
                       {"project_every_step", e.integrator.project_every_step}};
    if (e.integrator.dt)
        j["integrator"]["dt"] = *e.integrator.dt;
    else
        j["integrator"]["dt"] = "auto";
    j["forcing"] = {{"n_b", e.n_b}, {"sigma", e.sigma}};
    j["initial_condition"] = {{"kind", to_string(e.ic.kind)},
                              {"rho", e.ic.sheet.rho},
                              {"delta", e.ic.sheet.delta},
                              {"p_modes", e.ic.sheet.p_modes},
                              {"hurst", e.ic.fbb.hurst},
                              {"amplitude", e.ic.amplitude}};
    j["ensemble"] = {{"realizations", e.realizations},
                     {"viscosities", e.viscosities},
                     {"seed", e.master_seed},
                     {"workers", e.workers},
                     {"common_noise", e.common_noise},
                     {"skip_failed", e.skip_failed},
                     {"aggregation_points", e.aggregation_points}};
    j["output"] = {{"dir", cfg.out_dir.string()},
                   {"sf_radii", e.sf_radii},
                   {"sf_every", e.sf_every},
                   {"sf_normalization", to_string(e.sf_normalization)},
                   {"n_rect", e.n_rect},
                   {"write_snapshots", e.write_snapshots}};
    return j;
}

}  // namespace stochns
