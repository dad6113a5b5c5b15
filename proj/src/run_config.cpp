#include "sqed/run_config.hpp"

#include "sqed/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace sqed {

namespace {

using nlohmann::json;

void only_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
    if (!obj.is_object()) throw ConfigError(where + " must be an object");
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
    }
}

double number(const json& obj, const std::string& key, const std::string& where) {
    const auto& v = obj.at(key);
    if (!v.is_number()) throw ConfigError(where + "." + key + " must be a number");
    return v.get<double>();
}

template <class T>
T value_or(const json& obj, const std::string& key, T fallback, const std::string& where) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(where + "." + key + " has the wrong type");
    }
}

cplx index_of(const json& v, const std::string& where) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return {v[0].get<double>(), v[1].get<double>()};
    throw ConfigError(where + " must be a number or [re, im]");
}

LayerStack parse_stack(const json& s) {
    only_keys(s, "stack", {"core", "layers", "ambient_index"});
    std::vector<LayerSpec> specs;
    const auto& core = s.at("core");
    only_keys(core, "stack.core", {"radius_um", "index"});
    specs.push_back({number(core, "radius_um", "stack.core") * 1e-6, std::nullopt,
                     index_of(core.at("index"), "stack.core.index")});
    if (s.contains("layers")) {
        int i = 0;
        for (const auto& l : s.at("layers")) {
            const std::string where = "stack.layers[" + std::to_string(i++) + "]";
            only_keys(l, where, {"thickness_um", "outer_radius_um", "quarter_wave_lambda0_um", "index"});
            LayerSpec spec;
            spec.index = index_of(l.at("index"), where + ".index");
            const int given = static_cast<int>(l.contains("thickness_um")) + static_cast<int>(l.contains("outer_radius_um")) +
                              static_cast<int>(l.contains("quarter_wave_lambda0_um"));
            if (given != 1)
                throw ConfigError(where + " needs exactly one of thickness_um, outer_radius_um, quarter_wave_lambda0_um");
            if (l.contains("thickness_um")) spec.thickness = number(l, "thickness_um", where) * 1e-6;
            if (l.contains("outer_radius_um")) spec.outer_radius = number(l, "outer_radius_um", where) * 1e-6;
            if (l.contains("quarter_wave_lambda0_um"))
                spec.thickness = quarter_wave_thickness(number(l, "quarter_wave_lambda0_um", where) * 1e-6, spec.index.real());
            specs.push_back(spec);
        }
    }
    const cplx ambient = s.contains("ambient_index") ? index_of(s.at("ambient_index"), "stack.ambient_index") : cplx{1.0, 0.0};
    return build_stack(specs, ambient);
}

RunConfig parse(const json& root) {
    only_keys(root, "config", {"stack", "atoms", "frequency_window", "radial_map", "green", "dynamics", "dissipation",
                               "surface", "outputs"});
    RunConfig cfg;
    if (root.contains("stack")) cfg.stack = parse_stack(root.at("stack"));

    if (root.contains("atoms")) {
        const auto& atoms = root.at("atoms");
        if (!atoms.is_array() || atoms.size() != 2) throw ConfigError("atoms must list exactly two atoms");
        int i = 0;
        for (const auto& a : atoms) {
            const std::string where = "atoms[" + std::to_string(i++) + "]";
            only_keys(a, where, {"position_um", "dipole"});
            AtomPlacement p;
            p.position = number(a, "position_um", where) * 1e-6;
            p.dipole = value_or(a, "dipole", 1.0, where);
            if (!(p.position > 0.0)) throw ConfigError(where + ".position_um must be > 0");
            cfg.atoms.push_back(p);
        }
    }

    if (root.contains("frequency_window")) {
        const auto& w = root.at("frequency_window");
        only_keys(w, "frequency_window", {"f_min_thz", "f_max_thz", "samples"});
        cfg.window.f_min = value_or(w, "f_min_thz", cfg.window.f_min * 1e-12, "frequency_window") * 1e12;
        cfg.window.f_max = value_or(w, "f_max_thz", cfg.window.f_max * 1e-12, "frequency_window") * 1e12;
        cfg.window.samples = value_or(w, "samples", cfg.window.samples, "frequency_window");
    }
    if (!(cfg.window.f_min > 0.0 && cfg.window.f_min < cfg.window.f_max))
        throw ConfigError("frequency_window needs 0 < f_min_thz < f_max_thz");
    if (cfg.window.samples < 2) throw ConfigError("frequency_window.samples must be >= 2");

    if (root.contains("radial_map")) {
        const auto& r = root.at("radial_map");
        only_keys(r, "radial_map", {"enabled", "r_min_um", "r_max_um", "samples"});
        cfg.radial.enabled = value_or(r, "enabled", true, "radial_map");
        cfg.radial.r_min = value_or(r, "r_min_um", cfg.radial.r_min * 1e6, "radial_map") * 1e-6;
        cfg.radial.r_max = value_or(r, "r_max_um", 0.0, "radial_map") * 1e-6;
        cfg.radial.samples = value_or(r, "samples", cfg.radial.samples, "radial_map");
        if (cfg.radial.samples < 1) throw ConfigError("radial_map.samples must be >= 1");
    }

    if (root.contains("green")) {
        const auto& g = root.at("green");
        only_keys(g, "green", {"max_n", "coupling_scale_um", "coupling_frequency_thz"});
        cfg.green.max_n = value_or(g, "max_n", 0, "green");
        cfg.green.coupling_scale = value_or(g, "coupling_scale_um", cfg.green.coupling_scale, "green");
        if (g.contains("coupling_frequency_thz")) cfg.green.coupling_frequency = number(g, "coupling_frequency_thz", "green") * 1e12;
        if (cfg.green.max_n < 0 || cfg.green.max_n > kMaxOrder) throw ConfigError("green.max_n must be in [0, 100]");
        if (!(cfg.green.coupling_scale > 0.0)) throw ConfigError("green.coupling_scale_um must be > 0");
    }

    if (root.contains("dynamics")) {
        const auto& d = root.at("dynamics");
        only_keys(d, "dynamics", {"chi1", "chi2", "gbar", "couplings_from_stack", "detuning_omega_at", "lambda0",
                                  "tau_max", "samples"});
        if (d.contains("chi1")) cfg.dynamics.chi1 = number(d, "chi1", "dynamics");
        if (d.contains("chi2")) cfg.dynamics.chi2 = number(d, "chi2", "dynamics");
        if (cfg.dynamics.chi1.has_value() != cfg.dynamics.chi2.has_value())
            throw ConfigError("dynamics needs both chi1 and chi2 or neither");
        if (d.contains("gbar")) {
            const auto& m = d.at("gbar");
            if (!m.is_array() || m.size() != 2 || !m[0].is_array() || !m[1].is_array() || m[0].size() != 2 ||
                m[1].size() != 2)
                throw ConfigError("dynamics.gbar must be a 2x2 array");
            Eigen::Matrix2d g;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) g(i, j) = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].get<double>();
            cfg.dynamics.gbar = g;
        }
        cfg.dynamics.couplings_from_stack = value_or(d, "couplings_from_stack", false, "dynamics");
        const int sources = static_cast<int>(cfg.dynamics.chi1.has_value()) + static_cast<int>(cfg.dynamics.gbar.has_value()) +
                            static_cast<int>(cfg.dynamics.couplings_from_stack);
        if (sources > 1) throw ConfigError("dynamics: give only one of chi1/chi2, gbar, couplings_from_stack");
        cfg.dynamics.detuning = value_or(d, "detuning_omega_at", cfg.dynamics.detuning, "dynamics");
        cfg.dynamics.lambda0 = value_or(d, "lambda0", cfg.dynamics.lambda0, "dynamics");
        cfg.dynamics.tau_max = value_or(d, "tau_max", cfg.dynamics.tau_max, "dynamics");
        cfg.dynamics.samples = value_or(d, "samples", cfg.dynamics.samples, "dynamics");
        if (cfg.dynamics.lambda0 != 0 && cfg.dynamics.lambda0 != 1) throw ConfigError("dynamics.lambda0 must be 0 or 1");
        if (!(cfg.dynamics.tau_max > 0.0)) throw ConfigError("dynamics.tau_max must be > 0");
        if (cfg.dynamics.samples < 2) throw ConfigError("dynamics.samples must be >= 2");
    }

    if (root.contains("dissipation")) {
        const auto& d = root.at("dissipation");
        only_keys(d, "dissipation", {"gamma1_omega_at", "derive_from_bandwidth", "photon_cutoff", "dt", "check_halving",
                                     "dump_states"});
        if (d.contains("gamma1_omega_at")) cfg.dissipation.gamma1 = number(d, "gamma1_omega_at", "dissipation");
        cfg.dissipation.derive_from_bandwidth = value_or(d, "derive_from_bandwidth", false, "dissipation");
        cfg.dissipation.photon_cutoff = value_or(d, "photon_cutoff", cfg.dissipation.photon_cutoff, "dissipation");
        cfg.dissipation.dt = value_or(d, "dt", cfg.dissipation.dt, "dissipation");
        cfg.dissipation.check_halving = value_or(d, "check_halving", true, "dissipation");
        cfg.dissipation.dump_states = value_or(d, "dump_states", false, "dissipation");
        if (cfg.dissipation.gamma1 && !(*cfg.dissipation.gamma1 >= 0.0)) throw ConfigError("dissipation.gamma1_omega_at must be >= 0");
        if (cfg.dissipation.photon_cutoff < 1) throw ConfigError("dissipation.photon_cutoff must be >= 1");
        if (!(cfg.dissipation.dt > 0.0)) throw ConfigError("dissipation.dt must be > 0");
    }

    if (root.contains("surface")) {
        const auto& s = root.at("surface");
        const std::string w = "surface";
        only_keys(s, w, {"chi1_min", "chi1_max", "chi1_samples", "chi2_min", "chi2_max", "chi2_samples", "tau",
                         "detuning_omega_at", "lambda0"});
        auto& c = cfg.surface;
        c.chi1_min = value_or(s, "chi1_min", c.chi1_min, w);
        c.chi1_max = value_or(s, "chi1_max", c.chi1_max, w);
        c.chi1_samples = value_or(s, "chi1_samples", c.chi1_samples, w);
        c.chi2_min = value_or(s, "chi2_min", c.chi2_min, w);
        c.chi2_max = value_or(s, "chi2_max", c.chi2_max, w);
        c.chi2_samples = value_or(s, "chi2_samples", c.chi2_samples, w);
        c.tau = value_or(s, "tau", c.tau, w);
        if (s.contains("detuning_omega_at")) c.detuning = number(s, "detuning_omega_at", w);
        if (s.contains("lambda0")) c.lambda0 = value_or(s, "lambda0", 1, w);
        if (c.chi1_samples < 1 || c.chi2_samples < 1) throw ConfigError("surface sample counts must be >= 1");
        if (c.chi1_min < 0.0 || c.chi2_min < 0.0) throw ConfigError("surface grids must be >= 0");
        if ((c.chi1_samples > 1 && !(c.chi1_max > c.chi1_min)) || (c.chi2_samples > 1 && !(c.chi2_max > c.chi2_min)))
            throw ConfigError("surface grids need max > min");
        if (c.lambda0 && *c.lambda0 != 0 && *c.lambda0 != 1) throw ConfigError("surface.lambda0 must be 0 or 1");
        if (!(c.tau >= 0.0)) throw ConfigError("surface.tau must be >= 0");
    }

    if (root.contains("outputs")) {
        const auto& o = root.at("outputs");
        only_keys(o, "outputs", {"directory"});
        cfg.output_directory = value_or(o, "directory", std::string("out"), "outputs");
    }

    if (cfg.stack && cfg.atoms.size() == 2) {
        for (const auto& a : cfg.atoms)
            if (!(a.position < cfg.stack->outer_interface()))
                throw ConfigError("atoms must sit inside the finite layers of the stack");
    }
    return cfg;
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    try {
        return parse(root);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config error: ") + e.what());
    } catch (const InvalidInput& e) {
        throw ConfigError(std::string("config error: ") + e.what());
    }
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace sqed
