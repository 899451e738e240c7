#include "nlc/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "nlc/errors.hpp"

namespace nlc {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string show(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return fmt::format("{}", x);
}

double to_double(const std::string& key, const std::string& v, const std::string& domain) {
    if (v == "inf") return kInf;
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(x))
        throw ConfigError(fmt::format("{} = '{}' is not a number (expected {})", key, v, domain));
    return x;
}

long to_long(const std::string& key, const std::string& v, const std::string& domain) {
    long x = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw ConfigError(fmt::format("{} = '{}' is not an integer (expected {})", key, v, domain));
    return x;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "on" || v == "true" || v == "yes" || v == "1") return true;
    if (v == "off" || v == "false" || v == "no" || v == "0") return false;
    throw ConfigError(fmt::format("{} = '{}' is not a switch (expected on or off)", key, v));
}

struct KeyDef {
    ConfigKey doc;
    std::function<void(SimConfig&, const std::string&)> set;
    std::function<std::string(const SimConfig&)> get;
};

template <class T>
KeyDef real_key(const std::string& name, T SimConfig::*m, const std::string& domain,
                std::function<bool(double)> ok) {
    return {{name, "", domain},
            [=](SimConfig& c, const std::string& v) {
                const double x = to_double(name, v, domain);
                if (!ok(x)) throw ConfigError(fmt::format("{} = {} is outside the domain {}", name, v, domain));
                c.*m = x;
            },
            [=](const SimConfig& c) { return show(c.*m); }};
}

KeyDef preset_real(const std::string& name, double PresetParams::*m, const std::string& domain,
                   std::function<bool(double)> ok) {
    return {{name, "", domain},
            [=](SimConfig& c, const std::string& v) {
                const double x = to_double(name, v, domain);
                if (!ok(x)) throw ConfigError(fmt::format("{} = {} is outside the domain {}", name, v, domain));
                c.preset_params.*m = x;
            },
            [=](const SimConfig& c) { return show(c.preset_params.*m); }};
}

template <class T>
KeyDef int_key(const std::string& name, T SimConfig::*m, const std::string& domain, std::function<bool(long)> ok) {
    return {{name, "", domain},
            [=](SimConfig& c, const std::string& v) {
                const long x = to_long(name, v, domain);
                if (!ok(x)) throw ConfigError(fmt::format("{} = {} is outside the domain {}", name, v, domain));
                c.*m = static_cast<T>(x);
            },
            [=](const SimConfig& c) { return fmt::format("{}", c.*m); }};
}

const auto positive = [](double x) { return x > 0.0; };
const auto nonneg = [](double x) { return x >= 0.0; };
const auto exponent = [](double x) { return x >= 1.0; };

std::vector<KeyDef> build_keys() {
    std::vector<KeyDef> k;
    k.push_back(int_key("nx", &SimConfig::nx, "integer >= 4", [](long x) { return x >= 4 && x <= 4096; }));
    k.push_back(int_key("ny", &SimConfig::ny, "integer >= 4", [](long x) { return x >= 4 && x <= 4096; }));
    k.push_back(real_key("lx", &SimConfig::lx, "real > 0", positive));
    k.push_back(real_key("ly", &SimConfig::ly, "real > 0 with lx/nx = ly/ny", positive));
    k.push_back(real_key("dt", &SimConfig::dt, "real > 0", positive));
    k.push_back(real_key("t_final", &SimConfig::t_final, "real >= 0", nonneg));
    k.push_back(real_key("cfl_cap", &SimConfig::cfl_cap, "real > 0", positive));
    k.push_back({{"viscosity", "", "constant | affine | exponential"},
                 [](SimConfig& c, const std::string& v) {
                     if (v != "constant" && v != "affine" && v != "exponential")
                         throw ConfigError(fmt::format("viscosity = '{}' is unknown (expected constant, affine or exponential)", v));
                     c.viscosity = v;
                 },
                 [](const SimConfig& c) { return c.viscosity; }});
    k.push_back(real_key("mu0", &SimConfig::mu0, "real > 0", positive));
    k.push_back(real_key("mu1", &SimConfig::mu1, "real", [](double) { return true; }));
    k.push_back({{"preset", "", "equilibrium | viscous-decay | angle-heat | coupled-smooth | vacuum-bubble | geometric-configuration"},
                 [](SimConfig& c, const std::string& v) {
                     const auto& names = preset_names();
                     if (std::find(names.begin(), names.end(), v) == names.end())
                         throw ConfigError(fmt::format("preset = '{}' is unknown (expected one of: equilibrium, viscous-decay, "
                                                       "angle-heat, coupled-smooth, vacuum-bubble, geometric-configuration)", v));
                     c.preset = v;
                 },
                 [](const SimConfig& c) { return c.preset; }});
    k.push_back(preset_real("rho0", &PresetParams::rho0, "real > 0", positive));
    k.push_back(preset_real("rho_amp", &PresetParams::rho_amp, "real > -1", [](double x) { return x > -1.0; }));
    k.push_back(preset_real("u_amp", &PresetParams::u_amp, "real", [](double) { return true; }));
    k.push_back(preset_real("theta_amp", &PresetParams::theta_amp, "real", [](double) { return true; }));
    k.push_back(preset_real("bubble_radius", &PresetParams::bubble_radius, "real in (0, 0.5)",
                            [](double x) { return x > 0.0 && x < 0.5; }));
    k.push_back(preset_real("geo_lower", &PresetParams::geo_lower, "real in [0, 1)",
                            [](double x) { return x >= 0.0 && x < 1.0; }));
    k.push_back({{"branch", "", "1 | 2"},
                 [](SimConfig& c, const std::string& v) {
                     const long b = to_long("branch", v, "1 | 2");
                     if (b != 1 && b != 2) throw ConfigError(fmt::format("branch = {} is outside the domain 1 | 2", v));
                     c.preset_params.branch = static_cast<int>(b);
                 },
                 [](const SimConfig& c) { return fmt::format("{}", c.preset_params.branch); }});
    k.push_back({{"delta_vac", "", "auto | real > 0"},
                 [](SimConfig& c, const std::string& v) {
                     if (v == "auto") {
                         c.delta_vac = -1.0;
                         return;
                     }
                     const double x = to_double("delta_vac", v, "auto | real > 0");
                     if (!(x > 0.0)) throw ConfigError(fmt::format("delta_vac = {} is outside the domain auto | real > 0", v));
                     c.delta_vac = x;
                 },
                 [](const SimConfig& c) { return c.delta_vac < 0.0 ? std::string("auto") : show(c.delta_vac); }});
    k.push_back(real_key("stokes_tol", &SimConfig::stokes_tol, "real > 0", positive));
    k.push_back(int_key("stokes_itmax", &SimConfig::stokes_itmax, "integer >= 1", [](long x) { return x >= 1; }));
    k.push_back(real_key("d_tol", &SimConfig::d_tol, "real > 0", positive));
    k.push_back(real_key("tol_phi", &SimConfig::tol_phi, "real > 0", positive));
    k.push_back(real_key("unit_tol", &SimConfig::unit_tol, "real > 0", positive));
    k.push_back(real_key("mp_tol", &SimConfig::mp_tol, "real > 0", positive));
    k.push_back(int_key("mp_component", &SimConfig::mp_component, "1 | 2", [](long x) { return x == 1 || x == 2; }));
    k.push_back(real_key("q", &SimConfig::q, "real > n or inf", exponent));
    k.push_back(real_key("s1", &SimConfig::s1, "real >= 1 or inf", exponent));
    k.push_back(real_key("r1", &SimConfig::r1, "real > n or inf", exponent));
    k.push_back(real_key("s2", &SimConfig::s2, "real >= 1 or inf", exponent));
    k.push_back(real_key("r2", &SimConfig::r2, "real > n or inf", exponent));
    k.push_back(int_key("n", &SimConfig::n, "2 | 3", [](long x) { return x == 2 || x == 3; }));
    k.push_back(real_key("monitor_threshold", &SimConfig::monitor_threshold, "real > 0 or inf", positive));
    k.push_back({{"picard", "", "on | off"},
                 [](SimConfig& c, const std::string& v) { c.picard = to_bool("picard", v); },
                 [](const SimConfig& c) { return std::string(c.picard ? "on" : "off"); }});
    k.push_back(int_key("kmax", &SimConfig::kmax, "integer >= 1", [](long x) { return x >= 1; }));
    k.push_back({{"out", "", "directory path"},
                 [](SimConfig& c, const std::string& v) {
                     if (v.empty()) throw ConfigError("out = '' is outside the domain directory path");
                     c.out = v;
                 },
                 [](const SimConfig& c) { return c.out; }});
    k.push_back(int_key("record_every", &SimConfig::record_every, "integer >= 1", [](long x) { return x >= 1; }));
    k.push_back(int_key("snap_every", &SimConfig::snap_every, "integer >= 0 (0 disables snapshots)",
                        [](long x) { return x >= 0; }));
    k.push_back({{"seed", "", "integer >= 0"},
                 [](SimConfig& c, const std::string& v) {
                     const long x = to_long("seed", v, "integer >= 0");
                     if (x < 0) throw ConfigError(fmt::format("seed = {} is outside the domain integer >= 0", v));
                     c.seed = static_cast<std::uint64_t>(x);
                 },
                 [](const SimConfig& c) { return fmt::format("{}", c.seed); }});
    k.push_back(int_key("est_trials", &SimConfig::est_trials, "integer >= 1", [](long x) { return x >= 1; }));
    k.push_back(int_key("est_steps", &SimConfig::est_steps, "integer >= 0", [](long x) { return x >= 0; }));
    k.push_back(int_key("est_modes", &SimConfig::est_modes, "integer in [1, 16]", [](long x) { return x >= 1 && x <= 16; }));
    k.push_back(int_key("ineq_trials", &SimConfig::ineq_trials, "integer >= 1", [](long x) { return x >= 1; }));
    k.push_back({{"study_dts", "", "comma-separated reals > 0"},
                 [](SimConfig& c, const std::string& v) {
                     std::vector<double> out;
                     std::stringstream ss(v);
                     std::string item;
                     while (std::getline(ss, item, ',')) {
                         const double x = to_double("study_dts", trim(item), "comma-separated reals > 0");
                         if (!(x > 0.0)) throw ConfigError(fmt::format("study_dts entry {} is outside the domain real > 0", item));
                         out.push_back(x);
                     }
                     if (out.empty()) throw ConfigError("study_dts is empty (expected comma-separated reals > 0)");
                     c.study_dts = out;
                 },
                 [](const SimConfig& c) {
                     std::string s;
                     for (double x : c.study_dts) s += (s.empty() ? "" : ",") + show(x);
                     return s;
                 }});
    const SimConfig defaults;
    for (auto& e : k) e.doc.default_value = e.get(defaults);
    return k;
}

const std::vector<KeyDef>& keys() {
    static const std::vector<KeyDef> k = build_keys();
    return k;
}

}  // namespace

long SimConfig::steps() const { return std::lround(t_final / dt); }

Grid SimConfig::grid() const { return Grid(nx, ny, lx, ly); }

BlowupMonitorConfig SimConfig::monitor_config() const {
    BlowupMonitorConfig m;
    m.q = q;
    m.velocity = {s1, r1, n};
    m.director = {s2, r2, n};
    m.n = n;
    m.threshold = monitor_threshold;
    return m;
}

ViscosityModel SimConfig::viscosity_model() const {
    if (viscosity == "affine") return ViscosityModel::affine(mu0, mu1);
    if (viscosity == "exponential") return ViscosityModel::exponential(mu0, mu1);
    return ViscosityModel::constant(mu0);
}

double SimConfig::resolved_delta_vac(const FlowState& initial) const {
    return delta_vac > 0.0 ? delta_vac : 1e-6 * initial.rho.max();
}

SchemeOptions SimConfig::scheme_options(const FlowState& initial) const {
    SchemeOptions o;
    o.viscosity = viscosity_model();
    o.delta_vac = resolved_delta_vac(initial);
    o.stokes.tol = stokes_tol;
    o.stokes.itmax = stokes_itmax;
    o.director.tol = d_tol;
    o.transport.cfl_cap = cfl_cap;
    o.q = q;
    o.mp_component = mp_component - 1;
    return o;
}

const std::vector<ConfigKey>& config_keys() {
    static const std::vector<ConfigKey> docs = [] {
        std::vector<ConfigKey> d;
        for (const auto& k : keys()) d.push_back(k.doc);
        return d;
    }();
    return docs;
}

std::string config_help() {
    std::string s = "Configuration keys (key = value, '#' starts a comment):\n";
    for (const auto& k : config_keys()) s += fmt::format("  {:<18} default {:<16} {}\n", k.name, k.default_value, k.domain);
    return s;
}

SimConfig parse_config_text(const std::string& text) {
    SimConfig c;
    std::map<std::string, const KeyDef*> index;
    for (const auto& k : keys()) index[k.doc.name] = &k;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(fmt::format("line {}: expected 'key = value', got '{}'", lineno, line));
        const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        const auto it = index.find(key);
        if (it == index.end()) throw ConfigError(fmt::format("line {}: unknown key '{}' (see --help for the key list)", lineno, key));
        if (!seen.insert(key).second) throw ConfigError(fmt::format("line {}: key '{}' given twice", lineno, key));
        if (value.empty())
            throw ConfigError(fmt::format("line {}: {} has no value (expected {})", lineno, key, it->second->doc.domain));
        it->second->set(c, value);
    }
    if (!seen.count("ly")) c.ly = c.lx * c.ny / c.nx;
    validate(c);
    return c;
}

SimConfig parse_config(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError(fmt::format("cannot read config file '{}'", path.string()));
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str());
}

std::string resolved_config(const SimConfig& c) {
    std::string s = "# resolved configuration\n";
    for (const auto& k : keys()) s += fmt::format("{} = {}\n", k.doc.name, k.get(c));
    return s;
}

void validate(const SimConfig& c) {
    const Grid g = [&] {
        try {
            return c.grid();
        } catch (const ConfigError& e) {
            throw ConfigError(fmt::format("nx, ny, lx, ly: {}", e.what()));
        }
    }();
    const ExponentGate gate = check_exponents(c.monitor_config());
    if (!gate.passed()) {
        std::string msg = "exponent gate rejected the configuration:";
        for (const auto& r : gate.reasons) msg += " " + r + ";";
        throw ConfigError(msg);
    }
    if (c.steps() < 0 || std::abs(c.steps() * c.dt - c.t_final) > 1e-9 * std::max(1.0, c.t_final))
        throw ConfigError(fmt::format("t_final = {} is not a whole number of steps dt = {}", c.t_final, c.dt));
    if (c.snap_every > 0 && c.snap_every % c.record_every != 0)
        throw ConfigError(fmt::format("snap_every = {} must be a multiple of record_every = {}", c.snap_every, c.record_every));
    const FlowState s0 = make_preset(c.preset, g, c.preset_params);
    check_initial_data(s0, c.unit_tol);
    c.viscosity_model().validate(s0.rho.max());
    const double umax = s0.u.max_abs();
    if (umax > 0.0) {
        const double bound = c.cfl_cap * g.h() / umax;
        if (c.dt > bound)
            throw ConfigError(fmt::format("dt = {} violates the CFL cap: dt max|u0| / h = {:.4g} > cfl_cap = {}; "
                                          "need dt <= {:.6g}",
                                          c.dt, c.dt * umax / g.h(), c.cfl_cap, bound));
    }
    if (c.preset == "geometric-configuration" && c.mp_component != 2)
        throw ConfigError("mp_component = 1: the geometric-configuration preset bounds component 2");
}

}  // namespace nlc
