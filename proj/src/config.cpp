#include "magnomech/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "magnomech/constants.hpp"

namespace magnomech {

namespace {

using nlohmann::json;

std::complex<double> read_complex(const json& v, const std::string& key) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return {v[0].get<double>(), v[1].get<double>()};
    throw ConfigError("field '" + key + "' must be a number or [re, im]");
}

}  // namespace

SystemParams load_config(const std::string& json_text, WarningLog* log) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object())
        throw ConfigError("config root must be an object");
    if (!root.contains("units"))
        throw ConfigError("config requires a 'units' key (\"hz\" or \"rad_s\")");
    const std::string units = root["units"].get<std::string>();

    double scale = 0.0;
    std::string freq_key;
    if (units == "hz") {
        scale = constants::two_pi;
        freq_key = "freqs_hz";
    } else if (units == "rad_s") {
        scale = 1.0;
        freq_key = "freqs_rad_s";
    } else {
        throw ConfigError("units must be \"hz\" or \"rad_s\", got \"" + units + "\"");
    }
    if (!root.contains(freq_key))
        throw ConfigError("units \"" + units + "\" requires a '" + freq_key +
                          "' object");
    const std::string other = units == "hz" ? "freqs_rad_s" : "freqs_hz";
    if (root.contains(other))
        throw ConfigError("'" + other + "' conflicts with units \"" + units + "\"");

    const json& freqs = root[freq_key];
    if (!freqs.is_object())
        throw ConfigError("'" + freq_key + "' must be an object");

    SystemParams p;
    bool have_eps = false, have_omega_m = false;
    for (auto it = freqs.begin(); it != freqs.end(); ++it) {
        const std::string& k = it.key();
        const json& v = it.value();
        if (k == "omega_a") p.omega_a = scale * v.get<double>();
        else if (k == "omega_m") { p.omega_m = scale * v.get<double>(); have_omega_m = true; }
        else if (k == "omega_b") p.omega_b = scale * v.get<double>();
        else if (k == "omega_d") p.omega_d = scale * v.get<double>();
        else if (k == "kappa_a") p.kappa_a = scale * v.get<double>();
        else if (k == "kappa_m") p.kappa_m = scale * v.get<double>();
        else if (k == "gamma_b") p.gamma_b = scale * v.get<double>();
        else if (k == "g_ma") p.g_ma = scale * read_complex(v, k);
        else if (k == "g_mb") p.g_mb = scale * v.get<double>();
        else if (k == "eps_d") { p.eps_d = scale * read_complex(v, k); have_eps = true; }
        else throw ConfigError("unknown frequency field '" + k + "'");
    }

    if (root.contains("H_bias")) p.H_bias = root["H_bias"].get<double>();
    if (root.contains("B0")) p.B0 = root["B0"].get<double>();
    if (root.contains("V")) p.volume = root["V"].get<double>();
    if (root.contains("n_th")) p.n_th = root["n_th"].get<double>();
    if (root.contains("T_env")) p.T_env = root["T_env"].get<double>();

    for (auto it = root.begin(); it != root.end(); ++it) {
        const std::string& k = it.key();
        if (k != "units" && k != freq_key && k != "H_bias" && k != "B0" &&
            k != "V" && k != "n_th" && k != "T_env")
            throw ConfigError("unknown config field '" + k + "'");
    }

    if (!have_omega_m && p.H_bias > 0)
        p.omega_m = magnon_frequency(p.H_bias, log);
    if (p.B0 > 0 && p.volume > 0) {
        const double derived = drive_amplitude(p.B0, p.volume);
        if (have_eps)
            warn(log, "both eps_d and (B0, V) supplied; the explicit eps_d wins");
        else
            p.eps_d = derived;
    }
    if (!root.contains("n_th") && p.T_env)
        p.n_th = thermal_occupation(*p.T_env, p.omega_b);

    try {
        p.check();
    } catch (const std::domain_error& e) {
        throw ConfigError(std::string("invalid parameters: ") + e.what());
    }
    return p;
}

SystemParams load_config_file(const std::string& path, WarningLog* log) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_config(buf.str(), log);
}

std::string dump_config(const SystemParams& p) {
    json freqs;
    freqs["omega_a"] = p.omega_a;
    freqs["omega_m"] = p.omega_m;
    freqs["omega_b"] = p.omega_b;
    freqs["omega_d"] = p.omega_d;
    freqs["kappa_a"] = p.kappa_a;
    freqs["kappa_m"] = p.kappa_m;
    freqs["gamma_b"] = p.gamma_b;
    if (p.g_ma.imag() == 0) freqs["g_ma"] = p.g_ma.real();
    else freqs["g_ma"] = json::array({p.g_ma.real(), p.g_ma.imag()});
    freqs["g_mb"] = p.g_mb;
    if (p.eps_d.imag() == 0) freqs["eps_d"] = p.eps_d.real();
    else freqs["eps_d"] = json::array({p.eps_d.real(), p.eps_d.imag()});

    json root;
    root["units"] = "rad_s";
    root["freqs_rad_s"] = freqs;
    root["n_th"] = p.n_th;
    if (p.H_bias != 0) root["H_bias"] = p.H_bias;
    if (p.B0 != 0) root["B0"] = p.B0;
    if (p.volume != 0) root["V"] = p.volume;
    if (p.T_env) root["T_env"] = *p.T_env;
    return root.dump();
}

}  // namespace magnomech
