#include "magnomech/cli.hpp"

#include <complex>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "magnomech/config.hpp"
#include "magnomech/covariance.hpp"
#include "magnomech/fockdyn.hpp"
#include "magnomech/spectrum.hpp"
#include "magnomech/table.hpp"
#include "magnomech/validate.hpp"
#include "magnomech/version.hpp"

namespace magnomech::cli {

namespace {

std::string fmt(double v) { return ResultTable::format(v); }

struct CommonOptions {
    std::string preset_name;
    std::string config_path;
    std::string out_path;
    std::string format = "csv";
    int jobs = 0;
    // Physics overrides, all in units of omega_b.
    std::optional<double> g_over_wb;
    std::optional<double> kappa_eff_over_wb;
    std::optional<double> delta_eff_over_wb;
    std::optional<double> n_th;
};

void add_source_options(CLI::App* cmd, CommonOptions& o) {
    auto* preset = cmd->add_option("--preset", o.preset_name,
                                   "named parameter set (physical, fig3)");
    auto* config = cmd->add_option("--config", o.config_path,
                                   "JSON parameter file");
    preset->excludes(config);
}

void add_output_options(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--out", o.out_path, "output file (default: stdout)");
    cmd->add_option("--format", o.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--jobs", o.jobs,
                    "worker threads (fallback: MAGNOMECH_JOBS, then 1)");
}

void add_override_options(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--g", o.g_over_wb, "coupling |G| in units of omega_b");
    cmd->add_option("--kappa-eff", o.kappa_eff_over_wb,
                    "override kappa_eff, in units of omega_b");
    cmd->add_option("--delta-eff", o.delta_eff_over_wb,
                    "override delta_eff, in units of omega_b");
    cmd->add_option("--n-th", o.n_th, "override the bath occupation");
}

struct Resolved {
    SystemParams p;
    SteadyAmplitudes amp;
    std::complex<double> G;
    EffectiveParams eff;
    WarningLog warnings;
};

Resolved resolve(const CommonOptions& o) {
    Resolved r;
    if (!o.preset_name.empty())
        r.p = preset(o.preset_name);
    else if (!o.config_path.empty())
        r.p = load_config_file(o.config_path, &r.warnings);
    else
        throw ConfigError("choose a parameter source: --preset or --config");
    if (o.n_th) {
        if (*o.n_th < 0) throw ConfigError("--n-th must be non-negative");
        r.p.n_th = *o.n_th;
        r.p.T_env.reset();
    }
    r.p.check();

    r.amp = steady_state_amplitudes(r.p, {}, &r.warnings);
    r.G = o.g_over_wb ? std::complex<double>(*o.g_over_wb * r.p.omega_b, 0.0)
                      : r.amp.G;
    r.eff = effective_params(r.p, r.G, &r.warnings);
    if (o.kappa_eff_over_wb) r.eff.kappa_eff = *o.kappa_eff_over_wb * r.p.omega_b;
    if (o.delta_eff_over_wb) r.eff.delta_eff = *o.delta_eff_over_wb * r.p.omega_b;
    return r;
}

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);  // LF on every platform
            if (!file_) throw ConfigError("cannot open output file '" + path + "'");
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

/// Deterministic metadata block shared by every table (never timestamps,
/// never the worker count).
void standard_meta(ResultTable& t, const std::string& command,
                   const std::map<std::string, std::string>& args,
                   const Resolved& r) {
    t.add_meta("magnomech", kVersion);
    t.add_meta("command", command);
    std::string joined;
    for (const auto& [k, v] : args) joined += (joined.empty() ? "" : " ") + k + "=" + v;
    if (!joined.empty()) t.add_meta("args", joined);
    t.add_meta("config", dump_config(r.p));
    t.add_meta("convention",
               "angular frequencies (rad/s); decay rates are amplitude "
               "half-widths (Lindblad rate 2*kappa)");
    t.add_meta("G_rad_s", fmt(std::abs(r.G)));
    t.add_meta("kappa_eff_rad_s", fmt(r.eff.kappa_eff));
    t.add_meta("delta_eff_rad_s", fmt(r.eff.delta_eff));
    for (const auto& w : r.warnings) t.add_meta("warning", w);
}

int cmd_derive(const CommonOptions& o) {
    const Resolved r = resolve(o);
    const auto weights = effective_noise_weights(r.p);

    Output out(o.out_path);
    if (o.format == "json") {
        nlohmann::json j;
        j["config"] = nlohmann::json::parse(dump_config(r.p));
        j["eta"] = {r.amp.eta.real(), r.amp.eta.imag()};
        j["beta"] = {r.amp.beta.real(), r.amp.beta.imag()};
        j["G_rad_s"] = {r.G.real(), r.G.imag()};
        j["delta_m_tilde_rad_s"] = r.amp.delta_m_tilde;
        j["drive_shift_rad_s"] = r.amp.drive_shift;
        j["delta_eff_rad_s"] = r.eff.delta_eff;
        j["kappa_eff_rad_s"] = r.eff.kappa_eff;
        j["noise_weight_cavity_rad_s"] = weights[0];
        j["noise_weight_magnon_rad_s"] = weights[1];
        j["warnings"] = r.warnings;
        out.stream() << j.dump(2) << "\n";
        return 0;
    }
    auto& os = out.stream();
    os << "# magnomech " << kVersion << "\n# command derive\n";
    os << "eta " << fmt(r.amp.eta.real()) << " " << fmt(r.amp.eta.imag()) << "\n";
    os << "beta " << fmt(r.amp.beta.real()) << " " << fmt(r.amp.beta.imag()) << "\n";
    os << "G_rad_s " << fmt(r.G.real()) << " " << fmt(r.G.imag()) << "\n";
    os << "G_over_omega_b " << fmt(std::abs(r.G) / r.p.omega_b) << "\n";
    os << "delta_m_rad_s " << fmt(r.p.delta_m()) << "\n";
    os << "delta_m_tilde_rad_s " << fmt(r.amp.delta_m_tilde) << "\n";
    os << "drive_shift_rad_s " << fmt(r.amp.drive_shift) << "\n";
    os << "delta_eff_rad_s " << fmt(r.eff.delta_eff) << "\n";
    os << "delta_eff_over_omega_b " << fmt(r.eff.delta_eff / r.p.omega_b) << "\n";
    os << "kappa_eff_rad_s " << fmt(r.eff.kappa_eff) << "\n";
    os << "kappa_eff_over_omega_b " << fmt(r.eff.kappa_eff / r.p.omega_b) << "\n";
    os << "noise_weight_cavity_rad_s " << fmt(weights[0]) << "\n";
    os << "noise_weight_magnon_rad_s " << fmt(weights[1]) << "\n";
    for (const auto& w : r.warnings) os << "# warning " << w << "\n";
    return 0;
}

int cmd_sweep_detuning(const CommonOptions& o, double from, double to,
                       int points) {
    const Resolved r = resolve(o);
    const double wb = r.p.omega_b;
    const DetuningSweep sweep =
        detuning_sweep(r.eff, from * wb, to * wb, points, o.jobs);

    ResultTable t({"delta_eff_over_omega_b", "delta_eff_rad_s",
                   "a_plus_over_omega_b", "a_minus_over_omega_b",
                   "gamma_md_over_omega_b", "gamma_md_rad_s",
                   "delta_omega_b_over_omega_b", "n_f", "n_f_valid",
                   "heating"});
    standard_meta(t, "sweep-detuning",
                  {{"from", fmt(from)}, {"to", fmt(to)},
                   {"points", std::to_string(points)},
                   {"g", fmt(std::abs(r.G) / wb)}},
                  r);
    t.add_meta("argmax_gamma_md_over_omega_b", fmt(sweep.argmax_gamma_md / wb));
    t.add_meta("max_gamma_md_over_omega_b", fmt(sweep.max_gamma_md / wb));
    if (sweep.any_valid) {
        t.add_meta("argmin_n_f_over_omega_b", fmt(sweep.argmin_n_f / wb));
        t.add_meta("min_n_f", fmt(sweep.min_n_f));
    }
    for (const auto& row : sweep.rows) {
        const CoolingResult& c = row.cooling;
        t.add_row({row.delta_eff / wb, row.delta_eff, c.a_plus / wb,
                   c.a_minus / wb, c.gamma_md / wb, c.gamma_md,
                   c.delta_omega_b / wb, c.n_f_valid ? c.n_f : -1.0,
                   c.n_f_valid ? 1.0 : 0.0, c.heating ? 1.0 : 0.0});
    }
    Output out(o.out_path);
    t.write(out.stream(), o.format);
    return 0;
}

int cmd_sweep_field(const CommonOptions& o, double from, double to,
                    int points) {
    const Resolved r = resolve(o);
    const double wb = r.p.omega_b;
    const FieldSweep sweep = field_sweep(r.p, r.G, from, to, points, o.jobs);

    ResultTable t({"H_tesla", "omega_m_rad_s", "delta_eff_over_omega_b",
                   "gamma_md_over_omega_b", "n_f", "n_f_valid", "in_window"});
    standard_meta(t, "sweep-field",
                  {{"from", fmt(from)}, {"to", fmt(to)},
                   {"points", std::to_string(points)},
                   {"g", fmt(std::abs(r.G) / wb)}},
                  r);
    t.add_meta("has_window", sweep.has_window ? "1" : "0");
    if (sweep.has_window) {
        t.add_meta("window_low_tesla", fmt(sweep.window_low));
        t.add_meta("window_high_tesla", fmt(sweep.window_high));
        t.add_meta("window_contiguous", sweep.window_contiguous ? "1" : "0");
    }
    for (const auto& row : sweep.rows) {
        const CoolingResult& c = row.cooling;
        t.add_row({row.H_tesla, row.omega_m, row.delta_eff / wb,
                   c.gamma_md / wb, c.n_f_valid ? c.n_f : -1.0,
                   c.n_f_valid ? 1.0 : 0.0, row.in_window ? 1.0 : 0.0});
    }
    Output out(o.out_path);
    t.write(out.stream(), o.format);
    return 0;
}

int cmd_steady(const CommonOptions& o, const std::string& method) {
    const Resolved r = resolve(o);
    const double wb = r.p.omega_b;

    ResultTable t({"n_b", "n_m", "n_a"});
    standard_meta(t, "steady", {{"method", method}, {"g", fmt(std::abs(r.G) / wb)}}, r);

    double n_b = 0, n_m = -1, n_a = -1;
    if (method == "analytic") {
        WarningLog log;
        n_b = analytic_nbs(std::abs(r.G), r.eff.kappa_eff, r.eff.gamma_b, wb,
                           r.eff.n_th, &log);
        for (const auto& w : log) t.add_meta("warning", w);
    } else if (method == "lyapunov") {
        const CovarianceState s = steady_state(build_effective(r.eff));
        n_b = occupation(s, 1);
        n_m = occupation(s, 0);
        t.add_meta("moment_mm", fmt(std::abs(moment_pair(s, 0, 0))));
        t.add_meta("moment_mb", fmt(std::abs(moment_pair(s, 0, 1))));
        t.add_meta("moment_mdag_b", fmt(std::abs(moment_dag(s, 0, 1))));
    } else if (method == "full3mode") {
        const CovarianceState s = steady_state(build_full(r.p, r.G));
        n_a = occupation(s, 0);
        n_m = occupation(s, 1);
        n_b = occupation(s, 2);
    } else {
        throw ConfigError("steady method must be lyapunov, analytic or full3mode");
    }
    t.add_row({n_b, n_m, n_a});

    std::cout << "N_bs = " << fmt(n_b) << "\n";
    if (!o.out_path.empty()) {
        Output out(o.out_path);
        t.write(out.stream(), o.format);
    }
    return 0;
}

FockSpace parse_dims(const std::string& spec_str) {
    std::vector<std::string> labels;
    std::vector<int> dims;
    std::stringstream ss(spec_str);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw ConfigError("--dims expects label=size pairs, e.g. "
                              "a=5,m=6,b=8");
        labels.push_back(item.substr(0, eq));
        dims.push_back(std::stoi(item.substr(eq + 1)));
    }
    try {
        return FockSpace(labels, dims);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("bad --dims: ") + e.what());
    }
}

std::vector<double> time_grid(double t_end, int points) {
    if (!(t_end > 0) || points < 2)
        throw ConfigError("need --t-end > 0 and --points >= 2");
    std::vector<double> grid(points);
    for (int i = 0; i < points; ++i)
        grid[i] = t_end * static_cast<double>(i) / (points - 1);
    return grid;
}

int cmd_evolve(const CommonOptions& o, const std::string& method,
               const std::string& dims_spec, double t_end_wb, int points,
               double dt_wb, const std::string& initial) {
    const Resolved r = resolve(o);
    const double wb = r.p.omega_b;
    std::vector<double> grid = time_grid(t_end_wb / wb, points);

    ResultTable t({"t_omega_b", "n_b", "n_m", "n_a"});
    standard_meta(t, "evolve",
                  {{"method", method}, {"t_end", fmt(t_end_wb)},
                   {"points", std::to_string(points)},
                   {"g", fmt(std::abs(r.G) / wb)},
                   {"initial", initial}},
                  r);

    if (method == "covariance") {
        const DriftDiffusion dd = build_effective(r.eff);
        const double nb0 = initial == "vacuum" ? 0.0 : r.eff.n_th;
        const CovarianceState v0 = thermal_state(dd, {0.0, nb0});
        const auto states = evolve(dd, v0, grid);
        for (const auto& s : states)
            t.add_row({s.t * wb, occupation(s, 1), occupation(s, 0), -1.0});
    } else if (method == "fock") {
        if (r.p.n_th > 2.0)
            throw ConfigError("Fock evolution needs a desk-scale bath; pass "
                              "--n-th <= 2");
        const FockSpace space = parse_dims(dims_spec);
        const bool three_mode = space.labels.size() == 3;
        CMatrix H;
        std::vector<Dissipator> diss;
        std::vector<double> nbar(space.n_modes(), 0.0);
        const double nb0 = initial == "vacuum" ? 0.0 : r.p.n_th;
        nbar[space.mode_index("b")] = nb0;
        if (three_mode) {
            H = build_hamiltonian_linear(space, r.p, r.G);
            diss = dissipators_linear(space, r.p);
        } else {
            H = build_hamiltonian_effective(space, r.eff);
            diss = dissipators_effective(space, r.eff);
        }
        FockEvolveOptions fopts;
        fopts.dt = dt_wb / wb;
        const CMatrix rho0 = product_thermal(space, nbar);
        const FockTrajectory traj =
            evolve_density(rho0, space, grid, H, diss, fopts);
        t.add_meta("max_trace_drift", fmt(traj.max_trace_drift));
        t.add_meta("max_leak", fmt(traj.max_leak));
        const int ib = space.mode_index("b");
        const int im = space.mode_index("m");
        for (std::size_t i = 0; i < traj.times.size(); ++i)
            t.add_row({traj.times[i] * wb, traj.occupations[ib][i],
                       traj.occupations[im][i],
                       three_mode ? traj.occupations[space.mode_index("a")][i]
                                  : -1.0});
    } else {
        throw ConfigError("evolve method must be covariance or fock");
    }
    Output out(o.out_path);
    t.write(out.stream(), o.format);
    return 0;
}

int cmd_fidelity(const CommonOptions& o, const std::string& dims_spec,
                 double t_end_wb, int points, double dt_wb) {
    const Resolved r = resolve(o);
    const double wb = r.p.omega_b;
    if (r.p.n_th > 2.0)
        throw ConfigError("fidelity runs in Fock space; pass --n-th <= 2");

    const FockSpace space3 = parse_dims(dims_spec);
    if (space3.labels != std::vector<std::string>{"a", "m", "b"})
        throw ConfigError("fidelity needs --dims a=..,m=..,b=..");
    const FockSpace space2({"m", "b"},
                           {space3.dims[1], space3.dims[2]});

    const CMatrix H3 = build_hamiltonian_linear(space3, r.p, r.G);
    const CMatrix H2 = build_hamiltonian_effective(space2, r.eff);
    const auto diss3 = dissipators_linear(space3, r.p);
    const auto diss2 = dissipators_effective(space2, r.eff);
    const CMatrix rho3 = product_thermal(space3, {0.0, 0.0, r.p.n_th});
    const CMatrix rho2 = product_thermal(space2, {0.0, r.p.n_th});

    FockEvolveOptions fopts;
    fopts.dt = dt_wb / wb;
    fopts.record_states = true;
    const std::vector<double> grid = time_grid(t_end_wb / wb, points);
    const FockTrajectory t3 = evolve_density(rho3, space3, grid, H3, diss3, fopts);
    const FockTrajectory t2 = evolve_density(rho2, space2, grid, H2, diss2, fopts);

    ResultTable t({"t_omega_b", "fidelity", "n_b_full", "n_b_eff"});
    standard_meta(t, "fidelity",
                  {{"t_end", fmt(t_end_wb)}, {"points", std::to_string(points)},
                   {"dt", fmt(dt_wb)}, {"g", fmt(std::abs(r.G) / wb)},
                   {"dims", dims_spec}},
                  r);
    double fmin = 1.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const CMatrix reduced = partial_trace(t3.states[i], space3, {1, 2});
        const double F = fidelity(reduced, t2.states[i]);
        fmin = std::min(fmin, F);
        t.add_row({grid[i] * wb, F, t3.occupations[2][i], t2.occupations[1][i]});
    }
    t.add_meta("min_fidelity", fmt(fmin));
    Output out(o.out_path);
    t.write(out.stream(), o.format);
    return 0;
}

int cmd_validate(const CommonOptions& o) {
    const Resolved r = resolve(o);
    const ValidityReport report = check_regimes(r.p, r.amp, r.eff);

    Output out(o.out_path);
    auto& os = out.stream();
    if (o.format == "json") {
        nlohmann::json j;
        j["overall"] = to_string(report.overall);
        j["config"] = nlohmann::json::parse(dump_config(r.p));
        auto& arr = j["checks"] = nlohmann::json::array();
        for (const auto& c : report.checks)
            arr.push_back({{"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs},
                           {"ratio", c.ratio}, {"status", to_string(c.status)},
                           {"note", c.note}});
        os << j.dump(2) << "\n";
        return 0;
    }
    os << "# magnomech " << kVersion << "\n# command validate\n";
    os << "check,lhs,rhs,ratio,status\n";
    for (const auto& c : report.checks)
        os << c.name << "," << fmt(c.lhs) << "," << fmt(c.rhs) << ","
           << fmt(c.ratio) << "," << to_string(c.status) << "\n";
    os << "overall,,,," << to_string(report.overall) << "\n";
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"cavity magnomechanical cooling simulator"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    CommonOptions o;
    double from = -3.0, to = 3.0;
    int points = 601;
    std::string method = "lyapunov";
    std::string dims_spec = "a=5,m=6,b=8";
    std::string initial = "thermal";
    double t_end = 100.0;  // units of 1/omega_b
    double dt = 0.0;       // units of 1/omega_b; 0 = stability-bounded choice
    int grid_points = 201;

    auto add_common = [&](CLI::App* cmd, bool with_overrides = true) {
        add_source_options(cmd, o);
        add_output_options(cmd, o);
        if (with_overrides) add_override_options(cmd, o);
    };

    auto* derive = app.add_subcommand("derive", "steady amplitudes and the "
                                                "reduced two-mode parameters");
    add_common(derive);

    auto* sd = app.add_subcommand("sweep-detuning",
                                  "cooling analytics on a detuning grid");
    add_common(sd);
    sd->add_option("--from", from, "start, delta_eff/omega_b");
    sd->add_option("--to", to, "end, delta_eff/omega_b");
    sd->add_option("--points", points, "grid size");

    auto* sf = app.add_subcommand("sweep-field",
                                  "final phonon number across bias fields");
    add_common(sf);
    sf->add_option("--from", from, "start field (T)")->required();
    sf->add_option("--to", to, "end field (T)")->required();
    sf->add_option("--points", points, "grid size");

    auto* st = app.add_subcommand("steady", "steady-state phonon number");
    add_common(st);
    st->add_option("--method", method, "lyapunov | analytic | full3mode");

    auto* ev = app.add_subcommand("evolve", "time evolution of occupations");
    add_common(ev);
    ev->add_option("--method", method, "covariance | fock")->required();
    ev->add_option("--dims", dims_spec, "Fock truncation, e.g. a=5,m=6,b=8 "
                                        "or m=6,b=8");
    ev->add_option("--t-end", t_end, "final time, units of 1/omega_b");
    ev->add_option("--points", grid_points, "output samples");
    ev->add_option("--dt", dt, "RK4 step (fock), units of 1/omega_b; 0 = automatic");
    ev->add_option("--initial", initial, "thermal | vacuum phonon start")
        ->check(CLI::IsMember({"thermal", "vacuum"}));

    auto* fi = app.add_subcommand("fidelity", "overlap of the full and "
                                              "reduced evolutions");
    add_common(fi);
    fi->add_option("--dims", dims_spec, "Fock truncation a=..,m=..,b=..");
    fi->add_option("--t-end", t_end, "final time, units of 1/omega_b");
    fi->add_option("--points", grid_points, "fidelity samples");
    fi->add_option("--dt", dt, "RK4 step, units of 1/omega_b; 0 = automatic");

    auto* va = app.add_subcommand("validate", "regime validity report");
    add_common(va);

    std::vector<const char*> argv;
    argv.push_back("magnomech");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (derive->parsed()) return cmd_derive(o);
        if (sd->parsed()) return cmd_sweep_detuning(o, from, to, points);
        if (sf->parsed()) return cmd_sweep_field(o, from, to, points);
        if (st->parsed()) return cmd_steady(o, method);
        if (ev->parsed())
            return cmd_evolve(o, method, dims_spec, t_end, grid_points, dt,
                              initial);
        if (fi->parsed()) return cmd_fidelity(o, dims_spec, t_end, grid_points, dt);
        if (va->parsed()) return cmd_validate(o);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const SingularityError& e) {
        std::cerr << "singularity: " << e.what() << "\n";
        return 3;
    } catch (const StabilityError& e) {
        std::cerr << "instability: " << e.what() << "\n";
        return 3;
    } catch (const TruncationLeakError& e) {
        std::cerr << "truncation: " << e.what() << "\n";
        return 3;
    } catch (const IntegrationError& e) {
        std::cerr << "integration: " << e.what() << "\n";
        return 3;
    }
    return 2;
}

}  // namespace magnomech::cli
